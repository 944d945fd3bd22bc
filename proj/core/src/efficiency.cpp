#include "hfentropy/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hfentropy/error.hpp"
#include "hfentropy/ingestion.hpp"
#include "hfentropy/random.hpp"
#include "hfentropy/symbolize.hpp"
#include "hfentropy/theory.hpp"

namespace hfentropy::efficiency {

namespace {

double log_binomial_pmf(std::uint64_t n, std::uint64_t k) {
    const auto dn = static_cast<double>(n);
    const auto dk = static_cast<double>(k);
    return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0) - dn * std::log(2.0);
}

}  // namespace

BinomialTestResult binomial_symbol_test(std::uint64_t n0, std::uint64_t n1, double alpha) {
    const std::uint64_t n = n0 + n1;
    if (n == 0) throw InputError("binomial test needs at least one symbol");
    BinomialTestResult r;
    const auto dn = static_cast<double>(n);
    r.z = (static_cast<double>(n1) - dn / 2.0) / std::sqrt(dn / 4.0);
    if (n > 1000) {
        r.normal_approximation = true;
        r.p_value = std::erfc(std::abs(r.z) / std::sqrt(2.0));
    } else {
        // Symmetric null: double the smaller tail.
        const std::uint64_t lo = std::min(n0, n1);
        double tail = 0.0;
        for (std::uint64_t k = 0; k <= lo; ++k) tail += std::exp(log_binomial_pmf(n, k));
        r.p_value = std::min(1.0, 2.0 * tail);
    }
    r.significant = r.p_value < alpha;
    return r;
}

double order_statistic(std::vector<double> sample, double prob) {
    if (sample.empty()) throw InputError("order statistic of an empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw InputError("order statistic probability must be in [0, 1]");
    const auto n = static_cast<double>(sample.size());
    // The small offset keeps exact products such as 0.005 * 1000 on their integer rank.
    auto rank = static_cast<std::size_t>(std::ceil(prob * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, sample.size());
    std::nth_element(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(rank - 1), sample.end());
    return sample[rank - 1];
}

std::vector<McBand> mc_bands(const ProcessKind& process, std::size_t length, std::span<const int> orders,
                             int replicas, std::uint64_t seed, entropy::Estimator estimator) {
    if (replicas < 100) throw InputError("Monte Carlo bands need at least 100 replicas");
    if (orders.empty()) throw InputError("no entropy orders requested");
    for (int k : orders) {
        if (k < 1 || static_cast<std::size_t>(k) > length) throw InputError("band order out of range");
    }
    const ProcessSpec spec = to_spec(process);
    validate_process(spec);

    std::vector<std::vector<double>> values(orders.size(), std::vector<double>(static_cast<std::size_t>(replicas)));
    for (int i = 0; i < replicas; ++i) {
        Rng rng(derive_seed(seed, 0, static_cast<std::uint64_t>(i)));
        const auto x = ingest::simulate_process(spec, length, 1.0, rng);
        const auto symbols = symbolic::binarize_nonzero(x);
        const auto h = entropy::rescaled_conditional_profile(symbols.symbols, 2, orders, estimator);
        for (std::size_t j = 0; j < orders.size(); ++j) values[j][static_cast<std::size_t>(i)] = h[j];
    }

    std::vector<McBand> bands;
    for (std::size_t j = 0; j < orders.size(); ++j) {
        const auto& v = values[j];
        McBand b;
        b.k = orders[j];
        b.estimator = estimator;
        b.process = process;
        b.series_length = length;
        b.replicas = replicas;
        b.seed = seed;
        const auto r = static_cast<double>(replicas);
        b.mean = std::accumulate(v.begin(), v.end(), 0.0) / r;
        double ss = 0.0;
        for (double x : v) ss += (x - b.mean) * (x - b.mean);
        b.std = std::sqrt(ss / (r - 1.0));
        b.lower = order_statistic(v, 0.005);
        b.upper = order_statistic(v, 0.995);
        bands.push_back(b);
    }
    return bands;
}

McBand mc_band(const ProcessKind& process, std::size_t length, int k, int replicas, std::uint64_t seed,
               entropy::Estimator estimator) {
    const int orders[] = {k};
    return mc_bands(process, length, orders, replicas, seed, estimator).front();
}

std::string to_string(Verdict verdict) {
    return verdict == Verdict::Reject ? "reject" : "fail-to-reject";
}

Verdict test_efficiency(double h_hat, const McBand& band) {
    return h_hat >= band.lower && h_hat <= band.upper ? Verdict::FailToReject : Verdict::Reject;
}

double score_theoretical(double h_hat, const ProcessKind& model, const McBand& band_for_model) {
    const double h_th = theory::theoretical_conditional(model, band_for_model.k);
    if (!(band_for_model.std > 0.0)) throw InputError("band standard deviation must be positive");
    return (h_th - h_hat) / band_for_model.std;
}

double score_residual(double h_hat_res, const McBand& white_noise_band) {
    if (!(white_noise_band.std > 0.0)) throw InputError("band standard deviation must be positive");
    return (1.0 - h_hat_res) / white_noise_band.std;
}

std::vector<std::pair<std::string, double>> rank_assets(const std::map<std::string, double>& scores) {
    std::vector<std::pair<std::string, double>> out(scores.begin(), scores.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

WhiteningDecomposition whitening_decomposition(std::span<const StageEntropies> assets) {
    WhiteningDecomposition out;
    for (const auto& a : assets) {
        const double total = a.residual - a.raw;
        if (!(total > 0.0)) {
            out.excluded.push_back(a.asset_id);
            continue;
        }
        StageShares s;
        s.asset_id = a.asset_id;
        s.total_gain = total;
        s.intraday = (a.deseasonalized - a.raw) / total;
        s.volatility = (a.standardized - a.deseasonalized) / total;
        s.microstructure = (a.residual - a.standardized) / total;
        out.per_asset.push_back(s);
    }
    if (out.per_asset.empty()) throw DecompositionError("no asset has a positive raw-to-residual entropy gain");
    const auto m = static_cast<double>(out.per_asset.size());
    for (const auto& s : out.per_asset) {
        out.intraday += s.intraday;
        out.volatility += s.volatility;
        out.microstructure += s.microstructure;
    }
    out.intraday /= m;
    out.volatility /= m;
    out.microstructure /= m;
    return out;
}

}  // namespace hfentropy::efficiency
