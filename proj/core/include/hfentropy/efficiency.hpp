#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hfentropy/entropy.hpp"
#include "hfentropy/types.hpp"

namespace hfentropy::efficiency {

struct BinomialTestResult {
    double z = 0.0;
    double p_value = 1.0;
    bool significant = false;
    bool normal_approximation = false;
};

/// Two-sided test of P(symbol 1) = 1/2. Exact binomial for n <= 1000, normal
/// approximation above. Throws InputError when n0 + n1 == 0.
BinomialTestResult binomial_symbol_test(std::uint64_t n0, std::uint64_t n1, double alpha = 0.01);

/// Monte Carlo distribution of the rescaled conditional entropy h~_k of the
/// binarized process at a fixed series length.
struct McBand {
    int k = 2;
    entropy::Estimator estimator = entropy::Estimator::Grassberger;
    ProcessKind process = WhiteNoise{};
    std::size_t series_length = 0;
    int replicas = 0;
    /// Empirical 0.5% and 99.5% order statistics.
    double lower = 0.0;
    double upper = 0.0;
    double mean = 0.0;
    /// Standard deviation of h~_k across replicas (sigma_k).
    double std = 0.0;
    std::uint64_t seed = 0;
};

/// One band per order, all computed from the same `replicas` simulated series.
/// Replica i is driven by derive_seed(seed, 0, i). Throws InputError when
/// replicas < 100.
std::vector<McBand> mc_bands(const ProcessKind& process, std::size_t length, std::span<const int> orders,
                             int replicas, std::uint64_t seed,
                             entropy::Estimator estimator = entropy::Estimator::Grassberger);

McBand mc_band(const ProcessKind& process, std::size_t length, int k, int replicas, std::uint64_t seed,
               entropy::Estimator estimator = entropy::Estimator::Grassberger);

/// Empirical order statistic without interpolation: the value of rank
/// ceil(prob * n) (1-based, clamped to [1, n]) in the sorted sample.
double order_statistic(std::vector<double> sample, double prob);

enum class Verdict { FailToReject, Reject };
std::string to_string(Verdict verdict);

/// Reject efficiency when h_hat falls outside [band.lower, band.upper].
Verdict test_efficiency(double h_hat, const McBand& band);

/// I_k = (h_k^th - h_hat) / sigma_k with sigma_k from a band of the fitted process.
/// Throws UnsupportedOrderError for k outside {2, 3}.
double score_theoretical(double h_hat, const ProcessKind& model, const McBand& band_for_model);

/// I_k^res = (1 - h_hat_res) / sigma_k^WN.
double score_residual(double h_hat_res, const McBand& white_noise_band);

/// Descending by score; equal scores ordered by asset id.
std::vector<std::pair<std::string, double>> rank_assets(const std::map<std::string, double>& scores);

/// h~_k of one asset at each whitening stage.
struct StageEntropies {
    std::string asset_id;
    double raw = 0.0;
    double deseasonalized = 0.0;
    double standardized = 0.0;
    double residual = 0.0;
};

struct StageShares {
    std::string asset_id;
    double total_gain = 0.0;
    double intraday = 0.0;
    double volatility = 0.0;
    double microstructure = 0.0;
};

struct WhiteningDecomposition {
    std::vector<StageShares> per_asset;
    /// Cross-asset averages of the shares.
    double intraday = 0.0;
    double volatility = 0.0;
    double microstructure = 0.0;
    std::vector<std::string> excluded;
};

/// Splits the raw-to-residual entropy gain of each asset into the three
/// whitening steps. Assets with a non-positive total gain are excluded.
/// Throws DecompositionError if no asset remains.
WhiteningDecomposition whitening_decomposition(std::span<const StageEntropies> assets);

}  // namespace hfentropy::efficiency
