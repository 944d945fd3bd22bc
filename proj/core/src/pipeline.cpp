#include "hfentropy/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>

#include "hfentropy/error.hpp"
#include "hfentropy/random.hpp"
#include "hfentropy/symbolize.hpp"
#include "hfentropy/theory.hpp"

namespace hfentropy::pipeline {

std::string to_string(PipelineKind kind) {
    switch (kind) {
        case PipelineKind::Binary: return "binary";
        case PipelineKind::Ternary: return "ternary";
        case PipelineKind::Both: return "both";
    }
    return "both";
}

PipelineKind pipeline_from_string(const std::string& name) {
    if (name == "binary") return PipelineKind::Binary;
    if (name == "ternary") return PipelineKind::Ternary;
    if (name == "both") return PipelineKind::Both;
    throw InputError("unknown pipeline '" + name + "'");
}

double RunConfig::alpha() const {
    if (frequency_minutes == 1) return alpha_1min;
    if (frequency_minutes == 5) return alpha_5min;
    return clean::default_alpha(frequency_minutes);
}

void RunConfig::validate() const {
    if (frequency_minutes <= 0) throw InputError("frequency must be a positive number of minutes");
    if (session.close_minute <= session.open_minute) throw InputError("session must close after it opens");
    for (int k : binary_orders) {
        if (k < 1) throw InputError("binary entropy orders must be at least 1");
    }
    for (int k : ternary_orders) {
        if (k < 1) throw InputError("ternary entropy orders must be at least 1");
    }
    if (mc_replicas < 100) throw InputError("mc_replicas must be at least 100");
    if (max_order_binary < 0 || max_order_ternary < 0) throw InputError("ARMA orders must be non-negative");
    if (workers < 1) throw InputError("workers must be at least 1");
    if (!(alpha_1min > 0.0 && alpha_1min < 1.0) || !(alpha_5min > 0.0 && alpha_5min < 1.0)) {
        throw InputError("EWMA alpha must be in (0, 1)");
    }
    if (!(split_threshold > 0.0)) throw InputError("split threshold must be positive");
    std::set<std::string> ids;
    for (const auto& a : assets) {
        if (a.id.empty()) throw InputError("every asset needs an id");
        if (!ids.insert(a.id).second) throw InputError("duplicate asset id '" + a.id + "'");
        if (a.csv.has_value() == a.synthetic.has_value()) {
            throw InputError("asset '" + a.id + "' needs exactly one of csv or synthetic");
        }
        if (a.csv && !std::filesystem::exists(*a.csv)) {
            throw InputError("asset '" + a.id + "': file not found: " + a.csv->string());
        }
        if (a.synthetic) {
            a.synthetic->validate();
            if (a.n_days < 2) throw InputError("asset '" + a.id + "': synthetic series need at least two days");
            if (a.minutes_per_day < 2) throw InputError("asset '" + a.id + "': minutes_per_day must be at least 2");
        }
    }
}

BandCache::BandCache(std::uint64_t master_seed, int replicas, entropy::Estimator estimator)
    : master_seed_(master_seed), replicas_(replicas), estimator_(estimator) {}

std::vector<efficiency::McBand> BandCache::get(const ProcessKind& process, std::size_t length,
                                               const std::vector<int>& orders) {
    const std::string stream = describe(process) + "|n=" + std::to_string(length);
    std::string key = stream + "|k=";
    for (int k : orders) key += std::to_string(k) + ",";
    {
        std::lock_guard lock(mutex_);
        if (auto it = bands_.find(key); it != bands_.end()) return it->second;
    }
    const std::uint64_t seed = derive_seed(master_seed_, fnv1a(stream.data(), stream.size()));
    auto bands = efficiency::mc_bands(process, length, orders, replicas_, seed, estimator_);
    std::lock_guard lock(mutex_);
    bands_.emplace(key, bands);
    return bands;
}

PreparedAsset prepare_asset(const AssetSource& source, const RunConfig& config) {
    PreparedAsset out;
    PriceSeries prices;
    if (source.csv) {
        auto loaded = ingest::load_csv(*source.csv, config.session, source.id);
        prices = std::move(loaded.series);
        out.audit.dropped_out_of_session = loaded.dropped_out_of_session;
    } else {
        prices = ingest::generate_synthetic(*source.synthetic, source.n_days, source.minutes_per_day, source.id);
    }
    if (prices.size() < 2) throw InputError("asset '" + source.id + "' has fewer than two prices");

    if (config.remove_outliers) {
        auto filtered = clean::remove_outliers(prices, config.outliers);
        prices = std::move(filtered.series);
        out.audit.outliers = std::move(filtered.removed);
    }
    if (config.frequency_minutes != prices.interval_minutes) {
        prices = ingest::resample(prices, config.frequency_minutes);
    }

    std::vector<double> p;
    p.reserve(prices.size());
    for (const auto& o : prices.observations) p.push_back(o.price);
    out.audit.n_prices = p.size();
    if (!p.empty()) {
        auto mid = p.begin() + static_cast<std::ptrdiff_t>(p.size() / 2);
        std::nth_element(p.begin(), mid, p.end());
        double median = *mid;
        if (p.size() % 2 == 0) median = 0.5 * (median + *std::max_element(p.begin(), mid));
        out.audit.median_price = median;
    }

    auto splits = clean::detect_splits(clean::log_returns(prices), config.split_threshold);
    out.raw = std::move(splits.series);
    out.audit.split_times = std::move(splits.flagged);
    out.audit.split_values = std::move(splits.flagged_values);
    out.prices = std::move(prices);
    return out;
}

namespace {

std::vector<OrderOutcome> band_tests(const std::vector<double>& h, const std::vector<efficiency::McBand>& bands) {
    std::vector<OrderOutcome> out;
    for (std::size_t i = 0; i < h.size(); ++i) {
        out.push_back({bands[i].k, h[i], bands[i], efficiency::test_efficiency(h[i], bands[i])});
    }
    return out;
}

std::optional<ProcessKind> benchmark_process(const arma::ArmaModel& model) {
    if (model.p == 0 && model.q == 0) return WhiteNoise{};
    if (model.p == 1 && model.q == 0) return Ar1{model.ar[0]};
    if (model.p == 0 && model.q == 1) return Ma1{model.ma[0]};
    return std::nullopt;
}

}  // namespace

BinaryReport analyze_binary(const ReturnSeries& raw, const RunConfig& config, BandCache& bands) {
    BinaryReport rep;
    rep.n_returns = raw.size();
    std::vector<double> nonzero;
    nonzero.reserve(raw.size());
    for (double v : raw.values) {
        if (v != 0.0) nonzero.push_back(v);
    }
    const auto symbols = symbolic::binarize_nonzero(raw);
    rep.n_symbols = symbols.size();
    rep.zeros_dropped = symbols.dropped_zero_count;
    const auto counts = symbolic::symbol_counts(symbols);
    rep.n_down = counts[0];
    rep.n_up = counts[1];
    rep.binomial = efficiency::binomial_symbol_test(rep.n_down, rep.n_up);

    const auto h = entropy::rescaled_conditional_profile(symbols.symbols, 2, config.binary_orders, config.estimator);
    rep.returns = band_tests(h, bands.get(WhiteNoise{}, rep.n_symbols, config.binary_orders));

    auto selection = arma::select_order(nonzero, config.max_order_binary);
    rep.model = std::move(selection.best);
    rep.bic_grid = std::move(selection.grid);

    rep.benchmark = benchmark_process(rep.model);
    if (rep.benchmark) {
        const std::vector<int> theory_orders{2, 3};
        const auto h_theory =
            entropy::rescaled_conditional_profile(symbols.symbols, 2, theory_orders, config.estimator);
        const auto model_bands = bands.get(*rep.benchmark, rep.n_symbols, theory_orders);
        for (std::size_t i = 0; i < theory_orders.size(); ++i) {
            TheoreticalScore s;
            s.k = theory_orders[i];
            s.h_theory = theory::theoretical_conditional(*rep.benchmark, s.k);
            s.h_hat = h_theory[i];
            s.sigma = model_bands[i].std;
            s.score = efficiency::score_theoretical(s.h_hat, *rep.benchmark, model_bands[i]);
            rep.theoretical.push_back(s);
        }
    }

    const auto res = arma::residuals(nonzero, rep.model);
    const auto res_symbols = symbolic::binarize_nonzero(std::span<const double>(res.values));
    rep.n_residual_symbols = res_symbols.size();
    const auto h_res =
        entropy::rescaled_conditional_profile(res_symbols.symbols, 2, config.binary_orders, config.estimator);
    rep.residuals = band_tests(h_res, bands.get(WhiteNoise{}, rep.n_residual_symbols, config.binary_orders));
    for (const auto& o : rep.residuals) rep.residual_scores[o.k] = efficiency::score_residual(o.h, o.band);

    if (config.export_symbols) {
        rep.digits_returns = symbolic::to_digit_string(symbols);
        rep.digits_residuals = symbolic::to_digit_string(res_symbols);
    }
    return rep;
}

namespace {

StageOutcome ternary_stage(Stage stage, std::span<const double> values, const std::vector<int>& orders,
                           entropy::Estimator estimator) {
    StageOutcome out;
    out.stage = stage;
    out.n = values.size();
    const auto symbols = symbolic::ternarize_tertiles(values);
    out.lower_threshold = symbols.lower_threshold;
    out.upper_threshold = symbols.upper_threshold;
    out.degenerate = symbols.degenerate;
    const auto h = entropy::rescaled_conditional_profile(symbols.symbols, 3, orders, estimator);
    for (std::size_t i = 0; i < orders.size(); ++i) out.h[orders[i]] = h[i];
    return out;
}

}  // namespace

TernaryReport analyze_ternary(const ReturnSeries& raw, const RunConfig& config) {
    TernaryReport rep;
    const auto& orders = config.ternary_orders;
    rep.stages.push_back(ternary_stage(Stage::Raw, raw.values, orders, config.estimator));

    const auto profile = clean::estimate_intraday_profile(raw);
    rep.warnings.insert(rep.warnings.end(), profile.warnings.begin(), profile.warnings.end());
    const auto deseasonalized = clean::deseasonalize(raw, profile);
    rep.stages.push_back(ternary_stage(Stage::Deseasonalized, deseasonalized.values, orders, config.estimator));

    const auto vol = clean::ewma_volatility(deseasonalized, config.alpha());
    const auto standardized = clean::standardize(deseasonalized, vol);
    rep.stages.push_back(ternary_stage(Stage::Standardized, standardized.values, orders, config.estimator));

    auto selection = arma::select_order(standardized.values, config.max_order_ternary);
    rep.model = std::move(selection.best);
    rep.bic_grid = std::move(selection.grid);
    const auto res = arma::residuals(standardized.values, rep.model);
    rep.stages.push_back(ternary_stage(Stage::Residual, res.values, orders, config.estimator));

    for (const auto& s : rep.stages) {
        if (s.degenerate) {
            rep.degenerate = true;
            rep.warnings.push_back(std::string("tertile thresholds coincide at the ") +
                                   std::string(to_string(s.stage)) + " stage");
        }
    }
    return rep;
}

std::size_t RunResults::failed_count() const {
    return static_cast<std::size_t>(std::count_if(assets.begin(), assets.end(), [](const auto& a) { return !a.ok; }));
}

namespace {

void sparse_warnings(AssetOutcome& out, const std::vector<int>& orders, std::size_t length, const char* label) {
    if (length == 0) return;
    const double limit = std::log2(static_cast<double>(length));
    for (int k : orders) {
        if (static_cast<double>(k) > limit) {
            out.warnings.push_back(std::string(label) + " order " + std::to_string(k) + " exceeds log2 of the " +
                                   std::to_string(length) + " symbols");
        }
    }
}

AssetOutcome analyze_asset(const AssetSource& source, const RunConfig& config, BandCache& bands) {
    AssetOutcome out;
    out.asset_id = source.id;
    try {
        auto prepared = prepare_asset(source, config);
        out.audit = std::move(prepared.audit);
        if (config.pipeline != PipelineKind::Ternary) {
            out.binary = analyze_binary(prepared.raw, config, bands);
            sparse_warnings(out, config.binary_orders, out.binary->n_symbols, "binary");
        }
        if (config.pipeline != PipelineKind::Binary) {
            out.ternary = analyze_ternary(prepared.raw, config);
            sparse_warnings(out, config.ternary_orders, prepared.raw.size(), "ternary");
        }
    } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
        out.binary.reset();
        out.ternary.reset();
    }
    return out;
}

}  // namespace

RunResults run(const RunConfig& config) {
    config.validate();
    RunResults results;
    results.config = config;
    results.assets.resize(config.assets.size());

    BandCache bands(config.master_seed, config.mc_replicas, config.estimator);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < config.assets.size(); i = next++) {
            results.assets[i] = analyze_asset(config.assets[i], config, bands);
        }
    };
    const auto n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(config.workers), std::max<std::size_t>(config.assets.size(), 1));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> threads;
        for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    }

    std::map<int, std::map<std::string, double>> residual_scores;
    std::map<int, std::map<std::string, double>> theoretical_scores;
    for (const auto& a : results.assets) {
        if (!a.ok || !a.binary) continue;
        for (const auto& [k, s] : a.binary->residual_scores) residual_scores[k][a.asset_id] = s;
        for (const auto& s : a.binary->theoretical) theoretical_scores[s.k][a.asset_id] = s.score;
    }
    for (const auto& [k, m] : residual_scores) results.residual_rankings[k] = efficiency::rank_assets(m);
    for (const auto& [k, m] : theoretical_scores) results.theoretical_rankings[k] = efficiency::rank_assets(m);

    if (config.pipeline != PipelineKind::Binary && !config.assets.empty()) {
        for (int k : config.ternary_orders) {
            std::vector<efficiency::StageEntropies> stages;
            for (const auto& a : results.assets) {
                if (!a.ok || !a.ternary || a.ternary->degenerate) continue;
                const auto& s = a.ternary->stages;
                stages.push_back({a.asset_id, s[0].h.at(k), s[1].h.at(k), s[2].h.at(k), s[3].h.at(k)});
            }
            try {
                results.decompositions[k] = efficiency::whitening_decomposition(stages);
            } catch (const DecompositionError& e) {
                results.decomposition_errors[k] = e.what();
            }
        }
    }
    return results;
}

RunResults run_binary_pipeline(const RunConfig& config) {
    RunConfig c = config;
    c.pipeline = PipelineKind::Binary;
    return run(c);
}

RunResults run_ternary_pipeline(const RunConfig& config) {
    RunConfig c = config;
    c.pipeline = PipelineKind::Ternary;
    return run(c);
}

}  // namespace hfentropy::pipeline
