#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hfentropy/arma.hpp"
#include "hfentropy/cleaning.hpp"
#include "hfentropy/efficiency.hpp"
#include "hfentropy/entropy.hpp"
#include "hfentropy/ingestion.hpp"
#include "hfentropy/types.hpp"

namespace hfentropy::pipeline {

/// One input series: either a CSV file or a synthetic specification.
struct AssetSource {
    std::string id;
    std::optional<std::filesystem::path> csv;
    std::optional<ingest::SyntheticSpec> synthetic;
    std::size_t n_days = 250;
    int minutes_per_day = 391;
};

enum class PipelineKind { Binary, Ternary, Both };
std::string to_string(PipelineKind kind);
PipelineKind pipeline_from_string(const std::string& name);

struct RunConfig {
    std::vector<AssetSource> assets;
    SessionSpec session;
    int frequency_minutes = 1;
    PipelineKind pipeline = PipelineKind::Both;
    std::vector<int> binary_orders{2, 3, 6, 10};
    std::vector<int> ternary_orders{8};
    entropy::Estimator estimator = entropy::Estimator::Grassberger;
    bool remove_outliers = true;
    clean::OutlierParams outliers;
    double split_threshold = 0.2;
    double alpha_1min = 0.05;
    double alpha_5min = 0.25;
    int max_order_binary = 8;
    int max_order_ternary = 5;
    int mc_replicas = 1000;
    std::uint64_t master_seed = 20240101;
    std::filesystem::path output_dir = "hfentropy-out";
    int workers = 1;
    bool dump_bic_grid = false;
    bool export_symbols = false;

    /// Smoothing weight for the configured frequency.
    double alpha() const;
    /// Throws InputError on inconsistent settings or missing input files.
    void validate() const;
};

/// Shared cache of white-noise and fitted-process bands. Seeds depend only on the
/// master seed, the process and the length, so results do not depend on which
/// asset requested a band first.
class BandCache {
public:
    BandCache(std::uint64_t master_seed, int replicas, entropy::Estimator estimator);

    /// Bands aligned with `orders`.
    std::vector<efficiency::McBand> get(const ProcessKind& process, std::size_t length,
                                        const std::vector<int>& orders);

private:
    std::uint64_t master_seed_;
    int replicas_;
    entropy::Estimator estimator_;
    std::mutex mutex_;
    std::map<std::string, std::vector<efficiency::McBand>> bands_;
};

struct AssetAudit {
    std::size_t dropped_out_of_session = 0;
    std::vector<Observation> outliers;
    std::vector<Timestamp> split_times;
    std::vector<double> split_values;
    double median_price = 0.0;
    std::size_t n_prices = 0;
};

struct PreparedAsset {
    PriceSeries prices;
    ReturnSeries raw;
    AssetAudit audit;
};

/// Loads or generates the prices, resamples to the configured frequency, removes
/// outliers, forms log-returns and drops unadjusted splits.
PreparedAsset prepare_asset(const AssetSource& source, const RunConfig& config);

struct OrderOutcome {
    int k = 0;
    double h = 0.0;
    efficiency::McBand band;
    efficiency::Verdict verdict = efficiency::Verdict::FailToReject;
};

struct TheoreticalScore {
    int k = 0;
    double h_theory = 0.0;
    double h_hat = 0.0;
    double sigma = 0.0;
    double score = 0.0;
};

struct BinaryReport {
    std::size_t n_returns = 0;
    std::size_t n_symbols = 0;
    std::size_t zeros_dropped = 0;
    std::uint64_t n_down = 0;
    std::uint64_t n_up = 0;
    efficiency::BinomialTestResult binomial;
    std::vector<OrderOutcome> returns;
    arma::ArmaModel model;
    std::vector<arma::GridEntry> bic_grid;
    std::optional<ProcessKind> benchmark;
    std::vector<TheoreticalScore> theoretical;
    std::size_t n_residual_symbols = 0;
    std::vector<OrderOutcome> residuals;
    std::map<int, double> residual_scores;
    std::string digits_returns;
    std::string digits_residuals;
};

/// Binary-alphabet analysis of one asset's raw returns.
BinaryReport analyze_binary(const ReturnSeries& raw, const RunConfig& config, BandCache& bands);

struct StageOutcome {
    Stage stage = Stage::Raw;
    std::size_t n = 0;
    double lower_threshold = 0.0;
    double upper_threshold = 0.0;
    bool degenerate = false;
    /// h~_k keyed by k.
    std::map<int, double> h;
};

struct TernaryReport {
    bool degenerate = false;
    std::vector<StageOutcome> stages;
    arma::ArmaModel model;
    std::vector<arma::GridEntry> bic_grid;
    std::vector<std::string> warnings;
};

/// Tertile-symbol entropies of the raw, deseasonalized, standardized and
/// ARMA-residual series of one asset.
TernaryReport analyze_ternary(const ReturnSeries& raw, const RunConfig& config);

struct AssetOutcome {
    std::string asset_id;
    bool ok = true;
    std::string error;
    std::vector<std::string> warnings;
    AssetAudit audit;
    std::optional<BinaryReport> binary;
    std::optional<TernaryReport> ternary;
};

using Ranking = std::vector<std::pair<std::string, double>>;

struct RunResults {
    RunConfig config;
    std::vector<AssetOutcome> assets;
    /// Residual-score rankings keyed by k.
    std::map<int, Ranking> residual_rankings;
    /// Theoretical-benchmark rankings keyed by k (assets with p + q <= 1).
    std::map<int, Ranking> theoretical_rankings;
    /// Whitening decomposition keyed by ternary order.
    std::map<int, efficiency::WhiteningDecomposition> decompositions;
    std::map<int, std::string> decomposition_errors;

    std::size_t failed_count() const;
};

/// Runs the configured pipelines over every asset with `config.workers` threads.
/// Per-asset failures are recorded and do not affect other assets.
RunResults run(const RunConfig& config);
RunResults run_binary_pipeline(const RunConfig& config);
RunResults run_ternary_pipeline(const RunConfig& config);

}  // namespace hfentropy::pipeline
