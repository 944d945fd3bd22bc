#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "hfentropy/random.hpp"
#include "hfentropy/types.hpp"

namespace hfentropy::ingest {

struct LoadResult {
    PriceSeries series;
    std::size_t dropped_out_of_session = 0;
};

/// Reads a `timestamp,price` CSV (optional header row). Rows outside the
/// session are dropped and counted.
///
/// Throws ParseError (with the 1-based line number) for malformed rows and
/// ValidationError for non-positive prices or non-increasing timestamps.
LoadResult load_csv(const std::filesystem::path& path, const SessionSpec& session,
                    std::string asset_id = {});

/// Writes a series in the format load_csv reads.
void write_csv(const PriceSeries& series, const std::filesystem::path& path);

/// Last-price resampling onto the grid open + j * interval_minutes of every day.
/// Grid points without an earlier observation on the same day stay missing.
/// Requires interval_minutes to divide the session length.
PriceSeries resample(const PriceSeries& series, int interval_minutes);

/// Log-volatility of each trading day follows a Gaussian AR(1):
/// l_d = persistence * l_{d-1} + vol_of_vol * sqrt(1 - persistence^2) * z_d,
/// and the day's returns are scaled by exp(l_d).
struct VolatilityRegime {
    double persistence = 0.9;
    double vol_of_vol = 0.5;
    /// Explicit per-day scale factors; used instead of the AR(1) when non-empty.
    std::vector<double> day_factors;
};

struct SyntheticSpec {
    ProcessSpec process = WhiteNoise{};
    double innovation_sd = 1e-3;
    /// Standard deviation of i.i.d. pricing errors u_t added to the latent log-price.
    double pricing_error_sd = 0.0;
    std::optional<VolatilityRegime> volatility;
    /// Multiplicative factor per intraday return slot (size minutes_per_day - 1).
    std::vector<double> intraday_profile;
    /// Price grid size; prices are rounded to the nearest multiple.
    std::optional<double> tick;
    double initial_price = 100.0;
    std::uint64_t seed = 1;

    /// Throws SpecError on invalid parameters.
    void validate() const;
};

/// Stationary sample path of length n driven by N(0, innovation_sd^2) innovations.
std::vector<double> simulate_process(const ProcessSpec& process, std::size_t n, double innovation_sd,
                                     Rng& rng);

/// U-shaped intraday factor profile: 1 + amplitude * (2x - 1)^2 over x in [0, 1],
/// normalized to mean one.
std::vector<double> u_shaped_profile(std::size_t slots, double amplitude);

/// Builds n_days trading days of minutes_per_day one-minute prices starting at
/// the session open. Latent log-returns from spec.process are scaled by the
/// intraday profile and then by the day's volatility factor, pricing errors are
/// added to the log-price, and prices are rounded to the tick grid last.
/// The session of the result closes minutes_per_day - 1 minutes after the open.
/// Deterministic for a fixed spec.seed.
PriceSeries generate_synthetic(const SyntheticSpec& spec, std::size_t n_days, int minutes_per_day,
                               std::string asset_id = "SYNTH");

}  // namespace hfentropy::ingest
