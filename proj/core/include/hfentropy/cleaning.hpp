#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hfentropy/types.hpp"

namespace hfentropy::clean {

/// Neighbourhood outlier filter parameters. Defaults are the 1-minute values:
/// k = 20 neighbours, 10% trimming, c = 5, gamma = 0.05 price units.
struct OutlierParams {
    int k = 20;
    double delta = 0.10;
    double c = 5.0;
    double gamma = 0.05;
};

struct OutlierResult {
    PriceSeries series;
    std::vector<Observation> removed;
};

/// Removes p_i when |p_i - mean_i| >= c * sd_i + gamma, where mean_i and sd_i are
/// the trimmed mean and standard deviation of the k surviving records closest in
/// time to i (i itself excluded). Records are visited in time order and earlier
/// removals are excluded from later neighbourhoods. Trimming drops
/// floor(delta * k / 2) values from each end.
OutlierResult remove_outliers(const PriceSeries& series, const OutlierParams& params = {});

/// R_t = ln(p_t / p_{t-1}) between consecutive observations of the same day.
ReturnSeries log_returns(const PriceSeries& series);

struct SplitResult {
    ReturnSeries series;
    std::vector<Timestamp> flagged;
    std::vector<double> flagged_values;
};

/// Drops returns with |r| > threshold (unadjusted splits and merges).
SplitResult detect_splits(const ReturnSeries& returns, double threshold = 0.2);

/// Intraday volatility factors zeta, indexed by slot = offset_from_open / slot_minutes.
struct IntradayProfile {
    int slot_minutes = 1;
    std::vector<double> factors;
    std::size_t n_days_used = 0;
    std::vector<std::string> warnings;

    double factor_at(const SessionSpec& session, Timestamp t) const;
};

/// zeta_t = mean over days d of |R_{d,t}| / s_d, where s_d is the standard
/// deviation of the absolute returns of day d. The mean runs over the days that
/// have a return in slot t; slots with no information are filled by linear
/// interpolation between the nearest informative slots. Days with s_d = 0 are
/// skipped with a warning. Requires a raw series spanning at least two days.
IntradayProfile estimate_intraday_profile(const ReturnSeries& returns);

/// R~_{d,t} = R_{d,t} / zeta_t.
ReturnSeries deseasonalize(const ReturnSeries& returns, const IntradayProfile& profile);

/// E|u| for a standard normal u, sqrt(2 / pi).
inline constexpr double kMeanAbsNormal = 0.79788456080286535588;

/// Exponential smoothing weight giving the 1-minute/5-minute defaults (0.05 and
/// 0.25) and the same ~14 minute half-life at other sampling intervals.
double default_alpha(int interval_minutes);

struct VolatilityTrack {
    double alpha = 0.05;
    std::size_t warmup = 0;
    /// sigma[t] estimates the local volatility of return t from returns before t.
    std::vector<double> sigma;
    /// False inside the warm-up window or where sigma is zero.
    std::vector<bool> usable;
};

/// sigma_t = alpha / mu_1 * sum_{i>0} (1-alpha)^{i-1} |r_{t-i}|, computed
/// recursively from a zero start. The first ceil(5 / alpha) entries are marked
/// unusable. Requires a deseasonalized series and 0 < alpha < 1.
VolatilityTrack ewma_volatility(const ReturnSeries& returns, double alpha);

/// r_t = R~_t / sigma_t on the usable indices; the rest are dropped.
ReturnSeries standardize(const ReturnSeries& returns, const VolatilityTrack& volatility);

}  // namespace hfentropy::clean
