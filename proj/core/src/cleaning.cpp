#include "hfentropy/cleaning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hfentropy/error.hpp"

namespace hfentropy::clean {

namespace {

void require_stage(const ReturnSeries& r, Stage expected, const char* op) {
    if (r.stage != expected) {
        throw InputError(std::string(op) + " expects a " + std::string(to_string(expected)) + " series, got " +
                         std::string(to_string(r.stage)));
    }
}

std::string format_param(const char* name, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%g", name, value);
    return buf;
}

}  // namespace

OutlierResult remove_outliers(const PriceSeries& series, const OutlierParams& params) {
    if (params.k < 2) throw InputError("outlier neighbourhood k must be at least 2");
    if (!(params.delta >= 0.0 && params.delta < 1.0)) throw InputError("outlier trimming delta must be in [0, 1)");
    if (!(params.c > 0.0)) throw InputError("outlier multiplier c must be positive");
    if (params.gamma < 0.0) throw InputError("outlier granularity gamma must be non-negative");
    const auto& obs = series.observations;
    const auto k = static_cast<std::size_t>(params.k);
    if (obs.size() < k + 1) {
        throw InputError("outlier filter needs at least k+1 = " + std::to_string(k + 1) + " prices");
    }

    const auto trim = static_cast<std::size_t>(std::floor(params.delta * static_cast<double>(k) / 2.0));
    std::vector<bool> alive(obs.size(), true);
    std::vector<double> neighbours;
    neighbours.reserve(k);

    OutlierResult result;
    result.series.asset_id = series.asset_id;
    result.series.session = series.session;
    result.series.interval_minutes = series.interval_minutes;

    for (std::size_t i = 0; i < obs.size(); ++i) {
        neighbours.clear();
        // Walk outward from i over surviving records, taking the nearer side first.
        std::ptrdiff_t left = static_cast<std::ptrdiff_t>(i) - 1;
        std::size_t right = i + 1;
        auto skip_left = [&] {
            while (left >= 0 && !alive[static_cast<std::size_t>(left)]) --left;
        };
        auto skip_right = [&] {
            while (right < obs.size() && !alive[right]) ++right;
        };
        skip_left();
        skip_right();
        while (neighbours.size() < k && (left >= 0 || right < obs.size())) {
            bool take_left;
            if (left < 0) {
                take_left = false;
            } else if (right >= obs.size()) {
                take_left = true;
            } else {
                const auto dl = obs[i].time - obs[static_cast<std::size_t>(left)].time;
                const auto dr = obs[right].time - obs[i].time;
                take_left = dl <= dr;
            }
            if (take_left) {
                neighbours.push_back(obs[static_cast<std::size_t>(left)].price);
                --left;
                skip_left();
            } else {
                neighbours.push_back(obs[right].price);
                ++right;
                skip_right();
            }
        }

        std::sort(neighbours.begin(), neighbours.end());
        const std::size_t lo = std::min(trim, neighbours.size() / 2);
        const std::size_t hi = neighbours.size() - lo;
        const auto m = static_cast<double>(hi - lo);
        if (hi <= lo) continue;
        const double mean = std::accumulate(neighbours.begin() + static_cast<std::ptrdiff_t>(lo),
                                            neighbours.begin() + static_cast<std::ptrdiff_t>(hi), 0.0) /
                            m;
        double ss = 0.0;
        for (std::size_t j = lo; j < hi; ++j) ss += (neighbours[j] - mean) * (neighbours[j] - mean);
        const double sd = m > 1.0 ? std::sqrt(ss / (m - 1.0)) : 0.0;

        if (std::abs(obs[i].price - mean) >= params.c * sd + params.gamma) {
            alive[i] = false;
            result.removed.push_back(obs[i]);
        }
    }

    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (alive[i]) result.series.observations.push_back(obs[i]);
    }
    return result;
}

ReturnSeries log_returns(const PriceSeries& series) {
    if (series.size() < 2) throw InputError("log returns need at least two prices");
    ReturnSeries out;
    out.asset_id = series.asset_id;
    out.stage = Stage::Raw;
    out.session = series.session;
    out.interval_minutes = series.interval_minutes;
    const auto& obs = series.observations;
    for (std::size_t i = 1; i < obs.size(); ++i) {
        if (day_of(obs[i].time) != day_of(obs[i - 1].time)) continue;
        out.times.push_back(obs[i].time);
        out.values.push_back(std::log(obs[i].price / obs[i - 1].price));
    }
    out.lineage.push_back("log_returns(interval=" + std::to_string(series.interval_minutes) + ")");
    return out;
}

SplitResult detect_splits(const ReturnSeries& returns, double threshold) {
    require_stage(returns, Stage::Raw, "detect_splits");
    SplitResult result;
    result.series = returns;
    result.series.times.clear();
    result.series.values.clear();
    for (std::size_t i = 0; i < returns.size(); ++i) {
        if (std::abs(returns.values[i]) > threshold) {
            result.flagged.push_back(returns.times[i]);
            result.flagged_values.push_back(returns.values[i]);
        } else {
            result.series.times.push_back(returns.times[i]);
            result.series.values.push_back(returns.values[i]);
        }
    }
    result.series.lineage.push_back(format_param("detect_splits(threshold", threshold) + ")");
    return result;
}

double IntradayProfile::factor_at(const SessionSpec& session, Timestamp t) const {
    const int offset = session.offset_from_open(t);
    if (offset <= 0 || factors.empty()) {
        throw InputError("timestamp " + format_timestamp(t) + " does not close an intraday return");
    }
    const auto slot = static_cast<std::size_t>((offset - 1) / slot_minutes);
    if (slot >= factors.size()) {
        throw InputError("timestamp " + format_timestamp(t) + " lies beyond the intraday profile");
    }
    return factors[slot];
}

IntradayProfile estimate_intraday_profile(const ReturnSeries& returns) {
    require_stage(returns, Stage::Raw, "estimate_intraday_profile");
    IntradayProfile profile;
    profile.slot_minutes = returns.interval_minutes;
    const int length = returns.session.length_minutes();
    const auto n_slots = static_cast<std::size_t>((length + profile.slot_minutes - 1) / profile.slot_minutes);
    if (n_slots == 0) throw InputError("empty session");

    std::vector<double> sum(n_slots, 0.0);
    std::vector<std::size_t> count(n_slots, 0);
    std::size_t n_days = 0;

    std::size_t i = 0;
    while (i < returns.size()) {
        const auto day = day_of(returns.times[i]);
        std::size_t end = i;
        while (end < returns.size() && day_of(returns.times[end]) == day) ++end;
        ++n_days;

        const auto m = static_cast<double>(end - i);
        double mean_abs = 0.0;
        for (std::size_t j = i; j < end; ++j) mean_abs += std::abs(returns.values[j]);
        mean_abs /= m;
        double ss = 0.0;
        for (std::size_t j = i; j < end; ++j) {
            const double d = std::abs(returns.values[j]) - mean_abs;
            ss += d * d;
        }
        const double s = m > 1.0 ? std::sqrt(ss / (m - 1.0)) : 0.0;
        if (!(s > 0.0)) {
            profile.warnings.push_back("day " + format_timestamp(day + Minutes{0}).substr(0, 10) +
                                       " has zero dispersion of absolute returns; excluded from the intraday profile");
        } else {
            ++profile.n_days_used;
            for (std::size_t j = i; j < end; ++j) {
                const int offset = returns.session.offset_from_open(returns.times[j]);
                if (offset <= 0) continue;
                const auto slot = static_cast<std::size_t>((offset - 1) / profile.slot_minutes);
                if (slot >= n_slots) continue;
                sum[slot] += std::abs(returns.values[j]) / s;
                ++count[slot];
            }
        }
        i = end;
    }
    if (n_days < 2) throw InputError("intraday profile needs at least two days of returns");
    if (profile.n_days_used == 0) throw InputError("no day with positive dispersion of absolute returns");

    profile.factors.assign(n_slots, 0.0);
    std::vector<std::size_t> informative;
    for (std::size_t s = 0; s < n_slots; ++s) {
        if (count[s] > 0 && sum[s] > 0.0) {
            profile.factors[s] = sum[s] / static_cast<double>(count[s]);
            informative.push_back(s);
        }
    }
    if (informative.empty()) throw InputError("all intraday slots have zero absolute returns");
    if (informative.size() < n_slots) {
        profile.warnings.push_back(std::to_string(n_slots - informative.size()) +
                                   " intraday slots without information were interpolated");
    }
    for (std::size_t s = 0; s < n_slots; ++s) {
        if (profile.factors[s] > 0.0) continue;
        const auto next = std::lower_bound(informative.begin(), informative.end(), s);
        if (next == informative.begin()) {
            profile.factors[s] = profile.factors[*next];
        } else if (next == informative.end()) {
            profile.factors[s] = profile.factors[informative.back()];
        } else {
            const std::size_t a = *(next - 1);
            const std::size_t b = *next;
            const double w = static_cast<double>(s - a) / static_cast<double>(b - a);
            profile.factors[s] = (1.0 - w) * profile.factors[a] + w * profile.factors[b];
        }
    }
    return profile;
}

ReturnSeries deseasonalize(const ReturnSeries& returns, const IntradayProfile& profile) {
    require_stage(returns, Stage::Raw, "deseasonalize");
    ReturnSeries out = returns;
    out.stage = Stage::Deseasonalized;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.values[i] /= profile.factor_at(returns.session, returns.times[i]);
    }
    out.lineage.push_back("deseasonalize(days=" + std::to_string(profile.n_days_used) + ")");
    return out;
}

double default_alpha(int interval_minutes) {
    if (interval_minutes <= 0) throw InputError("sampling interval must be positive");
    if (interval_minutes == 1) return 0.05;
    if (interval_minutes == 5) return 0.25;
    return 1.0 - std::pow(2.0, -static_cast<double>(interval_minutes) / 13.5);
}

VolatilityTrack ewma_volatility(const ReturnSeries& returns, double alpha) {
    require_stage(returns, Stage::Deseasonalized, "ewma_volatility");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("EWMA alpha must be in (0, 1)");
    VolatilityTrack track;
    track.alpha = alpha;
    track.warmup = static_cast<std::size_t>(std::ceil(5.0 / alpha));
    track.sigma.resize(returns.size());
    track.usable.resize(returns.size());
    double s = 0.0;
    for (std::size_t t = 0; t < returns.size(); ++t) {
        if (t > 0) s = alpha * std::abs(returns.values[t - 1]) + (1.0 - alpha) * s;
        track.sigma[t] = s / kMeanAbsNormal;
        track.usable[t] = t >= track.warmup && track.sigma[t] > 0.0;
    }
    return track;
}

ReturnSeries standardize(const ReturnSeries& returns, const VolatilityTrack& volatility) {
    require_stage(returns, Stage::Deseasonalized, "standardize");
    if (volatility.sigma.size() != returns.size()) {
        throw InputError("volatility track does not match the return series");
    }
    ReturnSeries out;
    out.asset_id = returns.asset_id;
    out.stage = Stage::Standardized;
    out.session = returns.session;
    out.interval_minutes = returns.interval_minutes;
    out.lineage = returns.lineage;
    for (std::size_t t = 0; t < returns.size(); ++t) {
        if (!volatility.usable[t]) continue;
        out.times.push_back(returns.times[t]);
        out.values.push_back(returns.values[t] / volatility.sigma[t]);
    }
    out.lineage.push_back(format_param("standardize(alpha", volatility.alpha) +
                          ",warmup=" + std::to_string(volatility.warmup) + ")");
    return out;
}

}  // namespace hfentropy::clean
