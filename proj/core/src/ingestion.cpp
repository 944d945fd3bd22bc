#include "hfentropy/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <type_traits>

#include "hfentropy/error.hpp"

namespace hfentropy::ingest {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_price(std::string_view text, std::size_t line) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("malformed price '" + std::string(text) + "'", line);
    }
    return value;
}

}  // namespace

LoadResult load_csv(const std::filesystem::path& path, const SessionSpec& session, std::string asset_id) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    LoadResult result;
    result.series.asset_id = asset_id.empty() ? path.stem().string() : std::move(asset_id);
    result.series.session = session;

    std::string line;
    std::size_t line_no = 0;
    std::optional<Timestamp> previous;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string_view::npos) {
            throw ParseError("expected 'timestamp,price'", line_no);
        }
        const auto ts_text = trim(row.substr(0, comma));
        const auto price_text = trim(row.substr(comma + 1));
        if (line_no == 1 && ts_text == "timestamp") continue;

        Timestamp ts;
        try {
            ts = parse_timestamp(ts_text);
        } catch (const InputError& e) {
            throw ParseError(e.what(), line_no);
        }
        const double price = parse_price(price_text, line_no);
        if (!(price > 0.0)) {
            throw ValidationError("non-positive price on line " + std::to_string(line_no));
        }
        if (previous && !(*previous < ts)) {
            throw ValidationError("timestamps not strictly increasing on line " + std::to_string(line_no));
        }
        previous = ts;
        if (!session.contains(ts)) {
            ++result.dropped_out_of_session;
            continue;
        }
        result.series.observations.push_back({ts, price});
    }
    return result;
}

void write_csv(const PriceSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << "timestamp,price\n";
    char buf[64];
    for (const auto& o : series.observations) {
        std::snprintf(buf, sizeof buf, "%.10g", o.price);
        out << format_timestamp(o.time) << ',' << buf << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

PriceSeries resample(const PriceSeries& series, int interval_minutes) {
    if (interval_minutes <= 0) {
        throw InputError("resample interval must be positive");
    }
    const int length = series.session.length_minutes();
    if (length % interval_minutes != 0) {
        throw InputError("resample interval " + std::to_string(interval_minutes) +
                         " does not divide the session length " + std::to_string(length));
    }
    PriceSeries out;
    out.asset_id = series.asset_id;
    out.session = series.session;
    out.interval_minutes = interval_minutes;

    const auto& obs = series.observations;
    std::size_t i = 0;
    while (i < obs.size()) {
        const auto day = day_of(obs[i].time);
        std::size_t end = i;
        while (end < obs.size() && day_of(obs[end].time) == day) ++end;

        const Timestamp open = day + Minutes{series.session.open_minute};
        std::size_t cursor = i;
        std::optional<double> last;
        for (int offset = 0; offset <= length; offset += interval_minutes) {
            const Timestamp grid = open + Minutes{offset};
            while (cursor < end && obs[cursor].time <= grid) {
                last = obs[cursor].price;
                ++cursor;
            }
            if (last) out.observations.push_back({grid, *last});
        }
        i = end;
    }
    return out;
}

void SyntheticSpec::validate() const {
    validate_process(process);
    if (!(innovation_sd > 0.0)) throw SpecError("innovation_sd must be positive");
    if (pricing_error_sd < 0.0) throw SpecError("pricing_error_sd must be non-negative");
    if (!(initial_price > 0.0)) throw SpecError("initial_price must be positive");
    if (tick && !(*tick > 0.0)) throw SpecError("tick must be positive");
    for (double f : intraday_profile) {
        if (!(f > 0.0)) throw SpecError("intraday profile factors must be positive");
    }
    if (volatility) {
        if (!(std::abs(volatility->persistence) < 1.0)) throw SpecError("volatility persistence must be in (-1, 1)");
        if (volatility->vol_of_vol < 0.0) throw SpecError("vol_of_vol must be non-negative");
        for (double f : volatility->day_factors) {
            if (!(f > 0.0)) throw SpecError("volatility day factors must be positive");
        }
    }
}

std::vector<double> simulate_process(const ProcessSpec& process, std::size_t n, double innovation_sd, Rng& rng) {
    std::normal_distribution<double> normal(0.0, innovation_sd);
    std::vector<double> x(n);
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, WhiteNoise>) {
                for (auto& v : x) v = normal(rng);
            } else if constexpr (std::is_same_v<T, Ar1>) {
                if (n == 0) return;
                double prev = normal(rng) / std::sqrt(1.0 - p.phi * p.phi);
                x[0] = prev;
                for (std::size_t t = 1; t < n; ++t) {
                    prev = p.phi * prev + normal(rng);
                    x[t] = prev;
                }
            } else if constexpr (std::is_same_v<T, Ma1>) {
                double prev_e = normal(rng);
                for (std::size_t t = 0; t < n; ++t) {
                    const double e = normal(rng);
                    x[t] = e + p.theta * prev_e;
                    prev_e = e;
                }
            } else {
                const std::size_t ar = p.ar.size();
                const std::size_t ma = p.ma.size();
                const std::size_t burn = 2000 + 50 * (ar + ma);
                std::vector<double> xs(burn + n, 0.0);
                std::vector<double> es(burn + n, 0.0);
                for (std::size_t t = 0; t < xs.size(); ++t) {
                    const double e = normal(rng);
                    double v = e;
                    for (std::size_t i = 1; i <= ar && i <= t; ++i) v += p.ar[i - 1] * xs[t - i];
                    for (std::size_t j = 1; j <= ma && j <= t; ++j) v += p.ma[j - 1] * es[t - j];
                    xs[t] = v;
                    es[t] = e;
                }
                std::copy(xs.begin() + static_cast<std::ptrdiff_t>(burn), xs.end(), x.begin());
            }
        },
        process);
    return x;
}

std::vector<double> u_shaped_profile(std::size_t slots, double amplitude) {
    std::vector<double> profile(slots, 1.0);
    if (slots < 2) return profile;
    for (std::size_t i = 0; i < slots; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(slots - 1);
        profile[i] = 1.0 + amplitude * (2.0 * x - 1.0) * (2.0 * x - 1.0);
    }
    const double mean = std::accumulate(profile.begin(), profile.end(), 0.0) / static_cast<double>(slots);
    for (auto& v : profile) v /= mean;
    return profile;
}

PriceSeries generate_synthetic(const SyntheticSpec& spec, std::size_t n_days, int minutes_per_day,
                               std::string asset_id) {
    spec.validate();
    if (minutes_per_day < 2) throw SpecError("minutes_per_day must be at least 2");
    const auto slots = static_cast<std::size_t>(minutes_per_day - 1);
    if (!spec.intraday_profile.empty() && spec.intraday_profile.size() != slots) {
        throw SpecError("intraday profile needs " + std::to_string(slots) + " factors");
    }
    if (spec.volatility && !spec.volatility->day_factors.empty() && spec.volatility->day_factors.size() != n_days) {
        throw SpecError("volatility day_factors needs one factor per day");
    }

    Rng rng(spec.seed);
    const std::size_t n = n_days * static_cast<std::size_t>(minutes_per_day);
    const std::vector<double> latent = simulate_process(spec.process, n, spec.innovation_sd, rng);

    std::vector<double> day_scale(n_days, 1.0);
    if (spec.volatility) {
        if (!spec.volatility->day_factors.empty()) {
            day_scale = spec.volatility->day_factors;
        } else {
            std::normal_distribution<double> z(0.0, 1.0);
            const double rho = spec.volatility->persistence;
            const double s = spec.volatility->vol_of_vol;
            double level = s * z(rng);
            for (std::size_t d = 0; d < n_days; ++d) {
                if (d > 0) level = rho * level + s * std::sqrt(1.0 - rho * rho) * z(rng);
                day_scale[d] = std::exp(level);
            }
        }
    }

    std::normal_distribution<double> pricing_error(0.0, spec.pricing_error_sd);

    SessionSpec session;
    session.close_minute = session.open_minute + minutes_per_day - 1;

    PriceSeries out;
    out.asset_id = std::move(asset_id);
    out.session = session;
    out.interval_minutes = 1;
    out.observations.reserve(n);

    using namespace std::chrono;
    sys_days day{year{2024} / January / 2};
    double log_latent = std::log(spec.initial_price);
    std::size_t t = 0;
    for (std::size_t d = 0; d < n_days; ++d) {
        while (!session.trading_days[weekday{day}.c_encoding()]) day += days{1};
        for (int m = 0; m < minutes_per_day; ++m, ++t) {
            if (t > 0) {
                double r = latent[t];
                // The first observation of a day carries the unobserved overnight move.
                if (m > 0 && !spec.intraday_profile.empty()) r *= spec.intraday_profile[static_cast<std::size_t>(m - 1)];
                r *= day_scale[d];
                log_latent += r;
            }
            double log_price = log_latent;
            if (spec.pricing_error_sd > 0.0) log_price += pricing_error(rng);
            double price = std::exp(log_price);
            if (spec.tick) {
                price = std::max(std::round(price / *spec.tick), 1.0) * *spec.tick;
            }
            out.observations.push_back({day + minutes{session.open_minute + m}, price});
        }
        day += days{1};
    }
    return out;
}

}  // namespace hfentropy::ingest
