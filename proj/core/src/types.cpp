#include "hfentropy/types.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <type_traits>

#include "hfentropy/error.hpp"
#include "hfentropy/lag_polynomial.hpp"

namespace hfentropy {

namespace {

int parse_field(std::string_view text, std::size_t pos, std::size_t len) {
    if (pos + len > text.size()) {
        throw InputError("timestamp too short: '" + std::string(text) + "'");
    }
    int value = 0;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len) {
        throw InputError("malformed timestamp: '" + std::string(text) + "'");
    }
    return value;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    // YYYY-MM-DDTHH:MM[:SS]
    if (text.size() < 16 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
        text[13] != ':') {
        throw InputError("malformed timestamp: '" + std::string(text) + "'");
    }
    const int y = parse_field(text, 0, 4);
    const int mo = parse_field(text, 5, 2);
    const int d = parse_field(text, 8, 2);
    const int h = parse_field(text, 11, 2);
    const int mi = parse_field(text, 14, 2);
    if (text.size() > 16) {
        if (text.size() != 19 || text[16] != ':' || parse_field(text, 17, 2) != 0) {
            throw InputError("timestamp must have minute resolution: '" + std::string(text) + "'");
        }
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59) {
        throw InputError("invalid calendar timestamp: '" + std::string(text) + "'");
    }
    return sys_days{ymd} + hours{h} + minutes{mi};
}

std::string format_timestamp(Timestamp ts) {
    using namespace std::chrono;
    const year_month_day ymd{floor<days>(ts)};
    const int mod = minute_of_day(ts);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), mod / 60, mod % 60);
    return buf;
}

std::chrono::sys_days day_of(Timestamp ts) { return std::chrono::floor<std::chrono::days>(ts); }

int minute_of_day(Timestamp ts) { return static_cast<int>((ts - day_of(ts)).count()); }

bool SessionSpec::contains(Timestamp ts) const {
    const std::chrono::weekday wd{day_of(ts)};
    if (!trading_days[wd.c_encoding()]) {
        return false;
    }
    const int m = minute_of_day(ts);
    return m >= open_minute && m <= close_minute;
}

void PriceSeries::validate() const {
    for (std::size_t i = 0; i < observations.size(); ++i) {
        const auto& o = observations[i];
        if (!(o.price > 0.0) || !std::isfinite(o.price)) {
            throw ValidationError(asset_id + ": non-positive price at " + format_timestamp(o.time));
        }
        if (i > 0 && !(observations[i - 1].time < o.time)) {
            throw ValidationError(asset_id + ": timestamps not strictly increasing at " +
                                  format_timestamp(o.time));
        }
        if (!session.contains(o.time)) {
            throw ValidationError(asset_id + ": observation outside session at " + format_timestamp(o.time));
        }
    }
}

std::string_view to_string(Stage stage) {
    switch (stage) {
        case Stage::Raw: return "raw";
        case Stage::Deseasonalized: return "deseasonalized";
        case Stage::Standardized: return "standardized";
        case Stage::Residual: return "residual";
    }
    return "unknown";
}

std::string describe(const ProcessSpec& process) {
    return std::visit(
        [](const auto& p) -> std::string {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, WhiteNoise>) {
                return "WN";
            } else if constexpr (std::is_same_v<T, Ar1>) {
                return "AR1(" + format_double(p.phi) + ")";
            } else if constexpr (std::is_same_v<T, Ma1>) {
                return "MA1(" + format_double(p.theta) + ")";
            } else {
                std::string s = "ARMA(";
                for (std::size_t i = 0; i < p.ar.size(); ++i) s += (i ? "," : "") + format_double(p.ar[i]);
                s += ";";
                for (std::size_t i = 0; i < p.ma.size(); ++i) s += (i ? "," : "") + format_double(p.ma[i]);
                return s + ")";
            }
        },
        process);
}

ProcessSpec to_spec(const ProcessKind& process) {
    return std::visit([](const auto& p) -> ProcessSpec { return p; }, process);
}

std::string describe(const ProcessKind& process) { return describe(to_spec(process)); }

void validate_process(const ProcessSpec& process) {
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Ar1>) {
                if (!(std::abs(p.phi) < 1.0)) throw SpecError("AR(1) requires |phi| < 1");
            } else if constexpr (std::is_same_v<T, Ma1>) {
                if (!(std::abs(p.theta) < 1.0)) throw SpecError("MA(1) requires |theta| < 1");
            } else if constexpr (std::is_same_v<T, ArmaProcess>) {
                if (!is_stationary(p.ar)) throw SpecError("ARMA AR polynomial is not stationary");
                if (!is_invertible(p.ma)) throw SpecError("ARMA MA polynomial is not invertible");
            }
        },
        process);
}

}  // namespace hfentropy
