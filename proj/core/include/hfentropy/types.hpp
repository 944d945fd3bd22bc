#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hfentropy {

using Minutes = std::chrono::minutes;
using Timestamp = std::chrono::sys_time<Minutes>;

/// Parses "YYYY-MM-DDTHH:MM[:SS]" (a space may replace the 'T'). Seconds must be zero.
/// Throws InputError on malformed text.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

std::chrono::sys_days day_of(Timestamp ts);
/// Minutes elapsed since midnight.
int minute_of_day(Timestamp ts);

/// Regular trading session, identical for every trading day.
struct SessionSpec {
    int open_minute = 9 * 60 + 30;  // minutes after midnight
    int close_minute = 16 * 60;
    /// Indexed by std::chrono::weekday::c_encoding() (0 = Sunday).
    std::array<bool, 7> trading_days{false, true, true, true, true, true, false};

    int length_minutes() const { return close_minute - open_minute; }
    bool contains(Timestamp ts) const;
    /// Minutes between the session open of ts's day and ts.
    int offset_from_open(Timestamp ts) const { return minute_of_day(ts) - open_minute; }
};

struct Observation {
    Timestamp time;
    double price;
};

struct PriceSeries {
    std::string asset_id;
    SessionSpec session;
    /// Sampling interval of the grid the observations live on.
    int interval_minutes = 1;
    std::vector<Observation> observations;

    std::size_t size() const { return observations.size(); }
    bool empty() const { return observations.empty(); }

    /// Throws ValidationError if timestamps are not strictly increasing, a price is
    /// not positive, or a timestamp lies outside the session.
    void validate() const;
};

/// Whitening stage of a return series. Transitions only move forward.
enum class Stage { Raw = 0, Deseasonalized = 1, Standardized = 2, Residual = 3 };

std::string_view to_string(Stage stage);

/// Log-returns with the timestamp of the observation that closes each return.
struct ReturnSeries {
    std::string asset_id;
    Stage stage = Stage::Raw;
    SessionSpec session;
    int interval_minutes = 1;
    std::vector<Timestamp> times;
    std::vector<double> values;
    /// One entry per applied processing step, e.g. "deseasonalize(days=250)".
    std::vector<std::string> lineage;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

/// Finite-alphabet sequence produced by a symbolization.
struct SymbolSeries {
    int alphabet_size = 2;
    std::vector<std::uint8_t> symbols;
    /// Tertile thresholds, set for ternary series only.
    double lower_threshold = 0.0;
    double upper_threshold = 0.0;
    /// Binary symbolization drops exact zeros and counts them here.
    std::size_t dropped_zero_count = 0;
    /// Ternary symbolization with coinciding thresholds.
    bool degenerate = false;
    Stage source_stage = Stage::Raw;
    std::vector<std::string> warnings;

    std::size_t size() const { return symbols.size(); }
    bool empty() const { return symbols.empty(); }
};

// Process definitions shared by the synthetic generator, the closed-form
// benchmarks and the Monte Carlo bands. Moving-average terms enter with a plus
// sign: x_t = e_t + theta * e_{t-1}.

struct WhiteNoise {
    friend bool operator==(const WhiteNoise&, const WhiteNoise&) = default;
};

struct Ar1 {
    double phi = 0.0;
    friend bool operator==(const Ar1&, const Ar1&) = default;
};

struct Ma1 {
    double theta = 0.0;
    friend bool operator==(const Ma1&, const Ma1&) = default;
};

/// x_t = sum ar_i x_{t-i} + e_t + sum ma_j e_{t-j}
struct ArmaProcess {
    std::vector<double> ar;
    std::vector<double> ma;
    friend bool operator==(const ArmaProcess&, const ArmaProcess&) = default;
};

/// Processes with closed-form sign-symbol entropies.
using ProcessKind = std::variant<WhiteNoise, Ar1, Ma1>;
/// Processes the generator can simulate.
using ProcessSpec = std::variant<WhiteNoise, Ar1, Ma1, ArmaProcess>;

std::string describe(const ProcessKind& process);
std::string describe(const ProcessSpec& process);
ProcessSpec to_spec(const ProcessKind& process);

/// Throws SpecError unless the process is stationary and invertible.
void validate_process(const ProcessSpec& process);

}  // namespace hfentropy
