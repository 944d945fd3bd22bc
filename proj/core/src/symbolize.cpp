#include "hfentropy/symbolize.hpp"

#include <algorithm>
#include <cmath>

#include "hfentropy/error.hpp"

namespace hfentropy::symbolic {

SymbolSeries binarize_nonzero(std::span<const double> values) {
    SymbolSeries out;
    out.alphabet_size = 2;
    out.symbols.reserve(values.size());
    for (double v : values) {
        if (v < 0.0) {
            out.symbols.push_back(0);
        } else if (v > 0.0) {
            out.symbols.push_back(1);
        } else {
            ++out.dropped_zero_count;
        }
    }
    if (out.symbols.empty() && !values.empty()) {
        out.warnings.push_back("all values are zero; binary symbol series is empty");
    }
    return out;
}

SymbolSeries binarize_nonzero(const ReturnSeries& returns) {
    SymbolSeries out = binarize_nonzero(std::span<const double>(returns.values));
    out.source_stage = returns.stage;
    return out;
}

double interpolated_quantile(std::span<const double> sorted, double prob) {
    if (sorted.empty()) throw InputError("quantile of an empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw InputError("quantile probability must be in [0, 1]");
    const double h = prob * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

SymbolSeries ternarize_tertiles(std::span<const double> values) {
    if (values.size() < 3) throw InputError("tertile symbolization needs at least three values");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    SymbolSeries out;
    out.alphabet_size = 3;
    out.lower_threshold = interpolated_quantile(sorted, 1.0 / 3.0);
    out.upper_threshold = interpolated_quantile(sorted, 2.0 / 3.0);
    out.degenerate = out.lower_threshold == out.upper_threshold;
    if (out.degenerate) {
        out.warnings.push_back("tertile thresholds coincide; ternary symbolization is degenerate");
    }
    out.symbols.reserve(values.size());
    for (double v : values) {
        if (v < out.lower_threshold) {
            out.symbols.push_back(0);
        } else if (v > out.upper_threshold) {
            out.symbols.push_back(2);
        } else {
            out.symbols.push_back(1);
        }
    }
    return out;
}

SymbolSeries ternarize_tertiles(const ReturnSeries& returns) {
    SymbolSeries out = ternarize_tertiles(std::span<const double>(returns.values));
    out.source_stage = returns.stage;
    return out;
}

std::vector<std::size_t> symbol_counts(const SymbolSeries& series) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(series.alphabet_size), 0);
    for (auto s : series.symbols) {
        if (s >= counts.size()) throw ValidationError("symbol exceeds the alphabet");
        ++counts[s];
    }
    return counts;
}

std::string to_digit_string(const SymbolSeries& series) {
    std::string out;
    out.reserve(series.size());
    for (auto s : series.symbols) out.push_back(static_cast<char>('0' + s));
    return out;
}

}  // namespace hfentropy::symbolic
