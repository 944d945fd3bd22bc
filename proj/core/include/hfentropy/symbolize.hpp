#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hfentropy/types.hpp"

namespace hfentropy::symbolic {

/// Sign symbols of the non-zero values: r < 0 -> 0, r > 0 -> 1. Zeros are
/// dropped and counted. An all-zero input yields an empty series with a warning.
SymbolSeries binarize_nonzero(std::span<const double> values);
SymbolSeries binarize_nonzero(const ReturnSeries& returns);

/// Empirical quantile by linear interpolation of order statistics (type 7).
/// `sorted` must be ascending and non-empty.
double interpolated_quantile(std::span<const double> sorted, double prob);

/// Three symbols split at the empirical 1/3 and 2/3 quantiles:
/// r < t1 -> 0, t1 <= r <= t2 -> 1, r > t2 -> 2.
/// Coinciding thresholds (a zero mass of at least one third) set `degenerate`.
/// Requires at least three values.
SymbolSeries ternarize_tertiles(std::span<const double> values);
SymbolSeries ternarize_tertiles(const ReturnSeries& returns);

std::vector<std::size_t> symbol_counts(const SymbolSeries& series);

/// "0110..." one character per symbol.
std::string to_digit_string(const SymbolSeries& series);

}  // namespace hfentropy::symbolic
