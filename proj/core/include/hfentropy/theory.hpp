#pragma once

#include <string_view>

#include "hfentropy/types.hpp"

namespace hfentropy::theory {

/// Closed-form entropies (bits) of the sign-symbolized process.
struct TheoreticalEntropies {
    double H1 = 1.0;
    double H2 = 2.0;
    double H3 = 3.0;
    double h2 = 1.0;
    double h3 = 1.0;
};

/// Lag-one correlation of the process: phi for AR(1), theta / (1 + theta^2) for MA(1).
double lag_one_correlation(const ProcessKind& process);

/// Probability of a sign string under the process measure. Supported forms:
/// a single symbol; a pair s1 .^gap s2 (the two symbols separated by `gap`
/// unobserved steps); a contiguous triple (gap must be 0). Other forms throw
/// NotImplementedError; invalid characters throw InputError.
double string_measure(const ProcessKind& process, std::string_view symbols, int gap = 0);

/// Throws SpecError if |phi| >= 1 or |theta| >= 1.
TheoreticalEntropies theoretical_entropies(const ProcessKind& process);

/// h_k for k in {2, 3}; throws UnsupportedOrderError otherwise.
double theoretical_conditional(const ProcessKind& process, int k);

}  // namespace hfentropy::theory
