#pragma once

#include <span>

namespace hfentropy {

/// True when 1 - a_1 z - ... - a_p z^p has every root strictly outside the unit
/// circle. Uses the Levinson step-down recursion: all reflection coefficients
/// must have modulus below one.
bool is_stationary(std::span<const double> ar);

/// True when 1 + b_1 z + ... + b_q z^q has every root strictly outside the unit circle.
bool is_invertible(std::span<const double> ma);

}  // namespace hfentropy
