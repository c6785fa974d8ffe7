#pragma once

#include "uq/types.hpp"

namespace uq {

/// Maximum Sobol dimension covered by the embedded direction numbers.
constexpr Index kSobolMaxDimension = 65;

/// First n points of the m-dimensional Sobol sequence in (0,1)^m, Gray-code
/// order, with the all-zeros initial point skipped. Direction numbers are the
/// Joe-Kuo D6 initializers; no scrambling.
Matrix sobol_design(Index m, Index n);

}  // namespace uq
