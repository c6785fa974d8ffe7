#pragma once

#include <cmath>

namespace uq {

/// Standard normal PDF.
inline double norm_pdf(double x) {
  static const double inv_sqrt_2pi = 0.39894228040143267793994605993438;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

/// Standard normal CDF via the complementary error function.
inline double norm_cdf(double x) {
  static const double inv_sqrt2 = 0.70710678118654752440084436210485;
  return 0.5 * std::erfc(-x * inv_sqrt2);
}

/// Standard normal quantile (inverse CDF), Wichura's AS241 rational
/// approximation (PPND16). Relative accuracy around 1e-16 away from the
/// endpoints. Returns +/-inf at p = 1/0.
double norm_ppf(double p);

/// Largest magnitude allowed for standard-normal arguments inside
/// isoprobabilistic transforms; beyond it marginal quantiles saturate.
constexpr double kNormalClip = 8.2;

}  // namespace uq
