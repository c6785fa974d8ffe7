#pragma once

#include "uq/types.hpp"

#include <optional>

namespace uq {

/// Result of an ordinary least-squares solve.
struct LsqSolution {
  Vector coefficients;
  double residual_norm = 0.0;
  Index effective_rank = 0;
  std::optional<Vector> hat_diagonal;  // leverage values, when requested
};

/// Minimize ||A c - y||_2 by SVD. Rank-deficient systems (relative
/// singular-value threshold 1e-12) get the minimum-norm solution. Leverages
/// h_i = row_i(A) (A^T A)^+ row_i(A)^T are returned on request.
LsqSolution solve_ols(const Matrix& a, const Vector& y, bool want_leverage = false);

/// Relative singular-value cutoff used by solve_ols.
constexpr double kRankThreshold = 1e-12;

}  // namespace uq
