#pragma once

#include "uq/distributions.hpp"
#include "uq/types.hpp"

#include <vector>

namespace uq {

/// Diagnostics from an isoprobabilistic transform.
struct TransformFlags {
  bool clipped = false;  // a standard-normal argument hit the +/-8.2 clip
};

/// Joint input model: marginals plus a Gaussian copula given by a correlation
/// matrix in standard-normal space (identity for independent inputs).
class InputModel {
 public:
  explicit InputModel(std::vector<Marginal> marginals);
  InputModel(std::vector<Marginal> marginals, Matrix correlation);

  Index dimension() const { return static_cast<Index>(marginals_.size()); }
  const std::vector<Marginal>& marginals() const { return marginals_; }
  const Marginal& marginal(Index i) const { return marginals_[static_cast<std::size_t>(i)]; }
  const Matrix& correlation() const { return correlation_; }
  bool independent() const { return independent_; }
  const Matrix& cholesky_factor() const { return chol_lower_; }

  /// Map an independent standard-normal vector to physical space:
  /// z = L u, x_i = F_i^{-1}(Phi(z_i)). Arguments beyond +/-8.2 saturate
  /// (flagged when a sink is supplied).
  Vector to_physical(const Vector& u, TransformFlags* flags = nullptr) const;

  /// Inverse transform; throws std::domain_error naming the coordinate when
  /// x_i lies outside the marginal support. Boundary points (CDF exactly 0
  /// or 1) clip when a flag sink is given, else throw.
  Vector to_standard(const Vector& x, TransformFlags* flags = nullptr) const;

  /// Row-wise transforms for sample matrices.
  Matrix to_physical_rows(const Matrix& u, TransformFlags* flags = nullptr) const;
  Matrix to_standard_rows(const Matrix& x, TransformFlags* flags = nullptr) const;

 private:
  std::vector<Marginal> marginals_;
  Matrix correlation_;
  Matrix chol_lower_;
  bool independent_ = true;
};

/// n x M matrix of i.i.d. draws in physical space; deterministic in seed and
/// safe to generate in partitioned chunks (row index keys the stream).
Matrix mcs_sample(const InputModel& model, Index n, std::uint64_t seed, std::uint64_t row0 = 0);

}  // namespace uq
