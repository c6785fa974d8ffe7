#pragma once

#include "uq/types.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace uq {

/// Univariate orthonormal polynomial families. HermiteProbabilist is
/// orthonormal under the standard normal density, Legendre under the uniform
/// density 1/2 on [-1,1].
enum class PolyFamily { HermiteProbabilist, Legendre };

/// Maximum supported univariate degree.
constexpr int kMaxPolyDegree = 30;

/// Off-diagonal recurrence coefficient a_k of the orthonormal three-term
/// recurrence x p_{k-1} = a_k p_k + a_{k-1} p_{k-2} (both families have zero
/// diagonal by symmetry).
template <typename Scalar>
Scalar recurrence_offdiag(PolyFamily family, int k) {
  if (k == 0) return Scalar(0);
  if (family == PolyFamily::HermiteProbabilist) return std::sqrt(static_cast<Scalar>(k));
  const Scalar kk = static_cast<Scalar>(k);
  return kk / std::sqrt(Scalar(4) * kk * kk - Scalar(1));
}

/// Value of the orthonormal polynomial of the given degree at x, by stable
/// three-term recurrence.
template <typename Scalar>
Scalar eval_univariate(PolyFamily family, int degree, Scalar x) {
  if (degree < 0) throw std::invalid_argument("eval_univariate: negative degree");
  if (degree > kMaxPolyDegree) throw std::invalid_argument("eval_univariate: degree above supported maximum");
  Scalar pkm1 = Scalar(0);
  Scalar pk = Scalar(1);
  for (int k = 1; k <= degree; ++k) {
    const Scalar pkp1 = (x * pk - recurrence_offdiag<Scalar>(family, k - 1) * pkm1) /
                        recurrence_offdiag<Scalar>(family, k);
    pkm1 = pk;
    pk = pkp1;
  }
  return pk;
}

/// n x (degree+1) matrix of all orthonormal polynomial values 0..degree at
/// the given points (one recurrence pass, shared by LRA and PCE assembly).
Matrix basis_matrix(PolyFamily family, int degree, const Vector& points);

using MultiIndexVec = std::vector<int>;

/// Product of univariate orthonormal evaluations (tensorized basis function).
double eval_multivariate(const std::vector<PolyFamily>& families, const MultiIndexVec& alpha,
                         const Vector& x);

/// Regression matrix: entry (i,j) is the basis function of indices[j]
/// evaluated at points.row(i).
Matrix design_matrix(const std::vector<PolyFamily>& families,
                     const std::vector<MultiIndexVec>& indices, const Matrix& points);

/// Gauss quadrature rule (nodes, weights) for the family's weight function,
/// computed from the Jacobi matrix. Weights sum to one.
struct GaussRule {
  Vector nodes;
  Vector weights;
};
GaussRule gauss_rule(PolyFamily family, int n);

}  // namespace uq
