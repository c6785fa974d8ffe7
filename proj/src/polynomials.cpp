#include "uq/polynomials.hpp"

#include <Eigen/Eigenvalues>

namespace uq {

Matrix basis_matrix(PolyFamily family, int degree, const Vector& points) {
  if (degree < 0) throw std::invalid_argument("basis_matrix: negative degree");
  if (degree > kMaxPolyDegree) throw std::invalid_argument("basis_matrix: degree above supported maximum");
  const Index n = points.size();
  Matrix psi(n, degree + 1);
  psi.col(0).setOnes();
  if (degree >= 1) psi.col(1) = points / recurrence_offdiag<double>(family, 1);
  for (int k = 2; k <= degree; ++k) {
    const double ak = recurrence_offdiag<double>(family, k);
    const double akm1 = recurrence_offdiag<double>(family, k - 1);
    psi.col(k) = (points.cwiseProduct(psi.col(k - 1)) - akm1 * psi.col(k - 2)) / ak;
  }
  return psi;
}

double eval_multivariate(const std::vector<PolyFamily>& families, const MultiIndexVec& alpha,
                         const Vector& x) {
  if (families.size() != alpha.size() || static_cast<Index>(alpha.size()) != x.size())
    throw std::invalid_argument("eval_multivariate: dimension mismatch");
  double prod = 1.0;
  for (Index i = 0; i < x.size(); ++i)
    prod *= eval_univariate<double>(families[static_cast<std::size_t>(i)],
                                    alpha[static_cast<std::size_t>(i)], x[i]);
  return prod;
}

Matrix design_matrix(const std::vector<PolyFamily>& families,
                     const std::vector<MultiIndexVec>& indices, const Matrix& points) {
  const Index n = points.rows();
  const Index m = points.cols();
  if (static_cast<Index>(families.size()) != m)
    throw std::invalid_argument("design_matrix: family count does not match point dimension");
  for (const auto& alpha : indices)
    if (static_cast<Index>(alpha.size()) != m)
      throw std::invalid_argument("design_matrix: multi-index dimension mismatch");

  // Per-dimension basis tables up to the largest degree used in it.
  std::vector<Matrix> tables(static_cast<std::size_t>(m));
  for (Index d = 0; d < m; ++d) {
    int maxdeg = 0;
    for (const auto& alpha : indices) maxdeg = std::max(maxdeg, alpha[static_cast<std::size_t>(d)]);
    tables[static_cast<std::size_t>(d)] =
        basis_matrix(families[static_cast<std::size_t>(d)], maxdeg, points.col(d));
  }

  Matrix a = Matrix::Ones(n, static_cast<Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j)
    for (Index d = 0; d < m; ++d)
      a.col(static_cast<Index>(j)).array() *=
          tables[static_cast<std::size_t>(d)].col(indices[j][static_cast<std::size_t>(d)]).array();
  return a;
}

namespace {

// value and derivative of the degree-n orthonormal polynomial, shared
// three-term recurrence pass
void eval_with_derivative(PolyFamily family, int degree, double x, double& value,
                          double& derivative) {
  double pkm1 = 0.0, pk = 1.0, dkm1 = 0.0, dk = 0.0;
  for (int k = 1; k <= degree; ++k) {
    const double ak = recurrence_offdiag<double>(family, k);
    const double akm1 = recurrence_offdiag<double>(family, k - 1);
    const double pkp1 = (x * pk - akm1 * pkm1) / ak;
    const double dkp1 = (pk + x * dk - akm1 * dkm1) / ak;
    pkm1 = pk;
    pk = pkp1;
    dkm1 = dk;
    dk = dkp1;
  }
  value = pk;
  derivative = dk;
}

}  // namespace

GaussRule gauss_rule(PolyFamily family, int n) {
  if (n < 1) throw std::invalid_argument("gauss_rule: need at least one node");
  Matrix jacobi = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double a = recurrence_offdiag<double>(family, k);
    jacobi(k, k - 1) = a;
    jacobi(k - 1, k) = a;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi);
  if (eig.info() != Eigen::Success) throw std::runtime_error("gauss_rule: eigensolver failed");
  GaussRule rule;
  rule.nodes = eig.eigenvalues();
  rule.weights.resize(n);
  for (int q = 0; q < n; ++q) {
    // polish the eigenvalue node on p_n(x) = 0, then take the Christoffel
    // weight 1 / sum_k p_k(x)^2; this restores full precision in the tails
    double x = rule.nodes[q];
    for (int it = 0; it < 3; ++it) {
      double v, d;
      eval_with_derivative(family, n, x, v, d);
      if (d == 0.0) break;
      const double dx = v / d;
      x -= dx;
      if (std::abs(dx) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    rule.nodes[q] = x;
    double pkm1 = 0.0, pk = 1.0, norm2 = 1.0;
    for (int k = 1; k < n; ++k) {
      const double pkp1 = (x * pk - recurrence_offdiag<double>(family, k - 1) * pkm1) /
                          recurrence_offdiag<double>(family, k);
      pkm1 = pk;
      pk = pkp1;
      norm2 += pk * pk;
    }
    rule.weights[q] = 1.0 / norm2;
  }
  return rule;
}

}  // namespace uq
