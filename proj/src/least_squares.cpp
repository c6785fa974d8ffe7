#include "uq/least_squares.hpp"

#include <Eigen/SVD>

#include <stdexcept>

namespace uq {

LsqSolution solve_ols(const Matrix& a, const Vector& y, bool want_leverage) {
  if (a.rows() < 1 || a.cols() < 1) throw std::invalid_argument("solve_ols: empty system");
  if (a.rows() != y.size()) throw std::invalid_argument("solve_ols: row count mismatch");
  if (!a.allFinite() || !y.allFinite()) throw std::invalid_argument("solve_ols: non-finite entries");

  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? kRankThreshold * sv[0] : 0.0;

  Index rank = 0;
  for (Index j = 0; j < sv.size(); ++j)
    if (sv[j] > cutoff) ++rank;

  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();

  Vector uty = u.transpose() * y;
  Vector scaled = Vector::Zero(sv.size());
  for (Index j = 0; j < rank; ++j) scaled[j] = uty[j] / sv[j];

  LsqSolution sol;
  sol.coefficients = v * scaled;
  sol.residual_norm = (y - a * sol.coefficients).norm();
  sol.effective_rank = rank;
  if (want_leverage) {
    // hat matrix is U_r U_r^T in the retained singular subspace
    Vector h(a.rows());
    for (Index i = 0; i < a.rows(); ++i) h[i] = u.row(i).head(rank).squaredNorm();
    sol.hat_diagonal = std::move(h);
  }
  return sol;
}

}  // namespace uq
