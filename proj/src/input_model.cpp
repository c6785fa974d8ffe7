#include "uq/input_model.hpp"

#include "uq/rng.hpp"
#include "uq/stdnormal.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uq {

namespace {

void check_correlation(const Matrix& c) {
  const Index m = c.rows();
  if (c.cols() != m) throw std::invalid_argument("correlation matrix must be square");
  for (Index i = 0; i < m; ++i) {
    if (std::abs(c(i, i) - 1.0) > 1e-12)
      throw std::invalid_argument("correlation matrix must have unit diagonal");
    for (Index j = 0; j < i; ++j)
      if (std::abs(c(i, j) - c(j, i)) > 1e-12)
        throw std::invalid_argument("correlation matrix must be symmetric");
  }
}

}  // namespace

InputModel::InputModel(std::vector<Marginal> marginals)
    : InputModel(std::move(marginals), Matrix()) {}

InputModel::InputModel(std::vector<Marginal> marginals, Matrix correlation)
    : marginals_(std::move(marginals)) {
  if (marginals_.empty()) throw std::invalid_argument("input model needs at least one marginal");
  const Index m = dimension();
  if (correlation.size() == 0) correlation = Matrix::Identity(m, m);
  if (correlation.rows() != m)
    throw std::invalid_argument("correlation dimension does not match marginals");
  check_correlation(correlation);
  correlation_ = std::move(correlation);
  independent_ = correlation_.isIdentity(0.0);
  Eigen::LLT<Matrix> llt(correlation_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("correlation matrix is not positive definite");
  chol_lower_ = llt.matrixL();
}

Vector InputModel::to_physical(const Vector& u, TransformFlags* flags) const {
  const Index m = dimension();
  if (u.size() != m) throw std::invalid_argument("to_physical: dimension mismatch");
  if (!u.allFinite()) throw std::invalid_argument("to_physical: non-finite input");
  Vector z = independent_ ? u : Vector(chol_lower_ * u);
  Vector x(m);
  for (Index i = 0; i < m; ++i) {
    double zi = z[i];
    if (std::abs(zi) > kNormalClip) {
      zi = std::clamp(zi, -kNormalClip, kNormalClip);
      if (flags) flags->clipped = true;
    }
    x[i] = marginal(i).quantile_pq(norm_cdf(zi), norm_cdf(-zi));
  }
  return x;
}

Vector InputModel::to_standard(const Vector& x, TransformFlags* flags) const {
  const Index m = dimension();
  if (x.size() != m) throw std::invalid_argument("to_standard: dimension mismatch");
  Vector z(m);
  for (Index i = 0; i < m; ++i) {
    const Marginal& mi = marginal(i);
    if (!mi.in_support(x[i]))
      throw std::domain_error("to_standard: coordinate " + std::to_string(i + 1) +
                              " outside support of " + mi.kind_name() + " marginal");
    const double p = mi.cdf(x[i]);
    const double s = mi.cdf_complement(x[i]);
    double zi = s < p ? -norm_ppf(s) : norm_ppf(p);
    if (!std::isfinite(zi) || std::abs(zi) > kNormalClip) {
      if (!flags)
        throw std::domain_error("to_standard: coordinate " + std::to_string(i + 1) +
                                " at the boundary of the " + mi.kind_name() + " support");
      flags->clipped = true;
      zi = std::clamp(zi, -kNormalClip, kNormalClip);
    }
    z[i] = zi;
  }
  if (independent_) return z;
  return chol_lower_.triangularView<Eigen::Lower>().solve(z);
}

Matrix InputModel::to_physical_rows(const Matrix& u, TransformFlags* flags) const {
  Matrix x(u.rows(), u.cols());
  for (Index r = 0; r < u.rows(); ++r) x.row(r) = to_physical(u.row(r), flags).transpose();
  return x;
}

Matrix InputModel::to_standard_rows(const Matrix& x, TransformFlags* flags) const {
  Matrix u(x.rows(), x.cols());
  for (Index r = 0; r < x.rows(); ++r) u.row(r) = to_standard(x.row(r), flags).transpose();
  return u;
}

Matrix mcs_sample(const InputModel& model, Index n, std::uint64_t seed, std::uint64_t row0) {
  if (n < 1) throw std::invalid_argument("mcs_sample: n must be >= 1");
  Matrix u = normal_matrix(seed, n, model.dimension(), row0);
  return model.to_physical_rows(u);
}

}  // namespace uq
