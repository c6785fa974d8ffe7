#include "uq/models/eole.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace uq {

namespace {

Matrix correlation_rows(const Matrix& a, const Matrix& b, double corr_length) {
  Matrix c(a.rows(), b.rows());
  const double inv_l2 = 1.0 / (corr_length * corr_length);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.rows(); ++j)
      c(i, j) = std::exp(-(a.row(i) - b.row(j)).squaredNorm() * inv_l2);
  return c;
}

}  // namespace

EoleField eole_build(const Matrix& grid, double corr_length, double variance_fraction,
                     double mean_kappa, double std_kappa) {
  if (grid.rows() < 1) throw std::invalid_argument("eole_build: empty grid");
  if (!(corr_length > 0.0)) throw std::invalid_argument("eole_build: correlation length must be > 0");
  if (!(variance_fraction > 0.0) || variance_fraction > 1.0)
    throw std::invalid_argument("eole_build: variance fraction must be in (0,1]");

  EoleField field;
  field.grid = grid;
  field.corr_length = corr_length;
  field.variance_fraction = variance_fraction;

  const Matrix c = correlation_rows(grid, grid, corr_length);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eole_build: eigensolver failed");

  const Index n = grid.rows();
  field.eigenvalues.resize(n);
  field.eigenvectors.resize(n, n);
  for (Index i = 0; i < n; ++i) {  // ascending -> descending, clip tiny negatives
    const Index src = n - 1 - i;
    field.eigenvalues[i] = std::max(0.0, eig.eigenvalues()[src]);
    field.eigenvectors.col(i) = eig.eigenvectors().col(src);
  }

  const double total = field.eigenvalues.sum();
  double acc = 0.0;
  field.modes = n;
  for (Index i = 0; i < n; ++i) {
    acc += field.eigenvalues[i];
    if (acc / total >= variance_fraction) {
      field.modes = i + 1;
      break;
    }
  }

  const double cv = std_kappa / mean_kappa;
  field.b_kappa = std::sqrt(std::log1p(cv * cv));
  field.a_kappa = std::log(mean_kappa) - 0.5 * field.b_kappa * field.b_kappa;
  return field;
}

Vector eole_gaussian(const EoleField& field, const Vector& xi, const Matrix& locations) {
  if (xi.size() != field.modes) throw std::invalid_argument("eole_gaussian: xi length must equal retained modes");
  if (locations.cols() != field.grid.cols())
    throw std::invalid_argument("eole_gaussian: location dimension mismatch");
  const Matrix c = correlation_rows(locations, field.grid, field.corr_length);
  Vector out = Vector::Zero(locations.rows());
  for (Index i = 0; i < field.modes; ++i) {
    if (!(field.eigenvalues[i] > 0.0)) break;
    const Vector basis = c * field.eigenvectors.col(i);  // phi_i^T C_zeta(z), all z
    out += (xi[i] / std::sqrt(field.eigenvalues[i])) * basis;
  }
  return out;
}

Vector eole_kappa(const EoleField& field, const Vector& xi, const Matrix& locations) {
  Vector g = eole_gaussian(field, xi, locations);
  return (field.a_kappa + field.b_kappa * g.array()).exp();
}

Vector eole_variance(const EoleField& field, const Matrix& locations) {
  const Matrix c = correlation_rows(locations, field.grid, field.corr_length);
  Vector out = Vector::Zero(locations.rows());
  for (Index i = 0; i < field.modes; ++i) {
    if (!(field.eigenvalues[i] > 0.0)) break;
    const Vector basis = c * field.eigenvectors.col(i);
    out += basis.array().square().matrix() / field.eigenvalues[i];
  }
  return out;
}

Matrix centered_grid(Index nx, Index ny, double spacing) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("centered_grid: need at least one point per axis");
  Matrix grid(nx * ny, 2);
  const double x0 = -0.5 * spacing * static_cast<double>(nx - 1);
  const double y0 = -0.5 * spacing * static_cast<double>(ny - 1);
  Index r = 0;
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) grid.row(r++) << x0 + spacing * static_cast<double>(i),
        y0 + spacing * static_cast<double>(j);
  return grid;
}

}  // namespace uq
