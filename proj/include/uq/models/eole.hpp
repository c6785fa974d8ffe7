#pragma once

#include "uq/types.hpp"

namespace uq {

/// Discretized standard Gaussian random field: eigenpairs of the grid
/// correlation matrix under the squared-exponential kernel
/// rho(z,z') = exp(-||z-z'||^2 / l^2), plus the lognormal map
/// kappa(z) = exp(a + b ghat(z)).
struct EoleField {
  Matrix grid;          // n x d grid points
  double corr_length = 0.0;
  Vector eigenvalues;   // all n, sorted descending, clipped at zero
  Matrix eigenvectors;  // columns aligned with eigenvalues
  Index modes = 0;      // retained count M
  double variance_fraction = 0.0;  // threshold used for mode selection
  double a_kappa = 0.0;
  double b_kappa = 0.0;
};

/// Eigendecompose the grid correlation matrix and retain the smallest M with
/// sum_{i<=M} l_i / sum_i l_i >= variance_fraction. The lognormal map
/// parameters match the requested mean/std of kappa.
EoleField eole_build(const Matrix& grid, double corr_length, double variance_fraction = 0.99,
                     double mean_kappa = 1.0, double std_kappa = 0.3);

/// Gaussian reconstruction ghat at the given locations for one standard
/// normal vector xi of length field.modes.
Vector eole_gaussian(const EoleField& field, const Vector& xi, const Matrix& locations);

/// Lognormal field kappa = exp(a + b ghat) at the locations.
Vector eole_kappa(const EoleField& field, const Vector& xi, const Matrix& locations);

/// Reconstruction variance of ghat at the locations (at most 1; EOLE
/// underestimates the target unit variance).
Vector eole_variance(const EoleField& field, const Matrix& locations);

/// Regular nx x ny grid with the given spacing, centered at the origin.
Matrix centered_grid(Index nx, Index ny, double spacing);

}  // namespace uq
