#pragma once

#include "uq/types.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace uq {

/// Mean-square error report; `relative` normalizes by the empirical variance
/// (1/(n-1) convention) of the reference response set.
struct ErrorReport {
  double absolute = 0.0;
  double relative = 0.0;
  bool relative_defined = true;
  Index n_points = 0;
  double mean_signed_residual = 0.0;  // bias diagnostic on the evaluated set
  std::string condition;              // threshold descriptor, when conditional
};

/// Discrete L2 semi-norm of the difference: sqrt(mean((a_i - b_i)^2)).
double semi_norm(const Vector& a, const Vector& b);

/// Empirical variance with the 1/(n-1) estimator.
double empirical_variance(const Vector& y);

/// Squared semi-norm of (reference - prediction), absolute and relative.
ErrorReport generalization_error(const Vector& reference, const Vector& prediction);

/// Same restricted to points whose *reference* response is >= threshold.
/// Throws std::domain_error when no point exceeds the threshold.
ErrorReport conditional_generalization_error(const Vector& reference, const Vector& prediction,
                                             double threshold);

/// A trainer maps a training subset (points, responses) to one predictor per
/// candidate; predictors evaluate row-wise on a point matrix.
using Predictor = std::function<Vector(const Matrix&)>;
using Trainer = std::function<std::vector<Predictor>(const Matrix&, const Vector&)>;

struct CvScores {
  std::vector<double> mean_relative_error;  // per candidate
  std::vector<bool> failed;                 // candidate failed on some fold
  bool variance_fallback = false;           // some fold had zero response variance
};

/// k-fold cross validation with a deterministic seeded partition (shuffle,
/// then contiguous folds of near-equal size).
CvScores kfold_cv(const Trainer& trainer, const Matrix& points, const Vector& responses, int k,
                  std::uint64_t seed);

/// The seeded fold assignment used by kfold_cv: element i gives the fold of
/// point i.
std::vector<int> kfold_assignment(Index n, int k, std::uint64_t seed);

/// Gaussian kernel density estimate on the evaluation grid, Silverman
/// bandwidth h = 0.9 min(std, IQR/1.34) n^{-1/5}.
Vector kde(const Vector& samples, const Vector& grid);

/// Silverman bandwidth of a sample (throws on zero spread).
double kde_bandwidth(const Vector& samples);

/// Evaluation grid spanning the sample range widened by 5 bandwidths.
Vector kde_grid(const Vector& samples, Index points);

}  // namespace uq
