#pragma once

#include "uq/input_model.hpp"
#include "uq/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace uq {

/// Limit state g(x) in physical space; failure is g <= 0.
struct LimitState {
  std::function<double(const Vector&)> g;
  const InputModel* input = nullptr;
  std::string description;
};

struct ReliabilityResult {
  double pf = 0.0;
  double cov = 0.0;        // 1/sqrt(n pf) approximation
  double cov_exact = 0.0;  // binomial form, reported for MCS
  double beta = 0.0;       // -Phi^{-1}(pf); +inf sentinel when pf = 0
  long long n_evals = 0;
  std::string method;
  std::optional<Vector> design_point;  // standard space, when applicable
  bool zero_failures = false;
  bool cov_target_missed = false;  // IS hit max batches before the target
};

/// Generalized reliability index -Phi^{-1}(pf) (+inf at pf = 0).
double reliability_index(double pf);
/// Inverse of reliability_index.
double failure_probability(double beta);

/// Crude Monte Carlo failure probability with streamed, seed-deterministic
/// batches; safe to parallelize internally.
ReliabilityResult mcs_pf(const LimitState& ls, long long n, std::uint64_t seed,
                         unsigned threads = 0);

struct FormResult {
  ReliabilityResult result;
  Vector u_star;
  Vector gradient;  // of g at the design point, u-space
  double g_at_origin = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// HL-RF design-point search in standard space with central finite
/// differences. Throws on non-convergence (message carries the last iterate)
/// and on vanishing gradients.
FormResult form(const LimitState& ls, const Vector& start, double tol = 1e-6, int max_iter = 100);

/// Breitung curvature correction of a converged FORM result; curvatures come
/// from the finite-difference Hessian projected on the tangent plane.
ReliabilityResult sorm(const LimitState& ls, const FormResult& form_result);

struct ImportanceSamplingConfig {
  Index batch = 100;
  double target_cov = 0.10;
  Index max_batches = 10000;
  std::uint64_t seed = 0;
};

/// Standard-normal importance sampling centered at the design point.
ReliabilityResult importance_sampling(const LimitState& ls, const Vector& u_star,
                                      const ImportanceSamplingConfig& config);

/// Batch response evaluator in standard space, for surrogate-driven curves.
using StandardResponse = std::function<Vector(const Matrix&)>;

struct PfCurvePoint {
  double threshold = 0.0;
  ReliabilityResult result;
  bool failed = false;
  std::string error;
};

/// Exceedance curve P(resp >= threshold) over sorted thresholds with one
/// shared Monte Carlo sample (a single pass over n standard-normal rows).
std::vector<PfCurvePoint> mcs_exceedance_curve(const StandardResponse& response, Index dimension,
                                               const std::vector<double>& thresholds, long long n,
                                               std::uint64_t seed, unsigned threads = 0);

/// Exceedance curve from an analytical pf(threshold) function.
std::vector<PfCurvePoint> analytical_curve(const std::function<double(double)>& pf_of_threshold,
                                           const std::vector<double>& thresholds);

/// Exceedance curve P(resp >= threshold) via FORM + importance sampling per
/// threshold, warm starting each search at the previous design point.
/// Per-threshold failures are recorded without aborting the curve.
std::vector<PfCurvePoint> is_curve(const std::function<double(const Vector&)>& response,
                                   const InputModel& input, const std::vector<double>& thresholds,
                                   const ImportanceSamplingConfig& config);

}  // namespace uq
