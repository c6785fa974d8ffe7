#pragma once

#include "uq/types.hpp"

#include <optional>
#include <string>

namespace uq {

enum class MarginalKind { Lognormal, Gumbel, TruncatedGaussian, Uniform, Gaussian };

/// Optional record of the (mean, CoV or std) spec a marginal was derived from.
struct MomentSpec {
  double mean = 0.0;
  double cov = 0.0;
  double stddev = 0.0;
};

/// One-dimensional marginal distribution with distribution-native parameters.
///
/// Native parameterizations:
///   Lognormal          a = lambda (log-scale mean), b = zeta  (log-scale std)
///   Gumbel             a = location,                b = scale
///   TruncatedGaussian  a = mean, b = std of the *underlying* Gaussian; support [0, inf)
///   Uniform            a = lower, b = upper
///   Gaussian           a = mean, b = std
class Marginal {
 public:
  static Marginal lognormal(double lambda, double zeta);
  static Marginal lognormal_moments(double mean, double cov);
  static Marginal gumbel(double location, double scale);
  static Marginal gumbel_moments(double mean, double cov);
  /// Gaussian truncated to [0, inf); mean/std refer to the underlying
  /// untruncated Gaussian (the truncated mass is negligible for the
  /// mean >> std cases this library targets).
  static Marginal truncated_gaussian(double mean, double stddev);
  static Marginal uniform(double lower, double upper);
  static Marginal gaussian(double mean, double stddev);

  MarginalKind kind() const { return kind_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }
  const std::optional<MomentSpec>& moments() const { return moments_; }

  double cdf(double x) const;
  /// Upper-tail probability 1 - CDF(x), computed without cancellation.
  double cdf_complement(double x) const;
  double quantile(double p) const;
  /// Quantile from both tail representations (q = 1-p); keeps full relative
  /// precision deep in the upper tail where p alone rounds to 1.
  double quantile_pq(double p, double q) const;
  double pdf(double x) const;

  double support_lower() const;
  double support_upper() const;
  bool in_support(double x) const;

  /// Mean implied by the native parameters.
  double mean() const;
  /// Standard deviation implied by the native parameters.
  double stddev() const;

  std::string kind_name() const;

 private:
  Marginal(MarginalKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  MarginalKind kind_;
  double a_ = 0.0;
  double b_ = 1.0;
  std::optional<MomentSpec> moments_;
};

}  // namespace uq
