#include "uq/distributions.hpp"

#include "uq/stdnormal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace uq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846264338327950288;
}  // namespace

Marginal Marginal::lognormal(double lambda, double zeta) {
  if (!(zeta > 0.0)) throw std::invalid_argument("lognormal: zeta must be > 0");
  return Marginal(MarginalKind::Lognormal, lambda, zeta);
}

Marginal Marginal::lognormal_moments(double mean, double cov) {
  if (!(mean > 0.0) || !(cov > 0.0))
    throw std::invalid_argument("lognormal: mean and CoV must be > 0");
  const double zeta2 = std::log1p(cov * cov);
  Marginal m(MarginalKind::Lognormal, std::log(mean) - 0.5 * zeta2, std::sqrt(zeta2));
  m.moments_ = MomentSpec{mean, cov, mean * cov};
  return m;
}

Marginal Marginal::gumbel(double location, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("gumbel: scale must be > 0");
  return Marginal(MarginalKind::Gumbel, location, scale);
}

Marginal Marginal::gumbel_moments(double mean, double cov) {
  const double sd = mean * cov;
  if (!(sd > 0.0)) throw std::invalid_argument("gumbel: mean*CoV must be > 0");
  const double scale = sd * std::sqrt(6.0) / kPi;
  Marginal m(MarginalKind::Gumbel, mean - kEulerGamma * scale, scale);
  m.moments_ = MomentSpec{mean, cov, sd};
  return m;
}

Marginal Marginal::truncated_gaussian(double mean, double stddev) {
  if (!(stddev > 0.0)) throw std::invalid_argument("truncated_gaussian: std must be > 0");
  Marginal m(MarginalKind::TruncatedGaussian, mean, stddev);
  m.moments_ = MomentSpec{mean, stddev / mean, stddev};
  return m;
}

Marginal Marginal::uniform(double lower, double upper) {
  if (!(upper > lower)) throw std::invalid_argument("uniform: upper must exceed lower");
  return Marginal(MarginalKind::Uniform, lower, upper);
}

Marginal Marginal::gaussian(double mean, double stddev) {
  if (!(stddev > 0.0)) throw std::invalid_argument("gaussian: std must be > 0");
  return Marginal(MarginalKind::Gaussian, mean, stddev);
}

double Marginal::cdf(double x) const {
  switch (kind_) {
    case MarginalKind::Lognormal:
      if (x <= 0.0) return 0.0;
      return norm_cdf((std::log(x) - a_) / b_);
    case MarginalKind::Gumbel:
      return std::exp(-std::exp(-(x - a_) / b_));
    case MarginalKind::TruncatedGaussian: {
      if (x <= 0.0) return 0.0;
      const double c0 = norm_cdf(-a_ / b_);  // untruncated mass below 0
      return (norm_cdf((x - a_) / b_) - c0) / (1.0 - c0);
    }
    case MarginalKind::Uniform:
      if (x <= a_) return 0.0;
      if (x >= b_) return 1.0;
      return (x - a_) / (b_ - a_);
    case MarginalKind::Gaussian:
      return norm_cdf((x - a_) / b_);
  }
  return 0.0;
}

double Marginal::quantile(double p) const {
  return quantile_pq(p, 1.0 - p);
}

double Marginal::quantile_pq(double p, double q) const {
  if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0)
    throw std::domain_error("quantile: probability outside [0,1]");
  // standard-normal deviate of p, taken from whichever tail keeps precision
  const double z = q < p ? -norm_ppf(q) : norm_ppf(p);
  switch (kind_) {
    case MarginalKind::Lognormal:
      return std::exp(a_ + b_ * z);
    case MarginalKind::Gumbel: {
      if (p <= 0.0) return -kInf;
      if (q <= 0.0) return kInf;
      // -ln(p) = -log1p(-q) stays accurate when p rounds to 1
      const double t = q < 0.5 ? -std::log1p(-q) : -std::log(p);
      return a_ - b_ * std::log(t);
    }
    case MarginalKind::TruncatedGaussian: {
      const double c0 = norm_cdf(-a_ / b_);
      if (q < 0.5) return a_ - b_ * norm_ppf(q * (1.0 - c0));
      return a_ + b_ * norm_ppf(c0 + p * (1.0 - c0));
    }
    case MarginalKind::Uniform:
      return q < 0.5 ? b_ - q * (b_ - a_) : a_ + p * (b_ - a_);
    case MarginalKind::Gaussian:
      return a_ + b_ * z;
  }
  return 0.0;
}

double Marginal::cdf_complement(double x) const {
  switch (kind_) {
    case MarginalKind::Lognormal:
      if (x <= 0.0) return 1.0;
      return norm_cdf(-(std::log(x) - a_) / b_);
    case MarginalKind::Gumbel:
      return -std::expm1(-std::exp(-(x - a_) / b_));
    case MarginalKind::TruncatedGaussian: {
      if (x <= 0.0) return 1.0;
      const double c0 = norm_cdf(-a_ / b_);
      return norm_cdf(-(x - a_) / b_) / (1.0 - c0);
    }
    case MarginalKind::Uniform:
      if (x <= a_) return 1.0;
      if (x >= b_) return 0.0;
      return (b_ - x) / (b_ - a_);
    case MarginalKind::Gaussian:
      return norm_cdf(-(x - a_) / b_);
  }
  return 0.0;
}

double Marginal::pdf(double x) const {
  switch (kind_) {
    case MarginalKind::Lognormal:
      if (x <= 0.0) return 0.0;
      return norm_pdf((std::log(x) - a_) / b_) / (b_ * x);
    case MarginalKind::Gumbel: {
      const double t = std::exp(-(x - a_) / b_);
      return t * std::exp(-t) / b_;
    }
    case MarginalKind::TruncatedGaussian: {
      if (x < 0.0) return 0.0;
      const double c0 = norm_cdf(-a_ / b_);
      return norm_pdf((x - a_) / b_) / (b_ * (1.0 - c0));
    }
    case MarginalKind::Uniform:
      return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0;
    case MarginalKind::Gaussian:
      return norm_pdf((x - a_) / b_) / b_;
  }
  return 0.0;
}

double Marginal::support_lower() const {
  switch (kind_) {
    case MarginalKind::Lognormal:
    case MarginalKind::TruncatedGaussian:
      return 0.0;
    case MarginalKind::Uniform:
      return a_;
    default:
      return -kInf;
  }
}

double Marginal::support_upper() const {
  return kind_ == MarginalKind::Uniform ? b_ : kInf;
}

bool Marginal::in_support(double x) const {
  return x >= support_lower() && x <= support_upper();
}

double Marginal::mean() const {
  switch (kind_) {
    case MarginalKind::Lognormal:
      return std::exp(a_ + 0.5 * b_ * b_);
    case MarginalKind::Gumbel:
      return a_ + kEulerGamma * b_;
    case MarginalKind::TruncatedGaussian: {
      const double alpha = -a_ / b_;
      const double c0 = norm_cdf(alpha);
      return a_ + b_ * norm_pdf(alpha) / (1.0 - c0);
    }
    case MarginalKind::Uniform:
      return 0.5 * (a_ + b_);
    case MarginalKind::Gaussian:
      return a_;
  }
  return 0.0;
}

double Marginal::stddev() const {
  switch (kind_) {
    case MarginalKind::Lognormal:
      return mean() * std::sqrt(std::expm1(b_ * b_));
    case MarginalKind::Gumbel:
      return b_ * kPi / std::sqrt(6.0);
    case MarginalKind::TruncatedGaussian: {
      const double alpha = -a_ / b_;
      const double lam = norm_pdf(alpha) / (1.0 - norm_cdf(alpha));
      const double var = b_ * b_ * (1.0 + alpha * lam - lam * lam);
      return std::sqrt(var);
    }
    case MarginalKind::Uniform:
      return (b_ - a_) / std::sqrt(12.0);
    case MarginalKind::Gaussian:
      return b_;
  }
  return 0.0;
}

std::string Marginal::kind_name() const {
  switch (kind_) {
    case MarginalKind::Lognormal: return "lognormal";
    case MarginalKind::Gumbel: return "gumbel";
    case MarginalKind::TruncatedGaussian: return "truncated-gaussian";
    case MarginalKind::Uniform: return "uniform";
    case MarginalKind::Gaussian: return "gaussian";
  }
  return "?";
}

}  // namespace uq
