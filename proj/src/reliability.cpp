#include "uq/reliability.hpp"

#include "uq/parallel.hpp"
#include "uq/rng.hpp"
#include "uq/stdnormal.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace uq {

namespace {
constexpr Index kChunkRows = 8192;
}

double reliability_index(double pf) {
  if (pf <= 0.0) return std::numeric_limits<double>::infinity();
  if (pf >= 1.0) return -std::numeric_limits<double>::infinity();
  return -norm_ppf(pf);
}

double failure_probability(double beta) { return norm_cdf(-beta); }

namespace {

void finalize_mcs(ReliabilityResult& r, long long failures, long long n) {
  r.pf = static_cast<double>(failures) / static_cast<double>(n);
  r.n_evals = n;
  r.beta = reliability_index(r.pf);
  if (failures == 0) {
    r.zero_failures = true;
    r.cov = std::numeric_limits<double>::quiet_NaN();
    r.cov_exact = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.cov = 1.0 / std::sqrt(static_cast<double>(n) * r.pf);
    r.cov_exact = std::sqrt((1.0 - r.pf) / (static_cast<double>(n) * r.pf));
  }
}

}  // namespace

ReliabilityResult mcs_pf(const LimitState& ls, long long n, std::uint64_t seed, unsigned threads) {
  if (n < 1) throw std::invalid_argument("mcs_pf: n must be >= 1");
  if (!ls.input) throw std::invalid_argument("mcs_pf: limit state has no input model");
  const Index m = ls.input->dimension();
  const long long chunks = (n + kChunkRows - 1) / kChunkRows;
  std::atomic<long long> failures{0};

  parallel_for(static_cast<std::size_t>(chunks), threads, [&](std::size_t c) {
    const long long row0 = static_cast<long long>(c) * kChunkRows;
    const Index rows = static_cast<Index>(std::min<long long>(kChunkRows, n - row0));
    const Matrix u = normal_matrix(seed, rows, m, static_cast<std::uint64_t>(row0));
    long long local = 0;
    for (Index i = 0; i < rows; ++i) {
      const Vector x = ls.input->to_physical(u.row(i));
      if (ls.g(x) <= 0.0) ++local;
    }
    failures.fetch_add(local);
  });

  ReliabilityResult r;
  r.method = "mcs";
  finalize_mcs(r, failures.load(), n);
  return r;
}

namespace {

struct UspaceEvaluator {
  const LimitState& ls;
  long long evals = 0;

  double operator()(const Vector& u) {
    ++evals;
    return ls.g(ls.input->to_physical(u));
  }

  Vector gradient(const Vector& u, double step_base = 1e-4) {
    const Index m = u.size();
    Vector grad(m);
    Vector up = u, dn = u;
    for (Index i = 0; i < m; ++i) {
      const double h = step_base * std::max(1.0, std::abs(u[i]));
      up[i] = u[i] + h;
      dn[i] = u[i] - h;
      grad[i] = ((*this)(up) - (*this)(dn)) / (2.0 * h);
      up[i] = u[i];
      dn[i] = u[i];
    }
    return grad;
  }
};

}  // namespace

FormResult form(const LimitState& ls, const Vector& start, double tol, int max_iter) {
  if (!ls.input) throw std::invalid_argument("form: limit state has no input model");
  const Index m = ls.input->dimension();
  if (start.size() != m) throw std::invalid_argument("form: start dimension mismatch");

  UspaceEvaluator eval{ls};
  const double g0 = eval(Vector::Zero(m));
  const double scale = std::max(1.0, std::abs(g0));

  Vector u = start;
  FormResult out;
  for (int it = 1; it <= max_iter; ++it) {
    const double gu = eval(u);
    const Vector grad = eval.gradient(u);
    const double gnorm2 = grad.squaredNorm();
    if (!(gnorm2 > 0.0))
      throw std::runtime_error("form: zero gradient at iterate, design point undefined");
    const Vector u_next = (grad.dot(u) - gu) / gnorm2 * grad;
    const double delta = (u_next - u).lpNorm<Eigen::Infinity>();
    u = u_next;
    out.iterations = it;
    if (delta <= tol && std::abs(eval(u)) <= tol * scale) {
      out.converged = true;
      out.gradient = eval.gradient(u);
      break;
    }
  }
  if (!out.converged) {
    std::ostringstream msg;
    msg << "form: no convergence in " << max_iter << " iterations; last iterate (";
    for (Index i = 0; i < u.size(); ++i) msg << (i ? "," : "") << u[i];
    msg << ")";
    throw std::runtime_error(msg.str());
  }

  out.u_star = u;
  out.g_at_origin = g0;
  const double beta = u.norm() * (g0 >= 0.0 ? 1.0 : -1.0);
  out.result.method = "form";
  out.result.beta = beta;
  out.result.pf = failure_probability(beta);
  out.result.cov = 0.0;
  out.result.n_evals = eval.evals;
  out.result.design_point = u;
  return out;
}

ReliabilityResult sorm(const LimitState& ls, const FormResult& form_result) {
  if (!form_result.converged) throw std::invalid_argument("sorm: FORM result not converged");
  const double beta = form_result.result.beta;
  if (!(beta > 0.0)) throw std::invalid_argument("sorm: requires a positive reliability index");
  const Vector& u0 = form_result.u_star;
  const Index m = u0.size();

  ReliabilityResult r;
  r.method = "sorm";
  r.design_point = u0;

  if (m == 1) {
    r.beta = beta;
    r.pf = failure_probability(beta);
    r.n_evals = 0;
    return r;
  }

  UspaceEvaluator eval{ls};
  const double h = 1e-3;
  const double gc = eval(u0);
  Matrix hess(m, m);
  Vector up = u0;
  for (Index i = 0; i < m; ++i) {
    up[i] = u0[i] + h;
    const double gp = eval(up);
    up[i] = u0[i] - h;
    const double gm = eval(up);
    up[i] = u0[i];
    hess(i, i) = (gp - 2.0 * gc + gm) / (h * h);
  }
  Vector uu = u0;
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      uu[i] += h; uu[j] += h; const double gpp = eval(uu);
      uu[j] -= 2 * h; const double gpm = eval(uu);
      uu[i] -= 2 * h; const double gmm = eval(uu);
      uu[j] += 2 * h; const double gmp = eval(uu);
      uu[i] = u0[i]; uu[j] = u0[j];
      hess(i, j) = hess(j, i) = (gpp - gpm - gmp + gmm) / (4.0 * h * h);
    }
  }

  const double gnorm = form_result.gradient.norm();
  if (!(gnorm > 0.0)) throw std::runtime_error("sorm: zero gradient at the design point");

  // orthonormal tangent basis: QR of the design-point direction, drop it
  const Vector alpha = u0 / u0.norm();
  Eigen::HouseholderQR<Matrix> qr(alpha);
  const Matrix q = qr.householderQ();
  const Matrix tangent = q.rightCols(m - 1);

  const Matrix b = (tangent.transpose() * hess * tangent) / gnorm;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b);
  if (eig.info() != Eigen::Success) throw std::runtime_error("sorm: curvature eigensolver failed");

  double correction = 1.0;
  for (Index i = 0; i < m - 1; ++i) {
    const double kappa = eig.eigenvalues()[i];
    const double factor = 1.0 + beta * kappa;
    if (!(factor > 0.0))
      throw std::runtime_error(
          "sorm: curvature correction breaks down (1 + beta*kappa <= 0); use importance sampling");
    correction *= 1.0 / std::sqrt(factor);
  }

  r.beta = beta;
  r.pf = failure_probability(beta) * correction;
  r.beta = reliability_index(r.pf);
  r.n_evals = eval.evals;
  return r;
}

ReliabilityResult importance_sampling(const LimitState& ls, const Vector& u_star,
                                      const ImportanceSamplingConfig& config) {
  if (!ls.input) throw std::invalid_argument("importance_sampling: limit state has no input model");
  const Index m = ls.input->dimension();
  if (u_star.size() != m) throw std::invalid_argument("importance_sampling: design point dimension mismatch");

  const double half_unorm2 = 0.5 * u_star.squaredNorm();
  double sum_wi = 0.0, sum_wi2 = 0.0;
  long long n = 0, failures = 0;

  ReliabilityResult r;
  r.method = "is";
  r.design_point = u_star;
  r.cov = std::numeric_limits<double>::quiet_NaN();

  for (Index batch = 0; batch < config.max_batches; ++batch) {
    const Matrix xi = normal_matrix(config.seed, config.batch, m,
                                    static_cast<std::uint64_t>(batch) * static_cast<std::uint64_t>(config.batch));
    for (Index i = 0; i < config.batch; ++i) {
      const Vector u = u_star + xi.row(i).transpose();
      const Vector x = ls.input->to_physical(u);
      ++n;
      if (ls.g(x) <= 0.0) {
        ++failures;
        const double w = std::exp(-half_unorm2 - xi.row(i).dot(u_star));
        sum_wi += w;
        sum_wi2 += w * w;
      }
    }
    if (failures > 0) {
      const double nn = static_cast<double>(n);
      const double mean = sum_wi / nn;
      const double var = std::max(0.0, (sum_wi2 / nn - mean * mean)) * nn / (nn - 1.0);
      const double cov = std::sqrt(var / nn) / mean;
      r.pf = mean;
      r.cov = cov;
      if (cov <= config.target_cov) {
        r.n_evals = n;
        r.beta = reliability_index(r.pf);
        return r;
      }
    }
  }

  r.n_evals = n;
  r.cov_target_missed = true;
  if (failures == 0) {
    r.pf = 0.0;
    r.zero_failures = true;
    r.beta = std::numeric_limits<double>::infinity();
  } else {
    r.beta = reliability_index(r.pf);
  }
  return r;
}

std::vector<PfCurvePoint> mcs_exceedance_curve(const StandardResponse& response, Index dimension,
                                               const std::vector<double>& thresholds, long long n,
                                               std::uint64_t seed, unsigned threads) {
  if (n < 1) throw std::invalid_argument("mcs_exceedance_curve: n must be >= 1");
  const std::size_t t = thresholds.size();
  std::vector<PfCurvePoint> out(t);
  for (std::size_t k = 0; k < t; ++k) out[k].threshold = thresholds[k];
  if (t == 0) return out;

  const long long chunks = (n + kChunkRows - 1) / kChunkRows;
  std::vector<std::atomic<long long>> counts(t);
  for (auto& c : counts) c.store(0);

  parallel_for(static_cast<std::size_t>(chunks), threads, [&](std::size_t c) {
    const long long row0 = static_cast<long long>(c) * kChunkRows;
    const Index rows = static_cast<Index>(std::min<long long>(kChunkRows, n - row0));
    const Matrix u = normal_matrix(seed, rows, dimension, static_cast<std::uint64_t>(row0));
    const Vector resp = response(u);
    std::vector<long long> local(t, 0);
    for (Index i = 0; i < rows; ++i)
      for (std::size_t k = 0; k < t; ++k)
        if (resp[i] >= thresholds[k]) ++local[k];
    for (std::size_t k = 0; k < t; ++k) counts[k].fetch_add(local[k]);
  });

  for (std::size_t k = 0; k < t; ++k) {
    out[k].result.method = "mcs";
    finalize_mcs(out[k].result, counts[k].load(), n);
  }
  return out;
}

std::vector<PfCurvePoint> analytical_curve(const std::function<double(double)>& pf_of_threshold,
                                           const std::vector<double>& thresholds) {
  std::vector<PfCurvePoint> out(thresholds.size());
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    out[k].threshold = thresholds[k];
    out[k].result.method = "analytical";
    out[k].result.pf = pf_of_threshold(thresholds[k]);
    out[k].result.beta = reliability_index(out[k].result.pf);
  }
  return out;
}

std::vector<PfCurvePoint> is_curve(const std::function<double(const Vector&)>& response,
                                   const InputModel& input, const std::vector<double>& thresholds,
                                   const ImportanceSamplingConfig& config) {
  std::vector<PfCurvePoint> out(thresholds.size());
  Vector warm = Vector::Zero(input.dimension());
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    const double t = thresholds[k];
    out[k].threshold = t;
    LimitState ls{[&response, t](const Vector& x) { return t - response(x); }, &input,
                  "threshold " + std::to_string(t)};
    try {
      FormResult fr = form(ls, warm);
      warm = fr.u_star;  // restart the next threshold here
      ReliabilityResult is = importance_sampling(ls, fr.u_star, config);
      is.n_evals += fr.result.n_evals;
      is.method = "form+is";
      out[k].result = std::move(is);
    } catch (const std::exception& e) {
      out[k].failed = true;
      out[k].error = e.what();
    }
  }
  return out;
}

}  // namespace uq
