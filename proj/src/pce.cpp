#include "uq/pce.hpp"

#include "uq/least_squares.hpp"
#include "uq/metrics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uq {

double index_qnorm(const MultiIndexVec& alpha, double q) {
  if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("index_qnorm: q must be in (0,1]");
  double s = 0.0;
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("index_qnorm: negative degree");
    s += std::pow(static_cast<double>(a), q);
  }
  return std::pow(s, 1.0 / q);
}

namespace {

void enumerate_hyperbolic(Index m, int pt, double q, double budget_q, std::size_t dim,
                          double partial, MultiIndexVec& current,
                          std::vector<MultiIndexVec>& out, Index guard) {
  if (dim == static_cast<std::size_t>(m)) {
    out.push_back(current);
    if (static_cast<Index>(out.size()) > guard)
      throw std::runtime_error(
          "hyperbolic_index_set: candidate basis exceeds the size guard; decrease pt or q");
    return;
  }
  for (int a = 0; a <= pt; ++a) {
    const double s = partial + (a > 0 ? std::pow(static_cast<double>(a), q) : 0.0);
    if (s > budget_q) break;  // increasing in a
    current[dim] = a;
    enumerate_hyperbolic(m, pt, q, budget_q, dim + 1, s, current, out, guard);
  }
  current[dim] = 0;
}

}  // namespace

std::vector<MultiIndexVec> hyperbolic_index_set(Index m, int pt, double q, Index max_cardinality) {
  if (m < 1) throw std::invalid_argument("hyperbolic_index_set: dimension must be >= 1");
  if (pt < 0) throw std::invalid_argument("hyperbolic_index_set: pt must be >= 0");
  if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("hyperbolic_index_set: q must be in (0,1]");
  // (sum a_i^q)^(1/q) <= pt + tol  <=>  sum a_i^q <= (pt + tol)^q
  const double budget_q = std::pow(static_cast<double>(pt) + 1e-10, q);
  std::vector<MultiIndexVec> out;
  MultiIndexVec current(static_cast<std::size_t>(m), 0);
  enumerate_hyperbolic(m, pt, q, budget_q, 0, 0.0, current, out, max_cardinality);
  return out;  // DFS over dimensions yields lexicographic order
}

LooReport loo_error(const Matrix& a, const Vector& y, const Vector& coefficients) {
  const Index n = a.rows();
  const Index p = a.cols();
  LooReport rep;
  if (n != y.size() || p != coefficients.size())
    throw std::invalid_argument("loo_error: dimension mismatch");

  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? kRankThreshold * sv[0] : 0.0;
  Index rank = 0;
  for (Index j = 0; j < sv.size(); ++j)
    if (sv[j] > cutoff) ++rank;

  const double var = n >= 2 ? empirical_variance(y) : 0.0;

  if (rank < p) {
    // Closed form needs a full-rank design; fall back to explicit refits.
    rep.rank_deficient = true;
    double acc = 0.0;
    Index used = 0;
    for (Index i = 0; i < n; ++i) {
      Matrix ai(n - 1, p);
      Vector yi(n - 1);
      Index r = 0;
      for (Index k = 0; k < n; ++k) {
        if (k == i) continue;
        ai.row(r) = a.row(k);
        yi[r] = y[k];
        ++r;
      }
      const Vector c = solve_ols(ai, yi).coefficients;
      const double d = y[i] - a.row(i).dot(c);
      acc += d * d;
      ++used;
    }
    rep.absolute = acc / static_cast<double>(used);
    rep.corrected = rep.absolute;  // no trace factor without a full-rank Gram matrix
    if (var > 0.0) {
      rep.relative = rep.absolute / var;
      rep.relative_corrected = rep.corrected / var;
    }
    return rep;
  }

  const Matrix& u = svd.matrixU();
  const Vector residual = y - a * coefficients;
  double acc = 0.0;
  Index used = 0;
  for (Index i = 0; i < n; ++i) {
    const double h = u.row(i).head(rank).squaredNorm();
    if (h >= 1.0 - 1e-12) {
      ++rep.excluded_points;  // interpolated point carries no LOO information
      continue;
    }
    const double d = residual[i] / (1.0 - h);
    acc += d * d;
    ++used;
  }
  if (used == 0) {
    rep.degenerate = true;
    rep.absolute = rep.corrected = std::numeric_limits<double>::infinity();
    rep.relative = rep.relative_corrected = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.absolute = acc / static_cast<double>(used);

  if (n > p) {
    // T = N/(N-P) (1 + tr((A^T A / N)^{-1}) / N); the trace reduces to
    // sum sigma_j^{-2} over the singular values.
    double trace_term = 0.0;
    for (Index j = 0; j < p; ++j) trace_term += 1.0 / (sv[j] * sv[j]);
    const double t = static_cast<double>(n) / static_cast<double>(n - p) * (1.0 + trace_term);
    rep.corrected = rep.absolute * t;
  } else {
    rep.corrected = std::numeric_limits<double>::infinity();
    rep.degenerate = true;
  }

  if (var > 0.0) {
    rep.relative = rep.absolute / var;
    rep.relative_corrected = rep.corrected / var;
  }
  return rep;
}

PceModel fit_pce_ols(const Matrix& u, const Vector& y, const std::vector<MultiIndexVec>& indices,
                     const std::vector<PolyFamily>& families) {
  if (u.rows() < 1) throw std::invalid_argument("fit_pce_ols: empty experimental design");
  if (indices.empty()) throw std::invalid_argument("fit_pce_ols: empty index set");
  const Matrix a = design_matrix(families, indices, u);
  LsqSolution sol = solve_ols(a, y);
  PceModel model;
  model.indices = indices;
  model.coefficients = sol.coefficients;
  model.families = families;
  model.loo = loo_error(a, y, sol.coefficients);
  if (sol.effective_rank < a.cols()) model.loo.rank_deficient = true;
  return model;
}

namespace {

struct LarPath {
  std::vector<Index> order;  // columns in entry order (indices into the candidate list)
};

// Least-angle regression on centered, unit-norm regressors; returns the
// order in which candidates enter the active set. Ties break toward the
// lowest column index; the path stops early if the active Gram matrix loses
// definiteness.
LarPath lar_entry_order(const Matrix& x0, const Vector& y0, Index max_active) {
  const Index n = x0.rows();
  const Index p = x0.cols();

  Matrix x = x0;
  Vector col_norm(p);
  std::vector<bool> usable(static_cast<std::size_t>(p), true);
  for (Index j = 0; j < p; ++j) {
    const double mean = x.col(j).mean();
    x.col(j).array() -= mean;
    col_norm[j] = x.col(j).norm();
    if (col_norm[j] > 1e-300)
      x.col(j) /= col_norm[j];
    else
      usable[static_cast<std::size_t>(j)] = false;  // constant column: intercept handles it
  }
  Vector y = y0.array() - y0.mean();

  LarPath path;
  std::vector<bool> active(static_cast<std::size_t>(p), false);
  Vector mu = Vector::Zero(n);

  for (Index step = 0; step < max_active; ++step) {
    const Vector c = x.transpose() * (y - mu);
    Index best = -1;
    double cmax = 0.0;
    for (Index j = 0; j < p; ++j) {
      if (active[static_cast<std::size_t>(j)] || !usable[static_cast<std::size_t>(j)]) continue;
      const double v = std::abs(c[j]);
      if (v > cmax + 1e-15) {
        cmax = v;
        best = j;
      }
    }
    if (best < 0 || cmax < 1e-14) break;
    active[static_cast<std::size_t>(best)] = true;
    path.order.push_back(best);

    // equiangular direction over the active set
    const Index k = static_cast<Index>(path.order.size());
    Matrix xa(n, k);
    for (Index i = 0; i < k; ++i) {
      const Index col = path.order[static_cast<std::size_t>(i)];
      xa.col(i) = (c[col] >= 0.0 ? 1.0 : -1.0) * x.col(col);
    }
    const Matrix g = xa.transpose() * xa;
    Eigen::LDLT<Matrix> ldlt(g);
    if (ldlt.info() != Eigen::Success) break;
    const Vector ginv1 = ldlt.solve(Vector::Ones(k));
    const double denom = Vector::Ones(k).dot(ginv1);
    if (!(denom > 1e-14)) break;  // rank-deficient active design
    const double aa = 1.0 / std::sqrt(denom);
    const Vector ua = xa * (aa * ginv1);

    const double cmax_now = cmax;
    double gamma = cmax_now / aa;  // final-step stride: jump to the joint OLS fit
    const Vector a_corr = x.transpose() * ua;
    for (Index j = 0; j < p; ++j) {
      if (active[static_cast<std::size_t>(j)] || !usable[static_cast<std::size_t>(j)]) continue;
      const double c1 = (cmax_now - c[j]) / (aa - a_corr[j]);
      const double c2 = (cmax_now + c[j]) / (aa + a_corr[j]);
      if (c1 > 1e-14 && c1 < gamma) gamma = c1;
      if (c2 > 1e-14 && c2 < gamma) gamma = c2;
    }
    mu += gamma * ua;
  }
  return path;
}

}  // namespace

HybridLarResult hybrid_lar(const Matrix& u, const Vector& y,
                           const std::vector<MultiIndexVec>& candidates,
                           const std::vector<PolyFamily>& families) {
  const Index n = u.rows();
  if (n < 3) throw std::invalid_argument("hybrid_lar: need at least three points");
  if (candidates.empty()) throw std::invalid_argument("hybrid_lar: empty candidate set");

  const Matrix a_full = design_matrix(families, candidates, u);

  // locate the constant term (kept out of the path, always refitted)
  Index zero_idx = -1;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    bool all0 = true;
    for (int d : candidates[j]) all0 = all0 && d == 0;
    if (all0) {
      zero_idx = static_cast<Index>(j);
      break;
    }
  }

  std::vector<Index> noncon;  // candidate columns other than the constant
  for (Index j = 0; j < static_cast<Index>(candidates.size()); ++j)
    if (j != zero_idx) noncon.push_back(j);

  HybridLarResult result;

  // Intercept-only candidate (always available as a prefix of size 0).
  auto refit = [&](Index prefix_len) {
    std::vector<MultiIndexVec> idx;
    idx.push_back(MultiIndexVec(static_cast<std::size_t>(u.cols()), 0));
    for (Index i = 0; i < prefix_len; ++i)
      idx.push_back(candidates[static_cast<std::size_t>(result.entry_order[static_cast<std::size_t>(i)])]);
    return fit_pce_ols(u, y, idx, families);
  };

  Index max_active = std::min<Index>(static_cast<Index>(noncon.size()), n - 1);
  if (!noncon.empty() && max_active > 0) {
    Matrix xc(n, static_cast<Index>(noncon.size()));
    for (std::size_t j = 0; j < noncon.size(); ++j) xc.col(static_cast<Index>(j)) = a_full.col(noncon[j]);
    LarPath path = lar_entry_order(xc, y, max_active);
    result.entry_order.reserve(path.order.size());
    for (Index col : path.order) result.entry_order.push_back(noncon[static_cast<std::size_t>(col)]);
  }

  PceModel best_model;
  double best_loo = std::numeric_limits<double>::infinity();
  bool found = false;
  for (Index len = 0; len <= static_cast<Index>(result.entry_order.size()); ++len) {
    PceModel m = refit(len);
    LarPathEntry entry;
    entry.active_size = len;
    entry.loo_corrected = m.loo.relative_corrected;
    entry.usable = !m.loo.degenerate && std::isfinite(m.loo.relative_corrected);
    result.path.push_back(entry);
    if (entry.usable && (!found || m.loo.relative_corrected < best_loo)) {
      best_loo = m.loo.relative_corrected;
      best_model = std::move(m);
      found = true;
    }
  }
  if (!found) {
    // fall back to the intercept-only fit even if its LOO is degenerate
    best_model = refit(0);
  }
  result.model = std::move(best_model);
  return result;
}

PceSelection select_pce(const Matrix& u, const Vector& y, const std::vector<PolyFamily>& families,
                        const PceConfig& config) {
  if (config.degree_grid.empty() || config.q_grid.empty())
    throw std::invalid_argument("select_pce: empty grids");
  PceSelection sel;
  double best = std::numeric_limits<double>::infinity();
  Index best_card = 0;
  int best_pt = 0;
  bool found = false;
  for (int pt : config.degree_grid) {
    for (double q : config.q_grid) {
      PceSelection::Cell cell{pt, q, std::numeric_limits<double>::quiet_NaN(), 0, false, ""};
      try {
        const auto candidates = hyperbolic_index_set(u.cols(), pt, q, config.max_candidate_basis);
        HybridLarResult lar = hybrid_lar(u, y, candidates, families);
        cell.loo = lar.model.loo.relative_corrected;
        cell.cardinality = lar.model.cardinality();
        // near-equal LOO counts as a tie; smaller basis wins, then smaller pt
        const double tie = 1e-9 * best + 1e-15;
        const bool tied = found && std::abs(cell.loo - best) <= tie;
        const bool better =
            !found || (!tied && cell.loo < best - tie) ||
            (tied && (cell.cardinality < best_card ||
                      (cell.cardinality == best_card && pt < best_pt)));
        if (std::isfinite(cell.loo) && better) {
          best = cell.loo;
          best_card = cell.cardinality;
          best_pt = pt;
          sel.model = std::move(lar.model);
          sel.degree = pt;
          sel.q = q;
          found = true;
        }
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.reason = e.what();
      }
      sel.table.push_back(std::move(cell));
    }
  }
  if (!found) {
    std::string causes;
    for (const auto& c : sel.table)
      if (c.failed) causes += " [pt=" + std::to_string(c.degree) + ",q=" + std::to_string(c.q) +
                              ": " + c.reason + "]";
    throw std::runtime_error("select_pce: every (pt,q) pair failed;" + causes);
  }
  return sel;
}

Vector predict_standard(const PceModel& model, const Matrix& u) {
  if (u.cols() != model.dimension()) throw std::invalid_argument("predict: dimension mismatch");
  return design_matrix(model.families, model.indices, u) * model.coefficients;
}

Vector predict_physical(const PceModel& model, const Matrix& x) {
  if (!model.input) throw std::logic_error("predict_physical: model has no input model attached");
  return predict_standard(model, model.input->to_standard_rows(x));
}

}  // namespace uq
