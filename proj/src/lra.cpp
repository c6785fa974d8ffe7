#include "uq/lra.hpp"

#include "uq/least_squares.hpp"
#include "uq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uq {

BasisTables make_basis_tables(const std::vector<PolyFamily>& families,
                              const std::vector<int>& degrees, const Matrix& u) {
  if (families.size() != degrees.size())
    throw std::invalid_argument("make_basis_tables: family/degree count mismatch");
  if (static_cast<Index>(families.size()) != u.cols())
    throw std::invalid_argument("make_basis_tables: dimension mismatch");
  BasisTables t;
  t.n = u.rows();
  t.psi.reserve(families.size());
  for (std::size_t i = 0; i < families.size(); ++i)
    t.psi.push_back(basis_matrix(families[i], degrees[i], u.col(static_cast<Index>(i))));
  return t;
}

CorrectionResult correction_step(const Vector& residual, const BasisTables& tables,
                                 double response_variance, const LraConfig& config) {
  const Index n = tables.n;
  const Index m = static_cast<Index>(tables.psi.size());
  if (residual.size() != n) throw std::invalid_argument("correction_step: residual/ED mismatch");
  if (n == 0) throw std::invalid_argument("correction_step: empty experimental design");
  if (!(response_variance > 0.0))
    throw std::invalid_argument("correction_step: zero response variance, relative error undefined");

  CorrectionResult res;
  res.term.z.resize(static_cast<std::size_t>(m));
  std::vector<Vector> v(static_cast<std::size_t>(m));  // v_i at the ED points
  for (Index i = 0; i < m; ++i) {
    Vector z0 = Vector::Zero(tables.psi[static_cast<std::size_t>(i)].cols());
    z0[0] = 1.0;  // constant-one initialization
    res.term.z[static_cast<std::size_t>(i)] = z0;
    v[static_cast<std::size_t>(i)] = Vector::Ones(n);
  }

  double prev_err = std::numeric_limits<double>::infinity();
  res.exit = CorrectionExit::MaxSweeps;
  for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    res.sweeps = sweep;
    for (Index j = 0; j < m; ++j) {
      // frozen product over the other dimensions
      Vector frozen = Vector::Ones(n);
      for (Index i = 0; i < m; ++i)
        if (i != j) frozen.array() *= v[static_cast<std::size_t>(i)].array();
      const Matrix design = frozen.asDiagonal() * tables.psi[static_cast<std::size_t>(j)];
      LsqSolution sol = solve_ols(design, residual);
      res.term.z[static_cast<std::size_t>(j)] = sol.coefficients;
      v[static_cast<std::size_t>(j)] = tables.psi[static_cast<std::size_t>(j)] * sol.coefficients;
    }
    Vector w = Vector::Ones(n);
    for (Index i = 0; i < m; ++i) w.array() *= v[static_cast<std::size_t>(i)].array();
    res.term_values = w;
    res.err = (residual - w).squaredNorm() / static_cast<double>(n) / response_variance;
    res.err_history.push_back(res.err);
    if (prev_err - res.err < config.min_decrease) {
      res.exit = CorrectionExit::Stalled;
      break;
    }
    prev_err = res.err;
  }
  return res;
}

Vector updating_step(const Vector& responses, const Matrix& term_values) {
  if (term_values.cols() < 1) throw std::invalid_argument("updating_step: no terms");
  if (term_values.rows() != responses.size())
    throw std::invalid_argument("updating_step: size mismatch");
  return solve_ols(term_values, responses).coefficients;
}

LraBuild build_lra(const Matrix& u, const Vector& y, const std::vector<PolyFamily>& families,
                   const std::vector<int>& degrees, const LraConfig& config) {
  const Index n = u.rows();
  if (y.size() != n) throw std::invalid_argument("build_lra: response/point count mismatch");
  if (config.rank_max < 1) throw std::invalid_argument("build_lra: rank_max must be >= 1");
  int maxdeg = 0;
  for (int p : degrees) maxdeg = std::max(maxdeg, p);
  if (n < std::max<Index>(config.rank_max, maxdeg + 1))
    throw std::invalid_argument("build_lra: experimental design too small for the requested rank/degree");

  // constant responses leave the relative error undefined; fall back to
  // absolute errors so degenerate targets still train
  double var = n >= 2 ? empirical_variance(y) : y.squaredNorm();
  if (!(var > 0.0)) var = 1.0;

  const BasisTables tables = make_basis_tables(families, degrees, u);

  LraBuild out;
  Vector residual = y;
  Matrix term_values(n, 0);
  std::vector<RankOneTerm> terms;
  for (Index r = 1; r <= config.rank_max; ++r) {
    CorrectionResult corr = correction_step(residual, tables, var, config);
    terms.push_back(corr.term);
    term_values.conservativeResize(Eigen::NoChange, r);
    term_values.col(r - 1) = corr.term_values;

    const Vector b = updating_step(y, term_values);
    const Vector fit = term_values * b;
    residual = y - fit;

    LraModel model;
    model.families = families;
    model.degrees = degrees;
    model.terms = terms;
    model.weights = b;
    out.models.push_back(std::move(model));
    out.empirical_error.push_back(residual.squaredNorm() / static_cast<double>(n) / var);
    out.corrections.push_back(std::move(corr));
  }
  return out;
}

LraSelection select_lra(const Matrix& u, const Vector& y, const std::vector<PolyFamily>& families,
                        const LraConfig& config) {
  const Index n = u.rows();
  if (n < 2 * config.cv_folds)
    throw std::invalid_argument("select_lra: experimental design too small for cross validation");
  if (config.degree_grid.empty()) throw std::invalid_argument("select_lra: empty degree grid");

  LraSelection sel;
  double best = std::numeric_limits<double>::infinity();
  bool found = false;

  // smallest training-fold size bounds the candidate ranks trainable in CV
  const std::vector<int> folds = kfold_assignment(n, config.cv_folds, config.seed);
  std::vector<Index> fold_size(static_cast<std::size_t>(config.cv_folds), 0);
  for (int f : folds) ++fold_size[static_cast<std::size_t>(f)];
  Index max_fold = 0;
  for (Index s : fold_size) max_fold = std::max(max_fold, s);
  const Index train_min = n - max_fold;

  std::vector<int> grid = config.degree_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  for (int p : grid) {
    LraConfig cv_cfg = config;
    cv_cfg.rank_max = std::min(config.rank_max, train_min);
    if (cv_cfg.rank_max < 1) continue;
    const std::vector<int> degrees(families.size(), p);
    Trainer trainer = [&](const Matrix& xtr, const Vector& ytr) {
      LraBuild build = build_lra(xtr, ytr, families, degrees, cv_cfg);
      std::vector<Predictor> preds;
      preds.reserve(build.models.size());
      for (auto& model : build.models) {
        auto shared = std::make_shared<LraModel>(std::move(model));
        preds.push_back([shared](const Matrix& pts) { return predict_standard(*shared, pts); });
      }
      return preds;
    };
    CvScores scores = kfold_cv(trainer, u, y, config.cv_folds, config.seed);
    sel.variance_fallback = sel.variance_fallback || scores.variance_fallback;

    for (std::size_t c = 0; c < scores.mean_relative_error.size(); ++c) {
      const Index r = static_cast<Index>(c) + 1;
      const bool failed = scores.failed[c];
      const double score = failed ? std::numeric_limits<double>::quiet_NaN()
                                  : scores.mean_relative_error[c];
      sel.table.push_back({p, r, score, failed});
      if (failed) continue;
      // Scores equal within noise count as ties and keep the earlier entry,
      // which is the smaller degree, then the smaller rank.
      const double tie = 1e-9 * best + 1e-14;
      if (!found || score < best - tie) {
        best = score;
        sel.degree = p;
        sel.rank = r;
        found = true;
      }
    }
  }
  if (!found) throw std::runtime_error("select_lra: all cross-validation cells failed");

  LraConfig final_cfg = config;
  final_cfg.rank_max = sel.rank;
  const std::vector<int> degrees(families.size(), sel.degree);
  LraBuild build = build_lra(u, y, families, degrees, final_cfg);
  sel.model = build.models.back();
  sel.cv_error = best;
  return sel;
}

Vector predict_standard(const LraModel& model, const Matrix& u) {
  if (u.cols() != model.dimension()) throw std::invalid_argument("predict: dimension mismatch");
  const Index n = u.rows();
  const BasisTables tables = make_basis_tables(model.families, model.degrees, u);
  Vector out = Vector::Zero(n);
  for (Index l = 0; l < model.rank(); ++l) {
    Vector w = Vector::Ones(n);
    for (Index i = 0; i < model.dimension(); ++i)
      w.array() *= (tables.psi[static_cast<std::size_t>(i)] *
                    model.terms[static_cast<std::size_t>(l)].z[static_cast<std::size_t>(i)])
                       .array();
    out += model.weights[l] * w;
  }
  return out;
}

Vector predict_physical(const LraModel& model, const Matrix& x) {
  if (!model.input) throw std::logic_error("predict_physical: model has no input model attached");
  return predict_standard(model, model.input->to_standard_rows(x));
}

}  // namespace uq
