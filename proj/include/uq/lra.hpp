#pragma once

#include "uq/input_model.hpp"
#include "uq/polynomials.hpp"
#include "uq/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace uq {

/// One rank-one component: per-dimension coefficient vectors z^(i) of the
/// univariate orthonormal expansions whose product forms the component.
struct RankOneTerm {
  std::vector<Vector> z;  // z[i] has degrees[i]+1 entries
};

/// Canonical low-rank surrogate: sum of weighted rank-one polynomial
/// products evaluated on standardized (standard-normal / uniform) inputs.
struct LraModel {
  std::vector<PolyFamily> families;
  std::vector<int> degrees;
  std::vector<RankOneTerm> terms;
  Vector weights;  // b, one per term
  std::shared_ptr<const InputModel> input;  // optional, for physical-space prediction

  Index rank() const { return static_cast<Index>(terms.size()); }
  Index dimension() const { return static_cast<Index>(degrees.size()); }
};

struct LraConfig {
  Index rank_max = 10;
  std::vector<int> degree_grid = {1, 2, 3};
  int max_sweeps = 50;          // I_max
  double min_decrease = 1e-6;   // empirical-error decrease threshold
  int cv_folds = 3;
  std::uint64_t seed = 0;       // fold shuffling
};

enum class CorrectionExit { Stalled, MaxSweeps };

struct CorrectionResult {
  RankOneTerm term;
  Vector term_values;  // w_r at the training points
  int sweeps = 0;
  double err = 0.0;  // relative empirical error vs the residual
  std::vector<double> err_history;  // one entry per completed sweep
  CorrectionExit exit = CorrectionExit::Stalled;
};

/// Precomputed per-dimension basis tables for a fixed training set.
struct BasisTables {
  std::vector<Matrix> psi;  // psi[i] is N x (degrees[i]+1)
  Index n = 0;
};
BasisTables make_basis_tables(const std::vector<PolyFamily>& families,
                              const std::vector<int>& degrees, const Matrix& u);

/// Alternated least-squares fit of one new rank-one component against the
/// residual. Components start at the constant one; dimensions are swept in
/// ascending order until the relative empirical error decrease drops below
/// config.min_decrease or config.max_sweeps is reached.
CorrectionResult correction_step(const Vector& residual, const BasisTables& tables,
                                 double response_variance, const LraConfig& config);

/// Recompute all rank weights b against the original responses.
Vector updating_step(const Vector& responses, const Matrix& term_values);

struct LraBuild {
  std::vector<LraModel> models;           // models[r-1] has rank r
  std::vector<double> empirical_error;    // relative, after each updating step
  std::vector<CorrectionResult> corrections;
};

/// Greedy rank-by-rank construction: repeat correction + updating steps for
/// r = 1..rank_max, keeping every intermediate rank-r model.
LraBuild build_lra(const Matrix& u, const Vector& y, const std::vector<PolyFamily>& families,
                   const std::vector<int>& degrees, const LraConfig& config);

struct LraSelection {
  LraModel model;
  Index rank = 0;
  int degree = 0;
  double cv_error = 0.0;
  bool variance_fallback = false;
  // cv table rows: (degree, rank, score, failed)
  struct Cell {
    int degree;
    Index rank;
    double score;
    bool failed;
  };
  std::vector<Cell> table;
};

/// Rank and common degree selected by k-fold cross validation over the
/// config degree grid; the winner is retrained on the full training set.
/// Ties break toward smaller degree, then smaller rank.
LraSelection select_lra(const Matrix& u, const Vector& y, const std::vector<PolyFamily>& families,
                        const LraConfig& config);

/// Evaluate the surrogate at standardized points (rows).
Vector predict_standard(const LraModel& model, const Matrix& u);
/// Evaluate at physical points, routing through the attached input model.
Vector predict_physical(const LraModel& model, const Matrix& x);

}  // namespace uq
