#pragma once

#include "uq/input_model.hpp"
#include "uq/polynomials.hpp"
#include "uq/types.hpp"

#include <memory>
#include <vector>

namespace uq {

/// Corrected leave-one-out estimate of a least-squares polynomial fit.
struct LooReport {
  double absolute = 0.0;        // plain LOO, mean-square form
  double corrected = 0.0;       // with the (P,N) correction factor
  double relative = 0.0;        // plain, normalized by response variance
  double relative_corrected = 0.0;
  Index excluded_points = 0;    // points with leverage 1 dropped from the sum
  bool degenerate = false;      // interpolatory fit: no usable LOO information
  bool rank_deficient = false;  // closed form unavailable, explicit refits used
};

/// Sparse polynomial chaos expansion on a tensorized orthonormal basis.
struct PceModel {
  std::vector<MultiIndexVec> indices;
  Vector coefficients;
  std::vector<PolyFamily> families;
  std::shared_ptr<const InputModel> input;
  LooReport loo;

  Index dimension() const { return static_cast<Index>(families.size()); }
  Index cardinality() const { return static_cast<Index>(indices.size()); }
};

struct PceConfig {
  std::vector<int> degree_grid = {1, 2, 3};            // candidate total degrees p^t
  std::vector<double> q_grid = {0.25, 0.50, 0.75, 1.0};
  Index max_candidate_basis = 100000;
};

/// q-norm (sum alpha_i^q)^(1/q) of a multi-index, q in (0,1].
double index_qnorm(const MultiIndexVec& alpha, double q);

/// All multi-indices with q-norm <= pt (+1e-10 float tolerance), in
/// lexicographic order. Throws when the set would exceed the guard.
std::vector<MultiIndexVec> hyperbolic_index_set(Index m, int pt, double q,
                                                Index max_cardinality = 100000);

/// Ordinary least-squares PCE on a fixed index set, with its LOO report.
PceModel fit_pce_ols(const Matrix& u, const Vector& y, const std::vector<MultiIndexVec>& indices,
                     const std::vector<PolyFamily>& families);

/// Closed-form leave-one-out error of an OLS fit: mean of squared
/// leverage-corrected residuals, plus the corrected variant with factor
/// T = N/(N-P) (1 + tr((A^T A / N)^{-1})/N). Falls back to explicit refits
/// when the design is rank deficient.
LooReport loo_error(const Matrix& a, const Vector& y, const Vector& coefficients);

struct LarPathEntry {
  Index active_size = 0;
  double loo_corrected = 0.0;
  bool usable = false;
};

struct HybridLarResult {
  PceModel model;
  std::vector<LarPathEntry> path;
  std::vector<Index> entry_order;  // candidate column indices in entry order
};

/// Least-angle-regression predictor selection with per-prefix OLS refits;
/// corrected leave-one-out picks the returned prefix. The constant term is
/// kept aside from the path and always present in refits.
HybridLarResult hybrid_lar(const Matrix& u, const Vector& y,
                           const std::vector<MultiIndexVec>& candidates,
                           const std::vector<PolyFamily>& families);

struct PceSelection {
  PceModel model;
  int degree = 0;
  double q = 0.0;
  struct Cell {
    int degree;
    double q;
    double loo;
    Index cardinality;
    bool failed;
    std::string reason;
  };
  std::vector<Cell> table;
};

/// Scan the (p^t, q) grid with hybrid LAR and return the corrected-LOO
/// minimizer; ties break toward smaller basis cardinality, then smaller p^t.
PceSelection select_pce(const Matrix& u, const Vector& y, const std::vector<PolyFamily>& families,
                        const PceConfig& config);

Vector predict_standard(const PceModel& model, const Matrix& u);
Vector predict_physical(const PceModel& model, const Matrix& x);

}  // namespace uq
