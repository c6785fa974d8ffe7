#include "uq/pce.hpp"

#include "uq/metrics.hpp"
#include "uq/least_squares.hpp"
#include "uq/rng.hpp"
#include "uq/sobol.hpp"
#include "uq/stdnormal.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace uq;

namespace {

Matrix standard_points_from_sobol(Index m, Index n) {
  Matrix s = sobol_design(m, n);
  for (Index i = 0; i < s.size(); ++i) s.data()[i] = norm_ppf(s.data()[i]);
  return s;
}

std::vector<PolyFamily> hermites(std::size_t m) {
  return std::vector<PolyFamily>(m, PolyFamily::HermiteProbabilist);
}

long long binomial(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("hyperbolic index set cardinalities") {
  CHECK(hyperbolic_index_set(10, 3, 1.0).size() == 286);
  CHECK(hyperbolic_index_set(7, 0, 0.5).size() == 1);

  const auto set22 = hyperbolic_index_set(2, 2, 1.0);
  CHECK(set22.size() == 6);
  std::set<MultiIndexVec> expect{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {2, 0}};
  CHECK(std::set<MultiIndexVec>(set22.begin(), set22.end()) == expect);

  // q = 1 cardinality matches the binomial for a sweep of (M, pt)
  for (int m = 1; m <= 20; m += 4)
    for (int pt = 0; pt <= 6; ++pt)
      CHECK(static_cast<long long>(hyperbolic_index_set(m, pt, 1.0, 2000000).size()) ==
            binomial(m + pt, pt));

  // smaller q prunes interactions but keeps pure terms
  const auto q05 = hyperbolic_index_set(2, 3, 0.5);
  CHECK(q05.size() < hyperbolic_index_set(2, 3, 1.0).size());
  for (int d = 0; d <= 3; ++d) {
    CHECK(std::find(q05.begin(), q05.end(), MultiIndexVec{d, 0}) != q05.end());
    CHECK(std::find(q05.begin(), q05.end(), MultiIndexVec{0, d}) != q05.end());
  }

  CHECK_THROWS_AS(hyperbolic_index_set(10, 8, 1.0, 1000), std::runtime_error);
}

TEST_CASE("full-tensor versus low-rank unknown counts") {
  const int m = 10, p = 3, r = 10;
  long long full = 1;
  for (int i = 0; i < m; ++i) full *= (p + 1);
  CHECK(full == 1048576);
  CHECK((p + 1) * m * r == 400);
}

TEST_CASE("ols fit recovers an exact quadratic expansion") {
  const Matrix u = standard_points_from_sobol(2, 30);
  Vector y(30);
  for (Index i = 0; i < 30; ++i) y[i] = u(i, 0) * u(i, 0) + u(i, 1);
  const auto indices = hyperbolic_index_set(2, 2, 1.0);
  const PceModel model = fit_pce_ols(u, y, indices, hermites(2));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const MultiIndexVec& a = indices[j];
    double expect = 0.0;
    if (a == MultiIndexVec{0, 0}) expect = 1.0;               // E[u^2]
    if (a == MultiIndexVec{0, 1}) expect = 1.0;               // the linear term
    if (a == MultiIndexVec{2, 0}) expect = std::sqrt(2.0);    // u^2 = sqrt2 He2 + 1
    CHECK(model.coefficients[static_cast<Index>(j)] == doctest::Approx(expect).scale(1.0).epsilon(1e-10));
  }
  CHECK(model.loo.relative_corrected < 1e-15);

  // prediction at u=(1,0): only the constant survives
  Matrix probe(1, 2);
  probe << 1.0, 0.0;
  CHECK(predict_standard(model, probe)[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant response gives an intercept-only fit") {
  const Matrix u = standard_points_from_sobol(3, 20);
  const Vector y = Vector::Constant(20, 5.5);
  const auto indices = hyperbolic_index_set(3, 2, 1.0);
  const PceModel model = fit_pce_ols(u, y, indices, hermites(3));
  CHECK(model.coefficients[0] == doctest::Approx(5.5).epsilon(1e-12));
  CHECK(model.coefficients.tail(model.coefficients.size() - 1).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("underdetermined fit is flagged rank deficient") {
  const Matrix u = standard_points_from_sobol(4, 8);
  Vector y = u.col(0);
  const auto indices = hyperbolic_index_set(4, 2, 1.0);  // 15 > 8 points
  const PceModel model = fit_pce_ols(u, y, indices, hermites(4));
  CHECK(model.loo.rank_deficient);
}

TEST_CASE("closed-form LOO equals explicit refits on random systems") {
  for (int trial = 0; trial < 12; ++trial) {
    Matrix a(20, 5);
    Vector y(20);
    a.col(0).setOnes();
    for (Index i = 0; i < 20; ++i) {
      for (Index j = 1; j < 5; ++j)
        a(i, j) = rng::normal(3000 + trial, static_cast<std::uint64_t>(i) * 5 + static_cast<std::uint64_t>(j));
      y[i] = rng::normal(4000 + trial, static_cast<std::uint64_t>(i));
    }
    const Vector c = solve_ols(a, y).coefficients;
    const LooReport rep = loo_error(a, y, c);

    double acc = 0.0;
    for (Index i = 0; i < 20; ++i) {
      Matrix ai(19, 5);
      Vector yi(19);
      Index r = 0;
      for (Index k = 0; k < 20; ++k) {
        if (k == i) continue;
        ai.row(r) = a.row(k);
        yi[r] = y[k];
        ++r;
      }
      const Vector ci = solve_ols(ai, yi).coefficients;
      const double d = y[i] - a.row(i).dot(ci);
      acc += d * d;
    }
    const double brute = acc / 20.0;
    CHECK(rep.absolute == doctest::Approx(brute).epsilon(1e-9));
    CHECK(rep.corrected >= rep.absolute);  // T >= 1 when N > P
  }
}

TEST_CASE("perfect low-order fit has zero LOO; square fits are degenerate") {
  Matrix a(6, 2);
  a.col(0).setOnes();
  a.col(1) << -2, -1, 0, 1, 2, 3;
  const Vector y = 2.0 * a.col(1) + Vector::Ones(6);
  const Vector c = solve_ols(a, y).coefficients;
  const LooReport rep = loo_error(a, y, c);
  CHECK(rep.absolute == doctest::Approx(0.0).scale(1.0).epsilon(1e-18));

  Matrix sq(2, 2);
  sq << 1, -1, 1, 2;
  Vector ysq(2);
  ysq << 0.5, 3.0;
  const LooReport deg = loo_error(sq, ysq, solve_ols(sq, ysq).coefficients);
  CHECK(deg.degenerate);
}

TEST_CASE("hybrid LAR recovers an exactly sparse target") {
  const Index n = 50;
  const Matrix u = standard_points_from_sobol(3, n);
  const auto candidates = hyperbolic_index_set(3, 4, 1.0);  // 35 candidates
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    const double he2 = eval_univariate<double>(PolyFamily::HermiteProbabilist, 2, u(i, 0));
    const double he1 = u(i, 1);
    const double he3 = eval_univariate<double>(PolyFamily::HermiteProbabilist, 3, u(i, 2));
    y[i] = 2.0 * he2 - 1.5 * he1 + 0.7 * he3 + 0.25;
  }
  const HybridLarResult res = hybrid_lar(u, y, candidates, hermites(3));
  CHECK(res.model.cardinality() == 4);  // three actives + intercept
  for (Index j = 0; j < res.model.cardinality(); ++j) {
    const MultiIndexVec& a = res.model.indices[static_cast<std::size_t>(j)];
    double expect = 0.0;
    if (a == MultiIndexVec{0, 0, 0}) expect = 0.25;
    if (a == MultiIndexVec{2, 0, 0}) expect = 2.0;
    if (a == MultiIndexVec{0, 1, 0}) expect = -1.5;
    if (a == MultiIndexVec{0, 0, 3}) expect = 0.7;
    CHECK(res.model.coefficients[j] == doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("hybrid LAR degenerate inputs") {
  const Matrix u = standard_points_from_sobol(2, 12);
  const std::vector<MultiIndexVec> only_zero{{0, 0}};
  const Vector y = Vector::Constant(12, 1.25);
  const HybridLarResult res = hybrid_lar(u, y, only_zero, hermites(2));
  CHECK(res.model.cardinality() == 1);
  CHECK(res.model.coefficients[0] == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("full-length LAR path refit matches plain OLS") {
  const Index n = 40;
  const Matrix u = standard_points_from_sobol(2, n);
  const auto candidates = hyperbolic_index_set(2, 3, 1.0);  // 10 candidates
  Vector y(n);
  for (Index i = 0; i < n; ++i)
    y[i] = std::sin(u(i, 0)) + 0.3 * std::cos(2.0 * u(i, 1)) +
           0.01 * rng::normal(5100, static_cast<std::uint64_t>(i));
  const HybridLarResult res = hybrid_lar(u, y, candidates, hermites(2));
  CHECK(res.entry_order.size() == candidates.size() - 1);  // everything eventually enters

  const PceModel full = fit_pce_ols(u, y, candidates, hermites(2));
  // compare the final-prefix refit against the all-candidates OLS fit
  std::vector<MultiIndexVec> reordered;
  reordered.push_back(MultiIndexVec{0, 0});
  for (Index col : res.entry_order) reordered.push_back(candidates[static_cast<std::size_t>(col)]);
  const PceModel last = fit_pce_ols(u, y, reordered, hermites(2));
  const Matrix probe = standard_points_from_sobol(2, 64);
  const Vector pf = predict_standard(full, probe);
  const Vector pl = predict_standard(last, probe);
  for (Index i = 0; i < probe.rows(); ++i) CHECK(pl[i] == doctest::Approx(pf[i]).epsilon(1e-8));
}

TEST_CASE("hybrid LAR empirical error never exceeds the intercept-only error") {
  const Index n = 35;
  const Matrix u = standard_points_from_sobol(3, n);
  Vector y(n);
  for (Index i = 0; i < n; ++i)
    y[i] = 1.0 + 0.2 * u(i, 0) - 0.7 * u(i, 2) + 0.5 * rng::normal(333, static_cast<std::uint64_t>(i));
  const auto candidates = hyperbolic_index_set(3, 3, 1.0);
  const HybridLarResult res = hybrid_lar(u, y, candidates, hermites(3));
  const Vector fitted = predict_standard(res.model, u);
  const double err_model = (y - fitted).squaredNorm();
  const double err_intercept = (y.array() - y.mean()).square().sum();
  CHECK(err_model <= err_intercept * (1.0 + 1e-12));
}

TEST_CASE("parseval identity for an exactly representable target") {
  const Matrix u = standard_points_from_sobol(2, 60);
  Vector y(60);
  for (Index i = 0; i < 60; ++i) y[i] = 1.0 + 2.0 * u(i, 0) + 3.0 * u(i, 0) * u(i, 1);
  const PceModel model = fit_pce_ols(u, y, hyperbolic_index_set(2, 2, 1.0), hermites(2));
  double coef_var = 0.0;
  for (Index j = 0; j < model.cardinality(); ++j) {
    bool zero = true;
    for (int d : model.indices[static_cast<std::size_t>(j)]) zero = zero && d == 0;
    if (!zero) coef_var += model.coefficients[j] * model.coefficients[j];
  }
  // MC estimate of Var[y]
  const Index nmc = 1000000;
  double mean = 0.0, m2 = 0.0;
  for (Index i = 0; i < nmc; ++i) {
    const double a = rng::normal(777, 2 * static_cast<std::uint64_t>(i));
    const double b = rng::normal(777, 2 * static_cast<std::uint64_t>(i) + 1);
    const double v = 1.0 + 2.0 * a + 3.0 * a * b;
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double mc_var = m2 / static_cast<double>(nmc - 1);
  CHECK(coef_var == doctest::Approx(mc_var).epsilon(0.01));  // 13 = 4 + 9
}

TEST_CASE("grid selection favors exact quadratics and breaks ties to smaller bases") {
  const Matrix u = standard_points_from_sobol(2, 40);
  Vector y(40);
  for (Index i = 0; i < 40; ++i) y[i] = u(i, 0) * u(i, 0) + u(i, 1);
  PceConfig cfg;
  cfg.degree_grid = {1, 2, 3};
  cfg.q_grid = {0.5, 1.0};
  const PceSelection sel = select_pce(u, y, hermites(2), cfg);
  CHECK(sel.degree >= 2);
  const Matrix probe = standard_points_from_sobol(2, 2000);
  const Vector truth = probe.col(0).array().square() + probe.col(1).array();
  const ErrorReport err = generalization_error(truth, predict_standard(sel.model, probe));
  CHECK(err.relative < 1e-10);
  CHECK(sel.table.size() == 6);
}

TEST_CASE("serialization-grade determinism of prediction") {
  const Matrix u = standard_points_from_sobol(2, 25);
  Vector y = u.col(0) + u.col(1);
  const PceModel model = fit_pce_ols(u, y, hyperbolic_index_set(2, 1, 1.0), hermites(2));
  const Matrix probe = standard_points_from_sobol(2, 10);
  const Vector p1 = predict_standard(model, probe);
  const Vector p2 = predict_standard(model, probe);
  CHECK((p1 - p2).cwiseAbs().maxCoeff() == 0.0);
}
