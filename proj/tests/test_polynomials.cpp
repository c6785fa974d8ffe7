#include "uq/polynomials.hpp"

#include "uq/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace uq;

TEST_CASE("hermite values") {
  CHECK(eval_univariate<double>(PolyFamily::HermiteProbabilist, 0, 3.7) == doctest::Approx(1.0));
  CHECK(eval_univariate<double>(PolyFamily::HermiteProbabilist, 1, 2.0) == doctest::Approx(2.0));
  CHECK(eval_univariate<double>(PolyFamily::HermiteProbabilist, 2, 0.0) ==
        doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("legendre values") {
  CHECK(eval_univariate<double>(PolyFamily::Legendre, 1, 1.0) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(eval_univariate<double>(PolyFamily::Legendre, 0, -0.3) == doctest::Approx(1.0));
}

TEST_CASE("multivariate tensorization") {
  const std::vector<PolyFamily> fams{PolyFamily::HermiteProbabilist, PolyFamily::HermiteProbabilist};
  Vector x(2);
  x << 1.3, -0.6;
  CHECK(eval_multivariate(fams, {0, 0}, x) == doctest::Approx(1.0));
  CHECK(eval_multivariate(fams, {1, 1}, x) == doctest::Approx(1.3 * -0.6).epsilon(1e-14));
  Vector x2(2);
  x2 << 0.0, 7.0;
  CHECK(eval_multivariate(fams, {2, 0}, x2) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(eval_multivariate(fams, {1}, x), std::invalid_argument);
}

TEST_CASE("design matrix rows and degenerate shapes") {
  const std::vector<PolyFamily> fams{PolyFamily::HermiteProbabilist};
  Matrix pts(1, 1);
  pts << 0.0;
  const Matrix a = design_matrix(fams, {{0}, {1}, {2}}, pts);
  CHECK(a(0, 0) == doctest::Approx(1.0));
  CHECK(a(0, 1) == doctest::Approx(0.0));
  CHECK(a(0, 2) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));

  Matrix pts3(3, 2);
  pts3.setRandom();
  const std::vector<PolyFamily> fams2{PolyFamily::HermiteProbabilist, PolyFamily::Legendre};
  const Matrix ones = design_matrix(fams2, {{0, 0}}, pts3);
  CHECK(ones.rows() == 3);
  CHECK((ones.array() == 1.0).all());

  const Matrix empty = design_matrix(fams2, {}, pts3);
  CHECK(empty.rows() == 3);
  CHECK(empty.cols() == 0);
}

TEST_CASE("quadrature orthonormality to 1e-10 up to degree 20") {
  for (PolyFamily fam : {PolyFamily::HermiteProbabilist, PolyFamily::Legendre}) {
    const GaussRule rule = gauss_rule(fam, 64);
    CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-13));
    for (int j = 0; j <= 20; ++j) {
      for (int k = j; k <= 20; ++k) {
        double acc = 0.0;
        for (Index q = 0; q < rule.nodes.size(); ++q)
          acc += rule.weights[q] * eval_univariate<double>(fam, j, rule.nodes[q]) *
                 eval_univariate<double>(fam, k, rule.nodes[q]);
        CHECK(acc == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
      }
    }
  }
}

TEST_CASE("monte carlo orthonormality, degree <= 5") {
  // Entries involving Hermite degrees 4-5 carry heavy-tailed fourth moments
  // (E[psi_5^4] = 4653), so the estimator's own standard error at n = 1e6 can
  // exceed a flat 0.01; the bound widens to 5 estimated sigma where needed.
  const Index n = 1000000;
  for (PolyFamily fam : {PolyFamily::HermiteProbabilist, PolyFamily::Legendre}) {
    Vector x(n);
    for (Index i = 0; i < n; ++i) {
      const double u = rng::uniform(2024, static_cast<std::uint64_t>(i));
      x[i] = fam == PolyFamily::HermiteProbabilist ? rng::normal(2024, static_cast<std::uint64_t>(i))
                                                   : 2.0 * u - 1.0;
    }
    const Matrix psi = basis_matrix(fam, 5, x);
    const Matrix gram = psi.transpose() * psi / static_cast<double>(n);
    for (Index j = 0; j < 6; ++j) {
      for (Index k = 0; k < 6; ++k) {
        const Vector prod = psi.col(j).cwiseProduct(psi.col(k));
        const double second = prod.squaredNorm() / static_cast<double>(n);
        const double sigma = std::sqrt(std::max(0.0, second - gram(j, k) * gram(j, k)) /
                                       static_cast<double>(n));
        const double bound = std::max(0.01, 5.0 * sigma);
        CHECK(std::abs(gram(j, k) - (j == k ? 1.0 : 0.0)) <= bound);
      }
    }
  }
}

TEST_CASE("recurrence matches extended precision at degree 20") {
  for (PolyFamily fam : {PolyFamily::HermiteProbabilist, PolyFamily::Legendre}) {
    const double x = fam == PolyFamily::Legendre ? 0.73 : 3.0;
    const double d = eval_univariate<double>(fam, 20, x);
    const long double ref = eval_univariate<long double>(fam, 20, static_cast<long double>(x));
    CHECK(std::isfinite(d));
    CHECK(d == doctest::Approx(static_cast<double>(ref)).epsilon(1e-9));
  }
}

TEST_CASE("basis_matrix agrees with pointwise evaluation") {
  Vector pts(4);
  pts << -1.7, 0.0, 0.4, 2.2;
  const Matrix psi = basis_matrix(PolyFamily::HermiteProbabilist, 7, pts);
  for (Index i = 0; i < pts.size(); ++i)
    for (int k = 0; k <= 7; ++k)
      CHECK(psi(i, k) ==
            doctest::Approx(eval_univariate<double>(PolyFamily::HermiteProbabilist, k, pts[i]))
                .epsilon(1e-13));
}

TEST_CASE("degree limits enforced") {
  CHECK_THROWS_AS(eval_univariate<double>(PolyFamily::Legendre, -1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(eval_univariate<double>(PolyFamily::Legendre, kMaxPolyDegree + 1, 0.0),
                  std::invalid_argument);
}
