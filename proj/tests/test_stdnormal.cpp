#include "uq/stdnormal.hpp"

#include <doctest.h>

#include <cmath>

using namespace uq;

TEST_CASE("normal cdf reference values") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(norm_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
  CHECK(norm_cdf(-3.0) == doctest::Approx(1.3498980316300946e-3).epsilon(1e-13));
  CHECK(norm_cdf(-6.0) == doctest::Approx(9.865876450376946e-10).epsilon(1e-12));
}

TEST_CASE("quantile inverts cdf over the bulk and the lower tail") {
  // the upper tail is checked through its lower-tail representation, where
  // p = Phi(x) keeps full relative precision
  for (double x = -8.0; x <= 0.0; x += 0.125) {
    const double p = norm_cdf(x);
    CHECK(norm_ppf(p) == doctest::Approx(x).epsilon(1e-11));
    // beyond ~4.5 sigma the spacing of doubles near 1 dominates 1-p itself
    if (x >= -4.5) CHECK(norm_ppf(1.0 - p) == doctest::Approx(-x).epsilon(1e-11));
  }
  for (double x = 0.125; x <= 4.5; x += 0.125)
    CHECK(norm_ppf(norm_cdf(x)) == doctest::Approx(x).epsilon(1e-11));
}

TEST_CASE("quantile endpoint behavior") {
  CHECK(std::isinf(norm_ppf(0.0)));
  CHECK(std::isinf(norm_ppf(1.0)));
  CHECK(norm_ppf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(norm_ppf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
}
