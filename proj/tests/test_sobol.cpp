#include "uq/sobol.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace uq;

namespace {

// radical-inverse (van der Corput) value of index i in base 2
double van_der_corput(std::uint32_t i) {
  double f = 0.5, x = 0.0;
  while (i) {
    if (i & 1u) x += f;
    i >>= 1;
    f *= 0.5;
  }
  return x;
}

}  // namespace

TEST_CASE("first dimension reproduces the reference generator ordering") {
  const Matrix pts = sobol_design(1, 3);
  CHECK(pts(0, 0) == doctest::Approx(0.5));
  CHECK(pts(1, 0) == doctest::Approx(0.75));
  CHECK(pts(2, 0) == doctest::Approx(0.25));
}

TEST_CASE("first point of any dimension is the half-diagonal") {
  const Matrix pts = sobol_design(2, 1);
  CHECK(pts(0, 0) == doctest::Approx(0.5));
  CHECK(pts(0, 1) == doctest::Approx(0.5));
  const Matrix big = sobol_design(53, 1);
  for (Index d = 0; d < 53; ++d) CHECK(big(0, d) == doctest::Approx(0.5));
}

TEST_CASE("dimension errors") {
  CHECK_THROWS_AS(sobol_design(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(sobol_design(kSobolMaxDimension + 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(sobol_design(2, 0), std::invalid_argument);
}

TEST_CASE("1-D points are the dyadic van der Corput set") {
  // With the zero point skipped and Gray ordering, points 1..2^k-1 fill the
  // dyadic set {j/2^k : j=1..2^k-1}; the 2^k-th point refines one level down.
  for (int k = 3; k <= 10; ++k) {
    const Index n = Index(1) << k;
    const Matrix pts = sobol_design(1, n);
    std::vector<double> got(pts.col(0).data(), pts.col(0).data() + n - 1);
    std::sort(got.begin(), got.end());
    for (Index j = 1; j < n; ++j)
      CHECK(got[static_cast<std::size_t>(j - 1)] ==
            doctest::Approx(static_cast<double>(j) / static_cast<double>(n)).epsilon(1e-15));
    const double last = pts(n - 1, 0);
    CHECK(last * static_cast<double>(2 * n) == doctest::Approx(std::round(last * 2 * n)));
  }
  // the same multiset as the Gray-ordered radical inverse oracle
  const Matrix pts = sobol_design(1, 100);
  std::vector<double> got(pts.col(0).data(), pts.col(0).data() + 100);
  std::vector<double> want;
  for (std::uint32_t i = 1; i <= 100; ++i) want.push_back(van_der_corput(i ^ (i >> 1)));
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-15));
}

TEST_CASE("every dimension is a base-2 net on aligned blocks") {
  // Points with indices [m 2^k, (m+1) 2^k) hit each dyadic cell j/2^k exactly
  // once, in every dimension; this pins the direction-number structure.
  const int k = 6;
  const Index block = Index(1) << k;
  const Matrix pts = sobol_design(kSobolMaxDimension, 3 * block);
  for (Index d = 0; d < kSobolMaxDimension; ++d) {
    for (Index blk = 1; blk <= 2; ++blk) {  // blocks not containing the skipped zero
      std::vector<int> cell(static_cast<std::size_t>(block), 0);
      for (Index i = blk * block; i < (blk + 1) * block; ++i) {
        const auto c = static_cast<std::size_t>(pts(i - 1, d) * static_cast<double>(block));
        ++cell[c];
      }
      CHECK(*std::min_element(cell.begin(), cell.end()) == 1);
      CHECK(*std::max_element(cell.begin(), cell.end()) == 1);
    }
  }
}

TEST_CASE("leading-dimension pairs decorrelate at modest sample sizes") {
  const Index n = 4096;
  const Matrix pts = sobol_design(10, n);
  for (Index a = 0; a < 10; ++a) {
    CHECK(pts.col(a).mean() == doctest::Approx(0.5).epsilon(1e-3));
    for (Index b = a + 1; b < 10; ++b) {
      const double cross = (pts.col(a).array() * pts.col(b).array()).mean();
      CHECK(cross == doctest::Approx(0.25).epsilon(2e-2));
    }
  }
}
