#include "uq/metrics.hpp"

#include "uq/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uq {

double semi_norm(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("semi_norm: length mismatch");
  if (a.size() == 0) throw std::invalid_argument("semi_norm: empty input");
  return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

double empirical_variance(const Vector& y) {
  if (y.size() < 2) throw std::invalid_argument("empirical_variance: need at least two points");
  const double mean = y.mean();
  return (y.array() - mean).square().sum() / static_cast<double>(y.size() - 1);
}

namespace {

ErrorReport make_report(const Vector& reference, const Vector& prediction) {
  ErrorReport rep;
  rep.n_points = reference.size();
  const Vector diff = reference - prediction;
  rep.absolute = diff.squaredNorm() / static_cast<double>(reference.size());
  rep.mean_signed_residual = diff.mean();
  if (reference.size() >= 2) {
    const double var = empirical_variance(reference);
    if (var > 0.0) {
      rep.relative = rep.absolute / var;
    } else {
      rep.relative_defined = false;
    }
  } else {
    rep.relative_defined = false;
  }
  return rep;
}

}  // namespace

ErrorReport generalization_error(const Vector& reference, const Vector& prediction) {
  if (reference.size() != prediction.size())
    throw std::invalid_argument("generalization_error: length mismatch");
  if (reference.size() < 2) throw std::invalid_argument("generalization_error: need >= 2 points");
  return make_report(reference, prediction);
}

ErrorReport conditional_generalization_error(const Vector& reference, const Vector& prediction,
                                             double threshold) {
  if (reference.size() != prediction.size())
    throw std::invalid_argument("conditional_generalization_error: length mismatch");
  std::vector<Index> keep;
  for (Index i = 0; i < reference.size(); ++i)
    if (reference[i] >= threshold) keep.push_back(i);
  if (keep.empty())
    throw std::domain_error("conditional_generalization_error: no exceedances of threshold");
  Vector ref(static_cast<Index>(keep.size())), pred(static_cast<Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    ref[static_cast<Index>(i)] = reference[keep[i]];
    pred[static_cast<Index>(i)] = prediction[keep[i]];
  }
  ErrorReport rep = make_report(ref, pred);
  rep.condition = "response >= " + std::to_string(threshold);
  return rep;
}

std::vector<int> kfold_assignment(Index n, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("kfold: k must be >= 2");
  if (n < k) throw std::invalid_argument("kfold: fewer points than folds");
  const std::vector<Index> order = shuffled_indices(n, seed);
  std::vector<int> fold(static_cast<std::size_t>(n));
  // contiguous blocks of the shuffled order; remainder spread over the first folds
  const Index base = n / k;
  const Index extra = n % k;
  Index pos = 0;
  for (int f = 0; f < k; ++f) {
    const Index size = base + (f < extra ? 1 : 0);
    for (Index i = 0; i < size; ++i) fold[static_cast<std::size_t>(order[static_cast<std::size_t>(pos++)])] = f;
  }
  return fold;
}

CvScores kfold_cv(const Trainer& trainer, const Matrix& points, const Vector& responses, int k,
                  std::uint64_t seed) {
  const Index n = points.rows();
  if (responses.size() != n) throw std::invalid_argument("kfold_cv: size mismatch");
  const std::vector<int> fold = kfold_assignment(n, k, seed);

  CvScores out;
  std::vector<double> sums;
  std::vector<int> counts;
  bool trainer_failed = false;
  for (int f = 0; f < k; ++f) {
    std::vector<Index> train, test;
    for (Index i = 0; i < n; ++i) (fold[static_cast<std::size_t>(i)] == f ? test : train).push_back(i);

    Matrix xtr(static_cast<Index>(train.size()), points.cols());
    Vector ytr(static_cast<Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i) {
      xtr.row(static_cast<Index>(i)) = points.row(train[i]);
      ytr[static_cast<Index>(i)] = responses[train[i]];
    }
    Matrix xte(static_cast<Index>(test.size()), points.cols());
    Vector yte(static_cast<Index>(test.size()));
    for (std::size_t i = 0; i < test.size(); ++i) {
      xte.row(static_cast<Index>(i)) = points.row(test[i]);
      yte[static_cast<Index>(i)] = responses[test[i]];
    }

    std::vector<Predictor> candidates;
    try {
      candidates = trainer(xtr, ytr);
    } catch (const std::exception&) {
      trainer_failed = true;
      continue;
    }
    if (sums.empty()) {
      sums.assign(candidates.size(), 0.0);
      counts.assign(candidates.size(), 0);
      out.failed.assign(candidates.size(), false);
    }
    if (candidates.size() != sums.size())
      throw std::logic_error("kfold_cv: trainer returned inconsistent candidate counts");

    double var = yte.size() >= 2 ? empirical_variance(yte) : 0.0;
    bool relative = var > 0.0;
    if (!relative) out.variance_fallback = true;

    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (out.failed[c]) continue;
      try {
        const Vector pred = candidates[c](xte);
        double err = (yte - pred).squaredNorm() / static_cast<double>(yte.size());
        if (relative) err /= var;
        sums[c] += err;
        counts[c] += 1;
      } catch (const std::exception&) {
        out.failed[c] = true;
      }
    }
  }

  out.mean_relative_error.assign(sums.size(), 0.0);
  for (std::size_t c = 0; c < sums.size(); ++c) {
    if (trainer_failed || counts[c] == 0) out.failed[c] = true;
    if (!out.failed[c]) out.mean_relative_error[c] = sums[c] / counts[c];
  }
  return out;
}

double kde_bandwidth(const Vector& samples) {
  const Index n = samples.size();
  if (n < 2) throw std::invalid_argument("kde: need at least two samples");
  const double sd = std::sqrt(empirical_variance(samples));
  std::vector<double> sorted(samples.data(), samples.data() + n);
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(n - 1);
    const Index lo = static_cast<Index>(pos);
    const double frac = pos - static_cast<double>(lo);
    const Index hi = std::min(lo + 1, n - 1);
    return sorted[static_cast<std::size_t>(lo)] * (1.0 - frac) + sorted[static_cast<std::size_t>(hi)] * frac;
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) throw std::invalid_argument("kde: sample has zero spread");
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

Vector kde_grid(const Vector& samples, Index points) {
  const double h = kde_bandwidth(samples);
  const double lo = samples.minCoeff() - 5.0 * h;
  const double hi = samples.maxCoeff() + 5.0 * h;
  return Vector::LinSpaced(points, lo, hi);
}

Vector kde(const Vector& samples, const Vector& grid) {
  const double h = kde_bandwidth(samples);
  const Index n = samples.size();
  const double norm = 1.0 / (static_cast<double>(n) * h * std::sqrt(2.0 * 3.14159265358979323846));
  Vector density = Vector::Zero(grid.size());

  // Kernel mass beyond 8 bandwidths is below 1e-14; skip it via a sorted
  // two-sided window so large samples stay affordable.
  std::vector<double> sorted(samples.data(), samples.data() + n);
  std::sort(sorted.begin(), sorted.end());
  const double cut = 8.0 * h;
  for (Index g = 0; g < grid.size(); ++g) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), grid[g] - cut);
    const auto hi = std::upper_bound(lo, sorted.end(), grid[g] + cut);
    double acc = 0.0;
    for (auto it = lo; it != hi; ++it) {
      const double t = (grid[g] - *it) / h;
      acc += std::exp(-0.5 * t * t);
    }
    density[g] = norm * acc;
  }
  return density;
}

}  // namespace uq
