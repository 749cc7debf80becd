#include "repulse/mingling.hpp"

#include "repulse/error.hpp"
#include "repulse/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace repulse {

KnnIndex compute_knn(const Dataset& data, const DistanceMetric& metric, std::size_t k, unsigned threads) {
  const std::size_t n = data.size();
  if (k == 0) throw InvalidInput("K must be positive");
  if (n <= k) {
    throw InvalidInput("kNN needs N > K (N=" + std::to_string(n) + ", K=" + std::to_string(k) + ")");
  }
  KnnIndex index{k, std::vector<std::size_t>(n * k)};
  parallel_for(n, threads, [&](std::size_t i) {
    std::vector<std::pair<double, std::size_t>> candidates;
    candidates.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) candidates.emplace_back(metric.between(data, i, j), j);
    }
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k), candidates.end());
    for (std::size_t r = 0; r < k; ++r) index.flat[i * k + r] = candidates[r].second;
  });
  return index;
}

MinglingTable compute_mingling(const KnnIndex& knn, std::span<const int> labels) {
  const std::size_t n = knn.size();
  if (labels.size() != n) throw InvalidInput("mingling needs one label per point");
  MinglingTable table;
  table.k = knn.k;
  table.levels.resize(n);
  table.values.resize(n);
  table.histogram.assign(knn.k + 1, 0.0);
  table.members.assign(knn.k + 1, {});
  std::vector<std::size_t> counts(knn.k + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    int differing = 0;
    for (std::size_t j : knn.neighbors(i)) differing += labels[j] != labels[i] ? 1 : 0;
    table.levels[i] = differing;
    table.values[i] = static_cast<double>(differing) / static_cast<double>(knn.k);
    ++counts[static_cast<std::size_t>(differing)];
    table.members[static_cast<std::size_t>(differing)].push_back(i);
  }
  for (std::size_t j = 0; j <= knn.k; ++j) {
    table.histogram[j] = static_cast<double>(counts[j]) / static_cast<double>(n);
  }
  return table;
}

MinglingTable compute_mingling(const Dataset& data, const DistanceMetric& metric, std::size_t k) {
  if (!data.has_labels()) throw InvalidInput("mingling index requires class labels");
  return compute_mingling(compute_knn(data, metric, k), data.labels());
}

std::vector<double> anneal_schedule(std::span<const double> histogram, std::uint64_t iteration, double constant) {
  if (histogram.empty()) throw InvalidInput("histogram is empty");
  if (iteration < 1) throw InvalidInput("annealing iteration starts at 1");
  if (!(constant > 0.0)) throw InvalidInput("schedule constant must be positive");
  double mass = 0.0;
  for (double h : histogram) {
    if (!(h >= 0.0) || !std::isfinite(h)) throw InvalidInput("histogram entries must be finite and non-negative");
    mass += h;
  }
  if (mass <= 0.0) throw InvalidInput("histogram has no mass");

  std::vector<double> pi(histogram.size(), 0.0);
  const double log_scale = std::log1p(constant * static_cast<double>(iteration));
  if (log_scale < 1e-12) {
    const auto top = std::max_element(histogram.begin(), histogram.end());
    pi[static_cast<std::size_t>(top - histogram.begin())] = 1.0;
    return pi;
  }
  const double exponent = 1.0 / log_scale;
  double top_log = -std::numeric_limits<double>::infinity();
  for (double h : histogram) {
    if (h > 0.0) top_log = std::max(top_log, exponent * std::log(h));
  }
  double total = 0.0;
  for (std::size_t j = 0; j < histogram.size(); ++j) {
    if (histogram[j] > 0.0) {
      pi[j] = std::exp(exponent * std::log(histogram[j]) - top_log);
      total += pi[j];
    }
  }
  for (double& p : pi) p /= total;
  return pi;
}

}  // namespace repulse
