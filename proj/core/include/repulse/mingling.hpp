#pragma once

#include "repulse/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace repulse {

/// Exact K nearest neighbors of every point, ascending by distance, ties to the lower index.
struct KnnIndex {
  std::size_t k = 0;
  std::vector<std::size_t> flat;  // N * k, row-major

  [[nodiscard]] std::size_t size() const noexcept { return k == 0 ? 0 : flat.size() / k; }
  [[nodiscard]] std::span<const std::size_t> neighbors(std::size_t i) const noexcept {
    return {flat.data() + i * k, k};
  }
};

/// O(N^2) exact search. `threads` == 0 uses the process-wide thread budget;
/// the result does not depend on the thread count.
[[nodiscard]] KnnIndex compute_knn(const Dataset& data, const DistanceMetric& metric, std::size_t k,
                                   unsigned threads = 0);

/// Per-point mingling index and the level histogram.
///
/// A point's level is the number of its K neighbors carrying a different
/// label, so its mingling value is level / K. `histogram[j]` is the fraction
/// of points at level j (K + 1 entries).
struct MinglingTable {
  std::size_t k = 0;
  std::vector<int> levels;
  std::vector<double> values;
  std::vector<double> histogram;
  std::vector<std::vector<std::size_t>> members;  // point indices per level, ascending

  [[nodiscard]] std::size_t size() const noexcept { return levels.size(); }
  [[nodiscard]] std::size_t level_count() const noexcept { return k + 1; }
};

[[nodiscard]] MinglingTable compute_mingling(const KnnIndex& knn, std::span<const int> labels);

/// Convenience: kNN + mingling on a labeled dataset. Throws InvalidInput when unlabeled.
[[nodiscard]] MinglingTable compute_mingling(const Dataset& data, const DistanceMetric& metric, std::size_t k);

/// Annealed categorical weights over mingling levels: pi_n ∝ h^(1 / ln(c n + 1)).
///
/// Computed in log space so the large early exponents (~100 at n = 1) do not
/// underflow. Zero entries of h stay zero. When ln(c n + 1) < 1e-12 the
/// limit, a point mass on argmax h (lowest index on ties), is returned.
[[nodiscard]] std::vector<double> anneal_schedule(std::span<const double> histogram, std::uint64_t iteration,
                                                  double constant = 0.01);

}  // namespace repulse
