#pragma once

#include "repulse/dataset.hpp"
#include "repulse/mingling.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace repulse {

/// Distinct point indices in draw order. `indices.size()` may fall short of
/// `requested` when a dart-throwing sampler hits its rejection cap.
struct MiniBatch {
  std::vector<std::size_t> indices;
  std::size_t requested = 0;

  [[nodiscard]] std::size_t accepted() const noexcept { return indices.size(); }
  [[nodiscard]] bool partial() const noexcept { return indices.size() < requested; }
};

enum class SamplerMethod { random, vanilla_pds, easy_pds, dense_pds, anneal_pds, kdpp_bruteforce };

[[nodiscard]] std::string_view to_string(SamplerMethod method) noexcept;
/// Throws InvalidInput on unknown names.
[[nodiscard]] SamplerMethod parse_sampler_method(std::string_view name);
[[nodiscard]] bool needs_mingling(SamplerMethod method) noexcept;

/// Consecutive-rejection cap used when none is configured.
[[nodiscard]] constexpr std::size_t default_max_trials(std::size_t batch_size) noexcept { return 100 * batch_size; }

/// Sampler parameters. An empty `radius` means "auto": half the median
/// pairwise distance over a subsample of min(N, 1000) points.
struct SamplerConfig {
  SamplerMethod method = SamplerMethod::random;
  std::optional<double> radius;
  std::size_t batch_size = 1;
  std::optional<std::size_t> max_trials;
  std::uint64_t seed = 0;
  std::optional<std::vector<double>> pi;  // Dense PDS level weights; uniform when empty
  std::size_t knn_k = 5;
  double anneal_constant = 0.01;
};

/// Half the median of all pairwise distances among a seeded uniform subsample
/// of min(subsample, N) points. Returns 0 when fewer than two points are drawn.
[[nodiscard]] double radius_heuristic(const Dataset& data, const DistanceMetric& metric, std::size_t subsample,
                                      std::uint64_t seed);

/// Uniform k-subset in uniformly random order (sparse Fisher-Yates, O(k)).
[[nodiscard]] MiniBatch sample_random(std::size_t n, std::size_t k, std::uint64_t seed);
[[nodiscard]] MiniBatch sample_random(const Dataset& data, std::size_t k, std::uint64_t seed);

/// Dart throwing: candidates drawn uniformly with replacement from all N;
/// a candidate is rejected when it is already accepted or lies strictly
/// closer than `radius` to an accepted point. Stops after k acceptances or
/// `max_trials` consecutive rejections.
[[nodiscard]] MiniBatch sample_vanilla_pds(const Dataset& data, const DistanceMetric& metric, double radius,
                                           std::size_t k, std::size_t max_trials, std::uint64_t seed);

/// Dart throwing where each accepted point owns a disk of radius r0 when its
/// mingling index is 0 and no disk otherwise.
[[nodiscard]] MiniBatch sample_easy_pds(const Dataset& data, const DistanceMetric& metric, double r0,
                                        const MinglingTable& mingling, std::size_t k, std::size_t max_trials,
                                        std::uint64_t seed);

/// Level-first dart throwing: draw a mingling level from pi renormalized over
/// levels that still hold unaccepted points, then a uniform unaccepted point of
/// that level, then apply the radius test. Throws SamplerExhausted when no
/// level with positive weight holds any point at the start. A level pool
/// running dry mid-batch ends the batch early.
[[nodiscard]] MiniBatch sample_dense_pds(const Dataset& data, const DistanceMetric& metric, double radius,
                                         const MinglingTable& mingling, std::span<const double> pi, std::size_t k,
                                         std::size_t max_trials, std::uint64_t seed);

/// Dense PDS with pi = anneal_schedule(mingling.histogram, iteration).
[[nodiscard]] MiniBatch sample_anneal_pds(const Dataset& data, const DistanceMetric& metric, double radius,
                                          const MinglingTable& mingling, std::uint64_t iteration, std::size_t k,
                                          std::size_t max_trials, std::uint64_t seed, double anneal_constant = 0.01);

/// Exact k-DPP over a small ground set by enumerating every k-subset.
///
/// The subset distribution is built once; draws are then O(log C(N, k)).
class KdppEnumerator {
 public:
  static constexpr std::size_t max_ground_set = 20;

  KdppEnumerator(const Eigen::MatrixXd& kernel, std::size_t k);

  [[nodiscard]] MiniBatch draw(std::uint64_t seed) const;

  [[nodiscard]] const std::vector<std::vector<std::size_t>>& subsets() const noexcept { return subsets_; }
  /// det(C_S) / sum_T det(C_T), aligned with subsets().
  [[nodiscard]] const std::vector<double>& probabilities() const noexcept { return probabilities_; }

 private:
  std::size_t k_;
  std::vector<std::vector<std::size_t>> subsets_;
  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
};

[[nodiscard]] MiniBatch sample_kdpp_bruteforce(const Eigen::MatrixXd& kernel, std::size_t k, std::uint64_t seed);

/// Gaussian similarity kernel exp(-||x - y||^2 / (2 bandwidth^2)) over a dataset.
[[nodiscard]] Eigen::MatrixXd gaussian_kernel(const Dataset& data, const DistanceMetric& metric, double bandwidth);

/// A sampler bound to a dataset with its radius and level weights resolved.
///
/// Holds references to the dataset and mingling table; both must outlive it.
class Sampler {
 public:
  Sampler(const Dataset& data, const SamplerConfig& config, const MinglingTable* mingling = nullptr,
          DistanceMetric metric = {});

  /// Draws one batch. `iteration` (>= 1) drives the Anneal PDS schedule and is
  /// ignored by the other methods.
  [[nodiscard]] MiniBatch draw(std::uint64_t seed, std::uint64_t iteration = 1) const;

  [[nodiscard]] SamplerMethod method() const noexcept { return config_.method; }
  [[nodiscard]] double radius() const noexcept { return radius_; }
  [[nodiscard]] std::size_t batch_size() const noexcept { return config_.batch_size; }
  [[nodiscard]] std::size_t max_trials() const noexcept { return max_trials_; }
  [[nodiscard]] const std::vector<double>& pi() const noexcept { return pi_; }
  [[nodiscard]] const SamplerConfig& config() const noexcept { return config_; }

 private:
  const Dataset* data_;
  const MinglingTable* mingling_;
  DistanceMetric metric_;
  SamplerConfig config_;
  double radius_ = 0.0;
  std::size_t max_trials_ = 0;
  std::vector<double> pi_;
  std::optional<KdppEnumerator> kdpp_;
};

}  // namespace repulse
