#pragma once

#include "repulse/dataset.hpp"
#include "repulse/mingling.hpp"
#include "repulse/mlp.hpp"
#include "repulse/sampling.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

namespace repulse {

/// Axis-aligned box of the synthetic sine task.
struct SineBox {
  static constexpr double x1_min = 0.0;
  static constexpr double x1_max = 2.0 * std::numbers::pi;
  static constexpr double x2_min = -2.0;
  static constexpr double x2_max = 2.0;
};

/// Two-class 2-D data: x uniform in the sine box, label 1 iff
/// x2 > sin(x1) + noise with noise ~ N(0, noise_sd^2).
[[nodiscard]] Dataset gen_sine_dataset(std::size_t n, double noise_sd, std::uint64_t seed);

/// Noiseless ground-truth class of the sine task.
[[nodiscard]] inline int sine_truth(double x1, double x2) noexcept { return x2 > std::sin(x1) ? 1 : 0; }

using PointClassifier = std::function<int(double x1, double x2)>;

/// Fraction of resolution x resolution cell centers over the sine box where
/// `classify` disagrees with sine_truth.
[[nodiscard]] double boundary_error(const PointClassifier& classify, std::size_t resolution);
/// Same, with the model's argmax class. Throws InvalidInput for non-2-D models.
[[nodiscard]] double boundary_error(const MlpModel& model, std::size_t resolution);

struct GridCell {
  double x1 = 0.0;
  double x2 = 0.0;
  int predicted = 0;
  int truth = 0;
};
[[nodiscard]] std::vector<GridCell> decision_grid(const MlpModel& model, std::size_t resolution);

/// Constant rate, optionally multiplied by `decay_factor` every `decay_every` steps.
struct LearningRate {
  double initial = 0.1;
  std::size_t decay_every = 0;
  double decay_factor = 1.0;

  [[nodiscard]] double at(std::size_t iteration) const noexcept;
};

struct TrainConfig {
  LearningRate learning_rate;
  std::size_t iterations = 200;
  std::size_t eval_every = 10;
  std::size_t hidden = 5;
  SamplerConfig sampler;
  std::uint64_t seed = 0;
  /// Draw one batch up front and reuse it for every step.
  bool single_batch = false;
};

struct MetricsRow {
  std::size_t iteration = 0;
  double loss = 0.0;        // full training-set cross-entropy
  double test_error = 0.0;  // misclassification rate on the test set
  double sample_time_ns = 0.0;  // mean draw time since the previous row
};

struct Metrics {
  std::vector<MetricsRow> rows;
  std::vector<std::size_t> skipped_iterations;  // empty batches
};

struct TrainResult {
  MlpModel model;
  Metrics metrics;
};

/// Plain SGD: theta <- theta - rate(t) * grad over the batch drawn at step t.
///
/// Initial weights use derive_seed(seed, 0); the batch of step t (1-based)
/// uses derive_seed(derive_seed(seed, 1), t). Anneal PDS receives t as its
/// iteration. When `mingling` is null and the sampler needs one, it is
/// computed from the training data with sampler.knn_k neighbors.
[[nodiscard]] TrainResult train(const Dataset& train_data, const Dataset& test_data, const TrainConfig& config,
                                const MinglingTable* mingling = nullptr);

}  // namespace repulse
