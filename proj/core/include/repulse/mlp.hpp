#pragma once

#include "repulse/dataset.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>

namespace repulse {

/// One-hidden-layer tanh network with a softmax output.
///
/// Flattened parameter layout (used by grad() and the variance tools):
/// w1 row-major (d x H), b1, w2 row-major (H x C), b2.
struct MlpModel {
  Eigen::MatrixXd w1;  // d x H
  Eigen::VectorXd b1;  // H
  Eigen::MatrixXd w2;  // H x C
  Eigen::VectorXd b2;  // C

  [[nodiscard]] static MlpModel zeros(std::size_t inputs, std::size_t hidden, std::size_t classes);
  /// Weights uniform in +-1/sqrt(fan_in), biases zero.
  [[nodiscard]] static MlpModel random(std::size_t inputs, std::size_t hidden, std::size_t classes,
                                       std::uint64_t seed);

  [[nodiscard]] std::size_t inputs() const noexcept { return static_cast<std::size_t>(w1.rows()); }
  [[nodiscard]] std::size_t hidden() const noexcept { return static_cast<std::size_t>(w1.cols()); }
  [[nodiscard]] std::size_t classes() const noexcept { return static_cast<std::size_t>(w2.cols()); }
  [[nodiscard]] std::size_t parameter_count() const noexcept;

  [[nodiscard]] Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);
};

/// Row-wise class probabilities for a batch of inputs (n x C).
[[nodiscard]] Eigen::MatrixXd forward(const MlpModel& model, const FeatureMatrix& inputs);

/// Mean cross-entropy over the batch.
[[nodiscard]] double loss(const MlpModel& model, const FeatureMatrix& inputs, std::span<const int> labels);

/// Mean cross-entropy gradient over a non-empty batch, flattened.
[[nodiscard]] Eigen::VectorXd grad(const MlpModel& model, const FeatureMatrix& inputs, std::span<const int> labels);

/// Gradient of every point of a labeled dataset, one row per point (N x P).
[[nodiscard]] Eigen::MatrixXd per_example_gradients(const MlpModel& model, const Dataset& data);

[[nodiscard]] std::vector<int> predict(const MlpModel& model, const FeatureMatrix& inputs);

/// Fraction of misclassified points of a labeled dataset.
[[nodiscard]] double error_rate(const MlpModel& model, const Dataset& data);

}  // namespace repulse
