#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace repulse {

using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Labels = std::vector<int>;

/// N x d feature matrix with optional class labels in {0..C-1}.
///
/// Immutable after construction; the constructor enforces N >= 1, d >= 1,
/// finite features and one non-negative label per row when labels are given.
class Dataset {
 public:
  explicit Dataset(FeatureMatrix features, std::optional<Labels> labels = std::nullopt);

  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(features_.rows()); }
  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(features_.cols()); }

  [[nodiscard]] const FeatureMatrix& features() const noexcept { return features_; }
  [[nodiscard]] bool has_labels() const noexcept { return labels_.has_value(); }
  /// Throws InvalidInput when the dataset is unlabeled.
  [[nodiscard]] const Labels& labels() const;
  /// max label + 1, or 0 when unlabeled.
  [[nodiscard]] int num_classes() const noexcept { return num_classes_; }

  [[nodiscard]] std::span<const double> point(std::size_t i) const noexcept {
    return {features_.data() + i * dim(), dim()};
  }

  /// Rows in the given order (labels carried along).
  [[nodiscard]] Dataset subset(std::span<const std::size_t> indices) const;

 private:
  FeatureMatrix features_;
  std::optional<Labels> labels_;
  int num_classes_ = 0;
};

enum class MetricKind { euclidean };

/// Distance on feature vectors. Every component that compares distances goes
/// through this type so that thresholds are evaluated on identical values.
struct DistanceMetric {
  MetricKind kind = MetricKind::euclidean;

  [[nodiscard]] double operator()(std::span<const double> a, std::span<const double> b) const noexcept;

  [[nodiscard]] double between(const Dataset& data, std::size_t i, std::size_t j) const noexcept {
    return (*this)(data.point(i), data.point(j));
  }
};

}  // namespace repulse
