#include "repulse/dataset.hpp"

#include "repulse/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace repulse {

Dataset::Dataset(FeatureMatrix features, std::optional<Labels> labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.rows() < 1) throw InvalidInput("dataset must contain at least one point");
  if (features_.cols() < 1) throw InvalidInput("dataset must have at least one feature");
  if (!features_.allFinite()) throw InvalidInput("dataset features must be finite");
  if (labels_) {
    if (labels_->size() != size()) {
      throw InvalidInput("label count " + std::to_string(labels_->size()) + " does not match point count " +
                         std::to_string(size()));
    }
    for (int label : *labels_) {
      if (label < 0) throw InvalidInput("labels must be non-negative");
      num_classes_ = std::max(num_classes_, label + 1);
    }
  }
}

const Labels& Dataset::labels() const {
  if (!labels_) throw InvalidInput("dataset has no labels");
  return *labels_;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  FeatureMatrix rows(static_cast<Eigen::Index>(indices.size()), features_.cols());
  std::optional<Labels> picked;
  if (labels_) picked.emplace();
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= size()) throw InvalidInput("subset index out of range");
    rows.row(static_cast<Eigen::Index>(r)) = features_.row(static_cast<Eigen::Index>(indices[r]));
    if (picked) picked->push_back((*labels_)[indices[r]]);
  }
  return Dataset(std::move(rows), std::move(picked));
}

double DistanceMetric::operator()(std::span<const double> a, std::span<const double> b) const noexcept {
  double sum = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double diff = a[c] - b[c];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

}  // namespace repulse
