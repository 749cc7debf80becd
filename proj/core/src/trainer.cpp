#include "repulse/trainer.hpp"

#include "repulse/error.hpp"
#include "repulse/rng.hpp"

#include <chrono>
#include <cmath>

namespace repulse {

Dataset gen_sine_dataset(std::size_t n, double noise_sd, std::uint64_t seed) {
  if (n < 2) throw InvalidInput("sine dataset needs at least 2 points");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw InvalidInput("noise sd must be finite and non-negative");
  Rng rng(seed);
  FeatureMatrix features(static_cast<Eigen::Index>(n), 2);
  Labels labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = rng.uniform(SineBox::x1_min, SineBox::x1_max);
    const double x2 = rng.uniform(SineBox::x2_min, SineBox::x2_max);
    const double noise = noise_sd * rng.normal();
    features(static_cast<Eigen::Index>(i), 0) = x1;
    features(static_cast<Eigen::Index>(i), 1) = x2;
    labels[i] = x2 > std::sin(x1) + noise ? 1 : 0;
  }
  return Dataset(std::move(features), std::move(labels));
}

double boundary_error(const PointClassifier& classify, std::size_t resolution) {
  if (resolution == 0) throw InvalidInput("grid resolution must be positive");
  const double step1 = (SineBox::x1_max - SineBox::x1_min) / static_cast<double>(resolution);
  const double step2 = (SineBox::x2_max - SineBox::x2_min) / static_cast<double>(resolution);
  std::size_t wrong = 0;
  for (std::size_t a = 0; a < resolution; ++a) {
    const double x1 = SineBox::x1_min + (static_cast<double>(a) + 0.5) * step1;
    for (std::size_t b = 0; b < resolution; ++b) {
      const double x2 = SineBox::x2_min + (static_cast<double>(b) + 0.5) * step2;
      wrong += classify(x1, x2) != sine_truth(x1, x2) ? 1 : 0;
    }
  }
  return static_cast<double>(wrong) / static_cast<double>(resolution * resolution);
}

std::vector<GridCell> decision_grid(const MlpModel& model, std::size_t resolution) {
  if (model.inputs() != 2) throw InvalidInput("decision grids need a 2-D model");
  if (resolution == 0) throw InvalidInput("grid resolution must be positive");
  const double step1 = (SineBox::x1_max - SineBox::x1_min) / static_cast<double>(resolution);
  const double step2 = (SineBox::x2_max - SineBox::x2_min) / static_cast<double>(resolution);
  FeatureMatrix points(static_cast<Eigen::Index>(resolution * resolution), 2);
  for (std::size_t a = 0; a < resolution; ++a) {
    for (std::size_t b = 0; b < resolution; ++b) {
      const auto row = static_cast<Eigen::Index>(a * resolution + b);
      points(row, 0) = SineBox::x1_min + (static_cast<double>(a) + 0.5) * step1;
      points(row, 1) = SineBox::x2_min + (static_cast<double>(b) + 0.5) * step2;
    }
  }
  const auto predicted = predict(model, points);
  std::vector<GridCell> cells(predicted.size());
  for (std::size_t r = 0; r < cells.size(); ++r) {
    const double x1 = points(static_cast<Eigen::Index>(r), 0);
    const double x2 = points(static_cast<Eigen::Index>(r), 1);
    cells[r] = GridCell{x1, x2, predicted[r], sine_truth(x1, x2)};
  }
  return cells;
}

double boundary_error(const MlpModel& model, std::size_t resolution) {
  const auto cells = decision_grid(model, resolution);
  std::size_t wrong = 0;
  for (const auto& cell : cells) wrong += cell.predicted != cell.truth ? 1 : 0;
  return static_cast<double>(wrong) / static_cast<double>(cells.size());
}

double LearningRate::at(std::size_t iteration) const noexcept {
  if (decay_every == 0) return initial;
  return initial * std::pow(decay_factor, static_cast<double>(iteration / decay_every));
}

TrainResult train(const Dataset& train_data, const Dataset& test_data, const TrainConfig& config,
                  const MinglingTable* mingling) {
  if (!(config.learning_rate.initial >= 0.0)) throw InvalidInput("learning rate must be non-negative");
  if (config.eval_every == 0) throw InvalidInput("eval interval must be positive");
  if (!train_data.has_labels() || !test_data.has_labels()) throw InvalidInput("training needs labeled data");
  if (train_data.dim() != test_data.dim()) throw InvalidInput("train and test feature dimensions differ");

  std::optional<MinglingTable> owned;
  if (needs_mingling(config.sampler.method) && mingling == nullptr) {
    owned = compute_mingling(train_data, DistanceMetric{}, config.sampler.knn_k);
    mingling = &*owned;
  }
  const Sampler sampler(train_data, config.sampler, mingling);
  const auto classes = static_cast<std::size_t>(std::max(train_data.num_classes(), test_data.num_classes()));

  TrainResult result{MlpModel::random(train_data.dim(), config.hidden, classes, derive_seed(config.seed, 0)), {}};
  MlpModel& model = result.model;
  const Labels& labels = train_data.labels();
  const std::uint64_t batch_stream = derive_seed(config.seed, 1);

  auto record = [&](std::size_t iteration, double sample_ns) {
    result.metrics.rows.push_back(MetricsRow{iteration, loss(model, train_data.features(), labels),
                                             error_rate(model, test_data), sample_ns});
  };
  record(0, 0.0);

  auto draw = [&](std::size_t step, double& elapsed_ns) -> std::vector<std::size_t> {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::size_t> picked;
    try {
      picked = sampler.draw(derive_seed(batch_stream, step), step).indices;
    } catch (const SamplerExhausted&) {
      picked.clear();
    }
    elapsed_ns += std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - start).count();
    return picked;
  };

  double window_ns = 0.0;
  std::size_t window_draws = 0;
  std::vector<std::size_t> fixed_batch;
  if (config.single_batch && config.iterations > 0) {
    fixed_batch = draw(1, window_ns);
    window_draws = 1;
  }

  FeatureMatrix batch_x;
  Labels batch_y;
  for (std::size_t step = 1; step <= config.iterations; ++step) {
    std::vector<std::size_t> picked;
    if (config.single_batch) {
      picked = fixed_batch;
    } else {
      picked = draw(step, window_ns);
      ++window_draws;
    }
    if (picked.empty()) {
      result.metrics.skipped_iterations.push_back(step);
    } else {
      batch_x.resize(static_cast<Eigen::Index>(picked.size()), static_cast<Eigen::Index>(train_data.dim()));
      batch_y.resize(picked.size());
      for (std::size_t r = 0; r < picked.size(); ++r) {
        batch_x.row(static_cast<Eigen::Index>(r)) = train_data.features().row(static_cast<Eigen::Index>(picked[r]));
        batch_y[r] = labels[picked[r]];
      }
      const double rate = config.learning_rate.at(step - 1);
      if (rate != 0.0) model.assign(model.flatten() - rate * grad(model, batch_x, batch_y));
    }
    if (step % config.eval_every == 0 || step == config.iterations) {
      record(step, window_draws > 0 ? window_ns / static_cast<double>(window_draws) : 0.0);
      window_ns = 0.0;
      window_draws = 0;
    }
  }
  return result;
}

}  // namespace repulse
