#include "repulse/mlp.hpp"

#include "repulse/error.hpp"
#include "repulse/rng.hpp"

#include <cmath>
#include <string>

namespace repulse {
namespace {

void check_inputs(const MlpModel& model, const FeatureMatrix& inputs) {
  if (static_cast<std::size_t>(inputs.cols()) != model.inputs()) {
    throw InvalidInput("input dimension " + std::to_string(inputs.cols()) + " does not match model input size " +
                       std::to_string(model.inputs()));
  }
}

void check_labels(const MlpModel& model, const FeatureMatrix& inputs, std::span<const int> labels) {
  if (labels.size() != static_cast<std::size_t>(inputs.rows())) throw InvalidInput("one label per input row required");
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= model.classes()) throw InvalidInput("label outside model classes");
  }
}

struct Activations {
  Eigen::MatrixXd hidden;  // n x H, after tanh
  Eigen::MatrixXd probs;   // n x C
};

Activations run(const MlpModel& model, const FeatureMatrix& inputs) {
  Activations act;
  act.hidden = ((inputs * model.w1).rowwise() + model.b1.transpose()).array().tanh().matrix();
  Eigen::MatrixXd logits = (act.hidden * model.w2).rowwise() + model.b2.transpose();
  const Eigen::VectorXd top = logits.rowwise().maxCoeff();
  act.probs = (logits.colwise() - top).array().exp().matrix();
  const Eigen::VectorXd norm = act.probs.rowwise().sum();
  act.probs = act.probs.array().colwise() / norm.array();
  return act;
}

void write_flat(const Eigen::MatrixXd& d_w1, const Eigen::VectorXd& d_b1,
                const Eigen::MatrixXd& d_w2, const Eigen::VectorXd& d_b2, double* out) {
  for (Eigen::Index r = 0; r < d_w1.rows(); ++r) {
    for (Eigen::Index c = 0; c < d_w1.cols(); ++c) *out++ = d_w1(r, c);
  }
  for (Eigen::Index h = 0; h < d_b1.size(); ++h) *out++ = d_b1(h);
  for (Eigen::Index r = 0; r < d_w2.rows(); ++r) {
    for (Eigen::Index c = 0; c < d_w2.cols(); ++c) *out++ = d_w2(r, c);
  }
  for (Eigen::Index c = 0; c < d_b2.size(); ++c) *out++ = d_b2(c);
}

}  // namespace

MlpModel MlpModel::zeros(std::size_t inputs, std::size_t hidden, std::size_t classes) {
  if (inputs == 0 || hidden == 0 || classes == 0) throw InvalidInput("model dimensions must be positive");
  const auto d = static_cast<Eigen::Index>(inputs);
  const auto h = static_cast<Eigen::Index>(hidden);
  const auto c = static_cast<Eigen::Index>(classes);
  return MlpModel{Eigen::MatrixXd::Zero(d, h), Eigen::VectorXd::Zero(h), Eigen::MatrixXd::Zero(h, c),
                  Eigen::VectorXd::Zero(c)};
}

MlpModel MlpModel::random(std::size_t inputs, std::size_t hidden, std::size_t classes, std::uint64_t seed) {
  MlpModel model = zeros(inputs, hidden, classes);
  Rng rng(seed);
  const double scale1 = 1.0 / std::sqrt(static_cast<double>(inputs));
  const double scale2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (Eigen::Index r = 0; r < model.w1.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.w1.cols(); ++c) model.w1(r, c) = rng.uniform(-scale1, scale1);
  }
  for (Eigen::Index r = 0; r < model.w2.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.w2.cols(); ++c) model.w2(r, c) = rng.uniform(-scale2, scale2);
  }
  return model;
}

std::size_t MlpModel::parameter_count() const noexcept {
  return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size());
}

Eigen::VectorXd MlpModel::flatten() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(parameter_count()));
  write_flat(w1, b1, w2, b2, flat.data());
  return flat;
}

void MlpModel::assign(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != parameter_count()) throw InvalidInput("parameter vector size mismatch");
  const double* in = flat.data();
  for (Eigen::Index r = 0; r < w1.rows(); ++r) {
    for (Eigen::Index c = 0; c < w1.cols(); ++c) w1(r, c) = *in++;
  }
  for (Eigen::Index h = 0; h < b1.size(); ++h) b1(h) = *in++;
  for (Eigen::Index r = 0; r < w2.rows(); ++r) {
    for (Eigen::Index c = 0; c < w2.cols(); ++c) w2(r, c) = *in++;
  }
  for (Eigen::Index c = 0; c < b2.size(); ++c) b2(c) = *in++;
}

Eigen::MatrixXd forward(const MlpModel& model, const FeatureMatrix& inputs) {
  check_inputs(model, inputs);
  return run(model, inputs).probs;
}

double loss(const MlpModel& model, const FeatureMatrix& inputs, std::span<const int> labels) {
  check_inputs(model, inputs);
  check_labels(model, inputs, labels);
  if (inputs.rows() == 0) throw InvalidInput("loss of an empty batch");
  const Eigen::MatrixXd probs = run(model, inputs).probs;
  double total = 0.0;
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    total -= std::log(std::max(probs(i, labels[static_cast<std::size_t>(i)]), 1e-300));
  }
  return total / static_cast<double>(probs.rows());
}

Eigen::VectorXd grad(const MlpModel& model, const FeatureMatrix& inputs, std::span<const int> labels) {
  check_inputs(model, inputs);
  check_labels(model, inputs, labels);
  if (inputs.rows() == 0) throw InvalidInput("gradient of an empty batch");
  const Activations act = run(model, inputs);
  Eigen::MatrixXd d_logits = act.probs;
  for (Eigen::Index i = 0; i < d_logits.rows(); ++i) d_logits(i, labels[static_cast<std::size_t>(i)]) -= 1.0;
  d_logits /= static_cast<double>(inputs.rows());

  const Eigen::MatrixXd d_w2 = act.hidden.transpose() * d_logits;
  const Eigen::VectorXd d_b2 = d_logits.colwise().sum().transpose();
  const Eigen::MatrixXd d_hidden =
      ((d_logits * model.w2.transpose()).array() * (1.0 - act.hidden.array().square())).matrix();
  const Eigen::MatrixXd d_w1 = inputs.transpose() * d_hidden;
  const Eigen::VectorXd d_b1 = d_hidden.colwise().sum().transpose();

  Eigen::VectorXd flat(static_cast<Eigen::Index>(model.parameter_count()));
  write_flat(d_w1, d_b1, d_w2, d_b2, flat.data());
  return flat;
}

Eigen::MatrixXd per_example_gradients(const MlpModel& model, const Dataset& data) {
  const Labels& labels = data.labels();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(model.parameter_count()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const FeatureMatrix row = data.features().row(static_cast<Eigen::Index>(i));
    out.row(static_cast<Eigen::Index>(i)) = grad(model, row, std::span<const int>(&labels[i], 1)).transpose();
  }
  return out;
}

std::vector<int> predict(const MlpModel& model, const FeatureMatrix& inputs) {
  const Eigen::MatrixXd probs = forward(model, inputs);
  std::vector<int> out(static_cast<std::size_t>(probs.rows()));
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    Eigen::Index best = 0;
    probs.row(i).maxCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

double error_rate(const MlpModel& model, const Dataset& data) {
  const auto predicted = predict(model, data.features());
  const Labels& labels = data.labels();
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) wrong += predicted[i] != labels[i] ? 1 : 0;
  return static_cast<double>(wrong) / static_cast<double>(labels.size());
}

}  // namespace repulse
