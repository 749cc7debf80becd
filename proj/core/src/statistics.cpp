#include "repulse/statistics.hpp"

#include "repulse/error.hpp"
#include "repulse/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace repulse {
namespace {

void check_stats_cover(const ProcessStats& stats, std::size_t n, const char* what) {
  if (stats.size() != n) {
    throw InvalidInput(std::string(what) + ": expected " + std::to_string(stats.size()) + " points, got " +
                       std::to_string(n));
  }
}

const Eigen::MatrixXd& require_pairs(const ProcessStats& stats) {
  if (!stats.rho) throw InvalidInput("pair statistics were not collected (with_pairs = false)");
  return *stats.rho;
}

std::vector<std::size_t> sorted_indices(const MiniBatch& batch) {
  std::vector<std::size_t> out = batch.indices;
  std::sort(out.begin(), out.end());
  return out;
}

// Mean and sample sd of a per-batch statistic over fresh realizations.
template <class Statistic>
std::pair<double, double> fresh_moments(const BatchSource& sampler, std::size_t realizations, std::uint64_t seed,
                                        Statistic statistic) {
  if (realizations < 2) throw InvalidInput("need at least 2 fresh realizations");
  std::vector<double> values(realizations);
  for (std::size_t r = 0; r < realizations; ++r) values[r] = statistic(sorted_indices(sampler(derive_seed(seed, r))));
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(realizations);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(realizations - 1))};
}

CampbellReport finish_campbell(double mc_mean, double sd, double analytic, std::size_t fresh, std::size_t prior) {
  CampbellReport report{mc_mean, analytic, 0.0, 0.0};
  report.standard_error = sd * std::sqrt(1.0 / static_cast<double>(fresh) + 1.0 / static_cast<double>(std::max<std::size_t>(prior, 1)));
  const double diff = std::abs(mc_mean - analytic);
  if (report.standard_error > 0.0) {
    report.z_score = diff / report.standard_error;
  } else {
    report.z_score = diff <= 1e-9 * (1.0 + std::abs(analytic)) ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return report;
}

}  // namespace

ProcessStats estimate_inclusion_stats(const BatchSource& sampler, std::size_t n, std::size_t realizations,
                                      std::uint64_t seed, bool with_pairs) {
  if (realizations < kMinRealizations) {
    throw InvalidInput("need at least " + std::to_string(kMinRealizations) + " realizations, got " +
                       std::to_string(realizations));
  }
  if (n == 0) throw InvalidInput("empty ground set");
  if (with_pairs && n > kMaxPairStatsPoints) {
    throw InvalidInput("pair statistics are limited to N <= " + std::to_string(kMaxPairStatsPoints));
  }
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::VectorXd singles = Eigen::VectorXd::Zero(size);
  Eigen::MatrixXd pairs;
  if (with_pairs) pairs = Eigen::MatrixXd::Zero(size, size);
  double batch_total = 0.0;

  for (std::size_t r = 0; r < realizations; ++r) {
    const MiniBatch batch = sampler(derive_seed(seed, r));
    batch_total += static_cast<double>(batch.accepted());
    for (std::size_t i : batch.indices) {
      if (i >= n) throw InvalidInput("sampler returned an index outside the ground set");
      singles(static_cast<Eigen::Index>(i)) += 1.0;
    }
    if (with_pairs) {
      for (std::size_t a : batch.indices) {
        for (std::size_t b : batch.indices) {
          if (a != b) pairs(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += 1.0;
        }
      }
    }
  }

  const double count = static_cast<double>(realizations);
  ProcessStats stats;
  stats.realizations = realizations;
  stats.mean_batch_size = batch_total / count;
  stats.lambda = singles / count;
  stats.lambda_se = (stats.lambda.array() * (1.0 - stats.lambda.array()) / count).sqrt().matrix();
  if (with_pairs) {
    Eigen::MatrixXd rho = pairs / count;
    stats.rho_se = (rho.array() * (1.0 - rho.array()) / count).sqrt().matrix();
    stats.rho = std::move(rho);
  }
  return stats;
}

ProcessStats exact_random_stats(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw InvalidInput("batch size outside [1, N]");
  const auto size = static_cast<Eigen::Index>(n);
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  ProcessStats stats;
  stats.lambda = Eigen::VectorXd::Constant(size, kd / nd);
  stats.lambda_se = Eigen::VectorXd::Zero(size);
  const double joint = n > 1 ? kd * (kd - 1.0) / (nd * (nd - 1.0)) : 0.0;
  Eigen::MatrixXd rho = Eigen::MatrixXd::Constant(size, size, joint);
  rho.diagonal().setZero();
  stats.rho = std::move(rho);
  stats.rho_se = Eigen::MatrixXd::Zero(size, size);
  stats.realizations = 0;
  stats.mean_batch_size = kd;
  return stats;
}

double random_pair_correlation(std::size_t n, std::size_t k) noexcept {
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return nd * (kd - 1.0) / (kd * (nd - 1.0));
}

PairCorrelationHistogram pair_correlation(const ProcessStats& stats, const Dataset& data,
                                          const DistanceMetric& metric, std::span<const double> edges) {
  const Eigen::MatrixXd& rho = require_pairs(stats);
  check_stats_cover(stats, data.size(), "pair_correlation");
  if (edges.size() < 2) throw InvalidInput("need at least two bin edges");
  for (std::size_t b = 1; b < edges.size(); ++b) {
    if (!(edges[b] > edges[b - 1])) throw InvalidInput("bin edges must be strictly increasing");
  }

  const std::size_t bins = edges.size() - 1;
  PairCorrelationHistogram hist;
  hist.edges.assign(edges.begin(), edges.end());
  hist.pair_counts.assign(bins, 0);
  std::vector<double> sums(bins, 0.0);
  const std::size_t n = data.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = metric.between(data, i, j);
      if (d < edges.front() || d > edges.back()) continue;
      auto upper = std::upper_bound(edges.begin(), edges.end(), d);
      std::size_t bin = static_cast<std::size_t>(upper - edges.begin()) - 1;
      bin = std::min(bin, bins - 1);
      const double product = stats.lambda(static_cast<Eigen::Index>(i)) * stats.lambda(static_cast<Eigen::Index>(j));
      if (product < 1e-12) {
        ++hist.excluded_pairs;
        continue;
      }
      sums[bin] += rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / product;
      ++hist.pair_counts[bin];
    }
  }
  hist.estimate.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    if (hist.pair_counts[b] > 0) hist.estimate[b] = sums[b] / static_cast<double>(hist.pair_counts[b]);
  }
  return hist;
}

CampbellReport campbell_check(const ProcessStats& stats, std::span<const double> f, const BatchSource& sampler,
                              std::size_t realizations, std::uint64_t seed) {
  check_stats_cover(stats, f.size(), "campbell_check");
  double analytic = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) analytic += f[i] * stats.lambda(static_cast<Eigen::Index>(i));
  const auto [mean, sd] = fresh_moments(sampler, realizations, seed, [&](const std::vector<std::size_t>& batch) {
    double sum = 0.0;
    for (std::size_t i : batch) sum += f[i];
    return sum;
  });
  return finish_campbell(mean, sd, analytic, realizations, stats.realizations);
}

CampbellReport campbell_check_pairs(const ProcessStats& stats, const Eigen::MatrixXd& f, const BatchSource& sampler,
                                    std::size_t realizations, std::uint64_t seed) {
  const Eigen::MatrixXd& rho = require_pairs(stats);
  if (f.rows() != f.cols()) throw InvalidInput("pair function must be square");
  check_stats_cover(stats, static_cast<std::size_t>(f.rows()), "campbell_check_pairs");
  double analytic = 0.0;
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
      if (i != j) analytic += f(i, j) * rho(i, j);
    }
  }
  const auto [mean, sd] = fresh_moments(sampler, realizations, seed, [&](const std::vector<std::size_t>& batch) {
    double sum = 0.0;
    for (std::size_t a : batch) {
      for (std::size_t b : batch) {
        if (a != b) sum += f(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
    }
    return sum;
  });
  return finish_campbell(mean, sd, analytic, realizations, stats.realizations);
}

VarianceDecomposition discrete_variance_formula(const ProcessStats& stats, const Eigen::MatrixXd& gradients,
                                                double batch_size) {
  const Eigen::MatrixXd& rho = require_pairs(stats);
  check_stats_cover(stats, static_cast<std::size_t>(gradients.rows()), "discrete_variance_formula");
  if (!(batch_size > 0.0)) throw InvalidInput("batch size must be positive");
  const Eigen::MatrixXd gram = gradients * gradients.transpose();
  const Eigen::VectorXd& lambda = stats.lambda;
  const Eigen::Index n = gradients.rows();
  double pair_sum = 0.0;
  double diag_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    diag_sum += gram(i, i) * (lambda(i) - lambda(i) * lambda(i));
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) pair_sum += gram(i, j) * (rho(i, j) - lambda(i) * lambda(j));
    }
  }
  const double scale = 1.0 / (batch_size * batch_size);
  VarianceDecomposition out;
  out.term1 = scale * pair_sum;
  out.term2 = scale * diag_sum;
  out.total = out.term1 + out.term2;
  return out;
}

GradientVarianceReport measure_gradient_variance(const BatchSource& sampler, const Eigen::MatrixXd& gradients,
                                                 std::size_t realizations, std::uint64_t seed) {
  if (realizations < 2) throw InvalidInput("gradient variance needs at least 2 realizations");
  const Eigen::Index dims = gradients.cols();
  Eigen::MatrixXd estimates(dims, static_cast<Eigen::Index>(realizations));
  GradientVarianceReport report;
  std::size_t kept = 0;
  double batch_total = 0.0;
  for (std::size_t r = 0; r < realizations; ++r) {
    const auto batch = sorted_indices(sampler(derive_seed(seed, r)));
    if (batch.empty()) {
      ++report.empty_batches;
      continue;
    }
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dims);
    for (std::size_t i : batch) {
      if (i >= static_cast<std::size_t>(gradients.rows())) throw InvalidInput("batch index outside gradient rows");
      sum += gradients.row(static_cast<Eigen::Index>(i)).transpose();
    }
    estimates.col(static_cast<Eigen::Index>(kept++)) = sum / static_cast<double>(batch.size());
    batch_total += static_cast<double>(batch.size());
  }
  if (kept < 2) throw InvalidInput("fewer than 2 non-empty batches");
  const auto used = estimates.leftCols(static_cast<Eigen::Index>(kept));
  const double count = static_cast<double>(kept);
  // Shift by the first estimate so identical batches give exactly zero spread.
  const Eigen::VectorXd shift = used.col(0);
  const Eigen::MatrixXd shifted = used.colwise() - shift;
  const Eigen::VectorXd shifted_mean = shifted.rowwise().sum() / count;
  report.mean_gradient = shift + shifted_mean;
  Eigen::VectorXd spread = (shifted.colwise() - shifted_mean).colwise().squaredNorm().transpose();
  spread *= count / (count - 1.0);
  report.variance = spread.mean();
  const double sd = std::sqrt((spread.array() - report.variance).square().sum() / (count - 1.0));
  report.standard_error = sd / std::sqrt(count);
  report.realizations = kept;
  report.mean_batch_size = batch_total / count;
  return report;
}

double normal_upper_tail(double z) noexcept { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

ReductionTest variance_reduction_test(const GradientVarianceReport& candidate,
                                      const GradientVarianceReport& baseline) {
  const double diff = baseline.variance - candidate.variance;
  const double se = std::hypot(baseline.standard_error, candidate.standard_error);
  ReductionTest test;
  if (se > 0.0) {
    test.z = diff / se;
  } else if (diff != 0.0) {
    test.z = diff > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  test.p_value = normal_upper_tail(test.z);
  return test;
}

}  // namespace repulse
