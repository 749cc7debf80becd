#pragma once

#include "repulse/dataset.hpp"
#include "repulse/sampling.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace repulse {

/// Draws one batch from a derived seed. Must be a pure function of the seed.
using BatchSource = std::function<MiniBatch(std::uint64_t seed)>;

/// Monte-Carlo first- and second-order inclusion statistics of a sampler.
///
/// `lambda[i]` estimates P(i in B); `rho(i, j)` for i != j estimates
/// P(i in B and j in B). The diagonal of `rho` is left at zero.
struct ProcessStats {
  Eigen::VectorXd lambda;
  Eigen::VectorXd lambda_se;
  std::optional<Eigen::MatrixXd> rho;
  std::optional<Eigen::MatrixXd> rho_se;
  std::size_t realizations = 0;
  double mean_batch_size = 0.0;

  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(lambda.size()); }
};

/// Largest ground set for which the N x N pair table is kept.
inline constexpr std::size_t kMaxPairStatsPoints = 5000;
inline constexpr std::size_t kMinRealizations = 100;

/// Realization r uses derive_seed(seed, r). Throws InvalidInput when
/// realizations < 100 or (with_pairs and n > 5000).
[[nodiscard]] ProcessStats estimate_inclusion_stats(const BatchSource& sampler, std::size_t n,
                                                    std::size_t realizations, std::uint64_t seed, bool with_pairs);

/// Exact inclusion probabilities of uniform k-subsets of n points:
/// lambda = k / n, rho = k (k - 1) / (n (n - 1)). Standard errors are zero.
[[nodiscard]] ProcessStats exact_random_stats(std::size_t n, std::size_t k);

/// rho / lambda^2 for uniform k-subsets: n (k - 1) / (k (n - 1)).
[[nodiscard]] double random_pair_correlation(std::size_t n, std::size_t k) noexcept;

struct PairCorrelationHistogram {
  std::vector<double> edges;
  std::vector<std::optional<double>> estimate;  // empty bins stay missing
  std::vector<std::size_t> pair_counts;
  std::size_t excluded_pairs = 0;  // lambda_i * lambda_j < 1e-12
};

/// Bins unordered pairs by distance ([e_b, e_{b+1}), last bin closed) and
/// averages rho_ij / (lambda_i lambda_j) per bin. Pairs outside the edges are ignored.
[[nodiscard]] PairCorrelationHistogram pair_correlation(const ProcessStats& stats, const Dataset& data,
                                                        const DistanceMetric& metric, std::span<const double> edges);

struct CampbellReport {
  double mc_mean = 0.0;
  double analytic_sum = 0.0;
  double standard_error = 0.0;
  double z_score = 0.0;
};

/// E[sum_{i in B} f_i] from fresh draws against sum_i f_i lambda_i.
///
/// Both sides are means of the same per-batch statistic (the analytic side
/// over the realizations behind `stats`), so the combined standard error is
/// sd * sqrt(1 / R_fresh + 1 / R_stats) with sd taken from the fresh draws.
[[nodiscard]] CampbellReport campbell_check(const ProcessStats& stats, std::span<const double> f,
                                            const BatchSource& sampler, std::size_t realizations, std::uint64_t seed);

/// Ordered-pair version: E[sum_{i != j in B} f_ij] against sum_{i != j} f_ij rho_ij.
[[nodiscard]] CampbellReport campbell_check_pairs(const ProcessStats& stats, const Eigen::MatrixXd& f,
                                                  const BatchSource& sampler, std::size_t realizations,
                                                  std::uint64_t seed);

struct VarianceDecomposition {
  double term1 = 0.0;  // pair-correlation term
  double term2 = 0.0;  // diagonal term
  double total = 0.0;
};

/// Discrete variance of the batch-mean gradient from inclusion statistics:
///   term1 = k^-2 sum_{i != j} g_i . g_j (rho_ij - lambda_i lambda_j)
///   term2 = k^-2 sum_i |g_i|^2 (lambda_i - lambda_i^2)
/// `gradients` row i is the per-example gradient of point i.
[[nodiscard]] VarianceDecomposition discrete_variance_formula(const ProcessStats& stats,
                                                              const Eigen::MatrixXd& gradients, double batch_size);

struct GradientVarianceReport {
  double variance = 0.0;  // trace of the unbiased sample covariance
  double standard_error = 0.0;
  Eigen::VectorXd mean_gradient;
  std::size_t realizations = 0;
  double mean_batch_size = 0.0;
  std::size_t empty_batches = 0;
};

/// Trace of the sample covariance of G_r = |B_r|^-1 sum_{i in B_r} g_i over
/// `realizations` batches. Terms are summed in ascending index order so a
/// deterministic batch yields exactly zero variance. Empty batches are
/// skipped and counted.
[[nodiscard]] GradientVarianceReport measure_gradient_variance(const BatchSource& sampler,
                                                               const Eigen::MatrixXd& gradients,
                                                               std::size_t realizations, std::uint64_t seed);

struct ReductionTest {
  double z = 0.0;
  double p_value = 1.0;  // one-sided: H1 is candidate variance < baseline variance
};

[[nodiscard]] ReductionTest variance_reduction_test(const GradientVarianceReport& candidate,
                                                    const GradientVarianceReport& baseline);

/// Upper tail of the standard normal.
[[nodiscard]] double normal_upper_tail(double z) noexcept;

}  // namespace repulse
