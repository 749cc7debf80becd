#include "repulse/sampling.hpp"

#include "repulse/error.hpp"
#include "repulse/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace repulse {
namespace {

constexpr std::array<std::pair<SamplerMethod, std::string_view>, 6> kMethodNames{{
    {SamplerMethod::random, "random"},
    {SamplerMethod::vanilla_pds, "vanilla_pds"},
    {SamplerMethod::easy_pds, "easy_pds"},
    {SamplerMethod::dense_pds, "dense_pds"},
    {SamplerMethod::anneal_pds, "anneal_pds"},
    {SamplerMethod::kdpp_bruteforce, "kdpp_bruteforce"},
}};

void check_batch_size(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) {
    throw InvalidInput("batch size " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
}

void check_radius(double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw InvalidInput("radius must be finite and non-negative");
}

void check_mingling(const Dataset& data, const MinglingTable& mingling) {
  if (mingling.size() != data.size()) throw InvalidInput("mingling table does not cover the dataset");
}

// Shared dart-throwing loop. `disk_of(a)` is the exclusion radius owned by
// accepted point a; candidates are drawn uniformly with replacement.
template <class DiskOf>
MiniBatch throw_darts(const Dataset& data, const DistanceMetric& metric, DiskOf disk_of, std::size_t k,
                      std::size_t max_trials, std::uint64_t seed) {
  const std::size_t n = data.size();
  check_batch_size(n, k);
  if (max_trials < 1) throw InvalidInput("max_trials must be positive");
  Rng rng(seed);
  MiniBatch batch{{}, k};
  batch.indices.reserve(k);
  std::size_t rejections = 0;
  while (batch.accepted() < k && rejections < max_trials) {
    const std::size_t candidate = rng.index(n);
    bool admissible = true;
    for (std::size_t a : batch.indices) {
      const double disk = disk_of(a);
      if (a == candidate || (disk > 0.0 && metric.between(data, a, candidate) < disk)) {
        admissible = false;
        break;
      }
    }
    if (admissible) {
      batch.indices.push_back(candidate);
      rejections = 0;
    } else {
      ++rejections;
    }
  }
  return batch;
}

}  // namespace

std::string_view to_string(SamplerMethod method) noexcept {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  return "unknown";
}

SamplerMethod parse_sampler_method(std::string_view name) {
  for (const auto& [m, known] : kMethodNames) {
    if (known == name) return m;
  }
  throw InvalidInput("unknown sampler method '" + std::string(name) + "'");
}

bool needs_mingling(SamplerMethod method) noexcept {
  return method == SamplerMethod::easy_pds || method == SamplerMethod::dense_pds ||
         method == SamplerMethod::anneal_pds;
}

double radius_heuristic(const Dataset& data, const DistanceMetric& metric, std::size_t subsample,
                        std::uint64_t seed) {
  if (subsample < 2) throw InvalidInput("radius heuristic needs a subsample of at least 2 points");
  const std::size_t m = std::min(subsample, data.size());
  if (m < 2) return 0.0;
  const MiniBatch picked = sample_random(data.size(), m, seed);
  std::vector<double> distances;
  distances.reserve(m * (m - 1) / 2);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      distances.push_back(metric.between(data, picked.indices[a], picked.indices[b]));
    }
  }
  const std::size_t mid = distances.size() / 2;
  std::nth_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(mid), distances.end());
  double median = distances[mid];
  if (distances.size() % 2 == 0) {
    const double lower = *std::max_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (lower + median);
  }
  return 0.5 * median;
}

MiniBatch sample_random(std::size_t n, std::size_t k, std::uint64_t seed) {
  check_batch_size(n, k);
  Rng rng(seed);
  MiniBatch batch{{}, k};
  batch.indices.reserve(k);
  std::unordered_map<std::size_t, std::size_t> swapped;
  swapped.reserve(2 * k);
  auto value_at = [&](std::size_t pos) {
    auto it = swapped.find(pos);
    return it == swapped.end() ? pos : it->second;
  };
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.index(n - i);
    const std::size_t picked = value_at(j);
    swapped[j] = value_at(i);
    batch.indices.push_back(picked);
  }
  return batch;
}

MiniBatch sample_random(const Dataset& data, std::size_t k, std::uint64_t seed) {
  return sample_random(data.size(), k, seed);
}

MiniBatch sample_vanilla_pds(const Dataset& data, const DistanceMetric& metric, double radius, std::size_t k,
                             std::size_t max_trials, std::uint64_t seed) {
  check_radius(radius);
  return throw_darts(data, metric, [radius](std::size_t) { return radius; }, k, max_trials, seed);
}

MiniBatch sample_easy_pds(const Dataset& data, const DistanceMetric& metric, double r0,
                          const MinglingTable& mingling, std::size_t k, std::size_t max_trials, std::uint64_t seed) {
  check_radius(r0);
  check_mingling(data, mingling);
  return throw_darts(
      data, metric, [&](std::size_t a) { return mingling.levels[a] == 0 ? r0 : 0.0; }, k, max_trials, seed);
}

MiniBatch sample_dense_pds(const Dataset& data, const DistanceMetric& metric, double radius,
                           const MinglingTable& mingling, std::span<const double> pi, std::size_t k,
                           std::size_t max_trials, std::uint64_t seed) {
  const std::size_t n = data.size();
  check_radius(radius);
  check_mingling(data, mingling);
  check_batch_size(n, k);
  if (max_trials < 1) throw InvalidInput("max_trials must be positive");
  const std::size_t levels = mingling.level_count();
  if (pi.size() != levels) {
    throw InvalidInput("pi needs " + std::to_string(levels) + " weights, got " + std::to_string(pi.size()));
  }
  for (double w : pi) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("pi weights must be finite and non-negative");
  }

  std::vector<std::size_t> remaining(levels);
  for (std::size_t m = 0; m < levels; ++m) remaining[m] = mingling.members[m].size();
  auto live_mass = [&] {
    double total = 0.0;
    for (std::size_t m = 0; m < levels; ++m) {
      if (remaining[m] > 0) total += pi[m];
    }
    return total;
  };
  if (!(live_mass() > 0.0)) throw SamplerExhausted("all pi mass lies on empty mingling levels");

  Rng rng(seed);
  MiniBatch batch{{}, k};
  batch.indices.reserve(k);
  std::unordered_set<std::size_t> taken;
  std::size_t rejections = 0;
  while (batch.accepted() < k && rejections < max_trials) {
    const double total = live_mass();
    if (!(total > 0.0)) break;

    const double u = rng.uniform() * total;
    std::size_t level = levels;
    double cumulative = 0.0;
    for (std::size_t m = 0; m < levels; ++m) {
      if (remaining[m] == 0 || pi[m] <= 0.0) continue;
      level = m;  // last eligible level absorbs rounding at the top end
      cumulative += pi[m];
      if (u < cumulative) break;
    }

    const auto& pool = mingling.members[level];
    std::size_t candidate = pool[rng.index(pool.size())];
    while (taken.contains(candidate)) candidate = pool[rng.index(pool.size())];

    bool admissible = true;
    if (radius > 0.0) {
      for (std::size_t a : batch.indices) {
        if (metric.between(data, a, candidate) < radius) {
          admissible = false;
          break;
        }
      }
    }
    if (admissible) {
      batch.indices.push_back(candidate);
      taken.insert(candidate);
      --remaining[level];
      rejections = 0;
    } else {
      ++rejections;
    }
  }
  return batch;
}

MiniBatch sample_anneal_pds(const Dataset& data, const DistanceMetric& metric, double radius,
                            const MinglingTable& mingling, std::uint64_t iteration, std::size_t k,
                            std::size_t max_trials, std::uint64_t seed, double anneal_constant) {
  check_mingling(data, mingling);
  const auto pi = anneal_schedule(mingling.histogram, iteration, anneal_constant);
  return sample_dense_pds(data, metric, radius, mingling, pi, k, max_trials, seed);
}

KdppEnumerator::KdppEnumerator(const Eigen::MatrixXd& kernel, std::size_t k) : k_(k) {
  const auto n = static_cast<std::size_t>(kernel.rows());
  if (kernel.rows() != kernel.cols()) throw InvalidInput("kernel must be square");
  if (n > max_ground_set) {
    throw CapacityError("k-DPP enumeration limited to N <= " + std::to_string(max_ground_set) + " (got " +
                        std::to_string(n) + ")");
  }
  check_batch_size(n, k);
  if (!kernel.allFinite() || (kernel - kernel.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidInput("kernel must be finite and symmetric");
  }

  // Enumerate k-subsets in lexicographic order.
  std::vector<std::size_t> current(k);
  std::iota(current.begin(), current.end(), std::size_t{0});
  Eigen::MatrixXd minor(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  double total = 0.0;
  while (true) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        minor(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            kernel(static_cast<Eigen::Index>(current[a]), static_cast<Eigen::Index>(current[b]));
      }
    }
    double det = minor.determinant();
    if (det < -1e-9) throw InvalidInput("kernel has a negative principal minor (not PSD)");
    det = std::max(det, 0.0);
    subsets_.push_back(current);
    probabilities_.push_back(det);
    total += det;

    std::size_t pos = k;
    while (pos > 0 && current[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++current[pos - 1];
    for (std::size_t a = pos; a < k; ++a) current[a] = current[a - 1] + 1;
  }
  if (!(total > 0.0)) throw DegenerateKernel("every k x k principal minor is zero");

  cumulative_.reserve(probabilities_.size());
  double running = 0.0;
  for (double& p : probabilities_) {
    p /= total;
    running += p;
    cumulative_.push_back(running);
  }
}

MiniBatch KdppEnumerator::draw(std::uint64_t seed) const {
  Rng rng(seed);
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return MiniBatch{subsets_[static_cast<std::size_t>(it - cumulative_.begin())], k_};
}

MiniBatch sample_kdpp_bruteforce(const Eigen::MatrixXd& kernel, std::size_t k, std::uint64_t seed) {
  return KdppEnumerator(kernel, k).draw(seed);
}

Eigen::MatrixXd gaussian_kernel(const Dataset& data, const DistanceMetric& metric, double bandwidth) {
  const auto n = static_cast<Eigen::Index>(data.size());
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Identity(n, n);
  if (!(bandwidth > 0.0)) return kernel;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = metric.between(data, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      kernel(i, j) = kernel(j, i) = std::exp(-d * d / (2.0 * bandwidth * bandwidth));
    }
  }
  return kernel;
}

Sampler::Sampler(const Dataset& data, const SamplerConfig& config, const MinglingTable* mingling,
                 DistanceMetric metric)
    : data_(&data), mingling_(mingling), metric_(metric), config_(config) {
  check_batch_size(data.size(), config.batch_size);
  if (config.radius) {
    check_radius(*config.radius);
    radius_ = *config.radius;
  } else if (config.method != SamplerMethod::random) {
    radius_ = radius_heuristic(data, metric_, std::min<std::size_t>(data.size(), 1000), config.seed);
  }
  max_trials_ = config.max_trials.value_or(default_max_trials(config.batch_size));
  if (max_trials_ < 1) throw InvalidInput("max_trials must be positive");

  if (needs_mingling(config.method)) {
    if (mingling_ == nullptr) throw InvalidInput(std::string(to_string(config.method)) + " needs a mingling table");
    check_mingling(data, *mingling_);
  }
  if (config.method == SamplerMethod::dense_pds) {
    pi_ = config.pi.value_or(std::vector<double>(mingling_->level_count(), 1.0));
    if (pi_.size() != mingling_->level_count()) {
      throw InvalidInput("pi needs " + std::to_string(mingling_->level_count()) + " weights");
    }
  }
  if (config.method == SamplerMethod::kdpp_bruteforce) {
    kdpp_.emplace(gaussian_kernel(data, metric_, radius_), config.batch_size);
  }
}

MiniBatch Sampler::draw(std::uint64_t seed, std::uint64_t iteration) const {
  const std::size_t k = config_.batch_size;
  switch (config_.method) {
    case SamplerMethod::random:
      return sample_random(*data_, k, seed);
    case SamplerMethod::vanilla_pds:
      return sample_vanilla_pds(*data_, metric_, radius_, k, max_trials_, seed);
    case SamplerMethod::easy_pds:
      return sample_easy_pds(*data_, metric_, radius_, *mingling_, k, max_trials_, seed);
    case SamplerMethod::dense_pds:
      return sample_dense_pds(*data_, metric_, radius_, *mingling_, pi_, k, max_trials_, seed);
    case SamplerMethod::anneal_pds:
      return sample_anneal_pds(*data_, metric_, radius_, *mingling_, iteration, k, max_trials_, seed,
                               config_.anneal_constant);
    case SamplerMethod::kdpp_bruteforce:
      return kdpp_->draw(seed);
  }
  throw InvalidInput("unknown sampler method");
}

}  // namespace repulse
