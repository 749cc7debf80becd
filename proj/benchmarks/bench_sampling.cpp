#include "repulse/mingling.hpp"
#include "repulse/rng.hpp"
#include "repulse/sampling.hpp"

#include <benchmark/benchmark.h>

namespace {

repulse::Dataset cloud(std::size_t n, std::size_t dim, std::uint64_t seed) {
  repulse::Rng rng(seed);
  repulse::FeatureMatrix f(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = rng.normal();
  repulse::Labels labels(n);
  for (auto& l : labels) l = static_cast<int>(rng.index(2));
  return repulse::Dataset(std::move(f), std::move(labels));
}

void BM_RandomSampling(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(repulse::sample_random(n, k, seed++));
}
BENCHMARK(BM_RandomSampling)->Args({10000, 32})->Args({100000, 32})->Args({100000, 128});

void BM_VanillaPds(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const auto data = cloud(n, 16, 1);
  const double r = repulse::radius_heuristic(data, {}, 1000, 2) * 0.5;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(repulse::sample_vanilla_pds(data, {}, r, k, repulse::default_max_trials(k), seed++));
  }
}
BENCHMARK(BM_VanillaPds)->Args({10000, 16})->Args({10000, 64})->Args({100000, 64});

void BM_DensePds(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto data = cloud(5000, 2, 3);
  const auto table = repulse::compute_mingling(data, {}, 5);
  const std::vector<double> pi(table.level_count(), 1.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(repulse::sample_dense_pds(data, {}, 0.05, table, pi, k, 100 * k, seed++));
  }
}
BENCHMARK(BM_DensePds)->Arg(16)->Arg(64);

void BM_KdppDraw(benchmark::State& state) {
  const auto data = cloud(16, 2, 4);
  const repulse::KdppEnumerator dpp(repulse::gaussian_kernel(data, {}, 1.0), static_cast<std::size_t>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dpp.draw(seed++));
}
BENCHMARK(BM_KdppDraw)->Arg(4)->Arg(8);

void BM_ComputeKnn(benchmark::State& state) {
  const auto data = cloud(static_cast<std::size_t>(state.range(0)), 2, 5);
  for (auto _ : state) benchmark::DoNotOptimize(repulse::compute_knn(data, {}, 5));
}
BENCHMARK(BM_ComputeKnn)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
