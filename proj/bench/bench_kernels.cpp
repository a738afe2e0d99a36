// OpenMP kernels against their serial:: references. Run with
// OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <random>

#include "edgecount/construct.hpp"
#include "edgecount/edge_tests.hpp"
#include "edgecount/graph.hpp"
#include "edgecount/stein.hpp"

using namespace edgecount;

namespace {

PointCloud cloud(std::size_t n, std::size_t d) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> z;
  std::vector<double> v(n * d);
  for (double& x : v) x = z(rng);
  return PointCloud(n, d, std::move(v));
}

const DistanceMatrix& distances_500() {
  static const DistanceMatrix dm = euclidean_distances(cloud(500, 50));
  return dm;
}

const Graph& kmst_graph(std::size_t k) {
  static const Graph g5 = kmst(distances_500(), 5);
  static const Graph g20 = kmst(distances_500(), 20);
  return k == 5 ? g5 : g20;
}

const Direction kDiag{0.5773502691896258, 0.5773502691896258, 0.5773502691896258};

void BM_Distances(benchmark::State& state) {
  const auto pc = cloud(static_cast<std::size_t>(state.range(0)), 100);
  for (auto _ : state) benchmark::DoNotOptimize(euclidean_distances(pc));
}

void BM_DistancesSerial(benchmark::State& state) {
  const auto pc = cloud(static_cast<std::size_t>(state.range(0)), 100);
  for (auto _ : state) benchmark::DoNotOptimize(serial::euclidean_distances(pc));
}

void BM_Kmst(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kmst_layered(distances_500(), static_cast<std::size_t>(state.range(0))));
}

void BM_KmstSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(serial::kmst_layered(distances_500(), static_cast<std::size_t>(state.range(0))));
}

void BM_ResampleCounts(benchmark::State& state) {
  const Graph& g = kmst_graph(5);
  for (auto _ : state) benchmark::DoNotOptimize(resample_counts(g, {250, 250}, state.range(0), 7));
}

void BM_ResampleCountsSerial(benchmark::State& state) {
  const Graph& g = kmst_graph(5);
  for (auto _ : state) benchmark::DoNotOptimize(serial::resample_counts(g, {250, 250}, state.range(0), 7));
}

void BM_SteinMc(benchmark::State& state) {
  const Graph& g = kmst_graph(5);
  for (auto _ : state) benchmark::DoNotOptimize(mc_stein_bound(g, {250, 250}, kDiag, state.range(0), 9));
}

void BM_SteinMcSerial(benchmark::State& state) {
  const Graph& g = kmst_graph(5);
  for (auto _ : state) benchmark::DoNotOptimize(serial::mc_stein_bound(g, {250, 250}, kDiag, state.range(0), 9));
}

void BM_CountSquares(benchmark::State& state) {
  const Graph& g = kmst_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(count_squares(g));
}

void BM_CountSquaresSerial(benchmark::State& state) {
  const Graph& g = kmst_graph(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::count_squares(g));
}

}  // namespace

BENCHMARK(BM_Distances)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistancesSerial)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Kmst)->Arg(5)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KmstSerial)->Arg(5)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResampleCounts)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResampleCountsSerial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SteinMc)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SteinMcSerial)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountSquares)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountSquaresSerial)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
