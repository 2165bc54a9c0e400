#include <benchmark/benchmark.h>

#include <numeric>
#include <random>
#include <vector>

#include "routeio/scoring.hpp"
#include "routeio/solvers.hpp"
#include "routeio/types.hpp"

using namespace routeio;

namespace {

NodeUniverse make_universe(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("n" + std::to_string(i));
  return NodeUniverse(std::move(names));
}

std::vector<double> random_weights(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  std::vector<double> w(count);
  for (double& x : w) x = unit(rng);
  return w;
}

void BM_SubsetDpTour(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  NodeUniverse u = make_universe(n);
  std::vector<double> w = random_weights(u.edge_count(), 17);
  std::vector<int> required(n);
  std::iota(required.begin(), required.end(), 0);
  SolverChoice exact;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_rtsp(w, required, std::nullopt, u, exact));
  }
}
BENCHMARK(BM_SubsetDpTour)->Arg(10)->Arg(12)->Arg(14)->Arg(16);

void BM_LocalSearchTour(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  NodeUniverse u = make_universe(n);
  std::vector<double> w = random_weights(u.edge_count(), 23);
  std::vector<int> required(n);
  std::iota(required.begin(), required.end(), 0);
  SolverChoice local;
  local.kind = SolverChoice::Kind::local_search;
  local.seed = 5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_rtsp(w, required, std::nullopt, u, local));
  }
}
BENCHMARK(BM_LocalSearchTour)->Arg(30)->Arg(60)->Arg(100);

void BM_ErpAlignment(benchmark::State& state) {
  const int deliveries = static_cast<int>(state.range(0));
  const int n = deliveries + 1;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> t(1.0, 100.0);
  std::vector<double> times(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) times[i * n + j] = t(rng);
    }
  }
  std::vector<double> norm = normalize_travel_times(times, n);
  std::vector<int> a(deliveries), b(deliveries);
  std::iota(a.begin(), a.end(), 1);
  b = a;
  std::shuffle(b.begin(), b.end(), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(erp(a, b, 0, norm, n));
  }
}
BENCHMARK(BM_ErpAlignment)->Arg(25)->Arg(100)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
