#include <benchmark/benchmark.h>

#include "mobman/planning.hpp"

using namespace mobman;

namespace {

void run_astar(benchmark::State& state, OpenList variant) {
  const int n = static_cast<int>(state.range(0));
  const GridMap map = random_obstacle_map(n, n, 0.05, 0.2, 42 + static_cast<unsigned>(n));
  const DistanceField field = distance_field(map);
  AStarParams p;
  p.k = 0.0;
  p.clearance = 0.0;
  p.open_list = variant;
  std::uint64_t expanded = 0;
  for (auto _ : state) {
    const PlanResult r = astar(map, field, {0, 0}, {n - 1, n - 1}, p);
    expanded = r.expanded;
    benchmark::DoNotOptimize(r.total_cost);
  }
  state.counters["expanded"] = static_cast<double>(expanded);
}

void BM_AStarHeap(benchmark::State& state) { run_astar(state, OpenList::Heap); }
void BM_AStarLinear(benchmark::State& state) { run_astar(state, OpenList::Linear); }

void BM_AStarSafety(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridMap map = random_obstacle_map(n, n, 0.05, 0.1, 7);
  const DistanceField field = distance_field(map);
  AStarParams p;
  p.clearance = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(astar(map, field, {0, 0}, {n - 1, n - 1}, p).total_cost);
  }
}

void BM_DistanceField(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridMap map = random_obstacle_map(n, n, 0.05, 0.2, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(distance_field(map).values().data());
  }
}

}  // namespace

BENCHMARK(BM_AStarHeap)->Arg(100)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AStarLinear)->Arg(100)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AStarSafety)->Arg(160)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistanceField)->Arg(160)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
