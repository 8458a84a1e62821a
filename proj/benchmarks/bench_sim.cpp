#include <benchmark/benchmark.h>

#include <filesystem>

#include "mobman/mapping.hpp"
#include "mobman/sensing.hpp"
#include "mobman/sim.hpp"

using namespace mobman;

namespace {

const std::filesystem::path kDir = MOBMAN_SCENARIO_DIR;

void BM_LidarScan(benchmark::State& state) {
  const GridMap world = read_map_file(kDir / "warehouse8x8.map");
  const Pose2D pose(2.0, 2.0, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_lidar(world, pose, kDefaultLidarBeams, kDefaultLidarRange));
  }
}

void BM_MapperIntegrate(benchmark::State& state) {
  const GridMap world = read_map_file(kDir / "warehouse8x8.map");
  const Pose2D pose(2.0, 2.0, 0.3);
  const LidarScan scan = simulate_lidar(world, pose, kDefaultLidarBeams, kDefaultLidarRange);
  OccupancyMapper mapper(GridMap(world.width(), world.height(), world.resolution(),
                                 CellState::Unknown));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mapper.integrate(pose, scan));
  }
}

void BM_WarehouseMission(benchmark::State& state) {
  const Scenario sc = load_scenario_file(kDir / "warehouse.scenario");
  SimOptions opts;
  opts.record_decisions = false;
  long ticks = 0;
  for (auto _ : state) {
    const SimResult r = run_sim(sc, opts);
    ticks = r.metrics.ticks;
  }
  state.counters["ticks"] = static_cast<double>(ticks);
  state.counters["us_per_tick"] = benchmark::Counter(
      static_cast<double>(ticks), benchmark::Counter::kIsIterationInvariantRate |
                                      benchmark::Counter::kInvert);
}

}  // namespace

BENCHMARK(BM_LidarScan)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MapperIntegrate)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_WarehouseMission)->Unit(benchmark::kMillisecond)->Iterations(2);
