#include <algorithm>
#include <chrono>
#include <cstdio>

#include "mobman/error.hpp"
#include "mobman/planning.hpp"
#include "mobman/random.hpp"

namespace mobman {

bool segment_clear(Point2 a, Point2 b, const GridMap& map, const DistanceField& field,
                   double clearance) {
  auto ok = [&](Cell c) {
    return map.contains(c) && map.at(c) == CellState::Free && field.at(c) > clearance;
  };
  const auto ca = map.world_to_cell(a);
  const auto cb = map.world_to_cell(b);
  if (!ca || !cb || !ok(*ca) || !ok(*cb)) {
    return false;
  }
  const double len = distance(a, b);
  if (len == 0.0) {
    return true;
  }
  const Point2 dir = (1.0 / len) * (b - a);

  bool clear = true;
  traverse_ray(
      map, a, dir, len,
      [&](Cell c, double) {
        clear = ok(c);
        return clear;
      },
      CornerPolicy::Supercover);
  if (!clear) {
    return false;
  }

  const double step = map.resolution() / 4.0;
  const int n = static_cast<int>(std::ceil(len / step));
  for (int i = 1; i < n; ++i) {
    const auto c = map.world_to_cell(a + (len * i / n) * dir);
    if (!c || !ok(*c)) {
      return false;
    }
  }
  return true;
}

std::vector<Point2> simplify_path(const std::vector<Cell>& cells, const GridMap& map,
                                  const DistanceField& field, double clearance) {
  std::vector<Point2> waypoints;
  if (cells.empty()) {
    return waypoints;
  }
  std::size_t anchor = 0;
  waypoints.push_back(map.cell_center(cells[0]));
  while (anchor + 1 < cells.size()) {
    std::size_t reach = anchor + 1;
    const Point2 from = map.cell_center(cells[anchor]);
    while (reach + 1 < cells.size() &&
           segment_clear(from, map.cell_center(cells[reach + 1]), map, field, clearance)) {
      ++reach;
    }
    waypoints.push_back(map.cell_center(cells[reach]));
    anchor = reach;
  }
  return waypoints;
}

const char* to_string(OpenList v) { return v == OpenList::Heap ? "heap" : "linear"; }

std::string BenchEntry::to_line() const {
  char cost_buf[64];
  if (std::isinf(cost)) {
    std::snprintf(cost_buf, sizeof(cost_buf), "inf");
  } else {
    std::snprintf(cost_buf, sizeof(cost_buf), "%.9f", cost);
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf), "variant=%s map=%dx%d trial=%d cost=%s expanded=%llu micros=%lld",
                mobman::to_string(variant), width, height, trial, cost_buf,
                static_cast<unsigned long long>(expanded), static_cast<long long>(micros));
  return buf;
}

double BenchReport::median_micros(OpenList variant) const {
  std::vector<double> t;
  for (const auto& e : entries) {
    if (e.variant == variant) {
      t.push_back(static_cast<double>(e.micros));
    }
  }
  if (t.empty()) {
    return 0.0;
  }
  std::sort(t.begin(), t.end());
  const std::size_t m = t.size() / 2;
  return t.size() % 2 == 1 ? t[m] : 0.5 * (t[m - 1] + t[m]);
}

BenchReport compare_open_lists(const GridMap& map, Cell start, Cell goal, int trials,
                               AStarParams params) {
  if (trials < 1) {
    throw std::invalid_argument("compare_open_lists: trials must be >= 1");
  }
  const DistanceField field = distance_field(map);
  BenchReport report;
  for (int trial = 0; trial < trials; ++trial) {
    for (const OpenList variant : {OpenList::Heap, OpenList::Linear}) {
      params.open_list = variant;
      BenchEntry e;
      e.variant = variant;
      e.width = map.width();
      e.height = map.height();
      e.trial = trial;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        PlanResult r = astar(map, field, start, goal, params);
        e.cost = r.total_cost;
        e.expanded = r.expanded;
        e.path = std::move(r.cells);
      } catch (const NoPath&) {
        e.cost = std::numeric_limits<double>::infinity();
      }
      const auto t1 = std::chrono::steady_clock::now();
      e.micros = std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count();
      report.entries.push_back(std::move(e));
    }
    const BenchEntry& heap = report.entries[report.entries.size() - 2];
    const BenchEntry& lin = report.entries.back();
    report.costs_equal = report.costs_equal && heap.cost == lin.cost;
    report.expansions_equal = report.expansions_equal && heap.expanded == lin.expanded;
    report.paths_equal = report.paths_equal && heap.path == lin.path;
  }
  return report;
}

GridMap random_obstacle_map(int width, int height, double resolution, double density,
                            std::uint64_t seed) {
  GridMap map(width, height, resolution);
  Rng rng(seed);
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      if (uniform01(rng) < density) {
        map.set({col, row}, CellState::Occupied);
      }
    }
  }
  for (int dr = 0; dr < 2; ++dr) {
    for (int dc = 0; dc < 2; ++dc) {
      const Cell lo{std::min(dc, width - 1), std::min(dr, height - 1)};
      const Cell hi{std::max(width - 1 - dc, 0), std::max(height - 1 - dr, 0)};
      map.set(lo, CellState::Free);
      map.set(hi, CellState::Free);
    }
  }
  return map;
}

}  // namespace mobman
