#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mobman/grid_map.hpp"

namespace mobman {

// ---------------------------------------------------------------------------
// Distance field

/// Per-cell center-to-center distance (m) to the nearest Occupied or Unknown
/// cell, measured along 8-connected grid steps of length {1, sqrt 2} * res.
/// Infinity when the map has no such cell.
class DistanceField {
 public:
  DistanceField() = default;
  DistanceField(int width, int height, double resolution, std::vector<double> d);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double resolution() const noexcept { return resolution_; }

  double at(Cell c) const {
    return d_.at(static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
                 static_cast<std::size_t>(c.col));
  }
  double operator[](std::size_t i) const { return d_[i]; }
  const std::vector<double>& values() const noexcept { return d_; }

  friend bool operator==(const DistanceField&, const DistanceField&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  std::vector<double> d_;
};

/// Multi-source brushfire (Dijkstra over the 8-connected grid) seeded from
/// every Occupied and Unknown cell.
DistanceField distance_field(const GridMap& map);

/// Wall-proximity surcharge K / d. Returns 0 for K == 0 or d == infinity.
/// Throws WallContact for d == 0.
double safety_cost(double d, double k);

// ---------------------------------------------------------------------------
// A*

enum class OpenList { Heap, Linear };

/// Where the K/d surcharge enters the search.
enum class SafetyMode {
  /// Surcharge of the entered cell is added to the edge cost, so G carries
  /// the accumulated safety cost and the result is exact.
  Accumulated,
  /// G holds move cost only; the surcharge of the node itself is added at
  /// priority time. Not exact; kept for comparison.
  NodeLocal,
};

struct AStarParams {
  double k = 0.05;           // cost * m
  double clearance = 0.366;  // m; cells with d <= clearance are blocked
  OpenList open_list = OpenList::Heap;
  SafetyMode safety = SafetyMode::Accumulated;

  friend bool operator==(const AStarParams&, const AStarParams&) = default;
};

struct PlanNode {
  Cell cell;
  double g = 0.0;  // accumulated cost from start
  double h = 0.0;  // Euclidean distance to goal, m
  double s = 0.0;  // safety surcharge paid on entering this cell
  std::optional<Cell> parent;
};

struct PlanResult {
  std::vector<Cell> cells;       // start -> goal, 8-connected
  std::vector<PlanNode> nodes;   // cost breakdown, parallel to cells
  double total_cost = 0.0;
  std::uint64_t expanded = 0;
  std::vector<Point2> waypoints;  // simplified polyline in meters

  /// Sum of move costs along `cells`, m.
  double path_length(double resolution) const;
};

/// Minimum-cost 8-connected path with edge cost move(a,b) + K/d(b). Diagonal
/// moves may not cut a blocked corner. Ties on J = G + H break on lower H,
/// then lower row-major index, identically for both open-list variants.
///
/// Throws InvalidEndpoint when start or goal is not a Free cell with
/// d > clearance, NoPath when the goal is unreachable.
PlanResult astar(const GridMap& map, const DistanceField& field, Cell start, Cell goal,
                 const AStarParams& params = {});

/// Greedy line-of-sight shortcutting of a cell path. A shortcut survives only
/// if every cell it passes through (corners included) is Free with
/// d > clearance, double-checked by sampling at resolution/4.
std::vector<Point2> simplify_path(const std::vector<Cell>& cells, const GridMap& map,
                                  const DistanceField& field, double clearance);

/// True if the straight segment a-b passes only through Free cells with
/// d > clearance.
bool segment_clear(Point2 a, Point2 b, const GridMap& map, const DistanceField& field,
                   double clearance);

// ---------------------------------------------------------------------------
// Open-list comparison

struct BenchEntry {
  OpenList variant = OpenList::Heap;
  int width = 0;
  int height = 0;
  int trial = 0;
  double cost = 0.0;  // infinity when no path exists
  std::uint64_t expanded = 0;
  std::int64_t micros = 0;
  std::vector<Cell> path;

  /// `variant=<heap|linear> map=<W>x<H> trial=<i> cost=<float> expanded=<int> micros=<int>`
  std::string to_line() const;
};

struct BenchReport {
  std::vector<BenchEntry> entries;
  bool costs_equal = true;
  bool expansions_equal = true;
  bool paths_equal = true;

  double median_micros(OpenList variant) const;
};

/// Runs the Heap and Linear variants on identical inputs `trials` times each,
/// interleaved and serialized.
BenchReport compare_open_lists(const GridMap& map, Cell start, Cell goal, int trials,
                               AStarParams params = {});

/// Random map with the given obstacle density; the two far corner cells and
/// their neighbours are kept free.
GridMap random_obstacle_map(int width, int height, double resolution, double density,
                            std::uint64_t seed);

const char* to_string(OpenList v);

}  // namespace mobman
