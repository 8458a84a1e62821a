#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mobman/geometry.hpp"

namespace mobman {

enum class CellState : std::uint8_t { Free, Occupied, Unknown };

struct Cell {
  int col = 0;
  int row = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Occupancy grid stored as a flat row-major array. Origin is the bottom-left
/// corner of cell (0,0); columns grow along +x and rows along +y.
class GridMap {
 public:
  GridMap() = default;
  GridMap(int width, int height, double resolution, CellState fill = CellState::Free);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double resolution() const noexcept { return resolution_; }
  std::size_t size() const noexcept { return cells_.size(); }

  bool contains(Cell c) const noexcept {
    return c.col >= 0 && c.col < width_ && c.row >= 0 && c.row < height_;
  }
  std::size_t index(Cell c) const noexcept {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }
  Cell cell_at(std::size_t index) const noexcept {
    return {static_cast<int>(index % static_cast<std::size_t>(width_)),
            static_cast<int>(index / static_cast<std::size_t>(width_))};
  }

  CellState at(Cell c) const { return cells_.at(index(c)); }
  CellState operator[](std::size_t i) const { return cells_[i]; }
  void set(Cell c, CellState s) { cells_.at(index(c)) = s; }

  /// World coordinates of the cell center.
  Point2 cell_center(Cell c) const {
    return {(c.col + 0.5) * resolution_, (c.row + 0.5) * resolution_};
  }

  /// Cell containing `p`, or nullopt if `p` lies outside the mapped extent.
  std::optional<Cell> world_to_cell(Point2 p) const;

  bool is_free(Cell c) const { return contains(c) && at(c) == CellState::Free; }

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  std::vector<CellState> cells_;
};

/// Parses the `P_GRID` text format. Throws ParseError on malformed input.
GridMap load_map(std::string_view text);

/// Serializes to the `P_GRID` text format; load_map(save_map(m)) == m.
std::string save_map(const GridMap& map);

GridMap read_map_file(const std::filesystem::path& path);
void write_map_file(const std::filesystem::path& path, const GridMap& map);

/// Shortest text form of `v` that parses back to the same double.
std::string format_double(double v);

enum class CornerPolicy {
  /// A ray passing exactly through a grid vertex steps diagonally.
  Diagonal,
  /// A ray passing exactly through a grid vertex also visits both side cells.
  Supercover,
};

/// Exact cell-crossing traversal (Amanatides-Woo) of the ray origin + t*dir,
/// dir a unit vector, for t in [0, max_t]. Calls visit(cell, t_enter) for every
/// cell in order of entry; returning false from visit stops the walk. Stops on
/// leaving the map. Side cells added by Supercover report the vertex t.
template <class Visit>
void traverse_ray(const GridMap& map, Point2 origin, Point2 dir, double max_t, Visit&& visit,
                  CornerPolicy policy = CornerPolicy::Diagonal) {
  const double res = map.resolution();
  const auto start = map.world_to_cell(origin);
  if (!start) {
    return;
  }
  Cell cell = *start;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int step_x = dir.x > 0.0 ? 1 : (dir.x < 0.0 ? -1 : 0);
  const int step_y = dir.y > 0.0 ? 1 : (dir.y < 0.0 ? -1 : 0);
  double t_max_x = kInf;
  double t_max_y = kInf;
  double t_delta_x = kInf;
  double t_delta_y = kInf;
  if (step_x != 0) {
    const double boundary = (cell.col + (step_x > 0 ? 1 : 0)) * res;
    t_max_x = (boundary - origin.x) / dir.x;
    t_delta_x = res / std::abs(dir.x);
  }
  if (step_y != 0) {
    const double boundary = (cell.row + (step_y > 0 ? 1 : 0)) * res;
    t_max_y = (boundary - origin.y) / dir.y;
    t_delta_y = res / std::abs(dir.y);
  }

  double t_enter = 0.0;
  while (true) {
    if (!visit(cell, t_enter)) {
      return;
    }
    double t_next = 0.0;
    if (t_max_x < t_max_y) {
      t_next = t_max_x;
      cell.col += step_x;
      t_max_x += t_delta_x;
    } else if (t_max_y < t_max_x) {
      t_next = t_max_y;
      cell.row += step_y;
      t_max_y += t_delta_y;
    } else {
      t_next = t_max_x;
      if (t_next == kInf) {
        return;
      }
      if (t_next > max_t) {
        return;
      }
      if (policy == CornerPolicy::Supercover) {
        const Cell side_a{cell.col + step_x, cell.row};
        const Cell side_b{cell.col, cell.row + step_y};
        if (map.contains(side_a) && !visit(side_a, t_next)) {
          return;
        }
        if (map.contains(side_b) && !visit(side_b, t_next)) {
          return;
        }
      }
      cell.col += step_x;
      cell.row += step_y;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    }
    if (t_next > max_t || !map.contains(cell)) {
      return;
    }
    t_enter = t_next;
  }
}

}  // namespace mobman
