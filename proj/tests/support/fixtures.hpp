#pragma once

#include <cmath>
#include <vector>

#include "mobman/geometry.hpp"
#include "mobman/grid_map.hpp"

namespace fixture {

/// 5 x 9 cells at 1 m: walls on the border, a 3-wide corridor of Free cells
/// in columns 1..3, rows 1..7. Start and goal hug the left wall so that the
/// move-optimal path runs straight along it.
inline mobman::GridMap corridor() {
  mobman::GridMap m(5, 9, 1.0);
  for (int r = 0; r < 9; ++r) {
    m.set({0, r}, mobman::CellState::Occupied);
    m.set({4, r}, mobman::CellState::Occupied);
  }
  for (int c = 0; c < 5; ++c) {
    m.set({c, 0}, mobman::CellState::Occupied);
    m.set({c, 8}, mobman::CellState::Occupied);
  }
  return m;
}

inline constexpr mobman::Cell kCorridorStart{1, 1};
inline constexpr mobman::Cell kCorridorGoal{1, 7};
inline constexpr double kCorridorK = 1.0;

/// Square room of Free cells walled by a one-cell Occupied border.
inline mobman::GridMap closed_room(double side, double res) {
  const int n = static_cast<int>(std::lround(side / res));
  mobman::GridMap m(n, n, res);
  for (int i = 0; i < n; ++i) {
    m.set({i, 0}, mobman::CellState::Occupied);
    m.set({i, n - 1}, mobman::CellState::Occupied);
    m.set({0, i}, mobman::CellState::Occupied);
    m.set({n - 1, i}, mobman::CellState::Occupied);
  }
  return m;
}

/// Filled 0.20 x 0.05 m grid at 5 mm pitch, centred on the origin. Symmetric
/// about both axes, so its principal axis is exactly x.
inline std::vector<mobman::Point2> anisotropic_cluster() {
  std::vector<mobman::Point2> pts;
  for (int i = -20; i <= 20; ++i) {
    for (int j = -5; j <= 5; ++j) {
      pts.push_back({0.005 * i, 0.005 * j});
    }
  }
  return pts;
}

}  // namespace fixture
