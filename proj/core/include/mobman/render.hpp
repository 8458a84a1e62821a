#pragma once

#include <string>
#include <vector>

#include "mobman/geometry.hpp"
#include "mobman/grid_map.hpp"

namespace mobman {

inline constexpr int kPixelOccupied = 0;
inline constexpr int kPixelTrajectory = 64;
inline constexpr int kPixelUnknown = 128;
inline constexpr int kPixelPath = 192;
inline constexpr int kPixelFree = 255;

/// ASCII PGM (P2) of the map, top line = highest row, no newline after the
/// last row. Path cells are drawn
/// over the base map and trajectory cells (world points) over both. Points
/// outside the map are ignored.
std::string render(const GridMap& map, const std::vector<Point2>& trajectory = {},
                   const std::vector<Cell>& path = {});

}  // namespace mobman
