#include "mobman/render.hpp"

namespace mobman {

std::string render(const GridMap& map, const std::vector<Point2>& trajectory,
                   const std::vector<Cell>& path) {
  std::vector<int> px(map.size());
  for (int row = 0; row < map.height(); ++row) {
    for (int col = 0; col < map.width(); ++col) {
      const Cell c{col, row};
      switch (map.at(c)) {
        case CellState::Free:
          px[map.index(c)] = kPixelFree;
          break;
        case CellState::Occupied:
          px[map.index(c)] = kPixelOccupied;
          break;
        case CellState::Unknown:
          px[map.index(c)] = kPixelUnknown;
          break;
      }
    }
  }
  for (const Cell c : path) {
    if (map.contains(c)) {
      px[map.index(c)] = kPixelPath;
    }
  }
  for (const Point2 p : trajectory) {
    if (const auto c = map.world_to_cell(p)) {
      px[map.index(*c)] = kPixelTrajectory;
    }
  }

  std::string out =
      "P2\n" + std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n255\n";
  for (int row = map.height() - 1; row >= 0; --row) {
    if (row != map.height() - 1) {
      out += '\n';
    }
    for (int col = 0; col < map.width(); ++col) {
      if (col > 0) {
        out += ' ';
      }
      out += std::to_string(px[map.index({col, row})]);
    }
  }
  return out;
}

}  // namespace mobman
