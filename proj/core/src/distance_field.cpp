#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <utility>

#include "mobman/error.hpp"
#include "mobman/planning.hpp"

namespace mobman {

DistanceField::DistanceField(int width, int height, double resolution, std::vector<double> d)
    : width_(width), height_(height), resolution_(resolution), d_(std::move(d)) {
  if (d_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("DistanceField: size mismatch");
  }
}

DistanceField distance_field(const GridMap& map) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int w = map.width();
  const int h = map.height();
  const double res = map.resolution();
  const double diag = std::sqrt(2.0) * res;

  std::vector<double> d(map.size(), kInf);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] != CellState::Free) {
      d[i] = 0.0;
      frontier.emplace(0.0, i);
    }
  }

  while (!frontier.empty()) {
    const auto [di, i] = frontier.top();
    frontier.pop();
    if (di > d[i]) {
      continue;
    }
    const Cell c = map.cell_at(i);
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) {
          continue;
        }
        const Cell n{c.col + dc, c.row + dr};
        if (n.col < 0 || n.col >= w || n.row < 0 || n.row >= h) {
          continue;
        }
        const std::size_t ni = map.index(n);
        const double cand = di + ((dr != 0 && dc != 0) ? diag : res);
        if (cand < d[ni]) {
          d[ni] = cand;
          frontier.emplace(cand, ni);
        }
      }
    }
  }
  return DistanceField(w, h, res, std::move(d));
}

double safety_cost(double d, double k) {
  if (d == 0.0) {
    throw WallContact("safety_cost: cell touches a wall");
  }
  if (!(d > 0.0)) {
    throw std::invalid_argument("safety_cost: distance must be positive");
  }
  if (k == 0.0 || std::isinf(d)) {
    return 0.0;
  }
  return k / d;
}

}  // namespace mobman
