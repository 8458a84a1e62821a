#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "mobman/error.hpp"
#include "mobman/planning.hpp"

namespace mobman {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Key {
  double f;
  double h;
  std::size_t index;

  friend bool operator<(const Key& a, const Key& b) {
    return std::tie(a.f, a.h, a.index) < std::tie(b.f, b.h, b.index);
  }
  friend bool operator>(const Key& a, const Key& b) { return b < a; }
};

// Lazy-deletion binary heap. Entries for already closed nodes are skipped;
// an improved node always carries a strictly smaller key than its stale
// entries, so it surfaces first.
class HeapOpenList {
 public:
  void push(const Key& k, std::size_t) { heap_.push(k); }
  void decrease(const Key& k, std::size_t i) { push(k, i); }
  bool empty() const { return heap_.empty(); }
  template <class IsClosed>
  std::size_t pop(IsClosed&& closed) {
    while (!heap_.empty()) {
      const Key top = heap_.top();
      heap_.pop();
      if (!closed(top.index)) {
        return top.index;
      }
    }
    return kNone;
  }

 private:
  std::priority_queue<Key, std::vector<Key>, std::greater<>> heap_;
};

// Unsorted array scanned in full on every pop.
class LinearOpenList {
 public:
  explicit LinearOpenList(const std::vector<Key>& keys) : keys_(keys) {}
  void push(const Key&, std::size_t i) { open_.push_back(i); }
  void decrease(const Key&, std::size_t) {}
  bool empty() const { return open_.empty(); }
  template <class IsClosed>
  std::size_t pop(IsClosed&&) {
    if (open_.empty()) {
      return kNone;
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < open_.size(); ++j) {
      if (keys_[open_[j]] < keys_[open_[best]]) {
        best = j;
      }
    }
    const std::size_t node = open_[best];
    open_[best] = open_.back();
    open_.pop_back();
    return node;
  }

 private:
  const std::vector<Key>& keys_;
  std::vector<std::size_t> open_;
};

struct Search {
  const GridMap& map;
  const DistanceField& field;
  const AStarParams& params;
  Cell goal;
  Point2 goal_center;

  std::vector<double> g;
  std::vector<double> s;
  std::vector<std::size_t> parent;
  std::vector<std::uint8_t> closed;
  std::vector<std::uint8_t> seen;
  std::vector<Key> keys;

  Search(const GridMap& m, const DistanceField& f, const AStarParams& p, Cell gl)
      : map(m),
        field(f),
        params(p),
        goal(gl),
        goal_center(m.cell_center(gl)),
        g(m.size(), kInf),
        s(m.size(), 0.0),
        parent(m.size(), kNone),
        closed(m.size(), 0),
        seen(m.size(), 0),
        keys(m.size(), Key{kInf, kInf, 0}) {}

  bool blocked(Cell c) const {
    if (!map.contains(c)) {
      return true;
    }
    const std::size_t i = map.index(c);
    return map[i] != CellState::Free || !(field[i] > params.clearance);
  }

  double heuristic(Cell c) const { return distance(map.cell_center(c), goal_center); }

  double surcharge(std::size_t i) const { return safety_cost(field[i], params.k); }

  Key key_for(std::size_t i, double h) const {
    double f = g[i] + h;
    if (params.safety == SafetyMode::NodeLocal) {
      f += s[i];
    }
    return {f, h, i};
  }

  template <class Open>
  std::uint64_t run(Cell start, Open& open) {
    const std::size_t si = map.index(start);
    const std::size_t gi = map.index(goal);
    g[si] = 0.0;
    s[si] = 0.0;
    seen[si] = 1;
    keys[si] = key_for(si, heuristic(start));
    open.push(keys[si], si);

    const double res = map.resolution();
    const double diag = std::sqrt(2.0) * res;
    std::uint64_t expanded = 0;
    auto is_closed = [this](std::size_t i) { return closed[i] != 0; };

    while (!open.empty()) {
      const std::size_t i = open.pop(is_closed);
      if (i == kNone) {
        break;
      }
      closed[i] = 1;
      ++expanded;
      if (i == gi) {
        return expanded;
      }
      const Cell c = map.cell_at(i);
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) {
            continue;
          }
          const Cell n{c.col + dc, c.row + dr};
          if (blocked(n)) {
            continue;
          }
          const bool diagonal = dr != 0 && dc != 0;
          if (diagonal && (blocked({c.col + dc, c.row}) || blocked({c.col, c.row + dr}))) {
            continue;
          }
          const std::size_t ni = map.index(n);
          if (closed[ni]) {
            continue;
          }
          const double surcharge_n = surcharge(ni);
          double cand = g[i] + (diagonal ? diag : res);
          if (params.safety == SafetyMode::Accumulated) {
            cand += surcharge_n;
          }
          if (cand < g[ni]) {
            g[ni] = cand;
            s[ni] = surcharge_n;
            parent[ni] = i;
            keys[ni] = key_for(ni, heuristic(n));
            if (seen[ni]) {
              open.decrease(keys[ni], ni);
            } else {
              seen[ni] = 1;
              open.push(keys[ni], ni);
            }
          }
        }
      }
    }
    return expanded;
  }
};

void check_endpoint(const GridMap& map, const DistanceField& field, Cell c, double clearance,
                    const char* which) {
  if (!map.contains(c)) {
    throw InvalidEndpoint(std::string(which) + " lies outside the map");
  }
  if (map.at(c) != CellState::Free) {
    throw InvalidEndpoint(std::string(which) + " is not a free cell");
  }
  if (!(field.at(c) > clearance)) {
    throw InvalidEndpoint(std::string(which) + " is within clearance of a wall");
  }
}

}  // namespace

double PlanResult::path_length(double resolution) const {
  double len = 0.0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const bool diagonal =
        cells[i].col != cells[i - 1].col && cells[i].row != cells[i - 1].row;
    len += diagonal ? std::sqrt(2.0) * resolution : resolution;
  }
  return len;
}

PlanResult astar(const GridMap& map, const DistanceField& field, Cell start, Cell goal,
                 const AStarParams& params) {
  if (field.width() != map.width() || field.height() != map.height()) {
    throw std::invalid_argument("astar: distance field does not match map");
  }
  if (params.k < 0.0 || params.clearance < 0.0) {
    throw std::invalid_argument("astar: k and clearance must be >= 0");
  }
  check_endpoint(map, field, start, params.clearance, "start");
  check_endpoint(map, field, goal, params.clearance, "goal");

  Search search(map, field, params, goal);
  std::uint64_t expanded = 0;
  if (params.open_list == OpenList::Heap) {
    HeapOpenList open;
    expanded = search.run(start, open);
  } else {
    LinearOpenList open(search.keys);
    expanded = search.run(start, open);
  }

  const std::size_t gi = map.index(goal);
  if (!search.closed[gi]) {
    throw NoPath("no path from (" + std::to_string(start.col) + "," +
                 std::to_string(start.row) + ") to (" + std::to_string(goal.col) + "," +
                 std::to_string(goal.row) + ")");
  }

  PlanResult result;
  result.expanded = expanded;
  result.total_cost = search.g[gi];
  for (std::size_t i = gi; i != kNone; i = search.parent[i]) {
    const Cell c = map.cell_at(i);
    PlanNode node;
    node.cell = c;
    node.g = search.g[i];
    node.h = search.heuristic(c);
    node.s = search.s[i];
    if (search.parent[i] != kNone) {
      node.parent = map.cell_at(search.parent[i]);
    }
    result.nodes.push_back(node);
  }
  std::reverse(result.nodes.begin(), result.nodes.end());
  result.cells.reserve(result.nodes.size());
  for (const auto& n : result.nodes) {
    result.cells.push_back(n.cell);
  }
  if (params.safety == SafetyMode::NodeLocal) {
    // Report the same path-cost definition as the exact mode.
    double cost = 0.0;
    for (const auto& n : result.nodes) {
      cost += n.s;
    }
    result.total_cost = result.path_length(map.resolution()) + cost;
  }
  result.waypoints = simplify_path(result.cells, map, field, params.clearance);
  return result;
}

}  // namespace mobman
