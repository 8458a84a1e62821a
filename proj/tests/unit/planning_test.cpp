#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mobman/error.hpp"
#include "mobman/planning.hpp"
#include "mobman/random.hpp"
#include "oracles.hpp"

using namespace mobman;

namespace {

GridMap random_map(Rng& rng, int w, int h, double res, double p_occ, double p_unknown = 0.0) {
  GridMap m(w, h, res);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double u = uniform01(rng);
    if (u < p_occ) {
      m.set(m.cell_at(i), CellState::Occupied);
    } else if (u < p_occ + p_unknown) {
      m.set(m.cell_at(i), CellState::Unknown);
    }
  }
  return m;
}

AStarParams plain(double k = 0.0, double clearance = 0.0) {
  AStarParams p;
  p.k = k;
  p.clearance = clearance;
  return p;
}

void expect_valid_path(const PlanResult& r, const GridMap& m, const DistanceField& f, Cell start,
                       Cell goal, double clearance) {
  ASSERT_FALSE(r.cells.empty());
  EXPECT_EQ(r.cells.front(), start);
  EXPECT_EQ(r.cells.back(), goal);
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    const Cell c = r.cells[i];
    EXPECT_EQ(m.at(c), CellState::Free);
    EXPECT_GT(f.at(c), clearance);
    if (i > 0) {
      const Cell p = r.cells[i - 1];
      EXPECT_LE(std::abs(c.col - p.col), 1);
      EXPECT_LE(std::abs(c.row - p.row), 1);
      EXPECT_FALSE(c == p);
    }
  }
}

}  // namespace

TEST(DistanceField, SingleWallNeighbours) {
  GridMap m(5, 5, 0.1);
  m.set({2, 2}, CellState::Occupied);
  const DistanceField f = distance_field(m);
  EXPECT_EQ(f.at({2, 2}), 0.0);
  EXPECT_DOUBLE_EQ(f.at({3, 2}), 0.1);
  EXPECT_DOUBLE_EQ(f.at({3, 3}), std::sqrt(2.0) * 0.1);
}

TEST(DistanceField, EmptyMapIsInfinite) {
  const DistanceField f = distance_field(GridMap(4, 3, 0.5));
  for (double v : f.values()) {
    EXPECT_TRUE(std::isinf(v));
  }
}

TEST(DistanceField, UnknownIsSource) {
  GridMap m(3, 1, 1.0);
  m.set({0, 0}, CellState::Unknown);
  const DistanceField f = distance_field(m);
  EXPECT_EQ(f.at({0, 0}), 0.0);
  EXPECT_EQ(f.at({2, 0}), 2.0);
}

TEST(DistanceFieldProperty, MatchesBruteForce) {
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const GridMap m = random_map(rng, 15, 15, 0.05, 0.08, 0.03);
    const DistanceField f = distance_field(m);
    const std::vector<double> brute = oracle::brute_distance_field(m);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (std::isinf(brute[i])) {
        ASSERT_TRUE(std::isinf(f[i]));
      } else {
        ASSERT_NEAR(f[i], brute[i], 1e-12);
      }
      ASSERT_EQ(f[i] == 0.0, m[i] != CellState::Free);
    }
  }
}

TEST(DistanceFieldProperty, LipschitzAndIdempotent) {
  Rng rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    const GridMap m = random_map(rng, 20, 20, 0.1, 0.05);
    const DistanceField f = distance_field(m);
    EXPECT_EQ(f, distance_field(m));
    for (int r = 0; r < 20; ++r) {
      for (int c = 0; c < 20; ++c) {
        for (const Cell n : {Cell{c + 1, r}, Cell{c, r + 1}, Cell{c + 1, r + 1}}) {
          if (!m.contains(n) || std::isinf(f.at(n))) {
            continue;
          }
          const double step = (n.col != c && n.row != r ? std::sqrt(2.0) : 1.0) * 0.1;
          ASSERT_LE(std::abs(f.at({c, r}) - f.at(n)), step + 1e-12);
        }
      }
    }
  }
}

TEST(SafetyCost, Examples) {
  EXPECT_EQ(safety_cost(3.0, 0.0), 0.0);
  EXPECT_EQ(safety_cost(4.0, 2.0), 0.5);
  EXPECT_THROW(safety_cost(0.0, 1.0), WallContact);
  Rng rng(63);
  for (int i = 0; i < 1000; ++i) {
    const double a = uniform(rng, 0.01, 10.0);
    const double b = uniform(rng, 0.01, 10.0);
    if (a < b) {
      ASSERT_GT(safety_cost(a, 0.3), safety_cost(b, 0.3));
    }
  }
}

TEST(AStar, EmptyGridDiagonal) {
  const GridMap m(5, 5, 1.0);
  const DistanceField f = distance_field(m);
  const PlanResult r = astar(m, f, {0, 0}, {4, 4}, plain());
  EXPECT_NEAR(r.total_cost, 4 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(*oracle::dijkstra_cost(m, f.values(), {0, 0}, {4, 4}, 0, 0), r.total_cost, 1e-12);
  EXPECT_EQ(r.cells.size(), 5u);
  EXPECT_EQ(r.nodes.back().h, 0.0);
  EXPECT_EQ(r.nodes.front().g, 0.0);
}

TEST(AStar, StartEqualsGoal) {
  const GridMap m(5, 5, 1.0);
  const PlanResult r = astar(m, distance_field(m), {2, 3}, {2, 3}, plain());
  EXPECT_EQ(r.cells, (std::vector<Cell>{{2, 3}}));
  EXPECT_EQ(r.total_cost, 0.0);
}

TEST(AStar, EnclosedGoal) {
  GridMap m(7, 7, 1.0);
  for (const Cell c : {Cell{4, 4}, Cell{5, 4}, Cell{6, 4}, Cell{4, 5}, Cell{4, 6}}) {
    m.set(c, CellState::Occupied);
  }
  EXPECT_THROW(astar(m, distance_field(m), {0, 0}, {6, 6}, plain()), NoPath);
}

TEST(AStar, InvalidEndpoints) {
  GridMap m(5, 5, 1.0);
  m.set({1, 1}, CellState::Occupied);
  m.set({3, 3}, CellState::Unknown);
  const DistanceField f = distance_field(m);
  EXPECT_THROW(astar(m, f, {1, 1}, {4, 4}, plain()), InvalidEndpoint);
  EXPECT_THROW(astar(m, f, {0, 4}, {3, 3}, plain()), InvalidEndpoint);
  EXPECT_THROW(astar(m, f, {0, 4}, {9, 9}, plain()), InvalidEndpoint);
  // Adjacent to a wall: d = 1 is not above a clearance of 1.
  EXPECT_THROW(astar(m, f, {1, 2}, {4, 0}, plain(0.0, 1.0)), InvalidEndpoint);
}

TEST(AStar, NoCornerCutting) {
  GridMap m(2, 2, 1.0);
  m.set({1, 0}, CellState::Occupied);
  const PlanResult r = astar(m, distance_field(m), {0, 0}, {1, 1}, plain());
  EXPECT_EQ(r.cells, (std::vector<Cell>{{0, 0}, {0, 1}, {1, 1}}));
  EXPECT_DOUBLE_EQ(r.total_cost, 2.0);
}

TEST(AStar, CorridorCenterlineWithSafety) {
  const GridMap m = fixture::corridor();
  const DistanceField f = distance_field(m);
  const oracle::ExhaustiveResult ex = oracle::exhaustive_paths(
      m, f.values(), fixture::kCorridorStart, fixture::kCorridorGoal, fixture::kCorridorK, 0.0);
  ASSERT_EQ(ex.best.size(), 1u);
  const PlanResult r =
      astar(m, f, fixture::kCorridorStart, fixture::kCorridorGoal, plain(fixture::kCorridorK));
  EXPECT_EQ(r.cells, ex.best.front());
  EXPECT_NEAR(r.total_cost, ex.cost, 1e-12);
  for (std::size_t i = 1; i + 1 < r.cells.size(); ++i) {
    EXPECT_EQ(r.cells[i].col, 2);
  }

  const PlanResult flat = astar(m, f, fixture::kCorridorStart, fixture::kCorridorGoal, plain());
  const oracle::ExhaustiveResult ex0 = oracle::exhaustive_paths(
      m, f.values(), fixture::kCorridorStart, fixture::kCorridorGoal, 0.0, 0.0);
  EXPECT_NEAR(flat.total_cost, ex0.cost, 1e-12);
  EXPECT_LT(flat.path_length(1.0), r.path_length(1.0) - 1e-9);
}

TEST(AStar, NodeLocalModeIsSelectable) {
  const GridMap m = fixture::corridor();
  const DistanceField f = distance_field(m);
  AStarParams p = plain(fixture::kCorridorK);
  p.safety = SafetyMode::NodeLocal;
  const PlanResult r = astar(m, f, fixture::kCorridorStart, fixture::kCorridorGoal, p);
  EXPECT_EQ(r.cells.front(), fixture::kCorridorStart);
  EXPECT_EQ(r.cells.back(), fixture::kCorridorGoal);
}

TEST(AStarProperty, MatchesDijkstraAndVariantsAgree) {
  Rng rng(64);
  int solvable = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const GridMap m = random_map(rng, 20, 20, 1.0, 0.2);
    const DistanceField f = distance_field(m);
    const Cell s{static_cast<int>(uniform_index(rng, 20)), static_cast<int>(uniform_index(rng, 20))};
    const Cell g{static_cast<int>(uniform_index(rng, 20)), static_cast<int>(uniform_index(rng, 20))};
    const double k = trial % 2 == 0 ? 0.0 : uniform(rng, 0.01, 2.0);
    const auto oracle_cost = oracle::dijkstra_cost(m, f.values(), s, g, k, 0.0);
    if (m.at(s) != CellState::Free || m.at(g) != CellState::Free) {
      EXPECT_THROW(astar(m, f, s, g, plain(k)), InvalidEndpoint);
      continue;
    }
    if (!oracle_cost) {
      EXPECT_THROW(astar(m, f, s, g, plain(k)), NoPath);
      continue;
    }
    ++solvable;
    AStarParams heap = plain(k);
    AStarParams linear = plain(k);
    linear.open_list = OpenList::Linear;
    const PlanResult a = astar(m, f, s, g, heap);
    const PlanResult b = astar(m, f, s, g, linear);
    ASSERT_NEAR(a.total_cost, *oracle_cost, 1e-9) << "trial " << trial;
    ASSERT_EQ(a.total_cost, b.total_cost);
    ASSERT_EQ(a.cells, b.cells);
    ASSERT_EQ(a.expanded, b.expanded);
    expect_valid_path(a, m, f, s, g, 0.0);
  }
  EXPECT_GT(solvable, 50);
}

TEST(AStarProperty, RespectsClearance) {
  Rng rng(65);
  for (int trial = 0; trial < 60; ++trial) {
    const GridMap m = random_map(rng, 30, 30, 0.1, 0.04);
    const DistanceField f = distance_field(m);
    const Cell s{static_cast<int>(uniform_index(rng, 30)), static_cast<int>(uniform_index(rng, 30))};
    const Cell g{static_cast<int>(uniform_index(rng, 30)), static_cast<int>(uniform_index(rng, 30))};
    const auto oracle_cost = oracle::dijkstra_cost(m, f.values(), s, g, 0.05, 0.15);
    if (!oracle_cost) {
      continue;
    }
    const PlanResult r = astar(m, f, s, g, plain(0.05, 0.15));
    EXPECT_NEAR(r.total_cost, *oracle_cost, 1e-9);
    expect_valid_path(r, m, f, s, g, 0.15);
  }
}

TEST(AStarProperty, Deterministic) {
  Rng rng(66);
  const GridMap m = random_map(rng, 25, 25, 0.1, 0.15);
  GridMap open = m;
  open.set({0, 0}, CellState::Free);
  open.set({24, 24}, CellState::Free);
  const DistanceField f = distance_field(open);
  try {
    const PlanResult a = astar(open, f, {0, 0}, {24, 24}, plain(0.05));
    const PlanResult b = astar(open, f, {0, 0}, {24, 24}, plain(0.05));
    EXPECT_EQ(a.cells, b.cells);
    EXPECT_EQ(a.total_cost, b.total_cost);
  } catch (const NoPath&) {
    SUCCEED();
  }
}

TEST(SimplifyPath, StraightAndLShape) {
  const GridMap m(10, 10, 1.0);
  const DistanceField f = distance_field(m);
  std::vector<Cell> straight;
  for (int c = 0; c < 8; ++c) {
    straight.push_back({c, 4});
  }
  EXPECT_EQ(simplify_path(straight, m, f, 0.0).size(), 2u);

  GridMap wall(10, 10, 1.0);
  for (int r = 4; r < 10; ++r) {
    for (int c = 0; c < 6; ++c) {
      wall.set({c, r}, CellState::Occupied);
    }
  }
  const DistanceField fw = distance_field(wall);
  std::vector<Cell> ell;
  for (int c = 0; c <= 8; ++c) {
    ell.push_back({c, 2});
  }
  for (int r = 3; r <= 8; ++r) {
    ell.push_back({8, r});
  }
  const auto wp = simplify_path(ell, wall, fw, 1.0);
  ASSERT_EQ(wp.size(), 3u);
  EXPECT_EQ(wp[1], wall.cell_center({8, 2}));
}

TEST(SimplifyPathProperty, PolylineStaysClear) {
  Rng rng(67);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const GridMap m = random_map(rng, 40, 40, 0.05, 0.03);
    const DistanceField f = distance_field(m);
    const Cell s{static_cast<int>(uniform_index(rng, 40)), static_cast<int>(uniform_index(rng, 40))};
    const Cell g{static_cast<int>(uniform_index(rng, 40)), static_cast<int>(uniform_index(rng, 40))};
    PlanResult r;
    try {
      r = astar(m, f, s, g, plain(0.01, 0.06));
    } catch (const Error&) {
      continue;
    }
    ++checked;
    ASSERT_EQ(r.waypoints.front(), m.cell_center(s));
    ASSERT_EQ(r.waypoints.back(), m.cell_center(g));
    for (std::size_t i = 1; i < r.waypoints.size(); ++i) {
      const Point2 a = r.waypoints[i - 1];
      const Point2 b = r.waypoints[i];
      const int n = 1 + static_cast<int>(distance(a, b) / (0.05 / 50));
      for (int j = 0; j <= n; ++j) {
        const double t = static_cast<double>(j) / n;
        const auto c = m.world_to_cell({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        ASSERT_TRUE(c.has_value());
        ASSERT_EQ(m.at(*c), CellState::Free);
        ASSERT_GT(f.at(*c), 0.06);
      }
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(CompareOpenLists, AgreeOnRandomMap) {
  const GridMap m = random_obstacle_map(60, 60, 0.05, 0.2, 9);
  AStarParams p = plain();
  const BenchReport rep = compare_open_lists(m, {0, 0}, {59, 59}, 3, p);
  EXPECT_EQ(rep.entries.size(), 6u);
  EXPECT_TRUE(rep.costs_equal);
  EXPECT_TRUE(rep.expansions_equal);
  EXPECT_TRUE(rep.paths_equal);
  EXPECT_GE(rep.median_micros(OpenList::Heap), 0.0);
  EXPECT_THROW(compare_open_lists(m, {0, 0}, {59, 59}, 0, p), std::invalid_argument);
  const std::string line = rep.entries.front().to_line();
  EXPECT_EQ(line.rfind("variant=heap map=60x60 trial=0 cost=", 0), 0u);
}
