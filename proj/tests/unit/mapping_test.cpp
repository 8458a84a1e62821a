#include <gtest/gtest.h>

#include <numbers>

#include "fixtures.hpp"
#include "mobman/mapping.hpp"
#include "mobman/random.hpp"
#include "oracles.hpp"

using namespace mobman;

namespace {

LidarScan single_beam(double angle, double range, double max_range) {
  LidarScan s;
  s.max_range = max_range;
  s.beams.push_back({angle, range});
  return s;
}

}  // namespace

TEST(Mapping, SingleBeamHit) {
  const GridMap own(20, 5, 0.1, CellState::Unknown);
  // Robot at x = 0.05, wall face of cell 10 at x = 1.0.
  const GridMap out = update_occupancy(own, Pose2D(0.05, 0.25, 0), single_beam(0, 0.95, 2.0));
  EXPECT_EQ(out.at({10, 2}), CellState::Occupied);
  for (int c = 0; c < 10; ++c) {
    EXPECT_EQ(out.at({c, 2}), CellState::Free) << c;
  }
  EXPECT_EQ(out.at({11, 2}), CellState::Unknown);
  EXPECT_EQ(out.at({0, 3}), CellState::Unknown);
}

TEST(Mapping, MaxRangeBeamMarksNoHit) {
  const GridMap own(20, 5, 0.1, CellState::Unknown);
  const GridMap out = update_occupancy(own, Pose2D(0.05, 0.25, 0), single_beam(0, 1.0, 1.0));
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_NE(out[i], CellState::Occupied);
  }
  EXPECT_EQ(out.at({5, 2}), CellState::Free);
}

TEST(Mapping, OccupiedNeedsThreeFreeScansToClear) {
  GridMap own(20, 5, 0.1, CellState::Unknown);
  own.set({5, 2}, CellState::Occupied);
  OccupancyMapper mapper(own);
  const Pose2D pose(0.05, 0.25, 0);
  const LidarScan pass = single_beam(0, 1.5, 2.0);
  mapper.integrate(pose, pass);
  EXPECT_EQ(mapper.map().at({5, 2}), CellState::Occupied);
  mapper.integrate(pose, pass);
  EXPECT_EQ(mapper.map().at({5, 2}), CellState::Occupied);
  mapper.integrate(pose, pass);
  EXPECT_EQ(mapper.map().at({5, 2}), CellState::Free);
}

TEST(Mapping, HitResetsClearingStreak) {
  GridMap own(20, 5, 0.1, CellState::Unknown);
  own.set({5, 2}, CellState::Occupied);
  OccupancyMapper mapper(own);
  const Pose2D pose(0.05, 0.25, 0);
  const LidarScan pass = single_beam(0, 1.5, 2.0);
  const LidarScan hit = single_beam(0, 0.45, 2.0);
  mapper.integrate(pose, pass);
  mapper.integrate(pose, pass);
  const auto fresh = mapper.integrate(pose, hit);
  EXPECT_TRUE(fresh.empty());
  mapper.integrate(pose, pass);
  mapper.integrate(pose, pass);
  EXPECT_EQ(mapper.map().at({5, 2}), CellState::Occupied);
  mapper.integrate(pose, pass);
  EXPECT_EQ(mapper.map().at({5, 2}), CellState::Free);
}

TEST(Mapping, ReportsNewlyOccupiedCells) {
  OccupancyMapper mapper(GridMap(20, 5, 0.1, CellState::Unknown));
  const auto fresh = mapper.integrate(Pose2D(0.05, 0.25, 0), single_beam(0, 0.95, 2.0));
  EXPECT_EQ(fresh, (std::vector<Cell>{{10, 2}}));
  EXPECT_TRUE(mapper.integrate(Pose2D(0.05, 0.25, 0), single_beam(0, 0.95, 2.0)).empty());
}

TEST(Mapping, ClosedRoomFidelity) {
  const GridMap truth = fixture::closed_room(4.0, 0.05);
  const Pose2D pose(2.0, 2.0, 0.0);
  const LidarScan scan = simulate_lidar(truth, pose, kDefaultLidarBeams, kDefaultLidarRange);
  const GridMap own = update_occupancy(GridMap(80, 80, 0.05, CellState::Unknown), pose, scan);

  int visible = 0;
  int agree = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const Cell c = truth.cell_at(i);
    if (truth[i] != CellState::Occupied) {
      EXPECT_NE(own[i], CellState::Occupied) << "phantom wall at " << c.col << "," << c.row;
      continue;
    }
    // Line of sight to the cell center; grazing another wall cell, even at a
    // single vertex, blocks it.
    if (oracle::segment_touches_occupied(truth, pose.position(), truth.cell_center(c), c)) {
      continue;
    }
    ++visible;
    if (own.at(c) == CellState::Occupied) {
      ++agree;
    }
  }
  ASSERT_GT(visible, 300);
  EXPECT_GE(static_cast<double>(agree) / visible, 0.95);
}

TEST(MappingProperty, MonotoneKnowledge) {
  Rng rng(51);
  for (int seq = 0; seq < 1000; ++seq) {
    GridMap truth(25, 25, 0.1);
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (uniform01(rng) < 0.1) {
        truth.set(truth.cell_at(i), CellState::Occupied);
      }
    }
    OccupancyMapper mapper(GridMap(25, 25, 0.1, CellState::Unknown));
    for (int step = 0; step < 5; ++step) {
      const Pose2D pose(uniform(rng, 0.1, 2.4), uniform(rng, 0.1, 2.4), uniform(rng, -3, 3));
      if (truth.at(*truth.world_to_cell(pose.position())) == CellState::Occupied) {
        continue;
      }
      const GridMap before = mapper.map();
      mapper.integrate(pose, simulate_lidar(truth, pose, 36, 2.0));
      for (std::size_t i = 0; i < before.size(); ++i) {
        if (before[i] != CellState::Unknown) {
          ASSERT_NE(mapper.map()[i], CellState::Unknown);
        }
      }
    }
  }
}

TEST(MappingProperty, Deterministic) {
  const GridMap truth = fixture::closed_room(2.0, 0.1);
  const Pose2D pose(0.7, 1.1, 0.3);
  const LidarScan scan = simulate_lidar(truth, pose, 90, 6.0);
  const GridMap own(20, 20, 0.1, CellState::Unknown);
  EXPECT_EQ(update_occupancy(own, pose, scan), update_occupancy(own, pose, scan));
}
