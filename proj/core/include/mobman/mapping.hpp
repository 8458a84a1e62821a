#pragma once

#include <cstdint>
#include <vector>

#include "mobman/grid_map.hpp"
#include "mobman/sensing.hpp"

namespace mobman {

/// Writes lidar scans into the robot's own occupancy grid.
///
/// Each scan yields one verdict per touched cell: Occupied if any beam ended
/// in it, otherwise Free. Unknown and Free cells take the verdict directly.
/// An Occupied cell is cleared only after `clear_threshold` consecutive Free
/// verdicts; any Occupied verdict resets the count. Cells never return to
/// Unknown.
class OccupancyMapper {
 public:
  explicit OccupancyMapper(GridMap initial, int clear_threshold = 3);

  /// Returns the cells that became Occupied with this scan.
  std::vector<Cell> integrate(const Pose2D& pose, const LidarScan& scan);

  const GridMap& map() const noexcept { return map_; }
  int clear_threshold() const noexcept { return clear_threshold_; }

 private:
  GridMap map_;
  int clear_threshold_;
  std::vector<std::uint8_t> free_streak_;
  // Per-scan scratch, reused between calls.
  std::vector<std::uint8_t> verdict_;
  std::vector<std::size_t> touched_;
};

/// Single-scan form of OccupancyMapper::integrate starting from no clearing
/// history. Out-of-map cells are skipped.
GridMap update_occupancy(const GridMap& own_map, const Pose2D& pose, const LidarScan& scan);

}  // namespace mobman
