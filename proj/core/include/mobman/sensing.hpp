#pragma once

#include <vector>

#include "mobman/geometry.hpp"
#include "mobman/grid_map.hpp"
#include "mobman/random.hpp"

namespace mobman {

inline constexpr int kDefaultLidarBeams = 360;
inline constexpr double kDefaultLidarRange = 6.0;
inline constexpr double kDefaultTofRange = 4.0;

struct LidarBeam {
  double angle = 0.0;  // rad, robot frame
  double range = 0.0;  // m
};

/// 360 degree scan. Beam i sits at angle 2*pi*i/n in the robot frame.
struct LidarScan {
  std::vector<LidarBeam> beams;
  double max_range = kDefaultLidarRange;
};

/// Side and rear time-of-flight sensors covering the lidar's blind spots.
struct RangeReadings {
  double left = kDefaultTofRange;
  double right = kDefaultTofRange;
  double back = kDefaultTofRange;
  double max_range = kDefaultTofRange;
};

/// Distance from `origin` along world heading `angle` to the boundary of the
/// first Occupied cell, clamped to max_range. Unknown cells are transparent
/// and leaving the map counts as no return.
double cast_ray(const GridMap& world, Point2 origin, double angle, double max_range);

/// Throws PoseInObstacle if the pose cell is Occupied; requires n_beams >= 4.
LidarScan simulate_lidar(const GridMap& world, const Pose2D& pose,
                         int n_beams = kDefaultLidarBeams,
                         double max_range = kDefaultLidarRange);

/// Single rays at robot-frame angles +pi/2 (left), -pi/2 (right), pi (back).
RangeReadings simulate_range_sensors(const GridMap& world, const Pose2D& pose,
                                     double max_range = kDefaultTofRange);

/// Adds uniform jitter in [-amplitude, amplitude] to every beam, keeping each
/// range inside (0, max_range].
void apply_range_jitter(LidarScan& scan, double amplitude, Rng& rng);

}  // namespace mobman
