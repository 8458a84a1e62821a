#include "mobman/sensing.hpp"

#include <algorithm>
#include <stdexcept>

#include "mobman/error.hpp"

namespace mobman {

namespace {

constexpr double kMinRange = 1e-9;

void require_free_pose(const GridMap& world, const Pose2D& pose) {
  const auto cell = world.world_to_cell(pose.position());
  if (!cell) {
    throw std::invalid_argument("sensor pose lies outside the map");
  }
  if (world.at(*cell) == CellState::Occupied) {
    throw PoseInObstacle("sensor pose lies in an occupied cell");
  }
}

}  // namespace

double cast_ray(const GridMap& world, Point2 origin, double angle, double max_range) {
  const Point2 dir{std::cos(angle), std::sin(angle)};
  double range = max_range;
  traverse_ray(world, origin, dir, max_range, [&](Cell c, double t_enter) {
    if (world.at(c) == CellState::Occupied) {
      range = std::clamp(t_enter, kMinRange, max_range);
      return false;
    }
    return true;
  });
  return range;
}

LidarScan simulate_lidar(const GridMap& world, const Pose2D& pose, int n_beams,
                         double max_range) {
  if (n_beams < 4) {
    throw std::invalid_argument("simulate_lidar: n_beams must be >= 4");
  }
  if (!(max_range > 0.0)) {
    throw std::invalid_argument("simulate_lidar: max_range must be > 0");
  }
  require_free_pose(world, pose);

  LidarScan scan;
  scan.max_range = max_range;
  scan.beams.reserve(static_cast<std::size_t>(n_beams));
  const double step = 2.0 * std::numbers::pi / n_beams;
  for (int i = 0; i < n_beams; ++i) {
    const double a = step * i;
    scan.beams.push_back({a, cast_ray(world, pose.position(), pose.theta + a, max_range)});
  }
  return scan;
}

RangeReadings simulate_range_sensors(const GridMap& world, const Pose2D& pose,
                                     double max_range) {
  require_free_pose(world, pose);
  const Point2 o = pose.position();
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  return {
      cast_ray(world, o, pose.theta + kHalfPi, max_range),
      cast_ray(world, o, pose.theta - kHalfPi, max_range),
      cast_ray(world, o, pose.theta + std::numbers::pi, max_range),
      max_range,
  };
}

void apply_range_jitter(LidarScan& scan, double amplitude, Rng& rng) {
  if (amplitude <= 0.0) {
    return;
  }
  for (auto& beam : scan.beams) {
    beam.range = std::clamp(beam.range + uniform(rng, -amplitude, amplitude), kMinRange,
                            scan.max_range);
  }
}

}  // namespace mobman
