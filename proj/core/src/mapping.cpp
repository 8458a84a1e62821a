#include "mobman/mapping.hpp"

#include <stdexcept>

namespace mobman {

namespace {

enum Verdict : std::uint8_t { kNone = 0, kFree = 1, kHit = 2 };

// Matches the range tolerance the sensor model produces for exact poses.
constexpr double kHitEpsilon = 1e-9;

}  // namespace

OccupancyMapper::OccupancyMapper(GridMap initial, int clear_threshold)
    : map_(std::move(initial)), clear_threshold_(clear_threshold) {
  if (clear_threshold < 1) {
    throw std::invalid_argument("OccupancyMapper: clear_threshold must be >= 1");
  }
  free_streak_.assign(map_.size(), 0);
  verdict_.assign(map_.size(), kNone);
}

std::vector<Cell> OccupancyMapper::integrate(const Pose2D& pose, const LidarScan& scan) {
  touched_.clear();
  std::vector<Cell> newly_occupied;
  auto mark = [&](std::size_t i, Verdict v) {
    if (verdict_[i] == kNone) {
      touched_.push_back(i);
    }
    if (v > verdict_[i]) {
      verdict_[i] = v;
    }
  };

  const Point2 origin = pose.position();
  for (const auto& beam : scan.beams) {
    const double angle = pose.theta + beam.angle;
    const Point2 dir{std::cos(angle), std::sin(angle)};
    const bool hit = beam.range < scan.max_range;
    traverse_ray(map_, origin, dir, beam.range + 2.0 * map_.resolution(),
                 [&](Cell c, double t_enter) {
                   const std::size_t i = map_.index(c);
                   if (t_enter >= beam.range - kHitEpsilon) {
                     if (hit) {
                       mark(i, kHit);
                     }
                     return false;
                   }
                   mark(i, kFree);
                   return true;
                 });
  }

  for (const std::size_t i : touched_) {
    const Cell c = map_.cell_at(i);
    if (verdict_[i] == kHit) {
      if (map_[i] != CellState::Occupied) {
        newly_occupied.push_back(c);
      }
      map_.set(c, CellState::Occupied);
      free_streak_[i] = 0;
    } else if (map_[i] == CellState::Occupied) {
      if (free_streak_[i] < 255) {
        ++free_streak_[i];
      }
      if (free_streak_[i] >= clear_threshold_) {
        map_.set(c, CellState::Free);
        free_streak_[i] = 0;
      }
    } else {
      map_.set(c, CellState::Free);
    }
    verdict_[i] = kNone;
  }
  return newly_occupied;
}

GridMap update_occupancy(const GridMap& own_map, const Pose2D& pose, const LidarScan& scan) {
  OccupancyMapper mapper(own_map);
  mapper.integrate(pose, scan);
  return mapper.map();
}

}  // namespace mobman
