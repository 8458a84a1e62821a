#include "mobman/control.hpp"

namespace mobman {

GateDecision collision_gate(const LidarScan& scan, const RangeReadings& ranges,
                            const Twist2D& cmd, double stop_dist) {
  if (cmd.planar_speed() < 1e-9) {
    return GateDecision::Proceed;
  }
  const double heading = std::atan2(cmd.vy, cmd.vx);
  auto in_half_plane = [heading](double sensor_angle) {
    return std::abs(angle_diff(sensor_angle, heading)) < std::numbers::pi / 2.0;
  };

  for (const auto& beam : scan.beams) {
    if (beam.range < stop_dist && in_half_plane(beam.angle)) {
      return GateDecision::StopAndReplan;
    }
  }
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  if ((ranges.left < stop_dist && in_half_plane(kHalfPi)) ||
      (ranges.right < stop_dist && in_half_plane(-kHalfPi)) ||
      (ranges.back < stop_dist && in_half_plane(std::numbers::pi))) {
    return GateDecision::StopAndReplan;
  }
  return GateDecision::Proceed;
}

}  // namespace mobman
