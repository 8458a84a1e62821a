#pragma once

#include <cmath>

namespace mobman {

/// Physical constants of the base. Footprint, speed and payload follow the
/// robot's published characteristics; wheel geometry is sized to fit inside
/// the footprint.
struct WorldConfig {
  double robot_length = 0.60;  // m
  double robot_width = 0.42;   // m
  double max_velocity = 0.20;  // m/s, planar
  double wheel_radius = 0.05;  // m
  double lx = 0.20;            // m, half wheelbase
  double ly = 0.15;            // m, half track
  double payload = 0.5;        // kg

  /// Radius of the circle circumscribing the footprint.
  double circumscribed_radius() const {
    return std::hypot(robot_length / 2.0, robot_width / 2.0);
  }

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

}  // namespace mobman
