#pragma once

#include "mobman/geometry.hpp"
#include "mobman/world_config.hpp"

namespace mobman {

/// Wheel angular speeds in rad/s, ordered front-left, front-right,
/// rear-left, rear-right.
struct WheelSpeeds {
  double fl = 0.0;
  double fr = 0.0;
  double rl = 0.0;
  double rr = 0.0;

  friend bool operator==(const WheelSpeeds&, const WheelSpeeds&) = default;
};

/// Mecanum forward kinematics (X-configuration rollers).
///
///   vx    = r/4 * ( fl + fr + rl + rr)
///   vy    = r/4 * (-fl + fr + rl - rr)
///   omega = r/(4(lx+ly)) * (-fl + fr - rl + rr)
Twist2D forward_kinematics(const WheelSpeeds& ws, const WorldConfig& cfg);

/// Exact right-inverse of forward_kinematics.
WheelSpeeds inverse_kinematics(const Twist2D& t, const WorldConfig& cfg);

/// One explicit Euler step: the body twist is rotated into the world frame at
/// the current heading, then heading is advanced. Requires dt > 0.
Pose2D integrate_odometry(const Pose2D& pose, const Twist2D& t, double dt);

/// Fixed-weight circular mean of two heading measurements.
/// Throws DegenerateFusion when the weighted unit vectors cancel.
double fuse_heading(double theta_a, double theta_b, double weight_a = 0.5);

struct HeadingEstimate {
  double theta = 0.0;
  double weight_a = 0.5;
};

/// Fuses a compass-style sensor (a) with a second gyro-derived heading (b).
HeadingEstimate fuse_heading_estimate(double theta_a, double theta_b, double weight_a = 0.5);

}  // namespace mobman
