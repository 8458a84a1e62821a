#include "mobman/kinematics.hpp"

#include <stdexcept>

#include "mobman/error.hpp"

namespace mobman {

Twist2D forward_kinematics(const WheelSpeeds& ws, const WorldConfig& cfg) {
  const double r = cfg.wheel_radius;
  const double l = cfg.lx + cfg.ly;
  return {
      r * (ws.fl + ws.fr + ws.rl + ws.rr) / 4.0,
      r * (-ws.fl + ws.fr + ws.rl - ws.rr) / 4.0,
      r * (-ws.fl + ws.fr - ws.rl + ws.rr) / (4.0 * l),
  };
}

WheelSpeeds inverse_kinematics(const Twist2D& t, const WorldConfig& cfg) {
  const double r = cfg.wheel_radius;
  const double lw = (cfg.lx + cfg.ly) * t.omega;
  return {
      (t.vx - t.vy - lw) / r,
      (t.vx + t.vy + lw) / r,
      (t.vx + t.vy - lw) / r,
      (t.vx - t.vy + lw) / r,
  };
}

Pose2D integrate_odometry(const Pose2D& pose, const Twist2D& t, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("integrate_odometry: dt must be > 0");
  }
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return {pose.x + (c * t.vx - s * t.vy) * dt, pose.y + (s * t.vx + c * t.vy) * dt,
          pose.theta + t.omega * dt};
}

double fuse_heading(double theta_a, double theta_b, double weight_a) {
  if (!(weight_a >= 0.0 && weight_a <= 1.0)) {
    throw std::invalid_argument("fuse_heading: weight_a must lie in [0, 1]");
  }
  // Exact weights bypass the trig round trip.
  if (weight_a == 1.0) {
    return normalize_angle(theta_a);
  }
  if (weight_a == 0.0) {
    return normalize_angle(theta_b);
  }
  const double wb = 1.0 - weight_a;
  const double s = weight_a * std::sin(theta_a) + wb * std::sin(theta_b);
  const double c = weight_a * std::cos(theta_a) + wb * std::cos(theta_b);
  if (std::hypot(s, c) < 1e-9) {
    throw DegenerateFusion("fuse_heading: weighted headings cancel");
  }
  return normalize_angle(std::atan2(s, c));
}

HeadingEstimate fuse_heading_estimate(double theta_a, double theta_b, double weight_a) {
  return {fuse_heading(theta_a, theta_b, weight_a), weight_a};
}

}  // namespace mobman
