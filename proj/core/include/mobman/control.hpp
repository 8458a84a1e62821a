#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "mobman/geometry.hpp"
#include "mobman/sensing.hpp"

namespace mobman {

// ---------------------------------------------------------------------------
// PID

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double i_limit = std::numeric_limits<double>::infinity();
  double out_limit = std::numeric_limits<double>::infinity();

  /// Throws std::invalid_argument on negative gains or non-positive limits.
  void validate() const;

  friend bool operator==(const PidGains&, const PidGains&) = default;
};

/// Error history shared by the positional and incremental forms. A
/// zero-initialised state corresponds to "no previous error".
struct PidState {
  double e_prev = 0.0;
  double e_prev2 = 0.0;
  double integral = 0.0;  // clamped to +/- i_limit
  double u_prev = 0.0;
};

struct PidOutput {
  double u = 0.0;
  PidState state;
};

/// Positional PID: u = kp*e + ki*sum(e*dt) + kd*(e - e_prev)/dt, rectangle-rule
/// integral clamped to +/- i_limit, output clamped to +/- out_limit.
PidOutput pid_step(const PidState& st, double e, const PidGains& gains, double dt);

/// Velocity-form PID:
///   du = kp*(e - e1) + ki*e*dt + kd*(e - 2*e1 + e2)/dt
///   u  = clamp(u_prev + du, +/- out_limit)
/// With infinite limits the running output equals pid_step's output exactly
/// in exact arithmetic.
PidOutput incremental_pid_step(const PidState& st, double e, const PidGains& gains, double dt);

// ---------------------------------------------------------------------------
// Path following

enum class FollowMode { Tracking, Stopped, GoalReached };

struct FollowerStatus {
  FollowMode mode = FollowMode::Tracking;
  std::size_t active_waypoint = 0;
  double cross_track_error = 0.0;  // m, positive when the path lies to the left
};

struct FollowerConfig {
  double capture_radius = 0.05;     // m
  double heading_tolerance = 0.05;  // rad
  double max_velocity = 0.20;       // m/s
  double max_omega = 0.8;           // rad/s
};

struct FollowerCommand {
  Twist2D twist;
  FollowerStatus status;
};

inline PidGains default_xy_gains() { return {1.2, 0.1, 0.05, 0.2, 0.20}; }
inline PidGains default_theta_gains() { return {2.0, 0.0, 0.0, 0.5, 0.8}; }

/// Holonomic waypoint tracker. Along-track error is the remaining path length
/// to the final waypoint; cross-track error is the signed offset from the
/// active segment. Both run through the xy PID, heading runs through the theta
/// PID toward `goal_heading`. Planar speed is always clamped to max_velocity.
class PathFollower {
 public:
  PathFollower(std::vector<Point2> waypoints, double goal_heading,
               PidGains gains_xy = default_xy_gains(),
               PidGains gains_theta = default_theta_gains(), FollowerConfig cfg = {});

  FollowerCommand step(const Pose2D& est_pose, double dt);

  /// Holds zero output until resume().
  void stop();
  void resume();

  const std::vector<Point2>& waypoints() const noexcept { return waypoints_; }
  std::size_t active_waypoint() const noexcept { return active_; }
  FollowMode mode() const noexcept { return mode_; }
  double goal_heading() const noexcept { return goal_heading_; }

 private:
  double remaining_length(Point2 p) const;

  std::vector<Point2> waypoints_;
  double goal_heading_;
  PidGains gains_xy_;
  PidGains gains_theta_;
  FollowerConfig cfg_;
  std::size_t active_ = 0;
  FollowMode mode_ = FollowMode::Tracking;
  PidState along_;
  PidState cross_;
  PidState heading_;
};

/// Clamps planar speed to max_velocity by uniform scaling.
Twist2D clamp_planar_speed(const Twist2D& t, double max_velocity);

// ---------------------------------------------------------------------------
// Collision gate

enum class GateDecision { Proceed, StopAndReplan };

/// Stops when any sensed range strictly within 90 degrees of the commanded
/// translation direction is below stop_dist. A command with no translation
/// always proceeds.
GateDecision collision_gate(const LidarScan& scan, const RangeReadings& ranges,
                            const Twist2D& cmd, double stop_dist = 0.25);

}  // namespace mobman
