#include <algorithm>
#include <stdexcept>

#include "mobman/control.hpp"

namespace mobman {

Twist2D clamp_planar_speed(const Twist2D& t, double max_velocity) {
  const double speed = t.planar_speed();
  if (speed <= max_velocity || speed == 0.0) {
    return t;
  }
  const double scale = max_velocity / speed;
  Twist2D out{t.vx * scale, t.vy * scale, t.omega};
  // Guard against the product rounding a hair above the cap.
  while (out.planar_speed() > max_velocity) {
    out.vx = std::nextafter(out.vx, 0.0);
    out.vy = std::nextafter(out.vy, 0.0);
  }
  return out;
}

PathFollower::PathFollower(std::vector<Point2> waypoints, double goal_heading,
                           PidGains gains_xy, PidGains gains_theta, FollowerConfig cfg)
    : waypoints_(std::move(waypoints)),
      goal_heading_(normalize_angle(goal_heading)),
      gains_xy_(gains_xy),
      gains_theta_(gains_theta),
      cfg_(cfg) {
  if (waypoints_.empty()) {
    throw std::invalid_argument("PathFollower: waypoints must be nonempty");
  }
  gains_xy_.validate();
  gains_theta_.validate();
  active_ = waypoints_.size() > 1 ? 1 : 0;
}

void PathFollower::stop() {
  if (mode_ == FollowMode::Tracking) {
    mode_ = FollowMode::Stopped;
  }
}

void PathFollower::resume() {
  if (mode_ == FollowMode::Stopped) {
    mode_ = FollowMode::Tracking;
    along_ = {};
    cross_ = {};
    heading_ = {};
  }
}

double PathFollower::remaining_length(Point2 p) const {
  // Distance along the active segment to its end, plus every later segment.
  const Point2 target = waypoints_[active_];
  double rem = 0.0;
  if (active_ > 0) {
    const Point2 seg = target - waypoints_[active_ - 1];
    const double len = norm(seg);
    rem = len > 1e-12 ? dot(target - p, (1.0 / len) * seg) : distance(target, p);
  } else {
    rem = distance(target, p);
  }
  for (std::size_t i = active_ + 1; i < waypoints_.size(); ++i) {
    rem += distance(waypoints_[i], waypoints_[i - 1]);
  }
  return rem;
}

FollowerCommand PathFollower::step(const Pose2D& est_pose, double dt) {
  const Point2 p = est_pose.position();
  const std::size_t last = waypoints_.size() - 1;

  // Advance past captured or overshot intermediate waypoints.
  while (active_ < last) {
    const Point2 target = waypoints_[active_];
    bool passed = distance(p, target) < cfg_.capture_radius;
    if (!passed && active_ > 0) {
      const Point2 seg = target - waypoints_[active_ - 1];
      const double len = norm(seg);
      passed = len > 1e-12 && dot(p - waypoints_[active_ - 1], (1.0 / len) * seg) >= len;
    }
    if (!passed) {
      break;
    }
    ++active_;
  }

  FollowerCommand out;
  out.status.active_waypoint = active_;

  Point2 u{1.0, 0.0};
  const Point2 target = waypoints_[active_];
  if (active_ > 0 && norm(target - waypoints_[active_ - 1]) > 1e-12) {
    const Point2 seg = target - waypoints_[active_ - 1];
    u = (1.0 / norm(seg)) * seg;
  } else if (distance(target, p) > 1e-12) {
    u = (1.0 / distance(target, p)) * (target - p);
  }
  const Point2 n{-u.y, u.x};
  const double e_cross = dot(target - p, n);
  out.status.cross_track_error = e_cross;

  const double e_heading = angle_diff(goal_heading_, est_pose.theta);
  const bool at_goal = active_ == last && distance(p, waypoints_[last]) < cfg_.capture_radius &&
                       std::abs(e_heading) < cfg_.heading_tolerance;
  if (at_goal) {
    mode_ = FollowMode::GoalReached;
  }
  out.status.mode = mode_;
  if (mode_ != FollowMode::Tracking) {
    return out;
  }

  const double e_along = remaining_length(p);
  const auto a = pid_step(along_, e_along, gains_xy_, dt);
  const auto c = pid_step(cross_, e_cross, gains_xy_, dt);
  const auto h = pid_step(heading_, e_heading, gains_theta_, dt);
  along_ = a.state;
  cross_ = c.state;
  heading_ = h.state;

  const Point2 v_world = a.u * u + c.u * n;
  const Point2 v_body = global_to_local(Pose2D(0.0, 0.0, est_pose.theta), v_world);
  out.twist = clamp_planar_speed({v_body.x, v_body.y, std::clamp(h.u, -cfg_.max_omega,
                                                                  cfg_.max_omega)},
                                 cfg_.max_velocity);
  return out;
}

}  // namespace mobman
