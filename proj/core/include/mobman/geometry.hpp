#pragma once

#include <cmath>
#include <numbers>

namespace mobman {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point2, Point2) = default;
};

inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(Point3, Point3) = default;
};

/// Maps any angle onto (-pi, pi].
double normalize_angle(double theta);

/// Signed shortest rotation from `from` to `to`, in (-pi, pi].
inline double angle_diff(double to, double from) { return normalize_angle(to - from); }

/// Planar pose in the global frame. The constructor keeps theta in (-pi, pi].
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2D() = default;
  Pose2D(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {}

  Point2 position() const { return {x, y}; }

  friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

/// Body-frame velocity: vx forward, vy left, omega counter-clockwise.
struct Twist2D {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;

  double planar_speed() const { return std::hypot(vx, vy); }

  friend bool operator==(const Twist2D&, const Twist2D&) = default;
};

/// Rotates `p_local` by pose.theta and translates by the pose position.
Point2 local_to_global(const Pose2D& pose, Point2 p_local);

/// Inverse of local_to_global.
Point2 global_to_local(const Pose2D& pose, Point2 p_global);

/// Pose `b` expressed in the frame of `a`, lifted to the global frame.
Pose2D compose(const Pose2D& a, const Pose2D& b);

}  // namespace mobman
