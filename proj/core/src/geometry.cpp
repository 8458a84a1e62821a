#include "mobman/geometry.hpp"

namespace mobman {

double normalize_angle(double theta) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta, kTwoPi);
  if (r <= -std::numbers::pi) {
    r += kTwoPi;
  } else if (r > std::numbers::pi) {
    r -= kTwoPi;
  }
  return r;
}

Point2 local_to_global(const Pose2D& pose, Point2 p_local) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return {pose.x + c * p_local.x - s * p_local.y, pose.y + s * p_local.x + c * p_local.y};
}

Point2 global_to_local(const Pose2D& pose, Point2 p_global) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const double dx = p_global.x - pose.x;
  const double dy = p_global.y - pose.y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

Pose2D compose(const Pose2D& a, const Pose2D& b) {
  const Point2 p = local_to_global(a, {b.x, b.y});
  return {p.x, p.y, a.theta + b.theta};
}

}  // namespace mobman
