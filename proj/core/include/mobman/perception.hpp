#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "mobman/geometry.hpp"
#include "mobman/grid_map.hpp"

namespace mobman {

/// Field of view of the depth camera, rad. Image coordinates (u, v) are
/// normalized to [0, 1], u growing to the right and v downwards, and map
/// linearly onto bearing and elevation.
struct CameraIntrinsics {
  double hfov = 87.0 * std::numbers::pi / 180.0;
  double vfov = 58.0 * std::numbers::pi / 180.0;
};

/// Camera pose in the robot frame. Positive pitch tilts the optical axis down.
struct CameraMount {
  double x = 0.10;
  double y = 0.0;
  double z = 0.50;
  double yaw = 0.0;
  double pitch = 0.0;
};

struct Detection {
  std::string kind;
  double u = 0.5;
  double v = 0.5;
  double depth = 0.0;  // m along the optical axis
  double confidence = 0.0;
};

/// Image coordinates and axial depth of a robot-frame point.
struct ImagePoint {
  double u = 0.5;
  double v = 0.5;
  double depth = 0.0;
};

ImagePoint project(Point3 p_robot, const CameraIntrinsics& intr, const CameraMount& mount);

/// Back-projects a detection into the robot frame. Requires depth > 0.
Point3 locate_object(const Detection& d, const CameraIntrinsics& intr, const CameraMount& mount);

/// Ground-truth object in the world frame.
struct WorldObject {
  std::string kind;
  Point3 position;
  double yaw = 0.0;
  double length = 0.08;  // m, footprint along yaw
  double width = 0.03;   // m
  double mass = 0.1;     // kg
};

struct DetectorConfig {
  CameraIntrinsics intrinsics;
  CameraMount mount;
  double max_depth = 3.0;    // m
  double noise_sigma = 0.0;  // m, Gaussian depth noise
};

/// Stand-in for the learned detector: every object inside the frustum whose
/// line of sight crosses no Occupied cell of `occluders` yields one detection,
/// in input order. Seeded and deterministic.
std::vector<Detection> simulate_detections(const std::vector<WorldObject>& objects,
                                           const GridMap& occluders, const Pose2D& robot,
                                           const DetectorConfig& cfg, std::uint64_t seed);

struct OrientedObject {
  std::string kind;
  Point3 position;   // robot frame
  double yaw = 0.0;  // (-pi/2, pi/2], robot frame
};

/// Principal-axis angle of a 2D point set, in (-pi/2, pi/2]. Throws
/// DegenerateCluster for fewer than 3 points or when the two covariance
/// eigenvalues differ by less than 1e-9 * trace.
double pca_orientation(const std::vector<Point2>& points);

/// Footprint outline samples of `obj` in the world frame: `n` points on the
/// rectangle boundary with optional isotropic Gaussian noise.
std::vector<Point2> sample_footprint(const WorldObject& obj, int n, double noise_sigma,
                                     std::uint64_t seed);

// ---------------------------------------------------------------------------
// Virtual walls

struct WallSegment {
  Point2 p1;
  Point2 p2;
  int inlier_count = 0;
  std::vector<Point2> inliers;
  Point2 line_point;      // a point on the fitted line
  Point2 line_direction;  // unit vector
};

/// Repeated sample-consensus line extraction: fit the line with the most
/// inliers (distance < dist_tol), refine by least squares, accept if it has
/// at least min_support inliers, remove them and repeat.
std::vector<WallSegment> detect_virtual_walls(const std::vector<Point2>& points, double dist_tol,
                                              int min_support, std::uint64_t seed);

/// Distance from p to the infinite line of `seg`.
double distance_to_line(const WallSegment& seg, Point2 p);

}  // namespace mobman
