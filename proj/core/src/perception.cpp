#include "mobman/perception.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>

#include "mobman/error.hpp"
#include "mobman/random.hpp"

namespace mobman {

namespace {

struct Rotation {
  // Columns map camera axes (forward, left, up) into the robot frame.
  double m[3][3];
};

Rotation camera_rotation(const CameraMount& mount) {
  const double cy = std::cos(mount.yaw);
  const double sy = std::sin(mount.yaw);
  const double cp = std::cos(mount.pitch);
  const double sp = std::sin(mount.pitch);
  // Rz(yaw) * Ry(pitch)
  return {{{cy * cp, -sy, cy * sp}, {sy * cp, cy, sy * sp}, {-sp, 0.0, cp}}};
}

}  // namespace

ImagePoint project(Point3 p_robot, const CameraIntrinsics& intr, const CameraMount& mount) {
  const Rotation r = camera_rotation(mount);
  const double d[3] = {p_robot.x - mount.x, p_robot.y - mount.y, p_robot.z - mount.z};
  // Camera coordinates are R^T * d.
  double c[3];
  for (int i = 0; i < 3; ++i) {
    c[i] = r.m[0][i] * d[0] + r.m[1][i] * d[1] + r.m[2][i] * d[2];
  }
  return {0.5 - std::atan2(c[1], c[0]) / intr.hfov, 0.5 - std::atan2(c[2], c[0]) / intr.vfov,
          c[0]};
}

Point3 locate_object(const Detection& d, const CameraIntrinsics& intr, const CameraMount& mount) {
  if (!(d.depth > 0.0)) {
    throw std::invalid_argument("locate_object: depth must be > 0");
  }
  const double c[3] = {d.depth, d.depth * std::tan((0.5 - d.u) * intr.hfov),
                       d.depth * std::tan((0.5 - d.v) * intr.vfov)};
  const Rotation r = camera_rotation(mount);
  Point3 p{mount.x, mount.y, mount.z};
  p.x += r.m[0][0] * c[0] + r.m[0][1] * c[1] + r.m[0][2] * c[2];
  p.y += r.m[1][0] * c[0] + r.m[1][1] * c[1] + r.m[1][2] * c[2];
  p.z += r.m[2][0] * c[0] + r.m[2][1] * c[1] + r.m[2][2] * c[2];
  return p;
}

std::vector<Detection> simulate_detections(const std::vector<WorldObject>& objects,
                                           const GridMap& occluders, const Pose2D& robot,
                                           const DetectorConfig& cfg, std::uint64_t seed) {
  if (!(cfg.intrinsics.hfov > 0.0 && cfg.intrinsics.hfov < std::numbers::pi) ||
      !(cfg.intrinsics.vfov > 0.0 && cfg.intrinsics.vfov < std::numbers::pi)) {
    throw std::invalid_argument("simulate_detections: fov must lie in (0, pi)");
  }
  Rng rng(seed);
  const Point2 cam_world = local_to_global(robot, {cfg.mount.x, cfg.mount.y});

  std::vector<Detection> out;
  for (const auto& obj : objects) {
    const Point2 local = global_to_local(robot, {obj.position.x, obj.position.y});
    const ImagePoint ip = project({local.x, local.y, obj.position.z}, cfg.intrinsics, cfg.mount);
    if (!(ip.depth > 0.0) || ip.depth > cfg.max_depth || ip.u < 0.0 || ip.u > 1.0 ||
        ip.v < 0.0 || ip.v > 1.0) {
      continue;
    }

    const auto obj_cell = occluders.world_to_cell({obj.position.x, obj.position.y});
    const Point2 to_obj = Point2{obj.position.x, obj.position.y} - cam_world;
    const double dist = norm(to_obj);
    bool occluded = false;
    if (dist > 0.0) {
      traverse_ray(occluders, cam_world, (1.0 / dist) * to_obj, dist, [&](Cell c, double) {
        if (obj_cell && c == *obj_cell) {
          return false;
        }
        if (occluders.at(c) == CellState::Occupied) {
          occluded = true;
          return false;
        }
        return true;
      });
    }
    if (occluded) {
      continue;
    }

    double depth = ip.depth;
    if (cfg.noise_sigma > 0.0) {
      depth = std::max(1e-6, depth + cfg.noise_sigma * gaussian(rng));
    }
    const double confidence = std::clamp(1.0 - 0.5 * ip.depth / cfg.max_depth, 0.0, 1.0);
    out.push_back({obj.kind, ip.u, ip.v, depth, confidence});
  }
  return out;
}

double pca_orientation(const std::vector<Point2>& points) {
  if (points.size() < 3) {
    throw DegenerateCluster("pca_orientation: need at least 3 points");
  }
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : points) {
    mean += Eigen::Vector2d(p.x, p.y);
  }
  mean /= static_cast<double>(points.size());
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector2d d = Eigen::Vector2d(p.x, p.y) - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(points.size() - 1);

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  const Eigen::Vector2d values = eig.eigenvalues();  // ascending
  const double trace = cov.trace();
  if (!(trace > 0.0) || values(1) - values(0) < 1e-9 * trace) {
    throw DegenerateCluster("pca_orientation: isotropic cluster has no principal axis");
  }
  const Eigen::Vector2d axis = eig.eigenvectors().col(1);
  double yaw = std::atan2(axis.y(), axis.x());
  if (yaw > std::numbers::pi / 2.0) {
    yaw -= std::numbers::pi;
  } else if (yaw <= -std::numbers::pi / 2.0) {
    yaw += std::numbers::pi;
  }
  return yaw;
}

std::vector<Point2> sample_footprint(const WorldObject& obj, int n, double noise_sigma,
                                     std::uint64_t seed) {
  if (n < 4) {
    throw std::invalid_argument("sample_footprint: n must be >= 4");
  }
  Rng rng(seed);
  const double perimeter = 2.0 * (obj.length + obj.width);
  const Pose2D frame(obj.position.x, obj.position.y, obj.yaw);
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(n));
  const double hl = obj.length / 2.0;
  const double hw = obj.width / 2.0;
  for (int i = 0; i < n; ++i) {
    double s = perimeter * i / n;
    Point2 p;
    if (s < obj.length) {
      p = {-hl + s, -hw};
    } else if ((s -= obj.length) < obj.width) {
      p = {hl, -hw + s};
    } else if ((s -= obj.width) < obj.length) {
      p = {hl - s, hw};
    } else {
      s -= obj.length;
      p = {-hl, hw - s};
    }
    if (noise_sigma > 0.0) {
      p.x += noise_sigma * gaussian(rng);
      p.y += noise_sigma * gaussian(rng);
    }
    out.push_back(local_to_global(frame, p));
  }
  return out;
}

}  // namespace mobman
