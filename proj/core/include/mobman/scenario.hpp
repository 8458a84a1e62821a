#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mobman/arm.hpp"
#include "mobman/control.hpp"
#include "mobman/geometry.hpp"
#include "mobman/mission.hpp"
#include "mobman/planning.hpp"

namespace mobman {

/// Station in world coordinates (m).
struct StationSpec {
  int id = 0;
  Point2 location;
  Point2 approach;
  ObjectBag present;
  ObjectBag desired;

  friend bool operator==(const StationSpec&, const StationSpec&) = default;
};

/// Axis-aligned rectangle, m.
struct RectSpec {
  Point2 min;
  Point2 max;

  friend bool operator==(const RectSpec&, const RectSpec&) = default;
};

struct SegmentSpec {
  Point2 a;
  Point2 b;

  friend bool operator==(const SegmentSpec&, const SegmentSpec&) = default;
};

enum class PoseSource { DeadReckoning, GroundTruth };

struct NoiseSpec {
  double encoder = 0.0;  // rad/s, per-wheel Gaussian sigma
  double gyro = 0.0;     // rad, heading sensor Gaussian sigma
  double lidar = 0.0;    // m, uniform jitter amplitude
  double depth = 0.0;    // m, camera depth and footprint sigma

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// Everything run_sim needs. `map` is resolved against `base_dir` when
/// relative; base_dir itself is not part of the text form.
struct Scenario {
  std::string map;
  Pose2D start;
  double dt = 0.02;
  double max_sim_time = 600.0;
  std::uint64_t seed = 1;
  int capacity = 1;
  AStarParams planner;
  PidGains gains_xy = default_xy_gains();
  PidGains gains_theta = default_theta_gains();
  PoseSource pose_source = PoseSource::DeadReckoning;
  NoiseSpec noise;
  double stop_distance = 0.25;
  double table_height = 0.30;
  int lidar_beams = 360;
  double lidar_range = 6.0;
  int lidar_period = 5;  // ticks between scans
  std::vector<RectSpec> obstacles;        // present in the world only
  std::vector<SegmentSpec> virtual_walls;  // floor marks
  std::vector<StationSpec> stations;

  std::filesystem::path base_dir;

  /// Throws ScenarioError on out-of-range values.
  void validate() const;

  friend bool operator==(const Scenario& a, const Scenario& b);
};

/// Flat `key = value` lines. `#` starts a comment. `station = <id>` opens a
/// block that takes `location`, `approach`, `present` and `desired`.
/// Throws ScenarioError naming the offending line.
Scenario parse_scenario(std::string_view text);

/// Canonical text; parse_scenario(format_scenario(s)) == s.
std::string format_scenario(const Scenario& s);

/// Reads and parses a scenario file; base_dir becomes the file's directory.
Scenario load_scenario_file(const std::filesystem::path& path);

const char* to_string(PoseSource p);

}  // namespace mobman
