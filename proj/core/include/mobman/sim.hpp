#pragma once

#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mobman/grid_map.hpp"
#include "mobman/mission.hpp"
#include "mobman/perception.hpp"
#include "mobman/planning.hpp"
#include "mobman/scenario.hpp"

namespace mobman {

struct SimMetrics {
  int tasks_completed = 0;
  double total_distance = 0.0;  // m, ground truth
  double sim_time = 0.0;        // s
  int replans = 0;
  int collisions = 0;  // ticks on which the footprint starts touching an Occupied cell
  double min_wall_clearance = std::numeric_limits<double>::infinity();  // m
  bool done = false;
  long ticks = 0;
  double max_planar_speed = 0.0;    // m/s, commanded
  int speed_violations = 0;
  double max_revolute_speed = 0.0;  // rad/s over base, wrist pitch and roll
  double max_prismatic_speed = 0.0;
  int arm_speed_violations = 0;

  /// `key=value` lines.
  std::string to_text() const;
};

/// Snapshot of one mission decision and the inputs it was taken on.
struct DecisionRecord {
  double t = 0.0;
  MissionState state;  // robot_cell is the planning start cell
  GridMap planning_map;
  AStarParams params;
  std::set<int> blocked_stations;
  std::vector<ActionCandidate> candidates;
  std::optional<ActionCandidate> chosen;  // empty when Done
};

/// Grasp outcome measured against the true object, robot frame.
struct GraspRecord {
  double t = 0.0;
  ObjectKind kind;
  double err_x = 0.0;
  double err_y = 0.0;
  double err_z = 0.0;
  double err_yaw = 0.0;
};

struct SimLogs {
  std::string trajectory_csv;
  std::string mission;
  std::string arm;
  std::string detections;
};

struct SimResult {
  SimMetrics metrics;
  SimLogs logs;
  MissionState initial_mission;
  MissionState mission;
  std::vector<WorldObject> objects;  // where everything ended up
  std::vector<WorldObject> carried;
  GridMap own_map;
  std::vector<Point2> trajectory;
  std::vector<Cell> last_path;
  std::vector<DecisionRecord> decisions;
  std::vector<GraspRecord> grasps;
};

enum class SimLogLevel { Quiet, Info, Trace };

struct SimOptions {
  SimLogLevel level = SimLogLevel::Quiet;
  std::function<void(SimLogLevel, const std::string&)> sink;
  bool record_decisions = true;
};

/// Fixed-step loop: sense, map, decide when idle, plan or replan, control,
/// actuate, integrate. Deterministic for a given scenario. Throws
/// ScenarioError for a scenario that does not fit its map.
SimResult run_sim(const Scenario& sc, const GridMap& world, const SimOptions& opts = {});

/// Loads the scenario's map (relative to base_dir) and runs it. A missing map
/// raises Error("map not found <path>").
SimResult run_sim(const Scenario& sc, const SimOptions& opts = {});

/// Writes trajectory.csv, mission.log, arm.log, detections.log, metrics.txt
/// and render.pgm into `dir`, creating it if needed.
void write_sim_outputs(const SimResult& result, const std::filesystem::path& dir);

/// Minimum distance between the robot's rectangular footprint at `pose` and
/// any Occupied cell within `search_radius` of it; `search_radius` when none.
double footprint_clearance(const GridMap& world, const Pose2D& pose, double half_length,
                           double half_width, double search_radius);

}  // namespace mobman
