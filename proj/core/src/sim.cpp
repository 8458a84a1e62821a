#include "mobman/sim.hpp"

#include <algorithm>
#include <cstdarg>
#include <cstdio>
#include <fstream>

#include "mobman/arm.hpp"
#include "mobman/control.hpp"
#include "mobman/error.hpp"
#include "mobman/kinematics.hpp"
#include "mobman/mapping.hpp"
#include "mobman/random.hpp"
#include "mobman/render.hpp"
#include "mobman/sensing.hpp"
#include "mobman/world_config.hpp"

namespace mobman {

namespace {

constexpr int kMaxGateStopsPerLeg = 50;
constexpr double kClearanceSearch = 1.0;   // m
constexpr double kSnapRadius = 0.5;        // m
constexpr double kObjectSpacing = 0.10;    // m between objects on one station
constexpr double kMatchRadius = 0.30;      // m, detection to station
constexpr int kFootprintSamples = 24;
constexpr double kMarkSpacing = 0.02;      // m between floor-mark samples
constexpr double kMarkNoise = 0.005;       // m
constexpr double kWallTolerance = 0.03;    // m
constexpr int kWallSupport = 10;
constexpr double kCameraPitch = 0.6;       // rad, down
constexpr double kSpeedSlack = 1e-9;

[[gnu::format(printf, 1, 2)]] std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  const int n = std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return std::string(buf, static_cast<std::size_t>(std::clamp(n, 0, 511)));
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Undirected axis angle in (-pi/2, pi/2].
double normalize_axis(double a) {
  a = std::remainder(a, std::numbers::pi);
  return a <= -std::numbers::pi / 2.0 ? a + std::numbers::pi : a;
}

double point_box_distance(Point2 p, Point2 lo, Point2 hi) {
  const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
  const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
  return std::hypot(dx, dy);
}

GridMap with_obstacles(const GridMap& base, const std::vector<RectSpec>& rects) {
  GridMap out = base;
  const double res = base.resolution();
  for (const auto& r : rects) {
    const int c0 = std::max(0, static_cast<int>(std::floor(r.min.x / res)));
    const int r0 = std::max(0, static_cast<int>(std::floor(r.min.y / res)));
    const int c1 = std::min(base.width() - 1, static_cast<int>(std::ceil(r.max.x / res)) - 1);
    const int r1 = std::min(base.height() - 1, static_cast<int>(std::ceil(r.max.y / res)) - 1);
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        out.set({col, row}, CellState::Occupied);
      }
    }
  }
  return out;
}

// Floor marks are sampled, re-detected as line segments and rasterized.
std::vector<Cell> virtual_wall_cells(const GridMap& map, const std::vector<SegmentSpec>& marks,
                                     std::uint64_t seed) {
  if (marks.empty()) {
    return {};
  }
  Rng rng(seed);
  std::vector<Point2> pts;
  for (const auto& m : marks) {
    const double len = distance(m.a, m.b);
    const int n = std::max(2, static_cast<int>(std::ceil(len / kMarkSpacing)) + 1);
    for (int i = 0; i < n; ++i) {
      const double s = static_cast<double>(i) / (n - 1);
      Point2 p = m.a + s * (m.b - m.a);
      p.x += kMarkNoise * gaussian(rng);
      p.y += kMarkNoise * gaussian(rng);
      pts.push_back(p);
    }
  }
  std::vector<Cell> cells;
  for (const auto& seg : detect_virtual_walls(pts, kWallTolerance, kWallSupport, seed)) {
    const double len = distance(seg.p1, seg.p2);
    traverse_ray(
        map, seg.p1, (1.0 / len) * (seg.p2 - seg.p1), len,
        [&](Cell c, double) {
          cells.push_back(c);
          return true;
        },
        CornerPolicy::Supercover);
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

const char* gripper_text(GripperCommand g) {
  switch (g) {
    case GripperCommand::Open:
      return "open";
    case GripperCommand::Close:
      return "close";
    case GripperCommand::None:
      break;
  }
  return "-";
}

enum class Mode { Decide, Drive, Manipulate };

}  // namespace

double footprint_clearance(const GridMap& world, const Pose2D& pose, double half_length,
                           double half_width, double search_radius) {
  const double res = world.resolution();
  const double reach = std::hypot(half_length, half_width) + search_radius;
  const int c0 = std::max(0, static_cast<int>(std::floor((pose.x - reach) / res)));
  const int r0 = std::max(0, static_cast<int>(std::floor((pose.y - reach) / res)));
  const int c1 = std::min(world.width() - 1, static_cast<int>(std::floor((pose.x + reach) / res)));
  const int r1 = std::min(world.height() - 1, static_cast<int>(std::floor((pose.y + reach) / res)));

  const Point2 body_lo{-half_length, -half_width};
  const Point2 body_hi{half_length, half_width};
  Point2 corners[4];
  for (int i = 0; i < 4; ++i) {
    corners[i] = local_to_global(pose, {(i & 1) ? half_length : -half_length,
                                        (i & 2) ? half_width : -half_width});
  }

  // Cells are smaller than the footprint, so an overlap always puts a vertex
  // of one shape inside the other and vertex distances suffice.
  double best = search_radius;
  for (int row = r0; row <= r1; ++row) {
    for (int col = c0; col <= c1; ++col) {
      if (world.at({col, row}) != CellState::Occupied) {
        continue;
      }
      const Point2 lo{col * res, row * res};
      const Point2 hi{(col + 1) * res, (row + 1) * res};
      for (const Point2 c : corners) {
        best = std::min(best, point_box_distance(c, lo, hi));
      }
      for (int i = 0; i < 4; ++i) {
        const Point2 v{(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y};
        best = std::min(best, point_box_distance(global_to_local(pose, v), body_lo, body_hi));
      }
    }
  }
  return best;
}

std::string SimMetrics::to_text() const {
  std::string out;
  out += strf("tasks_completed=%d\n", tasks_completed);
  out += strf("total_distance=%.6f\n", total_distance);
  out += strf("sim_time=%.6f\n", sim_time);
  out += strf("replans=%d\n", replans);
  out += strf("collisions=%d\n", collisions);
  out += strf("min_wall_clearance=%.6f\n", min_wall_clearance);
  out += strf("done=%s\n", done ? "true" : "false");
  out += strf("ticks=%ld\n", ticks);
  out += strf("max_planar_speed=%.6f\n", max_planar_speed);
  out += strf("speed_violations=%d\n", speed_violations);
  out += strf("max_revolute_speed=%.6f\n", max_revolute_speed);
  out += strf("max_prismatic_speed=%.6f\n", max_prismatic_speed);
  out += strf("arm_speed_violations=%d\n", arm_speed_violations);
  return out;
}

SimResult run_sim(const Scenario& sc, const SimOptions& opts) {
  std::filesystem::path map_path = sc.map;
  if (map_path.is_relative()) {
    map_path = sc.base_dir / map_path;
  }
  return run_sim(sc, read_map_file(map_path), opts);
}

SimResult run_sim(const Scenario& sc, const GridMap& world, const SimOptions& opts) {
  sc.validate();
  const WorldConfig robot;
  const ArmGeometry arm_geom;
  const double dt = sc.dt;
  const double half_length = robot.robot_length / 2.0;
  const double half_width = robot.robot_width / 2.0;

  auto emit = [&](SimLogLevel level, const std::string& msg) {
    if (opts.sink && level <= opts.level) {
      opts.sink(level, msg);
    }
  };

  const GridMap truth_map = with_obstacles(world, sc.obstacles);
  auto cell_of = [&](Point2 p, const std::string& what) {
    const auto c = world.world_to_cell(p);
    if (!c) {
      throw ScenarioError("invalid scenario: " + what + " lies outside the map");
    }
    return *c;
  };
  const Cell start_cell = cell_of(sc.start.position(), "robot_start");
  if (truth_map.at(start_cell) != CellState::Free) {
    throw ScenarioError("invalid scenario: robot_start is not in free space");
  }

  SimResult result;
  MissionState ms;
  ms.capacity = sc.capacity;
  ms.robot_cell = start_cell;
  Rng yaw_rng(stream_seed(sc.seed, 0));
  std::vector<WorldObject> objects;
  for (const auto& spec : sc.stations) {
    const std::string name = "station " + std::to_string(spec.id);
    Station st{spec.id, cell_of(spec.location, name + " location"),
               cell_of(spec.approach, name + " approach"), spec.present, spec.desired};
    if (world.at(st.approach) != CellState::Free) {
      throw ScenarioError("invalid scenario: " + name + " approach is not in free space");
    }
    ms.stations.push_back(st);

    const Point2 axis = spec.location - spec.approach;
    const double len = norm(axis);
    const Point2 side = len > 0.0 ? Point2{-axis.y / len, axis.x / len} : Point2{0.0, 1.0};
    const double n = static_cast<double>(spec.present.size());
    double i = 0.0;
    for (const auto& kind : spec.present) {
      const Point2 p = spec.location + (kObjectSpacing * (i - (n - 1.0) / 2.0)) * side;
      objects.push_back({kind, {p.x, p.y, sc.table_height},
                         uniform(yaw_rng, -std::numbers::pi / 2.0, std::numbers::pi / 2.0)});
      i += 1.0;
    }
  }
  result.initial_mission = ms;

  Rng encoder_rng(stream_seed(sc.seed, 1));
  Rng gyro_rng(stream_seed(sc.seed, 2));
  Rng lidar_rng(stream_seed(sc.seed, 3));
  Rng footprint_rng(stream_seed(sc.seed, 4));

  OccupancyMapper mapper(world);
  const std::vector<Cell> virtual_cells =
      virtual_wall_cells(world, sc.virtual_walls, stream_seed(sc.seed, 5));
  auto planning_map = [&]() {
    GridMap m = mapper.map();
    for (const Cell c : virtual_cells) {
      m.set(c, CellState::Occupied);
    }
    return m;
  };
  GridMap plan_map = planning_map();
  DistanceField plan_field = distance_field(plan_map);

  Pose2D truth = sc.start;
  Pose2D est = sc.start;
  double gyro_heading = sc.start.theta;
  auto nav_pose = [&]() { return sc.pose_source == PoseSource::GroundTruth ? truth : est; };

  DetectorConfig det_cfg;
  det_cfg.mount.pitch = kCameraPitch;
  det_cfg.noise_sigma = sc.noise.depth;

  ArmJoints joints;
  GraspFsm fsm(arm_geom);
  JointTracker tracker(arm_geom);
  GraspTarget target;
  std::size_t target_index = 0;
  std::optional<WorldObject> held;
  std::vector<WorldObject> deck;

  Mode mode = Mode::Decide;
  std::optional<PathFollower> follower;
  std::vector<Cell> path;
  bool need_plan = false;
  int gate_stops = 0;
  std::set<int> blocked;
  LidarScan scan;
  RangeReadings ranges;
  double t = 0.0;

  auto& logs = result.logs;
  logs.trajectory_csv = "t,x,y,theta,vx,vy,omega\n";
  auto log_mission = [&](const std::string& line) {
    logs.mission += strf("t=%.3f ", t) + line + "\n";
    emit(SimLogLevel::Info, strf("t=%.3f ", t) + line);
  };
  std::optional<ActionCandidate> leg;
  // `phase= action= station= object= cost=`, then any extra fields.
  auto phase_text = [&]() {
    const PhaseKind k = ms.phase.kind;
    const bool active = leg && k != PhaseKind::Assess && k != PhaseKind::Done;
    return strf("phase=%s action=%s station=%s object=%s cost=%s", to_string(k),
                active ? to_string(leg->kind) : "-",
                ms.phase.station < 0 ? "-" : std::to_string(ms.phase.station).c_str(),
                ms.phase.object.empty() ? "-" : ms.phase.object.c_str(),
                active ? strf("%.6f", leg->cost).c_str() : "-");
  };
  auto apply_event = [&](MissionEvent ev, const std::string& why = {}) {
    ms = mission_step(ms, ev);
    log_mission(phase_text() + " event=" + to_string(ev) + (why.empty() ? "" : " reason=" + why));
  };
  auto abort_leg = [&](const std::string& why) {
    blocked.insert(ms.phase.station);
    apply_event(MissionEvent::Aborted, why);
    follower.reset();
    path.clear();
    mode = Mode::Decide;
  };

  auto travel = [&](Cell from, Cell to) -> std::optional<double> {
    for (const auto& s : ms.stations) {
      if (s.approach == to && blocked.contains(s.id)) {
        return std::nullopt;
      }
    }
    return astar_travel_cost(plan_map, plan_field, sc.planner)(from, to);
  };

  // Nearest cell the planner accepts as a start.
  auto snap = [&](Point2 p) -> std::optional<Cell> {
    const auto here = plan_map.world_to_cell(p);
    if (!here) {
      return std::nullopt;
    }
    auto ok = [&](Cell c) {
      return plan_map.is_free(c) && plan_field.at(c) > sc.planner.clearance;
    };
    if (ok(*here)) {
      return here;
    }
    const int r = static_cast<int>(std::ceil(kSnapRadius / plan_map.resolution()));
    std::optional<Cell> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (int row = here->row - r; row <= here->row + r; ++row) {
      for (int col = here->col - r; col <= here->col + r; ++col) {
        const Cell c{col, row};
        if (!plan_map.contains(c) || !ok(c)) {
          continue;
        }
        const double d = distance(plan_map.cell_center(c), p);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
    }
    return best;
  };

  auto path_blocked = [&]() {
    const Point2 p = nav_pose().position();
    std::size_t nearest = 0;
    double nearest_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < path.size(); ++i) {
      const double d = distance(plan_map.cell_center(path[i]), p);
      if (d < nearest_d) {
        nearest_d = d;
        nearest = i;
      }
    }
    for (std::size_t i = nearest; i < path.size(); ++i) {
      if (!plan_map.is_free(path[i]) || plan_field.at(path[i]) <= sc.planner.clearance) {
        return true;
      }
    }
    if (follower) {
      const auto& wp = follower->waypoints();
      const std::size_t from = follower->active_waypoint() > 0 ? follower->active_waypoint() : 1;
      for (std::size_t i = from; i < wp.size(); ++i) {
        if (!segment_clear(wp[i - 1], wp[i], plan_map, plan_field, sc.planner.clearance)) {
          return true;
        }
      }
    }
    return false;
  };

  auto begin_manipulation = [&]() {
    const Station& st = ms.station(ms.phase.station);
    const StationSpec& spec = *std::find_if(sc.stations.begin(), sc.stations.end(),
                                            [&](const auto& s) { return s.id == st.id; });
    if (ms.phase.kind == PhaseKind::AwaitPlace) {
      if (fsm.phase() == GraspPhase::Holding && held && held->kind == ms.phase.object) {
        fsm.begin_place();
        return;
      }
      const auto it = std::find_if(deck.begin(), deck.end(),
                                   [&](const auto& o) { return o.kind == ms.phase.object; });
      WorldObject obj = *it;
      deck.erase(it);
      obj.position = {spec.location.x, spec.location.y, sc.table_height};
      objects.push_back(obj);
      apply_event(MissionEvent::PlaceDone);
      ++result.metrics.tasks_completed;
      mode = Mode::Decide;
      return;
    }

    if (fsm.phase() == GraspPhase::Holding) {
      deck.push_back(*held);
      held.reset();
      fsm.begin_place();
      fsm.step(joints, target, dt);
      logs.arm += strf("t=%.3f phase=Place stow=%s gripper=open\n", t, deck.back().kind.c_str());
    }

    const auto dets = simulate_detections(objects, truth_map, truth, det_cfg,
                                          stream_seed(sc.seed, 100 + result.metrics.ticks));
    // Each detection is matched to the true object it came from; the sensor
    // measures relative to the true pose. Its footprint cloud gives the yaw.
    std::optional<std::size_t> chosen;
    std::optional<Point3> located;
    double located_yaw = 0.0;
    double located_d = kMatchRadius;
    for (const auto& d : dets) {
      const Point3 p = locate_object(d, det_cfg.intrinsics, det_cfg.mount);
      const Point2 seen = local_to_global(truth, {p.x, p.y});
      std::size_t source = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < objects.size(); ++i) {
        const double dd = distance(seen, {objects[i].position.x, objects[i].position.y});
        if (objects[i].kind == d.kind && dd < best) {
          best = dd;
          source = i;
        }
      }
      std::vector<Point2> outline = sample_footprint(objects[source], kFootprintSamples,
                                                     sc.noise.depth, footprint_rng());
      for (auto& q : outline) {
        q = global_to_local(truth, q);
      }
      std::optional<double> yaw;
      try {
        yaw = pca_orientation(outline);
      } catch (const DegenerateCluster&) {
      }

      const Point2 w = local_to_global(nav_pose(), {p.x, p.y});
      const std::string yaw_text =
          yaw ? strf("%.6f", normalize_axis(*yaw + nav_pose().theta)) : std::string("-");
      logs.detections += strf("t=%.3f kind=%s x=%.6f y=%.6f z=%.6f yaw=%s conf=%.6f\n", t,
                              d.kind.c_str(), w.x, w.y, p.z, yaw_text.c_str(), d.confidence);
      const double dist = distance(w, spec.location);
      if (d.kind == ms.phase.object && dist < located_d) {
        located_d = dist;
        located = p;
        chosen = yaw ? std::optional<std::size_t>(source) : std::nullopt;
        located_yaw = yaw.value_or(0.0);
      }
    }
    if (!located) {
      abort_leg("not_detected");
      return;
    }
    if (!chosen) {
      abort_leg("degenerate_cluster");
      return;
    }
    target_index = *chosen;
    target = {ms.phase.object, located->x, located->y, located->z, located_yaw,
              objects[target_index].mass};
    fsm.begin_pick(joints);
    tracker.reset();
  };

  auto manipulate = [&]() {
    const ArmJoints before = joints;
    const GraspStep step = fsm.step(joints, target, dt);
    joints = tracker.step(joints, step.setpoint, dt);

    auto& m = result.metrics;
    const double rev = std::max({std::abs(angle_diff(joints.theta_base, before.theta_base)),
                                 std::abs(joints.wrist_pitch - before.wrist_pitch),
                                 std::abs(joints.wrist_roll - before.wrist_roll)}) / dt;
    const double pri = std::max(std::abs(joints.d_elev - before.d_elev),
                                std::abs(joints.d_tel - before.d_tel)) / dt;
    m.max_revolute_speed = std::max(m.max_revolute_speed, rev);
    m.max_prismatic_speed = std::max(m.max_prismatic_speed, pri);
    if (rev > arm_geom.revolute_speed * (1.0 + kSpeedSlack) ||
        pri > arm_geom.prismatic_speed * (1.0 + kSpeedSlack)) {
      ++m.arm_speed_violations;
    }
    logs.arm += strf(
        "t=%.3f phase=%s theta=%.6f d_elev=%.6f d_tel=%.6f err_y=%.6f err_x=%.6f issued=%s "
        "gripper=%s pitch=%.6f roll=%.6f\n",
        t, to_string(step.phase), joints.theta_base, joints.d_elev, joints.d_tel, step.err_y,
        step.err_x, to_string(step.issued_in), gripper_text(step.gripper), joints.wrist_pitch,
        joints.wrist_roll);

    if (step.gripper == GripperCommand::Close) {
      const EndEffectorPose ee = arm_fk(before, {}, arm_geom);
      const WorldObject& obj = objects[target_index];
      const Point2 local = global_to_local(truth, {obj.position.x, obj.position.y});
      GraspRecord rec{t, obj.kind, ee.x - local.x, ee.y - local.y, ee.z - obj.position.z, 0.0};
      double yaw_err = normalize_angle(ee.yaw - (obj.yaw - truth.theta));
      if (yaw_err > std::numbers::pi / 2.0) {
        yaw_err -= std::numbers::pi;
      } else if (yaw_err <= -std::numbers::pi / 2.0) {
        yaw_err += std::numbers::pi;
      }
      rec.err_yaw = yaw_err;
      result.grasps.push_back(rec);
    }

    if (step.phase == GraspPhase::Holding) {
      held = objects[target_index];
      objects.erase(objects.begin() + static_cast<std::ptrdiff_t>(target_index));
      apply_event(MissionEvent::PickDone);
      mode = Mode::Decide;
    } else if (step.phase == GraspPhase::Failed) {
      fsm.reset();
      tracker.reset();
      abort_leg("grasp_failed");
    } else if (step.gripper == GripperCommand::Open) {
      const EndEffectorPose ee = arm_fk(joints, {}, arm_geom);
      const Point2 w = local_to_global(truth, {ee.x, ee.y});
      WorldObject obj = *held;
      held.reset();
      obj.position = {w.x, w.y, sc.table_height};
      obj.yaw = normalize_angle(ee.yaw + truth.theta);
      objects.push_back(obj);
      apply_event(MissionEvent::PlaceDone);
      ++result.metrics.tasks_completed;
      mode = Mode::Decide;
    }
  };

  auto& metrics = result.metrics;
  auto track_clearance = [&]() {
    const double c = footprint_clearance(truth_map, truth, half_length, half_width,
                                         kClearanceSearch);
    metrics.min_wall_clearance = std::min(metrics.min_wall_clearance, c);
    return c <= 0.0;
  };
  bool in_collision = track_clearance();
  if (in_collision) {
    ++metrics.collisions;
  }
  result.trajectory.push_back(truth.position());

  for (long tick = 0;; ++tick) {
    t = static_cast<double>(tick) * dt;
    if (t >= sc.max_sim_time) {
      break;
    }

    // sense
    if (tick % sc.lidar_period == 0) {
      scan = simulate_lidar(truth_map, truth, sc.lidar_beams, sc.lidar_range);
      if (sc.noise.lidar > 0.0) {
        apply_range_jitter(scan, sc.noise.lidar, lidar_rng);
      }
      // map
      if (!mapper.integrate(nav_pose(), scan).empty()) {
        plan_map = planning_map();
        plan_field = distance_field(plan_map);
        if (mode == Mode::Drive && !need_plan && path_blocked()) {
          ++metrics.replans;
          need_plan = true;
          apply_event(MissionEvent::Replanned, "map_changed");
        }
      }
    }
    ranges = simulate_range_sensors(truth_map, truth);

    // mission if idle
    if (mode == Mode::Decide) {
      const auto from = snap(nav_pose().position());
      ms.robot_cell = from.value_or(*plan_map.world_to_cell(nav_pose().position()));
      try {
        Decision d = mission_decide(ms, travel);
        if (opts.record_decisions) {
          result.decisions.push_back(
              {t, ms, plan_map, sc.planner, blocked, d.candidates, d.action});
        }
        ms = d.state;
        if (!d.action) {
          metrics.done = true;
          leg.reset();
          log_mission(phase_text() + " decide=Done");
          break;
        }
        leg = d.action;
        log_mission(phase_text() + strf(" candidates=%zu", d.candidates.size()));
        mode = Mode::Drive;
        need_plan = true;
        gate_stops = 0;
      } catch (const NoFeasibleAction&) {
        leg.reset();
        log_mission(phase_text() + " decide=NoFeasibleAction");
        break;
      }
    }

    // plan / replan
    if (mode == Mode::Drive && need_plan) {
      need_plan = false;
      const Station& st = ms.station(ms.phase.station);
      const StationSpec& spec = *std::find_if(sc.stations.begin(), sc.stations.end(),
                                              [&](const auto& s) { return s.id == st.id; });
      const auto from = snap(nav_pose().position());
      try {
        if (!from) {
          throw NoPath("no valid start cell near the robot");
        }
        const PlanResult pr = astar(plan_map, plan_field, *from, st.approach, sc.planner);
        path = pr.cells;
        const Point2 goal = plan_map.cell_center(st.approach);
        const Point2 look = spec.location - goal;
        follower.emplace(pr.waypoints, std::atan2(look.y, look.x), sc.gains_xy, sc.gains_theta);
        emit(SimLogLevel::Trace, strf("t=%.3f plan cells=%zu cost=%.6f expanded=%llu", t,
                                      pr.cells.size(), pr.total_cost,
                                      static_cast<unsigned long long>(pr.expanded)));
      } catch (const Error& e) {
        if (!dynamic_cast<const NoPath*>(&e) && !dynamic_cast<const InvalidEndpoint*>(&e)) {
          throw;
        }
        ++metrics.replans;
        abort_leg("no_path");
      }
    }

    // control
    Twist2D cmd;
    if (mode == Mode::Drive && follower) {
      const FollowerCommand fc = follower->step(nav_pose(), dt);
      if (fc.status.mode == FollowMode::GoalReached) {
        follower.reset();
        apply_event(MissionEvent::ArrivedAtStation);
        mode = Mode::Manipulate;
        begin_manipulation();
      } else if (collision_gate(scan, ranges, fc.twist, sc.stop_distance) ==
                 GateDecision::StopAndReplan) {
        ++metrics.replans;
        if (++gate_stops > kMaxGateStopsPerLeg) {
          abort_leg("gate_blocked");
        } else {
          need_plan = true;
          apply_event(MissionEvent::Replanned, "gate");
        }
      } else {
        cmd = fc.twist;
      }
    } else if (mode == Mode::Manipulate) {
      manipulate();
    }

    // actuate
    const WheelSpeeds wheels = inverse_kinematics(cmd, robot);
    WheelSpeeds enc = wheels;
    if (sc.noise.encoder > 0.0) {
      enc.fl += sc.noise.encoder * gaussian(encoder_rng);
      enc.fr += sc.noise.encoder * gaussian(encoder_rng);
      enc.rl += sc.noise.encoder * gaussian(encoder_rng);
      enc.rr += sc.noise.encoder * gaussian(encoder_rng);
    }

    const double speed = cmd.planar_speed();
    metrics.max_planar_speed = std::max(metrics.max_planar_speed, speed);
    if (speed > robot.max_velocity) {
      ++metrics.speed_violations;
    }
    logs.trajectory_csv += strf("%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", t, truth.x, truth.y,
                                truth.theta, cmd.vx, cmd.vy, cmd.omega);

    // integrate
    const Pose2D next = integrate_odometry(truth, cmd, dt);
    metrics.total_distance += distance(truth.position(), next.position());
    truth = next;

    const Twist2D odom = forward_kinematics(enc, robot);
    est = integrate_odometry(est, odom, dt);
    gyro_heading = normalize_angle(gyro_heading + (odom.omega + sc.noise.gyro * gaussian(gyro_rng)) * dt);
    const double compass = normalize_angle(truth.theta + sc.noise.gyro * gaussian(gyro_rng));
    est = Pose2D(est.x, est.y, fuse_heading(compass, gyro_heading));

    result.trajectory.push_back(truth.position());
    ++metrics.ticks;
    const bool touching = track_clearance();
    if (touching && !in_collision) {
      ++metrics.collisions;
    }
    in_collision = touching;
  }

  metrics.sim_time = static_cast<double>(metrics.ticks) * dt;
  result.mission = ms;
  result.objects = objects;
  if (held) {
    result.carried.push_back(*held);
  }
  result.carried.insert(result.carried.end(), deck.begin(), deck.end());
  result.own_map = planning_map();
  result.last_path = path;
  return result;
}

void write_sim_outputs(const SimResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) {
      throw Error("cannot write " + (dir / name).string());
    }
    out << text;
  };
  write("trajectory.csv", result.logs.trajectory_csv);
  write("mission.log", result.logs.mission);
  write("arm.log", result.logs.arm);
  write("detections.log", result.logs.detections);
  write("metrics.txt", result.metrics.to_text());
  write("render.pgm", render(result.own_map, result.trajectory, result.last_path));
}

}  // namespace mobman
