#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <string>

#include "mobman/control.hpp"
#include "mobman/geometry.hpp"

namespace mobman {

/// Rotary base, vertical elevator, horizontal telescope, wrist pitch and roll.
struct ArmJoints {
  double theta_base = 0.0;   // rad about Z, (-pi, pi]
  double d_elev = 0.0;       // m, [0, d_elev_max]
  double d_tel = 0.0;        // m, [0, d_tel_max]
  double wrist_pitch = 0.0;  // rad, [-pi/2, pi/2]
  double wrist_roll = 0.0;   // rad, [-pi/2, pi/2]

  friend bool operator==(const ArmJoints&, const ArmJoints&) = default;
};

struct ArmGeometry {
  double r0 = 0.15;  // m, radial offset of the tool point at d_tel = 0
  double z0 = 0.20;  // m, tool height at d_elev = 0
  double d_elev_max = 0.50;
  double d_tel_max = 0.35;
  double wrist_max = std::numbers::pi / 2.0;
  double revolute_speed = std::numbers::pi / 4.0;  // rad/s (45 deg/s)
  double prismatic_speed = 0.10;                   // m/s
  double payload = 0.5;                            // kg

  bool within_limits(const ArmJoints& j) const;
  ArmJoints clamp(const ArmJoints& j) const;
};

/// Planar pose of the arm base plus its height.
struct ArmMount {
  Pose2D pose;
  double z = 0.0;
};

struct EndEffectorPose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double yaw = 0.0;
  double pitch = 0.0;
};

/// r = r0 + d_tel, heading = mount.theta + theta_base;
/// (x, y) = mount + r*(cos, sin)(heading), z = mount.z + z0 + d_elev,
/// yaw = heading + wrist_roll, pitch = wrist_pitch.
EndEffectorPose arm_fk(const ArmJoints& j, const ArmMount& mount = {},
                       const ArmGeometry& geom = {});

// ---------------------------------------------------------------------------
// Joint tracking

struct JointGains {
  PidGains revolute{5.0, 0.0, 0.0};
  PidGains prismatic{5.0, 0.0, 0.0};
};

/// One PID per joint producing a joint velocity, capped at the joint's speed
/// limit, integrated over dt and clamped to the joint range.
class JointTracker {
 public:
  explicit JointTracker(ArmGeometry geom = {}, JointGains gains = {});

  ArmJoints step(const ArmJoints& current, const ArmJoints& setpoint, double dt);
  void reset() { state_ = {}; }

 private:
  ArmGeometry geom_;
  JointGains gains_;
  std::array<PidState, 5> state_{};
};

// ---------------------------------------------------------------------------
// Grasp state machine

enum class GraspPhase {
  Idle,
  AlignY,
  AlignX,
  AlignAngleHeight,
  CloseGripper,
  Lift,
  Holding,
  Place,
  Failed
};

enum class GripperCommand { None, Open, Close };

struct GripperState {
  bool open = true;
  std::optional<std::string> holding;
};

/// Object pose in the robot frame; yaw is the undirected principal axis.
struct GraspTarget {
  std::string kind;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double yaw = 0.0;
  double mass = 0.1;  // kg
};

struct GraspTolerance {
  double x = 0.002;    // m along the arm axis
  double y = 0.002;    // m across the arm axis
  double z = 0.002;    // m
  double yaw = 0.02;   // rad
};

struct GraspConfig {
  GraspTolerance tol;
  double lift_clearance = 0.05;  // m
  double phase_timeout = 10.0;   // s
};

/// Output of one FSM step.
struct GraspStep {
  GraspPhase phase = GraspPhase::Idle;      // phase after the step
  GraspPhase issued_in = GraspPhase::Idle;  // phase the gripper command belongs to
  ArmJoints setpoint;
  GripperCommand gripper = GripperCommand::None;
  double err_y = 0.0;  // lateral offset of the target from the arm axis
  double err_x = 0.0;  // target distance along the arm axis minus reach
};

/// Alignment errors of `target` for the given joints, in the arm's rotating
/// frame: lateral, longitudinal, height and wrapped yaw.
struct AlignmentError {
  double y = 0.0;
  double x = 0.0;
  double z = 0.0;
  double yaw = 0.0;
};
AlignmentError alignment_error(const ArmJoints& j, const GraspTarget& target,
                               const ArmMount& mount, const ArmGeometry& geom);

/// Pick sequence: align across the arm axis with the base rotation, along it
/// with the telescope, then wrist roll and height; close; lift. Each phase
/// advances only when its own error is within tolerance, and several
/// already-satisfied phases may be passed in one step. A phase that does not
/// converge within phase_timeout ends in Failed, as does a target outside the
/// reachable envelope or above payload.
class GraspFsm {
 public:
  explicit GraspFsm(ArmGeometry geom = {}, GraspConfig cfg = {}, ArmMount mount = {});

  /// Idle -> AlignY. Setpoints start at the current joints.
  void begin_pick(const ArmJoints& current);
  /// Holding -> Place.
  void begin_place();
  /// Failed / Idle -> Idle.
  void reset();

  GraspStep step(const ArmJoints& current, const GraspTarget& target, double dt);

  GraspPhase phase() const noexcept { return phase_; }
  const GripperState& gripper() const noexcept { return gripper_; }
  const ArmJoints& setpoint() const noexcept { return setpoint_; }
  /// Alignment error captured when the gripper closed.
  const std::optional<AlignmentError>& grasp_error() const noexcept { return grasp_error_; }

  bool reachable(const GraspTarget& target) const;

 private:
  void enter(GraspPhase p);

  ArmGeometry geom_;
  GraspConfig cfg_;
  ArmMount mount_;
  GraspPhase phase_ = GraspPhase::Idle;
  GripperState gripper_;
  ArmJoints setpoint_;
  double time_in_phase_ = 0.0;
  std::array<bool, 3> aligned_{};  // AlignY, AlignX, AlignAngleHeight reported in tolerance
  std::optional<AlignmentError> grasp_error_;
};

const char* to_string(GraspPhase p);

}  // namespace mobman
