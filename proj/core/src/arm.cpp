#include "mobman/arm.hpp"

#include <algorithm>
#include <stdexcept>

namespace mobman {

namespace {

// Maps an undirected axis angle onto (-pi/2, pi/2].
double wrap_half_turn(double a) {
  double r = normalize_angle(a);
  if (r > std::numbers::pi / 2.0) {
    r -= std::numbers::pi;
  } else if (r <= -std::numbers::pi / 2.0) {
    r += std::numbers::pi;
  }
  return r;
}

}  // namespace

bool ArmGeometry::within_limits(const ArmJoints& j) const {
  return j.theta_base > -std::numbers::pi && j.theta_base <= std::numbers::pi &&
         j.d_elev >= 0.0 && j.d_elev <= d_elev_max && j.d_tel >= 0.0 && j.d_tel <= d_tel_max &&
         std::abs(j.wrist_pitch) <= wrist_max && std::abs(j.wrist_roll) <= wrist_max;
}

ArmJoints ArmGeometry::clamp(const ArmJoints& j) const {
  return {normalize_angle(j.theta_base), std::clamp(j.d_elev, 0.0, d_elev_max),
          std::clamp(j.d_tel, 0.0, d_tel_max), std::clamp(j.wrist_pitch, -wrist_max, wrist_max),
          std::clamp(j.wrist_roll, -wrist_max, wrist_max)};
}

EndEffectorPose arm_fk(const ArmJoints& j, const ArmMount& mount, const ArmGeometry& geom) {
  const double heading = mount.pose.theta + j.theta_base;
  const double r = geom.r0 + j.d_tel;
  return {mount.pose.x + r * std::cos(heading), mount.pose.y + r * std::sin(heading),
          mount.z + geom.z0 + j.d_elev, normalize_angle(heading + j.wrist_roll), j.wrist_pitch};
}

// ---------------------------------------------------------------------------

JointTracker::JointTracker(ArmGeometry geom, JointGains gains) : geom_(geom), gains_(gains) {
  gains_.revolute.validate();
  gains_.prismatic.validate();
}

ArmJoints JointTracker::step(const ArmJoints& current, const ArmJoints& setpoint, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("JointTracker::step: dt must be > 0");
  }
  const ArmJoints target = geom_.clamp(setpoint);
  auto advance = [&](std::size_t k, double value, double error, const PidGains& g,
                     double speed_cap) {
    const auto out = pid_step(state_[k], error, g, dt);
    state_[k] = out.state;
    const double v = std::clamp(out.u, -speed_cap, speed_cap);
    return value + v * dt;
  };

  ArmJoints next;
  next.theta_base = advance(0, current.theta_base, angle_diff(target.theta_base, current.theta_base),
                            gains_.revolute, geom_.revolute_speed);
  next.d_elev = advance(1, current.d_elev, target.d_elev - current.d_elev, gains_.prismatic,
                        geom_.prismatic_speed);
  next.d_tel = advance(2, current.d_tel, target.d_tel - current.d_tel, gains_.prismatic,
                       geom_.prismatic_speed);
  next.wrist_pitch = advance(3, current.wrist_pitch, target.wrist_pitch - current.wrist_pitch,
                             gains_.revolute, geom_.revolute_speed);
  next.wrist_roll = advance(4, current.wrist_roll, target.wrist_roll - current.wrist_roll,
                            gains_.revolute, geom_.revolute_speed);
  return geom_.clamp(next);
}

// ---------------------------------------------------------------------------

AlignmentError alignment_error(const ArmJoints& j, const GraspTarget& target,
                               const ArmMount& mount, const ArmGeometry& geom) {
  const Point2 local = global_to_local(mount.pose, {target.x, target.y});
  const double c = std::cos(j.theta_base);
  const double s = std::sin(j.theta_base);
  const EndEffectorPose ee = arm_fk(j, mount, geom);
  return {
      -s * local.x + c * local.y,
      c * local.x + s * local.y - (geom.r0 + j.d_tel),
      target.z - ee.z,
      wrap_half_turn(target.yaw - ee.yaw),
  };
}

GraspFsm::GraspFsm(ArmGeometry geom, GraspConfig cfg, ArmMount mount)
    : geom_(geom), cfg_(cfg), mount_(mount) {}

void GraspFsm::enter(GraspPhase p) {
  phase_ = p;
  time_in_phase_ = 0.0;
}

void GraspFsm::begin_pick(const ArmJoints& current) {
  if (phase_ != GraspPhase::Idle) {
    throw std::logic_error(std::string("begin_pick from phase ") + to_string(phase_));
  }
  setpoint_ = geom_.clamp(current);
  aligned_ = {};
  grasp_error_.reset();
  enter(GraspPhase::AlignY);
}

void GraspFsm::begin_place() {
  if (phase_ != GraspPhase::Holding) {
    throw std::logic_error(std::string("begin_place from phase ") + to_string(phase_));
  }
  enter(GraspPhase::Place);
}

void GraspFsm::reset() {
  if (phase_ != GraspPhase::Failed && phase_ != GraspPhase::Idle) {
    throw std::logic_error(std::string("reset from phase ") + to_string(phase_));
  }
  aligned_ = {};
  enter(GraspPhase::Idle);
}

bool GraspFsm::reachable(const GraspTarget& target) const {
  const Point2 local = global_to_local(mount_.pose, {target.x, target.y});
  const double radial = norm(local);
  const double dz = target.z - mount_.z - geom_.z0;
  return target.mass <= geom_.payload && radial >= geom_.r0 - cfg_.tol.x &&
         radial <= geom_.r0 + geom_.d_tel_max + cfg_.tol.x && dz >= -cfg_.tol.z &&
         dz <= geom_.d_elev_max + cfg_.tol.z;
}

GraspStep GraspFsm::step(const ArmJoints& current, const GraspTarget& target, double dt) {
  GraspStep out;
  out.issued_in = phase_;
  time_in_phase_ += dt;

  const AlignmentError err = alignment_error(current, target, mount_, geom_);
  out.err_y = err.y;
  out.err_x = err.x;
  const Point2 local = global_to_local(mount_.pose, {target.x, target.y});

  for (bool advanced = true; advanced;) {
    advanced = false;
    switch (phase_) {
      case GraspPhase::AlignY:
        if (!reachable(target)) {
          enter(GraspPhase::Failed);
          break;
        }
        setpoint_.theta_base = std::atan2(local.y, local.x);
        if (std::abs(err.y) < cfg_.tol.y) {
          aligned_[0] = true;
          enter(GraspPhase::AlignX);
          advanced = true;
        }
        break;
      case GraspPhase::AlignX:
        setpoint_.d_tel = std::clamp(norm(local) - geom_.r0, 0.0, geom_.d_tel_max);
        if (std::abs(err.x) < cfg_.tol.x) {
          aligned_[1] = true;
          enter(GraspPhase::AlignAngleHeight);
          advanced = true;
        }
        break;
      case GraspPhase::AlignAngleHeight:
        setpoint_.d_elev =
            std::clamp(target.z - mount_.z - geom_.z0, 0.0, geom_.d_elev_max);
        setpoint_.wrist_roll = std::clamp(
            wrap_half_turn(target.yaw - mount_.pose.theta - current.theta_base),
            -geom_.wrist_max, geom_.wrist_max);
        if (std::abs(err.z) < cfg_.tol.z && std::abs(err.yaw) < cfg_.tol.yaw) {
          aligned_[2] = true;
          enter(GraspPhase::CloseGripper);
        }
        break;
      case GraspPhase::CloseGripper:
        if (!(aligned_[0] && aligned_[1] && aligned_[2])) {
          throw std::logic_error("gripper close requested before alignment completed");
        }
        out.gripper = GripperCommand::Close;
        out.issued_in = GraspPhase::CloseGripper;
        gripper_ = {false, target.kind};
        grasp_error_ = err;
        setpoint_.d_elev = std::min(current.d_elev + cfg_.lift_clearance, geom_.d_elev_max);
        enter(GraspPhase::Lift);
        break;
      case GraspPhase::Lift:
        if (std::abs(current.d_elev - setpoint_.d_elev) < cfg_.tol.z) {
          enter(GraspPhase::Holding);
        }
        break;
      case GraspPhase::Place:
        out.gripper = GripperCommand::Open;
        out.issued_in = GraspPhase::Place;
        gripper_ = {true, std::nullopt};
        enter(GraspPhase::Idle);
        break;
      case GraspPhase::Idle:
      case GraspPhase::Holding:
      case GraspPhase::Failed:
        break;
    }
  }

  const bool aligning = phase_ == GraspPhase::AlignY || phase_ == GraspPhase::AlignX ||
                        phase_ == GraspPhase::AlignAngleHeight;
  if (aligning && time_in_phase_ > cfg_.phase_timeout) {
    enter(GraspPhase::Failed);
  }

  out.phase = phase_;
  out.setpoint = setpoint_;
  return out;
}

const char* to_string(GraspPhase p) {
  switch (p) {
    case GraspPhase::Idle:
      return "Idle";
    case GraspPhase::AlignY:
      return "AlignY";
    case GraspPhase::AlignX:
      return "AlignX";
    case GraspPhase::AlignAngleHeight:
      return "AlignAngleHeight";
    case GraspPhase::CloseGripper:
      return "CloseGripper";
    case GraspPhase::Lift:
      return "Lift";
    case GraspPhase::Holding:
      return "Holding";
    case GraspPhase::Place:
      return "Place";
    case GraspPhase::Failed:
      return "Failed";
  }
  return "?";
}

}  // namespace mobman
