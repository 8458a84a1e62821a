#pragma once

// Closed-loop pick driver shared by the unit and acceptance tests.

#include <cmath>
#include <numbers>
#include <vector>

#include "mobman/arm.hpp"
#include "mobman/random.hpp"

namespace grasp {

struct Trace {
  mobman::GraspPhase final_phase = mobman::GraspPhase::Idle;
  std::vector<mobman::GraspStep> steps;
  mobman::ArmJoints joints_at_close;
  bool closed = false;
  double max_revolute_speed = 0.0;   // rad/s
  double max_prismatic_speed = 0.0;  // m/s
};

/// Runs the FSM with the default joint tracker until it settles in Holding or
/// Failed, or `limit` simulated seconds pass.
inline Trace run_pick(const mobman::GraspTarget& target, mobman::ArmJoints start = {},
                      double dt = 0.02, double limit = 60.0) {
  mobman::GraspFsm fsm;
  mobman::JointTracker tracker;
  Trace tr;
  fsm.begin_pick(start);
  mobman::ArmJoints j = start;
  for (double t = 0.0; t < limit; t += dt) {
    const mobman::GraspStep s = fsm.step(j, target, dt);
    tr.steps.push_back(s);
    if (s.gripper == mobman::GripperCommand::Close) {
      tr.closed = true;
      tr.joints_at_close = j;
    }
    if (s.phase == mobman::GraspPhase::Holding || s.phase == mobman::GraspPhase::Failed) {
      break;
    }
    const mobman::ArmJoints next = tracker.step(j, s.setpoint, dt);
    tr.max_revolute_speed =
        std::max({tr.max_revolute_speed,
                  std::abs(mobman::angle_diff(next.theta_base, j.theta_base)) / dt,
                  std::abs(next.wrist_pitch - j.wrist_pitch) / dt,
                  std::abs(next.wrist_roll - j.wrist_roll) / dt});
    tr.max_prismatic_speed = std::max({tr.max_prismatic_speed,
                                       std::abs(next.d_elev - j.d_elev) / dt,
                                       std::abs(next.d_tel - j.d_tel) / dt});
    j = next;
  }
  tr.final_phase = fsm.phase();
  return tr;
}

/// A target inside the reach envelope with margin, in the robot frame.
inline mobman::GraspTarget random_reachable(mobman::Rng& rng) {
  const mobman::ArmGeometry g;
  const double r = mobman::uniform(rng, g.r0 + 0.02, g.r0 + g.d_tel_max - 0.02);
  const double a = mobman::uniform(rng, -std::numbers::pi + 0.01, std::numbers::pi);
  mobman::GraspTarget t;
  t.kind = "A";
  t.x = r * std::cos(a);
  t.y = r * std::sin(a);
  t.z = g.z0 + mobman::uniform(rng, 0.02, g.d_elev_max - 0.1);
  t.yaw = mobman::uniform(rng, -std::numbers::pi, std::numbers::pi);
  return t;
}

/// A target that violates exactly one reach or payload limit by a clear margin.
inline mobman::GraspTarget random_unreachable(mobman::Rng& rng) {
  const mobman::ArmGeometry g;
  const double a = mobman::uniform(rng, -std::numbers::pi + 0.01, std::numbers::pi);
  double r = mobman::uniform(rng, g.r0 + 0.02, g.r0 + g.d_tel_max - 0.02);
  double z = g.z0 + mobman::uniform(rng, 0.02, g.d_elev_max - 0.1);
  double mass = 0.1;
  switch (mobman::uniform_index(rng, 5)) {
    case 0:
      r = mobman::uniform(rng, g.r0 + g.d_tel_max + 0.05, 1.0);
      break;
    case 1:
      r = mobman::uniform(rng, 0.01, g.r0 - 0.05);
      break;
    case 2:
      z = g.z0 + g.d_elev_max + mobman::uniform(rng, 0.05, 0.5);
      break;
    case 3:
      z = g.z0 - mobman::uniform(rng, 0.05, 0.15);
      break;
    default:
      mass = g.payload + mobman::uniform(rng, 0.1, 2.0);
      break;
  }
  mobman::GraspTarget t;
  t.kind = "A";
  t.x = r * std::cos(a);
  t.y = r * std::sin(a);
  t.z = z;
  t.yaw = mobman::uniform(rng, -std::numbers::pi, std::numbers::pi);
  t.mass = mass;
  return t;
}

}  // namespace grasp
