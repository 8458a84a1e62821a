#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mobman/control.hpp"
#include "mobman/kinematics.hpp"
#include "mobman/random.hpp"

using namespace mobman;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LidarScan open_scan(int n = 360, double range = 6.0) {
  LidarScan s;
  s.max_range = range;
  for (int i = 0; i < n; ++i) {
    s.beams.push_back({2 * std::numbers::pi * i / n, range});
  }
  return s;
}

// Drives the follower on exact kinematics until GoalReached or the time limit.
double drive(PathFollower& f, Pose2D& pose, double dt, double limit, double* max_speed) {
  const WorldConfig cfg;
  double t = 0.0;
  while (t < limit) {
    const FollowerCommand cmd = f.step(pose, dt);
    *max_speed = std::max(*max_speed, cmd.twist.planar_speed());
    if (cmd.status.mode == FollowMode::GoalReached) {
      return t;
    }
    const Twist2D actual = forward_kinematics(inverse_kinematics(cmd.twist, cfg), cfg);
    pose = integrate_odometry(pose, actual, dt);
    t += dt;
  }
  return kInf;
}

}  // namespace

TEST(Pid, Examples) {
  const PidGains p{2.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(pid_step({}, 0.3, p, 0.1).u, 0.6);

  PidState st;
  const PidGains any{1.0, 0.5, 0.2};
  for (int i = 0; i < 20; ++i) {
    const PidOutput o = pid_step(st, 0.0, any, 0.02);
    EXPECT_EQ(o.u, 0.0);
    st = o.state;
  }

  const PidGains integ{0.0, 1.0, 0.0};
  st = {};
  double u = 0.0;
  for (int i = 0; i < 10; ++i) {
    const PidOutput o = pid_step(st, 1.0, integ, 0.1);
    u = o.u;
    st = o.state;
  }
  EXPECT_NEAR(u, 1.0, 1e-12);
  EXPECT_NEAR(st.integral, 1.0, 1e-12);
}

TEST(Pid, IncrementalExamples) {
  const PidGains p{1.0, 0.0, 0.0};
  PidState st;
  std::vector<double> us;
  for (double e : {0.0, 1.0, 1.0}) {
    const PidOutput o = incremental_pid_step(st, e, p, 0.1);
    us.push_back(o.u);
    st = o.state;
  }
  EXPECT_EQ(us, (std::vector<double>{0.0, 1.0, 1.0}));

  const PidGains pd{0.7, 0.0, 0.3};
  st = {};
  double prev = 0.0;
  for (int i = 0; i < 10; ++i) {
    const PidOutput o = incremental_pid_step(st, 0.4, pd, 0.05);
    if (i >= 2) {
      EXPECT_EQ(o.u, prev);
    }
    prev = o.u;
    st = o.state;
  }
}

TEST(PidProperty, IncrementalEqualsPositionalUnclamped) {
  Rng rng(71);
  for (int seq = 0; seq < 100; ++seq) {
    const PidGains g{uniform(rng, 0, 3), uniform(rng, 0, 2), uniform(rng, 0, 0.5)};
    const double dt = uniform(rng, 0.005, 0.1);
    PidState a;
    PidState b;
    for (int i = 0; i < 200; ++i) {
      const double e = uniform(rng, -1, 1);
      const PidOutput pa = pid_step(a, e, g, dt);
      const PidOutput pb = incremental_pid_step(b, e, g, dt);
      ASSERT_NEAR(pa.u, pb.u, 1e-9) << "seq " << seq << " step " << i;
      a = pa.state;
      b = pb.state;
    }
  }
}

TEST(PidProperty, AntiWindupAndOutputClamp) {
  Rng rng(72);
  for (int seq = 0; seq < 100; ++seq) {
    const PidGains g{uniform(rng, 0, 3), uniform(rng, 0, 2), uniform(rng, 0, 0.5),
                     uniform(rng, 0.05, 1), uniform(rng, 0.1, 2)};
    PidState a;
    PidState b;
    for (int i = 0; i < 200; ++i) {
      const double e = uniform(rng, -5, 5);
      const PidOutput pa = pid_step(a, e, g, 0.02);
      const PidOutput pb = incremental_pid_step(b, e, g, 0.02);
      ASSERT_LE(std::abs(pa.state.integral), g.i_limit + 1e-12);
      ASSERT_LE(std::abs(pa.u), g.out_limit + 1e-12);
      ASSERT_LE(std::abs(pb.u), g.out_limit + 1e-12);
      a = pa.state;
      b = pb.state;
    }
  }
}

TEST(Pid, GainValidation) {
  EXPECT_THROW((PidGains{-1, 0, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((PidGains{1, 0, 0, 0.0}.validate()), std::invalid_argument);
  EXPECT_THROW((PidGains{1, 0, 0, 1.0, -1.0}.validate()), std::invalid_argument);
  EXPECT_NO_THROW(default_xy_gains().validate());
  EXPECT_NO_THROW(default_theta_gains().validate());
}

TEST(ClampPlanarSpeed, ScalesUniformly) {
  const Twist2D t = clamp_planar_speed({0.3, 0.4, 1.5}, 0.2);
  EXPECT_NEAR(t.vx, 0.12, 1e-12);
  EXPECT_NEAR(t.vy, 0.16, 1e-12);
  EXPECT_EQ(t.omega, 1.5);
  const Twist2D slow = clamp_planar_speed({0.1, 0.0, 0.0}, 0.2);
  EXPECT_EQ(slow.vx, 0.1);
}

TEST(PathFollower, AtGoalStops) {
  PathFollower f({{0, 0}, {1, 0}}, 0.0);
  const FollowerCommand c = f.step(Pose2D(1.0, 0.01, 0.01), 0.02);
  EXPECT_EQ(c.status.mode, FollowMode::GoalReached);
  EXPECT_EQ(c.twist.vx, 0.0);
  EXPECT_EQ(c.twist.vy, 0.0);
  EXPECT_EQ(c.twist.omega, 0.0);
}

TEST(PathFollower, StraightTwoMetres) {
  PathFollower f({{0, 0}, {2, 0}}, 0.0);
  Pose2D pose(0, 0, 0);
  double vmax = 0.0;
  const double t = drive(f, pose, 0.02, 60.0, &vmax);
  EXPECT_LT(t, 60.0);
  EXPECT_LE(std::hypot(pose.x - 2.0, pose.y), 0.05);
  EXPECT_LE(vmax, 0.20 + 1e-12);
}

TEST(PathFollower, StopAndResume) {
  PathFollower f({{0, 0}, {2, 0}}, 0.0);
  f.stop();
  const FollowerCommand c = f.step(Pose2D(0, 0, 0), 0.02);
  EXPECT_EQ(c.status.mode, FollowMode::Stopped);
  EXPECT_EQ(c.twist.planar_speed(), 0.0);
  f.resume();
  EXPECT_GT(f.step(Pose2D(0, 0, 0), 0.02).twist.vx, 0.0);
}

TEST(PathFollowerProperty, SpeedCapAndConvergence) {
  Rng rng(73);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Point2> wps{{0, 0}};
    for (int i = 0; i < 3; ++i) {
      wps.push_back({wps.back().x + uniform(rng, -1, 1), wps.back().y + uniform(rng, -1, 1)});
    }
    const double heading = uniform(rng, -3, 3);
    PathFollower f(wps, heading);
    Pose2D pose(0, 0, uniform(rng, -3, 3));
    double vmax = 0.0;
    const double t = drive(f, pose, 0.02, 200.0, &vmax);
    ASSERT_LE(vmax, 0.20 + 1e-12);
    ASSERT_LT(t, 200.0) << "trial " << trial;
    ASSERT_LE(distance(pose.position(), wps.back()), 0.05 + 1e-9);
    ASSERT_LE(std::abs(angle_diff(pose.theta, heading)), 0.05 + 1e-9);
    ASSERT_LT(f.active_waypoint(), wps.size());
  }
}

TEST(CollisionGate, Examples) {
  const LidarScan open = open_scan();
  const RangeReadings far;
  EXPECT_EQ(collision_gate(open, far, {0.2, 0, 0}), GateDecision::Proceed);

  LidarScan ahead = open;
  ahead.beams[0].range = 0.1;
  EXPECT_EQ(collision_gate(ahead, far, {0.2, 0, 0}, 0.25), GateDecision::StopAndReplan);

  LidarScan behind = open;
  behind.beams[180].range = 0.1;
  EXPECT_EQ(collision_gate(behind, far, {0.2, 0, 0}, 0.25), GateDecision::Proceed);
  EXPECT_EQ(collision_gate(behind, far, {-0.2, 0, 0}, 0.25), GateDecision::StopAndReplan);

  RangeReadings left_close;
  left_close.left = 0.1;
  EXPECT_EQ(collision_gate(open, left_close, {0, 0.2, 0}), GateDecision::StopAndReplan);
  EXPECT_EQ(collision_gate(open, left_close, {0.2, 0, 0}), GateDecision::Proceed);
  EXPECT_EQ(collision_gate(ahead, far, {0, 0, 0.5}), GateDecision::Proceed);
}

TEST(CollisionGateProperty, HalfPlaneOracleAndMonotone) {
  Rng rng(74);
  for (int trial = 0; trial < 500; ++trial) {
    LidarScan s = open_scan(36, 6.0);
    for (auto& b : s.beams) {
      b.range = uniform(rng, 0.05, 1.0);
    }
    RangeReadings r{uniform(rng, 0.05, 1.0), uniform(rng, 0.05, 1.0), uniform(rng, 0.05, 1.0)};
    const double dir = uniform(rng, -std::numbers::pi, std::numbers::pi);
    const Twist2D cmd{0.1 * std::cos(dir), 0.1 * std::sin(dir), 0.0};
    const double stop = 0.25;

    // Oracle: dot product with the motion direction is positive.
    auto ahead = [&](double a) { return std::cos(a) * cmd.vx + std::sin(a) * cmd.vy > 1e-12; };
    bool expect_stop = false;
    for (const auto& b : s.beams) {
      expect_stop = expect_stop || (ahead(b.angle) && b.range < stop);
    }
    expect_stop = expect_stop || (ahead(std::numbers::pi / 2) && r.left < stop) ||
                  (ahead(-std::numbers::pi / 2) && r.right < stop) ||
                  (ahead(std::numbers::pi) && r.back < stop);
    const GateDecision d = collision_gate(s, r, cmd, stop);
    ASSERT_EQ(d == GateDecision::StopAndReplan, expect_stop);

    if (d == GateDecision::StopAndReplan) {
      const std::size_t i = uniform_index(rng, s.beams.size());
      s.beams[i].range *= 0.5;
      r.back *= 0.5;
      ASSERT_EQ(collision_gate(s, r, cmd, stop), GateDecision::StopAndReplan);
    }
  }
}
