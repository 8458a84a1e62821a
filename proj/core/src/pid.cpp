#include <algorithm>
#include <stdexcept>

#include "mobman/control.hpp"

namespace mobman {

void PidGains::validate() const {
  if (kp < 0.0 || ki < 0.0 || kd < 0.0) {
    throw std::invalid_argument("PidGains: gains must be >= 0");
  }
  if (!(i_limit > 0.0) || !(out_limit > 0.0)) {
    throw std::invalid_argument("PidGains: limits must be > 0");
  }
}

PidOutput pid_step(const PidState& st, double e, const PidGains& gains, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("pid_step: dt must be > 0");
  }
  PidState next = st;
  next.integral = std::clamp(st.integral + e * dt, -gains.i_limit, gains.i_limit);
  const double u = gains.kp * e + gains.ki * next.integral + gains.kd * (e - st.e_prev) / dt;
  next.u_prev = std::clamp(u, -gains.out_limit, gains.out_limit);
  next.e_prev2 = st.e_prev;
  next.e_prev = e;
  return {next.u_prev, next};
}

PidOutput incremental_pid_step(const PidState& st, double e, const PidGains& gains,
                               double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("incremental_pid_step: dt must be > 0");
  }
  const double du = gains.kp * (e - st.e_prev) + gains.ki * e * dt +
                    gains.kd * (e - 2.0 * st.e_prev + st.e_prev2) / dt;
  PidState next = st;
  next.integral = std::clamp(st.integral + e * dt, -gains.i_limit, gains.i_limit);
  next.u_prev = std::clamp(st.u_prev + du, -gains.out_limit, gains.out_limit);
  next.e_prev2 = st.e_prev;
  next.e_prev = e;
  return {next.u_prev, next};
}

}  // namespace mobman
