// Copyright 2026 The land-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "landsim/controller.hpp"

#include <algorithm>
#include <cmath>

namespace landsim {

const char* ControllerKindName(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kP: return "p";
    case ControllerKind::kPD: return "pd";
    case ControllerKind::kPID: return "pid";
  }
  return "?";
}

ControllerKind ParseControllerKind(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "p") return ControllerKind::kP;
  if (lower == "pd") return ControllerKind::kPD;
  if (lower == "pid") return ControllerKind::kPID;
  throw Error(ErrorKind::kConfigError, "unknown controller kind '" + name + "'");
}

PidOutput PidStep(const PidGains& g, const PidState& st, double error,
                  double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::kNonPositiveDt, "dt must be positive");

  PidState next = st;
  const double prev = st.initialized ? st.prev_error : error;

  next.integral += (error + prev) * dt / 2.0;
  if (g.ki != 0.0) {
    const double a = g.out_min / g.ki, b = g.out_max / g.ki;
    next.integral = std::clamp(next.integral, std::min(a, b), std::max(a, b));
  }

  const double raw = (error - prev) / dt;
  if (g.derivative_tau > 0.0 && st.initialized) {
    next.derivative += (raw - st.derivative) * dt / (g.derivative_tau + dt);
  } else {
    next.derivative = raw;
  }
  next.prev_error = error;
  next.initialized = true;

  const double u = g.kp * error + g.ki * next.integral + g.kd * next.derivative;
  return {std::clamp(u, g.out_min, g.out_max), next};
}

Vec3 ComputeError(const Setpoint& sp, const FilterState& x) {
  // The tracked angle is state 4; states 2 and 3 are the pad dimensions.
  return {sp.sp[0] - x.x[0], sp.sp[1] - x.x[1], WrapAngle90(sp.sp[2] - x.x[4])};
}

double AltitudeStep(const AltitudeState& alt, const FilterState& x,
                    const AltitudeLaw& law) {
  const double error_size = std::abs(x.x[2] - x.x[3]);
  if (error_size < law.square_tol_px && alt.z_p > law.min_height) {
    return std::max(0.0, alt.z_p - law.z_f);
  }
  return alt.z_p;
}

bool LandingCheck(double u_z, const Vec3& e, const AltitudeLaw& law) {
  return u_z <= law.land_height && std::abs(e[0]) < law.land_error_px &&
         std::abs(e[1]) < law.land_error_px;
}

ControlStepResult ControlStep(const ControllerConfig& cfg,
                              const FilterState& x,
                              const ControllerState& state, double dt) {
  ControlStepResult res;
  res.state = state;
  res.error = ComputeError(cfg.setpoint, x);

  if (state.landed) {
    res.command.u_z = 0.0;
    res.command.landed = true;
    return res;
  }

  double u_z = AltitudeStep(state.altitude, x, cfg.altitude);
  if (LandingCheck(u_z, res.error, cfg.altitude)) {
    u_z = 0.0;
    res.state.landed = true;
    res.command.landed = true;
  }
  res.state.altitude.z_p = u_z;
  res.command.u_z = u_z;

  const Eigen::Vector2d planar = cfg.axis_map * res.error.head<2>();
  const std::array<double, 3> channel_error = {planar[0], planar[1],
                                               cfg.yaw_sign * res.error[2]};
  for (int i = 0; i < 3; ++i) {
    const PidOutput out =
        PidStep(cfg.gains[i], state.pids[i], channel_error[i], dt);
    res.command.u[i] = out.output;
    res.state.pids[i] = out.state;
  }
  if (res.state.landed) res.command.u.setZero();
  return res;
}

}  // namespace landsim
