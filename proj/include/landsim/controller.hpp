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

#ifndef LANDSIM_CONTROLLER_HPP_
#define LANDSIM_CONTROLLER_HPP_

#include <array>
#include <string>

#include <Eigen/Core>

#include "landsim/tracker.hpp"

namespace landsim {

enum class ControllerKind { kP, kPD, kPID };

const char* ControllerKindName(ControllerKind kind);  // "p", "pd", "pid"
ControllerKind ParseControllerKind(const std::string& name);

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double out_min = -1.0;
  double out_max = 1.0;
  // Time constant of the first-order derivative filter; 0 disables it.
  double derivative_tau = 0.0;
};

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  double derivative = 0.0;
  bool initialized = false;
};

struct PidOutput {
  double output = 0.0;
  PidState state;
};

// Trapezoidal integral, backward-difference derivative, clamped output.
// The integral is held inside [out_min/ki, out_max/ki].
PidOutput PidStep(const PidGains& gains, const PidState& state, double error,
                  double dt);

// Image-plane reference [I_w/2, I_h/2, 0].
struct Setpoint {
  Vec3 sp = Vec3::Zero();
  static Setpoint ForImage(double image_w, double image_h) {
    return {Vec3(image_w / 2.0, image_h / 2.0, 0.0)};
  }
};

struct AltitudeState {
  double z_p = 0.0;  // commanded height, m
};

struct AltitudeLaw {
  double z_f = 0.02;              // descent per qualifying step, m
  double square_tol_px = 5.0;     // |O_w - O_h| below this allows descent
  double min_height = 0.2;        // no further ON/OFF descent at or below
  double land_height = 0.2;       // u_z at or below this may trigger landing
  double land_error_px = 20.0;    // centering needed to land
};

struct ControllerConfig {
  Setpoint setpoint;
  // Gains for the x_a, y_a and yaw-rate channels.
  std::array<PidGains, 3> gains;
  // Maps image errors (e_x, e_y) onto the body-velocity channels before the
  // PIDs. Default: +x image -> +x body, +y image -> -y body.
  Eigen::Matrix2d axis_map = (Eigen::Matrix2d() << 1, 0, 0, -1).finished();
  double yaw_sign = 1.0;
  AltitudeLaw altitude;
};

struct ControlCommand {
  Vec3 u = Vec3::Zero();  // [vx_a m/s, vy_a m/s, yaw rate deg/s]
  double u_z = 0.0;       // commanded height, m
  bool landed = false;
};

struct ControllerState {
  std::array<PidState, 3> pids;
  AltitudeState altitude;
  bool landed = false;
};

struct ControlStepResult {
  ControlCommand command;
  ControllerState state;
  Vec3 error = Vec3::Zero();
};

// e = S_p - (x_c, y_c, theta), with the angle error wrapped to (-45, 45].
Vec3 ComputeError(const Setpoint& sp, const FilterState& x);

// ON/OFF descent law.
double AltitudeStep(const AltitudeState& alt, const FilterState& x,
                    const AltitudeLaw& law = {});

bool LandingCheck(double u_z, const Vec3& e, const AltitudeLaw& law = {});

ControlStepResult ControlStep(const ControllerConfig& cfg,
                              const FilterState& x,
                              const ControllerState& state, double dt);

}  // namespace landsim

#endif  // LANDSIM_CONTROLLER_HPP_
