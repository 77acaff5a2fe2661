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

#ifndef LANDSIM_HARNESS_HPP_
#define LANDSIM_HARNESS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "landsim/config.hpp"
#include "landsim/controller.hpp"
#include "landsim/observation.hpp"
#include "landsim/simworld.hpp"
#include "landsim/tracker.hpp"

namespace landsim {

struct DetectorOptions {
  double ratio = 0.8;
  double ransac_threshold_px = 3.0;
  int ransac_iters = 500;
  // Fewer RANSAC inliers than this yields no observation.
  int min_inliers = 8;
  SynthesisOptions synthesis;
};

// Frozen gain sets for one controller kind: x_a, y_a, yaw rate.
using GainSet = std::array<PidGains, 3>;

struct TrialConfig {
  ControllerKind controller = ControllerKind::kPD;
  std::map<ControllerKind, GainSet> gains;
  Eigen::Matrix2d axis_map = (Eigen::Matrix2d() << 1, 0, 0, -1).finished();
  double yaw_sign = 1.0;
  AltitudeLaw altitude;

  FilterConfig filter = DefaultFilterConfig();
  DetectorOptions detector;
  ValidityGate gate;

  std::string noise_preset = "sift-like";
  NoiseModel noise = NoisePreset("sift-like");
  WindModel wind;
  VehicleDynamics dynamics;

  VehicleState initial;
  PadPose pad;
  CameraModel camera;
  TemplateSpec templ;

  double dt = 1.0 / 15.0;
  double max_duration = 120.0;
  std::uint64_t seed = 1;

  // Detector sweep and wind sweep settings.
  std::vector<std::string> sweep_presets = {"orb-like", "sift-like", "surf-like"};
  VehicleState hold_pose;
  double wind_direction_deg = 0.0;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};

  // Validates component invariants; throws kConfigError.
  void Validate() const;
  ControllerConfig MakeControllerConfig() const;
};

// Built-in defaults (the values shipped in configs/default.toml).
TrialConfig DefaultTrialConfig();

// Applies every recognised key of `map` on top of DefaultTrialConfig().
// Unknown keys and malformed values throw kConfigError.
TrialConfig TrialConfigFromMap(const ConfigMap& map);
TrialConfig LoadTrialConfig(const std::string& path);

enum class TouchdownReason { kNone, kLandCommand, kGroundContact };
const char* TouchdownReasonName(TouchdownReason r);

struct StepRecord {
  double t = 0.0;
  VehicleState truth;
  bool has_detection = false;  // a homography was found this frame
  Observation raw;
  bool locked = false;         // tracker has been initialised
  StateVec kf = StateVec::Zero();
  double kf_trace = 0.0;
  Vec3 error = Vec3::Zero();
  ControlCommand command;
  double prev_z_p = 0.0;
  std::string event;
};

struct TrialLog {
  ControllerKind controller = ControllerKind::kPD;
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;
  TouchdownReason touchdown = TouchdownReason::kNone;
  double touchdown_time = -1.0;
  bool timed_out = false;
  VehicleState final_state;
  PadPose pad;
};

// Closed loop: camera -> synthetic features -> matching -> RANSAC ->
// observation -> tracker -> controller -> vehicle, at cfg.dt until
// touchdown or cfg.max_duration.
TrialLog RunTrial(const TrialConfig& cfg);

struct ErrorSummary {
  ControllerKind controller = ControllerKind::kPD;
  std::uint64_t seed = 0;
  Vec3 rmse = Vec3::Zero();
  Vec3 avg = Vec3::Zero();
  Vec3 stdev = Vec3::Zero();
  int samples = 0;
  double land_offset_x = 0.0;  // |x - pad_x| at the end of the trial, m
  double land_offset_y = 0.0;
  double land_angle_deg = 0.0;  // |yaw misalignment| on the 90-degree circle
  double touchdown_s = -1.0;
  bool success = false;

  double PlanarOffset() const;
};

// Statistics over the pre-touchdown steps in which the tracker was locked.
// Throws kEmptyLog for a log without steps.
ErrorSummary SummarizeErrors(const TrialLog& log);

struct ExperimentSummary {
  std::vector<ErrorSummary> trials;
  double success_rate = 0.0;
  // Means and population standard deviations across trials.
  double mean_offset_x = 0.0, std_offset_x = 0.0;
  double mean_offset_y = 0.0, std_offset_y = 0.0;
  double mean_planar_offset = 0.0;
  double mean_angle_deg = 0.0, std_angle_deg = 0.0;
  double mean_touchdown_s = 0.0, std_touchdown_s = 0.0;
  Vec3 mean_rmse = Vec3::Zero();
};

ExperimentSummary Aggregate(const std::vector<ErrorSummary>& trials);

struct ExperimentResult {
  std::vector<TrialLog> logs;
  ExperimentSummary summary;
};

// One trial per seed (the first n_trials seeds), run concurrently; results
// are ordered as the seeds.
ExperimentResult RunExperiment(const TrialConfig& base, int n_trials,
                               const std::vector<std::uint64_t>& seeds);

inline constexpr std::array<const char*, 5> kObservedNames = {
    "x_c", "y_c", "width", "height", "theta"};

struct VariableStats {
  double raw_avg = 0.0, raw_std = 0.0;
  double kf_avg = 0.0, kf_std = 0.0;
};

struct DetectorSweepTable {
  std::string preset;
  std::uint64_t seed = 0;
  int frames = 0;
  int valid_frames = 0;
  int kf_frames = 0;
  std::array<VariableStats, 5> stats;
};

// Static hover: raw error is taken over frames with a valid observation,
// filtered error over every frame after the tracker locks. Errors are
// absolute; the angle error is wrapped on the 90-degree circle.
DetectorSweepTable DetectorSweep(const TrialConfig& base,
                                 const NoiseModel& preset,
                                 const std::string& preset_name,
                                 const VehicleState& hold, int n_frames,
                                 std::uint64_t seed);

struct WindSweepRow {
  double bias_mps = 0.0;
  ErrorSummary summary;
};

std::vector<WindSweepRow> WindSweep(const TrialConfig& base,
                                    const std::vector<double>& biases,
                                    const std::vector<std::uint64_t>& seeds);

// Touchdown steps excluded; returns the number of u_z-decreasing steps that
// violate the square gate or the minimum height.
int CountDescentGateViolations(const TrialLog& log, const AltitudeLaw& law);

}  // namespace landsim

#endif  // LANDSIM_HARNESS_HPP_
