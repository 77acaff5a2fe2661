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

#include "landsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

namespace landsim {
namespace {

constexpr std::uint64_t kRansacStream = 0x5a5c;
constexpr std::uint64_t kWindStream = 0x3d1f;

constexpr std::array<const char*, 3> kChannelNames = {"x", "y", "yaw"};

GainSet DefaultGains(ControllerKind kind) {
  // Translation channels: m/s per px; yaw channel: deg/s per deg.
  const PidGains yaw_base{1.0, 0.0, 0.0, -30.0, 30.0, 0.0};
  switch (kind) {
    case ControllerKind::kP:
      return {PidGains{0.001, 0.0, 0.0, -1.0, 1.0, 0.0},
              PidGains{0.001, 0.0, 0.0, -1.0, 1.0, 0.0}, yaw_base};
    case ControllerKind::kPD:
      return {PidGains{0.03, 0.0, 0.006, -1.0, 1.0, 0.0},
              PidGains{0.03, 0.0, 0.006, -1.0, 1.0, 0.0},
              PidGains{1.5, 0.0, 0.1, -30.0, 30.0, 0.0}};
    case ControllerKind::kPID:
      return {PidGains{0.025, 0.003, 0.006, -1.0, 1.0, 0.0},
              PidGains{0.025, 0.003, 0.006, -1.0, 1.0, 0.0},
              PidGains{1.5, 0.05, 0.1, -30.0, 30.0, 0.0}};
  }
  return {};
}

StateCov DiagFromList(const std::vector<double>& v, const std::string& key) {
  if (v.size() != kStateDim) {
    throw Error(ErrorKind::kConfigError, key + " needs 10 entries");
  }
  StateCov m = StateCov::Zero();
  for (int i = 0; i < kStateDim; ++i) m(i, i) = v[i];
  return m;
}

std::vector<double> DiagToList(const auto& m) {
  std::vector<double> out;
  for (int i = 0; i < m.rows(); ++i) out.push_back(m(i, i));
  return out;
}

std::vector<std::string> SplitNames(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

double SinDeg(double d) { return std::sin(d * std::numbers::pi / 180.0); }
double CosDeg(double d) { return std::cos(d * std::numbers::pi / 180.0); }

// Full detection chain for one frame. Returns nothing when the frame yields
// no homography.
std::optional<Observation> Detect(const TrialConfig& cfg,
                                  const VehicleState& vehicle,
                                  const NoiseModel& noise,
                                  std::int64_t frame_index) {
  if (!(vehicle.z > 0.05)) return std::nullopt;
  const ProjectedPad truth =
      CameraProject(vehicle, cfg.pad, cfg.camera, cfg.templ);
  if (truth.out_of_view) return std::nullopt;
  try {
    const SyntheticFrame frame =
        SynthesizeFrame(truth, cfg.templ, cfg.camera, noise, frame_index,
                        cfg.detector.synthesis);
    if (frame.scene.size() == 0) return std::nullopt;
    const MatchSet matches =
        MatchDescriptors(frame.templ, frame.scene, cfg.detector.ratio);
    if (matches.size() < 4) return std::nullopt;
    const auto pairs = ResolveMatches(matches, frame.templ, frame.scene);
    const RansacResult fit = RansacHomography(
        pairs, {cfg.detector.ransac_threshold_px, cfg.detector.ransac_iters,
                MixSeed(MixSeed(noise.seed, kRansacStream),
                        static_cast<std::uint64_t>(frame_index))});
    if (fit.num_inliers < cfg.detector.min_inliers) return std::nullopt;
    const CornerQuad quad = MakeQuad(ProjectTemplate(fit.h, cfg.templ));
    return BuildObservation(quad, cfg.camera.image_w, cfg.camera.image_h,
                            cfg.gate);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::kNoConsensus:
      case ErrorKind::kDegenerateConfiguration:
      case ErrorKind::kInsufficientMatches:
      case ErrorKind::kProjectiveDegeneracy:
      case ErrorKind::kDegenerateQuad:
        return std::nullopt;
      default:
        throw;
    }
  }
}

Observation TruthObservation(const TrialConfig& cfg, const VehicleState& v) {
  const ProjectedPad truth = CameraProject(v, cfg.pad, cfg.camera, cfg.templ);
  return BuildObservation(MakeQuad(truth.points), cfg.camera.image_w,
                          cfg.camera.image_h, cfg.gate);
}

ObsVec ObservationError(const ObsVec& estimate, const ObsVec& truth) {
  ObsVec d = (estimate - truth).cwiseAbs();
  d[4] = std::abs(WrapAngle90(estimate[4] - truth[4]));
  return d;
}

void MeanStd(const std::vector<double>& v, double* mean, double* stdev) {
  if (v.empty()) {
    *mean = std::nan("");
    *stdev = std::nan("");
    return;
  }
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - m) * (x - m);
  var /= static_cast<double>(v.size());
  *mean = m;
  *stdev = std::sqrt(var);
}

}  // namespace

void TrialConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kConfigError, what);
  };
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(max_duration > 0.0)) fail("max_duration must be positive");
  if (!(camera.f > 0.0)) fail("camera focal length must be positive");
  if (!(camera.cx >= 0 && camera.cx <= camera.image_w && camera.cy >= 0 &&
        camera.cy <= camera.image_h)) {
    fail("principal point must lie inside the image");
  }
  if (!(templ.width_px > 0 && templ.height_px > 0)) fail("template size must be positive");
  if (!(pad.side_m > 0)) fail("pad side must be positive");
  for (double r : {noise.outlier_rate, noise.dropout_rate}) {
    if (!(r >= 0.0 && r <= 1.0)) fail("noise rates must lie in [0, 1]");
  }
  if (noise.sigma_px < 0 || noise.descriptor_sigma < 0) fail("noise sigmas must be >= 0");
  if (wind.gust_sigma < 0) fail("gust sigma must be >= 0");
  if (!(dynamics.tau_v > 0 && dynamics.tau_z > 0 && dynamics.tau_psi > 0)) {
    fail("time constants must be positive");
  }
  if (!(initial.z > 0.05)) fail("initial height must exceed 0.05 m");
  if (!(altitude.z_f > 0)) fail("z_f must be positive");
  if (!(detector.ratio > 0 && detector.ratio <= 1)) fail("ratio must lie in (0, 1]");
  if (!(detector.ransac_threshold_px > 0) || detector.ransac_iters < 1) {
    fail("RANSAC threshold must be positive and iterations >= 1");
  }
  if (detector.min_inliers < 4) fail("min_inliers must be at least 4");
  if (detector.synthesis.grid < 2 || detector.synthesis.descriptor_dim < 2) {
    fail("feature grid and descriptor dimension must be at least 2");
  }
  for (const auto& [kind, set] : gains) {
    for (const auto& g : set) {
      if (!(g.out_min < g.out_max)) fail("gain saturation needs out_min < out_max");
      if (!std::isfinite(g.kp) || !std::isfinite(g.ki) || !std::isfinite(g.kd)) {
        fail("gains must be finite");
      }
    }
  }
  if (!gains.count(controller)) fail("no gains for the selected controller");
  auto psd = [](const auto& m) {
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) return false;
    Eigen::SelfAdjointEigenSolver<std::decay_t<decltype(m)>> eig(m);
    return eig.eigenvalues().minCoeff() >= 0.0;
  };
  if (!psd(filter.q) || !psd(filter.p0) || !psd(filter.r)) {
    fail("filter covariances must be symmetric PSD");
  }
  Eigen::SelfAdjointEigenSolver<ObsCov> r_eig(filter.r);
  if (!(r_eig.eigenvalues().minCoeff() > 0.0)) fail("R must be positive definite");
}

ControllerConfig TrialConfig::MakeControllerConfig() const {
  ControllerConfig c;
  c.setpoint = Setpoint::ForImage(camera.image_w, camera.image_h);
  c.gains = gains.at(controller);
  c.axis_map = axis_map;
  c.yaw_sign = yaw_sign;
  c.altitude = altitude;
  return c;
}

TrialConfig DefaultTrialConfig() {
  TrialConfig cfg;
  for (auto kind : {ControllerKind::kP, ControllerKind::kPD, ControllerKind::kPID}) {
    cfg.gains[kind] = DefaultGains(kind);
  }
  cfg.initial = {0.6, 0.8, 3.5, 20.0};
  cfg.hold_pose = {0.0, 0.0, 3.5, 0.0};
  return cfg;
}

TrialConfig TrialConfigFromMap(const ConfigMap& m) {
  TrialConfig c = DefaultTrialConfig();

  c.controller = ParseControllerKind(
      m.GetString("trial.controller", ControllerKindName(c.controller)));
  c.seed = static_cast<std::uint64_t>(m.GetInt("trial.seed", 1));
  c.dt = 1.0 / m.GetDouble("trial.rate_hz", 15.0);
  c.max_duration = m.GetDouble("trial.max_duration_s", c.max_duration);

  c.initial.x = m.GetDouble("initial.x", c.initial.x);
  c.initial.y = m.GetDouble("initial.y", c.initial.y);
  c.initial.z = m.GetDouble("initial.z", c.initial.z);
  c.initial.psi_deg = m.GetDouble("initial.psi_deg", c.initial.psi_deg);

  c.pad.center.x() = m.GetDouble("pad.x", c.pad.center.x());
  c.pad.center.y() = m.GetDouble("pad.y", c.pad.center.y());
  c.pad.yaw_deg = m.GetDouble("pad.yaw_deg", c.pad.yaw_deg);
  c.pad.side_m = m.GetDouble("pad.side_m", c.pad.side_m);
  c.templ.physical_side_m = c.pad.side_m;

  c.camera.f = m.GetDouble("camera.f_px", c.camera.f);
  c.camera.image_w = m.GetDouble("camera.width", c.camera.image_w);
  c.camera.image_h = m.GetDouble("camera.height", c.camera.image_h);
  c.camera.cx = m.GetDouble("camera.cx", c.camera.image_w / 2.0);
  c.camera.cy = m.GetDouble("camera.cy", c.camera.image_h / 2.0);

  c.templ.width_px = m.GetDouble("template.width_px", c.templ.width_px);
  c.templ.height_px = m.GetDouble("template.height_px", c.templ.height_px);

  c.detector.ratio = m.GetDouble("detector.ratio", c.detector.ratio);
  c.detector.ransac_threshold_px =
      m.GetDouble("detector.ransac_threshold_px", c.detector.ransac_threshold_px);
  c.detector.ransac_iters =
      static_cast<int>(m.GetInt("detector.ransac_iters", c.detector.ransac_iters));
  c.detector.min_inliers =
      static_cast<int>(m.GetInt("detector.min_inliers", c.detector.min_inliers));
  c.detector.synthesis.grid =
      static_cast<int>(m.GetInt("detector.grid", c.detector.synthesis.grid));
  c.detector.synthesis.descriptor_dim = static_cast<int>(
      m.GetInt("detector.descriptor_dim", c.detector.synthesis.descriptor_dim));

  c.gate.min_area_px2 = m.GetDouble("gate.min_area_px2", c.gate.min_area_px2);
  c.gate.max_aspect = m.GetDouble("gate.max_aspect", c.gate.max_aspect);
  c.gate.bounds_inflation = m.GetDouble("gate.bounds_inflation", c.gate.bounds_inflation);

  c.noise_preset = m.GetString("noise.preset", c.noise_preset);
  c.noise = NoisePreset(c.noise_preset);
  c.noise.sigma_px = m.GetDouble("noise.sigma_px", c.noise.sigma_px);
  c.noise.outlier_rate = m.GetDouble("noise.outlier_rate", c.noise.outlier_rate);
  c.noise.dropout_rate = m.GetDouble("noise.dropout_rate", c.noise.dropout_rate);
  c.noise.descriptor_sigma = m.GetDouble("noise.descriptor_sigma", c.noise.descriptor_sigma);

  c.wind.bias.x() = m.GetDouble("wind.bias_x", c.wind.bias.x());
  c.wind.bias.y() = m.GetDouble("wind.bias_y", c.wind.bias.y());
  c.wind.gust_sigma = m.GetDouble("wind.gust_sigma", c.wind.gust_sigma);
  c.wind_direction_deg = m.GetDouble("wind.direction_deg", c.wind_direction_deg);

  c.dynamics.tau_v = m.GetDouble("dynamics.tau_v", c.dynamics.tau_v);
  c.dynamics.tau_z = m.GetDouble("dynamics.tau_z", c.dynamics.tau_z);
  c.dynamics.tau_psi = m.GetDouble("dynamics.tau_psi", c.dynamics.tau_psi);

  c.filter.q = DiagFromList(m.GetDoubleList("filter.q_diag", DiagToList(c.filter.q)),
                            "filter.q_diag");
  c.filter.p0 = DiagFromList(m.GetDoubleList("filter.p0_diag", DiagToList(c.filter.p0)),
                             "filter.p0_diag");
  const auto r = m.GetDoubleList("filter.r_diag", DiagToList(c.filter.r));
  if (r.size() != kObsDim) throw Error(ErrorKind::kConfigError, "filter.r_diag needs 5 entries");
  c.filter.r = ObsCov::Zero();
  for (int i = 0; i < kObsDim; ++i) c.filter.r(i, i) = r[i];
  c.filter.dt_default = c.dt;

  c.altitude.z_f = m.GetDouble("altitude.z_f", c.altitude.z_f);
  c.altitude.square_tol_px = m.GetDouble("altitude.square_tol_px", c.altitude.square_tol_px);
  c.altitude.min_height = m.GetDouble("altitude.min_height", c.altitude.min_height);
  c.altitude.land_height = m.GetDouble("altitude.land_height", c.altitude.land_height);
  c.altitude.land_error_px = m.GetDouble("altitude.land_error_px", c.altitude.land_error_px);

  const auto axis = m.GetDoubleList(
      "axis.map", {c.axis_map(0, 0), c.axis_map(0, 1), c.axis_map(1, 0), c.axis_map(1, 1)});
  if (axis.size() != 4) throw Error(ErrorKind::kConfigError, "axis.map needs 4 entries");
  c.axis_map << axis[0], axis[1], axis[2], axis[3];
  c.yaw_sign = m.GetDouble("axis.yaw_sign", c.yaw_sign);

  for (auto kind : {ControllerKind::kP, ControllerKind::kPD, ControllerKind::kPID}) {
    for (int ch = 0; ch < 3; ++ch) {
      const std::string base = std::string("gains.") + ControllerKindName(kind) +
                               "." + kChannelNames[ch] + ".";
      PidGains& g = c.gains[kind][ch];
      g.kp = m.GetDouble(base + "kp", g.kp);
      g.ki = m.GetDouble(base + "ki", g.ki);
      g.kd = m.GetDouble(base + "kd", g.kd);
      g.out_min = m.GetDouble(base + "out_min", g.out_min);
      g.out_max = m.GetDouble(base + "out_max", g.out_max);
      g.derivative_tau = m.GetDouble(base + "derivative_tau", g.derivative_tau);
    }
  }

  if (m.Has("sweep.presets")) c.sweep_presets = SplitNames(m.GetString("sweep.presets", ""));
  for (const auto& p : c.sweep_presets) (void)NoisePreset(p);
  c.hold_pose.x = m.GetDouble("sweep.hold_x", c.hold_pose.x);
  c.hold_pose.y = m.GetDouble("sweep.hold_y", c.hold_pose.y);
  c.hold_pose.z = m.GetDouble("sweep.hold_z", c.hold_pose.z);
  c.hold_pose.psi_deg = m.GetDouble("sweep.hold_psi_deg", c.hold_pose.psi_deg);
  if (m.Has("experiment.seeds")) c.seeds = ParseSeedList(m.GetString("experiment.seeds", ""));

  m.CheckAllConsumed();
  c.Validate();
  return c;
}

TrialConfig LoadTrialConfig(const std::string& path) {
  return TrialConfigFromMap(ConfigMap::Load(path));
}

const char* TouchdownReasonName(TouchdownReason r) {
  switch (r) {
    case TouchdownReason::kNone: return "none";
    case TouchdownReason::kLandCommand: return "land_command";
    case TouchdownReason::kGroundContact: return "ground_contact";
  }
  return "?";
}

TrialLog RunTrial(const TrialConfig& cfg) {
  cfg.Validate();
  TrialLog log;
  log.controller = cfg.controller;
  log.seed = cfg.seed;
  log.pad = cfg.pad;

  NoiseModel noise = cfg.noise;
  noise.seed = cfg.seed;
  std::mt19937_64 wind_rng(MixSeed(cfg.seed, kWindStream));
  const ControllerConfig ctl = cfg.MakeControllerConfig();

  VehicleState vehicle = cfg.initial;
  vehicle.landed = false;
  ControllerState ctl_state;
  ctl_state.altitude.z_p = cfg.initial.z;

  // Until the first valid detection the tracker coasts on an uninformative
  // prior centred on the setpoint and the vehicle holds position.
  FilterState filter;
  filter.x.head<2>() = ctl.setpoint.sp.head<2>();
  filter.p = cfg.filter.p0;
  bool locked = false;
  bool descending = false;

  const auto max_steps = static_cast<std::int64_t>(std::ceil(cfg.max_duration / cfg.dt - 1e-9));
  for (std::int64_t k = 0; k < max_steps; ++k) {
    StepRecord rec;
    rec.t = static_cast<double>(k) * cfg.dt;
    rec.truth = vehicle;

    const std::optional<Observation> det = Detect(cfg, vehicle, noise, k);
    rec.has_detection = det.has_value();
    if (det) rec.raw = *det;

    if (!locked) {
      if (det && det->valid) {
        filter = InitializeFilter(det->z, cfg.filter);
        locked = true;
      } else {
        filter = Predict(filter, cfg.dt, cfg.filter);
      }
    } else {
      filter = TrackStep(filter, det, cfg.dt, cfg.filter);
    }
    rec.locked = locked;
    rec.kf = filter.x;
    rec.kf_trace = filter.p.trace();
    rec.prev_z_p = ctl_state.altitude.z_p;

    ControlCommand cmd;
    if (locked) {
      const ControlStepResult step = ControlStep(ctl, filter, ctl_state, cfg.dt);
      cmd = step.command;
      ctl_state = step.state;
      rec.error = step.error;
    } else {
      cmd.u_z = ctl_state.altitude.z_p;
      rec.error = ComputeError(ctl.setpoint, filter);
    }
    rec.command = cmd;

    std::vector<std::string> events;
    if (!descending && cmd.u_z < rec.prev_z_p && !cmd.landed) {
      descending = true;
      events.emplace_back("descent_start");
    }
    if (cmd.landed) {
      log.touchdown = TouchdownReason::kLandCommand;
      events.emplace_back("touchdown:land_command");
    }
    const Vec2 wind = SampleWind(cfg.wind, wind_rng);
    if (cmd.landed) {
      vehicle.landed = true;
    } else {
      vehicle = VehicleStep(vehicle, cmd, wind, cfg.dynamics, cfg.dt);
    }
    if (log.touchdown == TouchdownReason::kNone && vehicle.z < 0.05) {
      log.touchdown = TouchdownReason::kGroundContact;
      events.emplace_back("touchdown:ground_contact");
    }
    for (std::size_t i = 0; i < events.size(); ++i) {
      rec.event += (i ? "|" : "") + events[i];
    }
    log.steps.push_back(std::move(rec));

    if (log.touchdown != TouchdownReason::kNone) {
      log.touchdown_time = log.steps.back().t;
      break;
    }
  }
  log.timed_out = log.touchdown == TouchdownReason::kNone;
  log.final_state = vehicle;
  return log;
}

double ErrorSummary::PlanarOffset() const {
  return std::hypot(land_offset_x, land_offset_y);
}

ErrorSummary SummarizeErrors(const TrialLog& log) {
  if (log.steps.empty()) throw Error(ErrorKind::kEmptyLog, "trial log has no steps");
  ErrorSummary s;
  s.controller = log.controller;
  s.seed = log.seed;

  std::array<std::vector<double>, 3> samples;
  for (const auto& r : log.steps) {
    if (!r.locked || r.event.find("touchdown") != std::string::npos) continue;
    for (int i = 0; i < 3; ++i) samples[i].push_back(r.error[i]);
  }
  s.samples = static_cast<int>(samples[0].size());
  for (int i = 0; i < 3; ++i) {
    MeanStd(samples[i], &s.avg[i], &s.stdev[i]);
    if (samples[i].empty()) {
      s.rmse[i] = std::nan("");
      continue;
    }
    double sq = 0.0;
    for (double e : samples[i]) sq += e * e;
    s.rmse[i] = std::sqrt(sq / static_cast<double>(samples[i].size()));
  }
  s.land_offset_x = std::abs(log.final_state.x - log.pad.center.x());
  s.land_offset_y = std::abs(log.final_state.y - log.pad.center.y());
  s.land_angle_deg = std::abs(WrapAngle90(log.final_state.psi_deg - log.pad.yaw_deg));
  s.success = !log.timed_out;
  s.touchdown_s = s.success ? log.touchdown_time : std::nan("");
  return s;
}

ExperimentSummary Aggregate(const std::vector<ErrorSummary>& trials) {
  ExperimentSummary out;
  out.trials = trials;
  if (trials.empty()) return out;
  std::vector<double> ox, oy, planar, ang, td;
  std::array<std::vector<double>, 3> rmse;
  int ok = 0;
  for (const auto& t : trials) {
    if (t.success) {
      ++ok;
      td.push_back(t.touchdown_s);
    }
    ox.push_back(t.land_offset_x);
    oy.push_back(t.land_offset_y);
    planar.push_back(t.PlanarOffset());
    ang.push_back(t.land_angle_deg);
    for (int i = 0; i < 3; ++i) rmse[i].push_back(t.rmse[i]);
  }
  out.success_rate = static_cast<double>(ok) / static_cast<double>(trials.size());
  double unused;
  MeanStd(ox, &out.mean_offset_x, &out.std_offset_x);
  MeanStd(oy, &out.mean_offset_y, &out.std_offset_y);
  MeanStd(planar, &out.mean_planar_offset, &unused);
  MeanStd(ang, &out.mean_angle_deg, &out.std_angle_deg);
  MeanStd(td, &out.mean_touchdown_s, &out.std_touchdown_s);
  for (int i = 0; i < 3; ++i) MeanStd(rmse[i], &out.mean_rmse[i], &unused);
  return out;
}

ExperimentResult RunExperiment(const TrialConfig& base, int n_trials,
                               const std::vector<std::uint64_t>& seeds) {
  if (n_trials < 1) throw Error(ErrorKind::kInvalidArgument, "n_trials must be >= 1");
  if (seeds.size() < static_cast<std::size_t>(n_trials)) {
    throw Error(ErrorKind::kConfigError, "need at least one seed per trial");
  }
  for (int i = 0; i < n_trials; ++i) {
    for (int j = i + 1; j < n_trials; ++j) {
      if (seeds[i] == seeds[j]) {
        throw Error(ErrorKind::kConfigError, "trial seeds must be distinct");
      }
    }
  }
  base.Validate();

  ExperimentResult res;
  res.logs.resize(n_trials);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (int i = next++; i < n_trials; i = next++) {
      try {
        TrialConfig cfg = base;
        cfg.seed = seeds[i];
        res.logs[i] = RunTrial(cfg);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int n_workers = std::min<int>(n_trials, static_cast<int>(hw));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ErrorSummary> summaries;
  for (const auto& log : res.logs) summaries.push_back(SummarizeErrors(log));
  res.summary = Aggregate(summaries);
  return res;
}

DetectorSweepTable DetectorSweep(const TrialConfig& base,
                                 const NoiseModel& preset,
                                 const std::string& preset_name,
                                 const VehicleState& hold, int n_frames,
                                 std::uint64_t seed) {
  if (n_frames < 100) {
    throw Error(ErrorKind::kInvalidArgument, "detector sweep needs at least 100 frames");
  }
  DetectorSweepTable table;
  table.preset = preset_name;
  table.seed = seed;
  table.frames = n_frames;

  NoiseModel noise = preset;
  noise.seed = seed;
  const ObsVec truth = TruthObservation(base, hold).z.AsVector();

  std::array<std::vector<double>, 5> raw_err, kf_err;
  FilterState filter;
  bool locked = false;
  for (int k = 0; k < n_frames; ++k) {
    const auto det = Detect(base, hold, noise, k);
    if (det && det->valid) {
      const ObsVec e = ObservationError(det->z.AsVector(), truth);
      for (int i = 0; i < 5; ++i) raw_err[i].push_back(e[i]);
    }
    if (!locked) {
      if (!(det && det->valid)) continue;
      filter = InitializeFilter(det->z, base.filter);
      locked = true;
    } else {
      filter = TrackStep(filter, det, base.dt, base.filter);
    }
    const ObsVec e = ObservationError(filter.x.head<5>(), truth);
    for (int i = 0; i < 5; ++i) kf_err[i].push_back(e[i]);
  }
  table.valid_frames = static_cast<int>(raw_err[0].size());
  table.kf_frames = static_cast<int>(kf_err[0].size());
  for (int i = 0; i < 5; ++i) {
    MeanStd(raw_err[i], &table.stats[i].raw_avg, &table.stats[i].raw_std);
    MeanStd(kf_err[i], &table.stats[i].kf_avg, &table.stats[i].kf_std);
  }
  return table;
}

std::vector<WindSweepRow> WindSweep(const TrialConfig& base,
                                    const std::vector<double>& biases,
                                    const std::vector<std::uint64_t>& seeds) {
  std::vector<WindSweepRow> rows;
  for (double b : biases) {
    TrialConfig cfg = base;
    cfg.wind.bias = b * Vec2(CosDeg(base.wind_direction_deg), SinDeg(base.wind_direction_deg));
    const ExperimentResult res =
        RunExperiment(cfg, static_cast<int>(seeds.size()), seeds);
    for (const auto& s : res.summary.trials) rows.push_back({b, s});
  }
  return rows;
}

int CountDescentGateViolations(const TrialLog& log, const AltitudeLaw& law) {
  int violations = 0;
  for (const auto& r : log.steps) {
    if (r.event.find("touchdown") != std::string::npos) continue;
    if (!(r.command.u_z < r.prev_z_p)) continue;
    const bool square = std::abs(r.kf[2] - r.kf[3]) < law.square_tol_px;
    if (!square || !(r.prev_z_p > law.min_height)) ++violations;
  }
  return violations;
}

}  // namespace landsim
