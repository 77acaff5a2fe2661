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

#ifndef LANDSIM_SIMWORLD_HPP_
#define LANDSIM_SIMWORLD_HPP_

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "landsim/controller.hpp"
#include "landsim/homography.hpp"

namespace landsim {

// World frame: x, y horizontal, z up. Yaw is counter-clockwise about +z.
// Velocities are expressed in the world frame.
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double z = 3.5;
  double psi_deg = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double psi_rate = 0.0;  // deg/s
  bool landed = false;
};

// Nadir pinhole camera, rigidly attached to the body. Image +u points along
// body -x and image +v along body +y.
struct CameraModel {
  double f = 300.0;
  double cx = 320.0;
  double cy = 160.0;
  double image_w = 640.0;
  double image_h = 320.0;

  bool Contains(const Vec2& p) const {
    return p.x() >= 0.0 && p.x() < image_w && p.y() >= 0.0 && p.y() < image_h;
  }
};

struct PadPose {
  Vec2 center = Vec2::Zero();
  double yaw_deg = 0.0;
  double side_m = 0.5;
};

struct NoiseModel {
  double sigma_px = 0.0;
  double outlier_rate = 0.0;
  double dropout_rate = 0.0;
  double descriptor_sigma = 0.0;
  std::uint64_t seed = 0;
};

// "zero", "sift-like", "orb-like", "surf-like". Throws kConfigError for any
// other name.
NoiseModel NoisePreset(const std::string& name, std::uint64_t seed = 0);

struct WindModel {
  Vec2 bias = Vec2::Zero();  // m/s, world frame
  double gust_sigma = 0.0;   // m/s per axis, redrawn every step
};

Vec2 SampleWind(const WindModel& wind, std::mt19937_64& rng);

struct VehicleDynamics {
  double tau_v = 0.5;
  double tau_z = 0.8;
  double tau_psi = 0.3;
};

// Maps a point of the template image onto the ground plane. The template
// covers the pad; template +u runs along pad -x and +v along pad +y, which
// keeps the template -> image map orientation preserving.
Vec2 TemplateToWorld(const Vec2& uv, const PadPose& pad,
                     const TemplateSpec& templ);

Vec2 WorldToImage(const Vec2& world, const VehicleState& v,
                  const CameraModel& cam);

struct ProjectedPad {
  // Template corners (0,0), (w,0), (w,h), (0,h) and the pad center.
  std::array<Vec2, 5> points;
  // No part of the pad overlaps the image.
  bool out_of_view = false;
};

ProjectedPad CameraProject(const VehicleState& v, const PadPose& pad,
                           const CameraModel& cam,
                           const TemplateSpec& templ = {});

// Exact template -> image homography for the given pose.
Homography GroundTruthHomography(const VehicleState& v, const PadPose& pad,
                                 const CameraModel& cam,
                                 const TemplateSpec& templ);

struct SynthesisOptions {
  int grid = 8;  // grid x grid template features
  int descriptor_dim = 32;
};

struct SyntheticFrame {
  FeatureSet templ;
  FeatureSet scene;
  bool dropped = false;
};

// Template features on a jittered grid with frame-stable descriptors; the
// scene holds their noisy images (only those that land inside the image)
// plus decoys. Deterministic in (nm.seed, frame_index).
SyntheticFrame SynthesizeFrame(const ProjectedPad& truth,
                               const TemplateSpec& templ,
                               const CameraModel& cam, const NoiseModel& nm,
                               std::int64_t frame_index,
                               const SynthesisOptions& options = {});

// First-order lags on horizontal velocity, yaw rate and height; the
// commanded body velocity is rotated into the world and the wind velocity
// is added to the lag target.
VehicleState VehicleStep(const VehicleState& v, const ControlCommand& cmd,
                         const Vec2& wind_velocity,
                         const VehicleDynamics& dyn, double dt);

}  // namespace landsim

#endif  // LANDSIM_SIMWORLD_HPP_
