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

#include "landsim/simworld.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace landsim {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Stream ids for MixSeed.
constexpr std::uint64_t kTemplateStream = 0x7e3a;
constexpr std::uint64_t kFrameStream = 0xf4a3;

bool SeparatedAlongEdges(std::span<const Vec2> a, std::span<const Vec2> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec2 e = a[(i + 1) % a.size()] - a[i];
    const Vec2 n(-e.y(), e.x());
    double a_lo = INFINITY, a_hi = -INFINITY, b_lo = INFINITY, b_hi = -INFINITY;
    for (const auto& p : a) {
      a_lo = std::min(a_lo, n.dot(p));
      a_hi = std::max(a_hi, n.dot(p));
    }
    for (const auto& p : b) {
      b_lo = std::min(b_lo, n.dot(p));
      b_hi = std::max(b_hi, n.dot(p));
    }
    if (a_hi < b_lo || b_hi < a_lo) return true;
  }
  return false;
}

// Separating-axis test for two convex polygons.
bool ConvexOverlap(std::span<const Vec2> a, std::span<const Vec2> b) {
  return !SeparatedAlongEdges(a, b) && !SeparatedAlongEdges(b, a);
}

}  // namespace

NoiseModel NoisePreset(const std::string& name, std::uint64_t seed) {
  if (name == "zero") return {0.0, 0.0, 0.0, 0.0, seed};
  if (name == "sift-like") return {1.0, 0.2, 0.05, 0.3, seed};
  if (name == "orb-like") return {1.5, 0.5, 0.10, 0.5, seed};
  if (name == "surf-like") return {3.0, 0.8, 0.20, 0.7, seed};
  throw Error(ErrorKind::kConfigError, "unknown noise preset '" + name + "'");
}

Vec2 SampleWind(const WindModel& wind, std::mt19937_64& rng) {
  if (wind.gust_sigma <= 0.0) return wind.bias;
  std::normal_distribution<double> gust(0.0, wind.gust_sigma);
  const double gx = gust(rng);
  const double gy = gust(rng);
  return wind.bias + Vec2(gx, gy);
}

Vec2 TemplateToWorld(const Vec2& uv, const PadPose& pad,
                     const TemplateSpec& templ) {
  const double s = pad.side_m;
  const Vec2 local(-(uv.x() / templ.width_px - 0.5) * s,
                   (uv.y() / templ.height_px - 0.5) * s);
  const double c = std::cos(pad.yaw_deg * kDegToRad);
  const double sn = std::sin(pad.yaw_deg * kDegToRad);
  return pad.center + Vec2(c * local.x() - sn * local.y(),
                           sn * local.x() + c * local.y());
}

Vec2 WorldToImage(const Vec2& world, const VehicleState& v,
                  const CameraModel& cam) {
  const double c = std::cos(v.psi_deg * kDegToRad);
  const double s = std::sin(v.psi_deg * kDegToRad);
  const Vec2 d = world - Vec2(v.x, v.y);
  const double bx = c * d.x() + s * d.y();
  const double by = -s * d.x() + c * d.y();
  return {cam.cx - cam.f * bx / v.z, cam.cy + cam.f * by / v.z};
}

ProjectedPad CameraProject(const VehicleState& v, const PadPose& pad,
                           const CameraModel& cam, const TemplateSpec& templ) {
  if (!(v.z > 0.05)) {
    throw Error(ErrorKind::kInvalidArgument,
                "camera projection needs height above 0.05 m");
  }
  const double w = templ.width_px, h = templ.height_px;
  const std::array<Vec2, 5> uv = {Vec2(0, 0), Vec2(w, 0), Vec2(w, h),
                                  Vec2(0, h), Vec2(w / 2, h / 2)};
  ProjectedPad out;
  for (int i = 0; i < 5; ++i) {
    out.points[i] = WorldToImage(TemplateToWorld(uv[i], pad, templ), v, cam);
  }
  const std::array<Vec2, 4> image = {Vec2(0, 0), Vec2(cam.image_w, 0),
                                     Vec2(cam.image_w, cam.image_h),
                                     Vec2(0, cam.image_h)};
  const std::array<Vec2, 4> quad = {out.points[0], out.points[1],
                                    out.points[2], out.points[3]};
  out.out_of_view = !ConvexOverlap(quad, image);
  return out;
}

Homography GroundTruthHomography(const VehicleState& v, const PadPose& pad,
                                 const CameraModel& cam,
                                 const TemplateSpec& templ) {
  const double s = pad.side_m;
  Mat3 to_local;
  to_local << -s / templ.width_px, 0, s / 2,
              0, s / templ.height_px, -s / 2,
              0, 0, 1;
  const double ca = std::cos(pad.yaw_deg * kDegToRad);
  const double sa = std::sin(pad.yaw_deg * kDegToRad);
  Mat3 to_world;
  to_world << ca, -sa, pad.center.x(),
              sa, ca, pad.center.y(),
              0, 0, 1;
  const double cp = std::cos(v.psi_deg * kDegToRad);
  const double sp = std::sin(v.psi_deg * kDegToRad);
  Mat3 to_body;
  to_body << cp, sp, -(cp * v.x + sp * v.y),
             -sp, cp, -(-sp * v.x + cp * v.y),
             0, 0, 1;
  Mat3 to_image;
  to_image << -cam.f / v.z, 0, cam.cx,
              0, cam.f / v.z, cam.cy,
              0, 0, 1;
  return Homography::FromMatrix(to_image * to_body * to_world * to_local);
}

SyntheticFrame SynthesizeFrame(const ProjectedPad& truth,
                               const TemplateSpec& templ,
                               const CameraModel& cam, const NoiseModel& nm,
                               std::int64_t frame_index,
                               const SynthesisOptions& options) {
  const int g = options.grid;
  const int k = options.descriptor_dim;
  const int n = g * g;
  SyntheticFrame frame;

  // Template side: depends on the seed only.
  std::mt19937_64 trng(MixSeed(nm.seed, kTemplateStream));
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  std::normal_distribution<double> unit(0.0, 1.0);
  frame.templ.points.reserve(n);
  frame.templ.descriptors.resize(n, k);
  for (int j = 0; j < g; ++j) {
    for (int i = 0; i < g; ++i) {
      const double u = (i + 0.5 + jitter(trng)) / g * templ.width_px;
      const double v = (j + 0.5 + jitter(trng)) / g * templ.height_px;
      frame.templ.points.emplace_back(u, v);
    }
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < k; ++c) frame.templ.descriptors(r, c) = unit(trng);
  }

  const Homography h = EstimateHomographyDlt(std::array<PointPair, 5>{
      PointPair{{0, 0}, truth.points[0]},
      PointPair{{templ.width_px, 0}, truth.points[1]},
      PointPair{{templ.width_px, templ.height_px}, truth.points[2]},
      PointPair{{0, templ.height_px}, truth.points[3]},
      PointPair{{templ.width_px / 2, templ.height_px / 2}, truth.points[4]}});

  std::mt19937_64 rng(
      MixSeed(MixSeed(nm.seed, kFrameStream), static_cast<std::uint64_t>(frame_index)));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> ux(0.0, cam.image_w);
  std::uniform_real_distribution<double> uy(0.0, cam.image_h);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::normal_distribution<double> px_noise(0.0, 1.0);

  std::vector<Vec2> points;
  std::vector<Eigen::VectorXd> descs;
  frame.dropped = u01(rng) < nm.dropout_rate;
  if (frame.dropped) {
    for (int i = 0; i < n; ++i) {
      points.emplace_back(ux(rng), uy(rng));
      Eigen::VectorXd d(k);
      for (int c = 0; c < k; ++c) d[c] = unit(rng);
      descs.push_back(std::move(d));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      Vec2 p = h.Map(frame.templ.points[i]);
      const double nx = px_noise(rng), ny = px_noise(rng);
      p += nm.sigma_px * Vec2(nx, ny);
      Eigen::VectorXd d = frame.templ.descriptors.row(i).transpose();
      for (int c = 0; c < k; ++c) d[c] += nm.descriptor_sigma * unit(rng);
      if (!cam.Contains(p)) continue;
      points.push_back(p);
      descs.push_back(std::move(d));
    }
    // Decoys at random positions that imitate a random template descriptor.
    const int decoys = static_cast<int>(std::ceil(nm.outlier_rate * n - 1e-12));
    for (int i = 0; i < decoys; ++i) {
      points.emplace_back(ux(rng), uy(rng));
      Eigen::VectorXd d = frame.templ.descriptors.row(pick(rng)).transpose();
      for (int c = 0; c < k; ++c) d[c] += nm.descriptor_sigma * unit(rng);
      descs.push_back(std::move(d));
    }
  }

  frame.scene.points = std::move(points);
  frame.scene.descriptors.resize(static_cast<Eigen::Index>(descs.size()), k);
  for (std::size_t i = 0; i < descs.size(); ++i) {
    frame.scene.descriptors.row(static_cast<Eigen::Index>(i)) = descs[i].transpose();
  }
  return frame;
}

VehicleState VehicleStep(const VehicleState& v, const ControlCommand& cmd,
                         const Vec2& wind_velocity,
                         const VehicleDynamics& dyn, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::kNonPositiveDt, "dt must be positive");
  if (v.landed) return v;

  VehicleState next = v;
  const double c = std::cos(v.psi_deg * kDegToRad);
  const double s = std::sin(v.psi_deg * kDegToRad);
  const Vec2 target = Vec2(c * cmd.u[0] - s * cmd.u[1],
                           s * cmd.u[0] + c * cmd.u[1]) +
                      wind_velocity;
  next.vx += (target.x() - v.vx) * dt / dyn.tau_v;
  next.vy += (target.y() - v.vy) * dt / dyn.tau_v;
  next.psi_rate += (cmd.u[2] - v.psi_rate) * dt / dyn.tau_psi;

  next.x += next.vx * dt;
  next.y += next.vy * dt;
  next.psi_deg += next.psi_rate * dt;
  next.z = std::max(0.0, v.z + (cmd.u_z - v.z) * dt / dyn.tau_z);
  next.landed = cmd.landed;
  return next;
}

}  // namespace landsim
