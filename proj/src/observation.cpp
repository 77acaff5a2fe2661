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

#include "landsim/observation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace landsim {
namespace {

double Cross(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace

std::array<Vec2, 4> SortCorners(const std::array<Vec2, 4>& points) {
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if ((points[i] - points[j]).norm() < 1e-6) {
        throw Error(ErrorKind::kDegenerateQuad, "coincident corners");
      }
    }
  }
  Vec2 mean = Vec2::Zero();
  for (const auto& p : points) mean += p;
  mean /= 4.0;

  std::array<Vec2, 4> sorted = points;
  // With y pointing down, increasing atan2 angle is clockwise on screen.
  std::sort(sorted.begin(), sorted.end(), [&](const Vec2& a, const Vec2& b) {
    const double ta = std::atan2(a.y() - mean.y(), a.x() - mean.x());
    const double tb = std::atan2(b.y() - mean.y(), b.x() - mean.x());
    if (ta != tb) return ta < tb;
    return std::make_pair(a.y(), a.x()) < std::make_pair(b.y(), b.x());
  });
  const auto first = std::min_element(
      sorted.begin(), sorted.end(), [](const Vec2& a, const Vec2& b) {
        return std::make_pair(a.y(), a.x()) < std::make_pair(b.y(), b.x());
      });
  std::rotate(sorted.begin(), first, sorted.end());
  return sorted;
}

CornerQuad MakeQuad(const std::array<Vec2, 5>& projected) {
  return {SortCorners({projected[0], projected[1], projected[2],
                       projected[3]}),
          projected[4]};
}

ObjectDims ComputeObjectDims(const CornerQuad& quad) {
  const auto& c = quad.corners;
  return {0.5 * ((c[1] - c[0]).norm() + (c[2] - c[3]).norm()),
          0.5 * ((c[2] - c[1]).norm() + (c[3] - c[0]).norm())};
}

double ReduceAngle90(double deg) {
  double r = std::fmod(deg, 90.0);
  if (r < 0.0) r += 90.0;
  // fmod of a tiny negative value can round up to exactly 90.
  if (r >= 90.0) r -= 90.0;
  return r;
}

double WrapAngle90(double deg) {
  double r = ReduceAngle90(deg);
  if (r > 45.0) r -= 90.0;
  return r;
}

double ComputeAngle(const CornerQuad& quad) {
  const Vec2 top = quad.corners[1] - quad.corners[0];
  const double deg = std::atan2(top.y(), top.x()) * 180.0 / std::numbers::pi;
  return ReduceAngle90(deg);
}

bool IsConvex(const std::array<Vec2, 4>& c) {
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    const double z = Cross(c[(i + 1) % 4] - c[i], c[(i + 2) % 4] - c[(i + 1) % 4]);
    if (std::abs(z) < 1e-12) return false;
    const int s = z > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    if (s != sign) return false;
  }
  return true;
}

double QuadArea(const std::array<Vec2, 4>& c) {
  double twice = 0.0;
  for (int i = 0; i < 4; ++i) twice += Cross(c[i], c[(i + 1) % 4]);
  return 0.5 * std::abs(twice);
}

Observation BuildObservation(const CornerQuad& quad, double image_w,
                             double image_h, const ValidityGate& gate) {
  const ObjectDims dims = ComputeObjectDims(quad);
  Observation obs;
  obs.z = {quad.centroid.x(), quad.centroid.y(), dims.width, dims.height,
           ComputeAngle(quad)};

  const double mx = gate.bounds_inflation * image_w;
  const double my = gate.bounds_inflation * image_h;
  const bool in_bounds = obs.z.x_c >= -mx && obs.z.x_c <= image_w + mx &&
                         obs.z.y_c >= -my && obs.z.y_c <= image_h + my;
  const bool sized = dims.width > 0.0 && dims.height > 0.0;
  const double aspect = sized ? dims.width / dims.height : 0.0;
  obs.valid = sized && IsConvex(quad.corners) &&
              QuadArea(quad.corners) >= gate.min_area_px2 &&
              aspect >= 1.0 / gate.max_aspect && aspect <= gate.max_aspect &&
              in_bounds && std::isfinite(obs.z.theta_deg);
  return obs;
}

}  // namespace landsim
