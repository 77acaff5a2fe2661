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

#ifndef LANDSIM_OBSERVATION_HPP_
#define LANDSIM_OBSERVATION_HPP_

#include <array>

#include <Eigen/Core>

#include "landsim/common.hpp"

namespace landsim {

using ObsVec = Eigen::Matrix<double, 5, 1>;

// Corners in canonical order: clockwise on screen (image y points down),
// starting from the corner with the smallest (y, x).
struct CornerQuad {
  std::array<Vec2, 4> corners;
  Vec2 centroid;
};

// Measurement of the landing pad in one frame: centroid, apparent width and
// height (px) and the orientation of the top edge in degrees, [0, 90).
struct ObservationVector {
  double x_c = 0.0;
  double y_c = 0.0;
  double width = 0.0;
  double height = 0.0;
  double theta_deg = 0.0;

  ObsVec AsVector() const { return {x_c, y_c, width, height, theta_deg}; }
  static ObservationVector FromVector(const ObsVec& v) {
    return {v[0], v[1], v[2], v[3], v[4]};
  }
};

struct Observation {
  ObservationVector z;
  bool valid = false;
};

// Plausibility thresholds applied before an observation may correct the
// tracker.
struct ValidityGate {
  double min_area_px2 = 100.0;
  double max_aspect = 4.0;
  // Centroid must lie inside the image grown by this fraction on each side.
  double bounds_inflation = 0.2;
};

// Throws kDegenerateQuad when two points coincide within 1e-6 px.
std::array<Vec2, 4> SortCorners(const std::array<Vec2, 4>& points);

// Builds a quad from ProjectTemplate output (4 corners + mapped center).
CornerQuad MakeQuad(const std::array<Vec2, 5>& projected);

struct ObjectDims {
  double width = 0.0;
  double height = 0.0;
};

// Width is the mean of the top and bottom edges, height the mean of the
// left and right edges.
ObjectDims ComputeObjectDims(const CornerQuad& quad);

double ComputeAngle(const CornerQuad& quad);

// Reduces an angle into [0, 90).
double ReduceAngle90(double deg);

// Shortest signed difference on the 90-degree circle, in (-45, 45].
double WrapAngle90(double deg);

bool IsConvex(const std::array<Vec2, 4>& corners);
double QuadArea(const std::array<Vec2, 4>& corners);

Observation BuildObservation(const CornerQuad& quad, double image_w,
                             double image_h, const ValidityGate& gate = {});

}  // namespace landsim

#endif  // LANDSIM_OBSERVATION_HPP_
