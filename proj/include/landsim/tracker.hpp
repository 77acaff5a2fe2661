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

#ifndef LANDSIM_TRACKER_HPP_
#define LANDSIM_TRACKER_HPP_

#include <optional>

#include <Eigen/Core>

#include "landsim/observation.hpp"

namespace landsim {

inline constexpr int kStateDim = 10;
inline constexpr int kObsDim = 5;

using StateVec = Eigen::Matrix<double, kStateDim, 1>;
using StateCov = Eigen::Matrix<double, kStateDim, kStateDim>;
using ObsCov = Eigen::Matrix<double, kObsDim, kObsDim>;
using GainMat = Eigen::Matrix<double, kStateDim, kObsDim>;
using ObsMat = Eigen::Matrix<double, kObsDim, kStateDim>;

// Template state [x_c, y_c, O_w, O_h, theta, and their rates] with its
// covariance. theta is kept unwrapped; only residuals are wrapped.
struct FilterState {
  StateVec x = StateVec::Zero();
  StateCov p = StateCov::Identity();
};

struct FilterConfig {
  // Process noise intensity; one prediction over dt adds q * dt.
  StateCov q;
  ObsCov r;
  StateCov p0;
  double dt_default = 1.0 / 15.0;
};

// q = diag(1,1,1,1,0.1, 10,10,10,10,1), r = diag(25,25,25,25,4),
// p0 = 100 I.
FilterConfig DefaultFilterConfig();

struct Innovation {
  ObsVec y = ObsVec::Zero();
  ObsCov s = ObsCov::Zero();
  GainMat k = GainMat::Zero();
};

struct CorrectResult {
  FilterState state;
  Innovation innovation;
};

// Constant-velocity transition [[I, dt I], [0, I]]. Throws kNonPositiveDt.
StateCov MakeTransition(double dt);

// [I_5 | 0_5]: the first five states are observed directly.
ObsMat ObservationMatrix();

FilterState Predict(const FilterState& state, double dt,
                    const FilterConfig& cfg);

// Throws kSingularInnovation when cond(S) exceeds 1e12.
CorrectResult Correct(const FilterState& predicted,
                      const ObservationVector& z, const FilterConfig& cfg);

// One frame of the tracker: predict always, correct only with a valid
// detection.
FilterState TrackStep(const FilterState& state,
                      const std::optional<Observation>& detection, double dt,
                      const FilterConfig& cfg);

FilterState InitializeFilter(const ObservationVector& first,
                             const FilterConfig& cfg);

}  // namespace landsim

#endif  // LANDSIM_TRACKER_HPP_
