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

#include "landsim/tracker.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace landsim {

FilterConfig DefaultFilterConfig() {
  FilterConfig cfg;
  StateVec q;
  q << 1, 1, 1, 1, 0.1, 10, 10, 10, 10, 1;
  cfg.q = q.asDiagonal();
  ObsVec r;
  r << 25, 25, 25, 25, 4;
  cfg.r = r.asDiagonal();
  cfg.p0 = 100.0 * StateCov::Identity();
  return cfg;
}

StateCov MakeTransition(double dt) {
  if (!(dt > 0.0)) {
    throw Error(ErrorKind::kNonPositiveDt, "dt must be positive");
  }
  StateCov a = StateCov::Identity();
  a.topRightCorner<kObsDim, kObsDim>() =
      dt * Eigen::Matrix<double, kObsDim, kObsDim>::Identity();
  return a;
}

ObsMat ObservationMatrix() {
  ObsMat h = ObsMat::Zero();
  h.leftCols<kObsDim>().setIdentity();
  return h;
}

FilterState Predict(const FilterState& state, double dt,
                    const FilterConfig& cfg) {
  const StateCov a = MakeTransition(dt);
  FilterState out;
  out.x = a * state.x;
  out.p = a * state.p * a.transpose() + cfg.q * dt;
  out.p = 0.5 * (out.p + out.p.transpose()).eval();
  return out;
}

CorrectResult Correct(const FilterState& predicted,
                      const ObservationVector& z, const FilterConfig& cfg) {
  const ObsMat h = ObservationMatrix();
  CorrectResult res;
  Innovation& inn = res.innovation;

  inn.y = z.AsVector() - h * predicted.x;
  inn.y[4] = WrapAngle90(inn.y[4]);
  inn.s = h * predicted.p * h.transpose() + cfg.r;

  const Eigen::SelfAdjointEigenSolver<ObsCov> eig(inn.s,
                                                  Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw Error(ErrorKind::kSingularInnovation,
                "innovation covariance is numerically singular; check R");
  }

  // K = P H^T S^-1, solved through the Cholesky factor of S.
  const Eigen::LLT<ObsCov> llt(inn.s);
  inn.k = llt.solve(h * predicted.p).transpose();

  res.state.x = predicted.x + inn.k * inn.y;
  res.state.p = (StateCov::Identity() - inn.k * h) * predicted.p;
  res.state.p = 0.5 * (res.state.p + res.state.p.transpose()).eval();
  return res;
}

FilterState TrackStep(const FilterState& state,
                      const std::optional<Observation>& detection, double dt,
                      const FilterConfig& cfg) {
  FilterState predicted = Predict(state, dt, cfg);
  if (!detection || !detection->valid) return predicted;
  return Correct(predicted, detection->z, cfg).state;
}

FilterState InitializeFilter(const ObservationVector& first,
                             const FilterConfig& cfg) {
  FilterState s;
  s.x.setZero();
  s.x.head<kObsDim>() = first.AsVector();
  s.p = cfg.p0;
  return s;
}

}  // namespace landsim
