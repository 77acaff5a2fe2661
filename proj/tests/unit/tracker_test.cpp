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

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "dense_oracle.hpp"

namespace landsim {
namespace {

using oracle::MaxAbsDiff;

StateCov RandomSpd(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n(0.0, 1.0);
  StateCov b;
  for (int i = 0; i < b.size(); ++i) b(i) = n(rng);
  return scale * (b * b.transpose() + StateCov::Identity());
}

StateVec RandomState(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  StateVec x;
  x << 320 + 100 * u(rng), 160 + 80 * u(rng), 60 + 20 * u(rng),
      60 + 20 * u(rng), 45 + 40 * u(rng), 10 * u(rng), 10 * u(rng),
      u(rng), u(rng), 2 * u(rng);
  return x;
}

TEST(MakeTransition, RejectsNonPositiveDt) {
  for (double dt : {0.0, -0.1}) {
    try {
      MakeTransition(dt);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kNonPositiveDt);
    }
  }
}

TEST(MakeTransition, BlockStructure) {
  const StateCov a = MakeTransition(1.0);
  EXPECT_EQ(a(0, 5), 1.0);
  EXPECT_EQ(a(4, 9), 1.0);
  for (int i = 0; i < kStateDim; ++i) EXPECT_EQ(a(i, i), 1.0);
  StateVec x;
  x << 100, 100, 50, 50, 0, 10, 0, 0, 0, 0;
  StateVec expected;
  expected << 101, 100, 50, 50, 0, 10, 0, 0, 0, 0;
  EXPECT_LT((MakeTransition(0.1) * x - expected).norm(), 1e-12);
}

TEST(Predict, ZeroVelocityKeepsPositionAndAddsNoise) {
  const FilterConfig cfg = DefaultFilterConfig();
  FilterState s;
  s.x << 100, 100, 50, 50, 3, 0, 0, 0, 0, 0;
  s.p = StateCov::Zero();
  const FilterState out = Predict(s, 0.2, cfg);
  EXPECT_EQ(out.x, s.x);
  EXPECT_LT((out.p - cfg.q * 0.2).norm(), 1e-15);
}

TEST(Predict, AdvancesWithVelocity) {
  FilterState s;
  s.x << 100, 100, 50, 50, 0, 10, 0, 0, 0, 0;
  EXPECT_NEAR(Predict(s, 0.1, DefaultFilterConfig()).x[0], 101.0, 1e-12);
}

TEST(Predict, MatchesDenseOracle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> udt(0.01, 0.5);
  FilterConfig cfg = DefaultFilterConfig();
  for (int trial = 0; trial < 100; ++trial) {
    FilterState s{RandomState(rng), RandomSpd(rng, 5.0)};
    cfg.q = RandomSpd(rng, 0.5);
    const double dt = udt(rng);
    const FilterState out = Predict(s, dt, cfg);

    const auto [x, p] = oracle::Predict(s, dt, cfg);
    EXPECT_LT(MaxAbsDiff(x, out.x), 1e-12);
    EXPECT_LT(MaxAbsDiff(p, out.p), 1e-12 * (1.0 + out.p.cwiseAbs().maxCoeff()));
  }
}

TEST(Correct, ZeroInnovationKeepsState) {
  const FilterConfig cfg = DefaultFilterConfig();
  std::mt19937_64 rng(2);
  const FilterState s{RandomState(rng), 50.0 * StateCov::Identity()};
  const auto res = Correct(s, ObservationVector::FromVector(s.x.head<5>()), cfg);
  EXPECT_LT(res.innovation.y.norm(), 1e-12);
  EXPECT_LT((res.state.x - s.x).norm(), 1e-12);
}

TEST(Correct, NoiselessMeasurementIsAdopted) {
  FilterConfig cfg = DefaultFilterConfig();
  cfg.r = 1e-12 * ObsCov::Identity();
  std::mt19937_64 rng(4);
  const FilterState s{RandomState(rng), RandomSpd(rng, 10.0)};
  ObsVec z;
  z << 300, 150, 70, 72, 12;
  const auto res = Correct(s, ObservationVector::FromVector(z), cfg);
  EXPECT_LT((res.state.x.head<5>() - z).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Correct, MatchesGaussJordanOracle) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> n(0.0, 5.0);
  FilterConfig cfg = DefaultFilterConfig();
  for (int trial = 0; trial < 100; ++trial) {
    const FilterState s{RandomState(rng), RandomSpd(rng, 3.0)};
    Eigen::Matrix<double, 5, 5> b;
    for (int i = 0; i < b.size(); ++i) b(i) = n(rng) / 5.0;
    cfg.r = b * b.transpose() + ObsCov::Identity();
    ObsVec z = s.x.head<5>();
    for (int i = 0; i < 4; ++i) z[i] += n(rng);
    z[4] = std::fmod(std::abs(z[4] + n(rng)), 90.0);
    const auto res = Correct(s, ObservationVector::FromVector(z), cfg);

    const auto ref = oracle::Correct(s, z, cfg);
    EXPECT_LT(MaxAbsDiff(ref.y, res.innovation.y), 1e-9);
    EXPECT_LT(MaxAbsDiff(ref.s, res.innovation.s), 1e-9);
    EXPECT_LT(MaxAbsDiff(ref.k, res.innovation.k), 1e-9);
    EXPECT_LT(MaxAbsDiff(ref.x, res.state.x), 1e-9);
    EXPECT_LT(MaxAbsDiff(ref.p, res.state.p), 1e-9);
  }
}

TEST(Correct, AngleResidualWrapsAcrossBoundary) {
  const FilterConfig cfg = DefaultFilterConfig();
  FilterState s;
  s.x << 320, 160, 50, 50, 89, 0, 0, 0, 0, 0;
  s.p = 10.0 * StateCov::Identity();
  const auto res = Correct(s, {320, 160, 50, 50, 1}, cfg);
  EXPECT_NEAR(res.innovation.y[4], 2.0, 1e-12);
  EXPECT_GT(res.state.x[4], 89.0);
}

TEST(Correct, SingularInnovationIsReported) {
  FilterConfig cfg = DefaultFilterConfig();
  cfg.r = ObsCov::Zero();
  FilterState s;
  s.p = StateCov::Zero();
  try {
    Correct(s, {1, 2, 3, 4, 5}, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingularInnovation);
  }
}

TEST(Correct, ContractsObservedCovariance) {
  std::mt19937_64 rng(31);
  const FilterConfig cfg = DefaultFilterConfig();
  const ObsMat h = ObservationMatrix();
  for (int trial = 0; trial < 50; ++trial) {
    const FilterState s{RandomState(rng), RandomSpd(rng, 4.0)};
    const auto res = Correct(s, ObservationVector::FromVector(s.x.head<5>()), cfg);
    EXPECT_LE((h * res.state.p * h.transpose()).trace(),
              (h * s.p * h.transpose()).trace() + 1e-9);
  }
}

TEST(TrackStep, MissingDetectionEqualsPredict) {
  const FilterConfig cfg = DefaultFilterConfig();
  std::mt19937_64 rng(6);
  const FilterState s{RandomState(rng), RandomSpd(rng, 2.0)};
  const FilterState a = TrackStep(s, std::nullopt, 0.1, cfg);
  const FilterState b = Predict(s, 0.1, cfg);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.p, b.p);
  // An invalid observation is ignored as well.
  const FilterState c = TrackStep(s, Observation{{1, 2, 3, 4, 5}, false}, 0.1, cfg);
  EXPECT_EQ(c.x, b.x);
}

TEST(TrackStep, ConvergesOnConstantDetections) {
  const FilterConfig cfg = DefaultFilterConfig();
  const Observation z{{320, 160, 50, 50, 0}, true};
  FilterState s = InitializeFilter({300, 175, 40, 58, 6}, cfg);
  std::vector<double> err;
  for (int i = 0; i < 100; ++i) {
    s = TrackStep(s, z, cfg.dt_default, cfg);
    err.push_back((s.x.head<5>() - z.z.AsVector()).norm());
  }
  EXPECT_LT(err.back(), 0.5);
  // The constant-velocity model rings by about 0.01 px once settled, so
  // monotonicity is checked down to a 0.05 px floor.
  const double floor_px = 0.05;
  for (int i = 20; i < 100; ++i) {
    if (err[i - 1] > floor_px) {
      EXPECT_LE(err[i], err[i - 1]) << i;
    } else {
      EXPECT_LT(err[i], floor_px) << i;
    }
  }
}

TEST(TrackStep, TraceGrowsOnMissedFrames) {
  const FilterConfig cfg = DefaultFilterConfig();
  const Observation z{{320, 160, 50, 50, 0}, true};
  FilterState s = InitializeFilter(z.z, cfg);
  for (int i = 0; i < 40; ++i) {
    const FilterState corrected = TrackStep(s, z, cfg.dt_default, cfg);
    const FilterState coasted = TrackStep(corrected, std::nullopt, cfg.dt_default, cfg);
    EXPECT_GT(coasted.p.trace(), corrected.p.trace());
    s = coasted;
  }
}

TEST(InitializeFilter, CopiesObservationAndPrior) {
  const FilterConfig cfg = DefaultFilterConfig();
  const FilterState a = InitializeFilter({320, 160, 50, 50, 0}, cfg);
  StateVec expected;
  expected << 320, 160, 50, 50, 0, 0, 0, 0, 0, 0;
  EXPECT_EQ(a.x, expected);
  EXPECT_EQ(a.p, cfg.p0);
  const FilterState b = InitializeFilter({10, 20, 30, 40, 50}, cfg);
  EXPECT_EQ(b.p, cfg.p0);
  EXPECT_EQ(a.x.tail<5>(), b.x.tail<5>());
  EXPECT_NE(a.x.head<5>(), b.x.head<5>());
}

TEST(TrackerProperties, CovarianceStaysSymmetricPsd) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 10.0);
  const FilterConfig cfg = DefaultFilterConfig();
  FilterState s = InitializeFilter({320, 160, 50, 50, 10}, cfg);
  for (int i = 0; i < 2000; ++i) {
    std::optional<Observation> det;
    if (u(rng) < 0.7) {
      det = Observation{{320 + n(rng), 160 + n(rng), 50 + n(rng), 50 + n(rng),
                         ReduceAngle90(10 + n(rng))},
                        true};
    }
    s = TrackStep(s, det, 0.01 + 0.1 * u(rng), cfg);
    EXPECT_LT((s.p - s.p.transpose()).cwiseAbs().maxCoeff(), 1e-9);
    const Eigen::SelfAdjointEigenSolver<StateCov> eig(s.p, Eigen::EigenvaluesOnly);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-9);
  }
}

TEST(TrackerProperties, StationaryTargetBeatsRawNoise) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 20.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const FilterConfig cfg = DefaultFilterConfig();
  const ObsVec truth(320, 160, 50, 50, 30);
  FilterState s = InitializeFilter(ObservationVector::FromVector(truth), cfg);
  double raw = 0.0, filt = 0.0;
  int raw_n = 0;
  for (int i = 0; i < 1000; ++i) {
    ObsVec z = truth;
    z[0] += n(rng);
    z[1] += n(rng);
    const bool valid = u(rng) >= 0.1;
    s = TrackStep(s, Observation{ObservationVector::FromVector(z), valid}, 1.0 / 15, cfg);
    if (valid) {
      raw += (z.head<2>() - truth.head<2>()).squaredNorm();
      ++raw_n;
    }
    filt += (s.x.head<2>() - truth.head<2>()).squaredNorm();
  }
  EXPECT_LT(std::sqrt(filt / 1000), std::sqrt(raw / raw_n));
}

TEST(TrackerProperties, Deterministic) {
  const FilterConfig cfg = DefaultFilterConfig();
  FilterState a = InitializeFilter({300, 150, 40, 41, 3}, cfg), b = a;
  for (int i = 0; i < 50; ++i) {
    const Observation z{{300.0 + i, 150, 40, 41, 3}, i % 3 != 0};
    a = TrackStep(a, z, 0.05, cfg);
    b = TrackStep(b, z, 0.05, cfg);
  }
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.p, b.p);
}

}  // namespace
}  // namespace landsim
