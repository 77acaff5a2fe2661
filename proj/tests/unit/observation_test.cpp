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
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "landsim/homography.hpp"

namespace landsim {
namespace {

using Quad = std::array<Vec2, 4>;

CornerQuad QuadFrom(const Quad& unordered) {
  CornerQuad q;
  q.corners = SortCorners(unordered);
  q.centroid = (unordered[0] + unordered[1] + unordered[2] + unordered[3]) / 4.0;
  return q;
}

// Square of side `s` centred at `c`, rotated by `deg` (image coordinates).
Quad Square(const Vec2& c, double s, double deg) {
  const double a = deg * std::numbers::pi / 180.0;
  const Eigen::Matrix2d r{{std::cos(a), -std::sin(a)}, {std::sin(a), std::cos(a)}};
  Quad q;
  const Vec2 local[4] = {{-s / 2, -s / 2}, {s / 2, -s / 2}, {s / 2, s / 2}, {-s / 2, s / 2}};
  for (int i = 0; i < 4; ++i) q[i] = c + r * local[i];
  return q;
}

void ExpectSameQuad(const Quad& a, const Quad& b, double tol) {
  for (int i = 0; i < 4; ++i) EXPECT_LE((a[i] - b[i]).norm(), tol) << "corner " << i;
}

TEST(SortCorners, AxisAlignedSquare) {
  const Quad out = SortCorners({Vec2(100, 0), Vec2(0, 0), Vec2(0, 100), Vec2(100, 100)});
  ExpectSameQuad(out, {Vec2(0, 0), Vec2(100, 0), Vec2(100, 100), Vec2(0, 100)}, 0.0);
}

TEST(SortCorners, OrderedInputIsUnchanged) {
  const Quad in = {Vec2(0, 0), Vec2(100, 0), Vec2(100, 100), Vec2(0, 100)};
  ExpectSameQuad(SortCorners(in), in, 0.0);
}

TEST(SortCorners, AllPermutationsGiveOneCanonicalOrder) {
  const Quad base = Square({300, 150}, 80, 27.0);
  const Quad canonical = SortCorners(base);
  std::array<int, 4> idx = {0, 1, 2, 3};
  int count = 0;
  do {
    const Quad shuffled = {base[idx[0]], base[idx[1]], base[idx[2]], base[idx[3]]};
    ExpectSameQuad(SortCorners(shuffled), canonical, 0.0);
    ++count;
  } while (std::next_permutation(idx.begin(), idx.end()));
  EXPECT_EQ(count, 24);
  // First corner has the smallest y.
  for (const Vec2& p : base) EXPECT_LE(canonical[0].y(), p.y());
}

TEST(SortCorners, CoincidentPointsThrow) {
  try {
    SortCorners({Vec2(0, 0), Vec2(0, 0), Vec2(1, 1), Vec2(0, 1)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateQuad);
  }
}

TEST(ComputeObjectDims, SquareAndRectangle) {
  auto d = ComputeObjectDims(QuadFrom({Vec2(0, 0), Vec2(100, 0), Vec2(100, 100), Vec2(0, 100)}));
  EXPECT_DOUBLE_EQ(d.width, 100.0);
  EXPECT_DOUBLE_EQ(d.height, 100.0);
  d = ComputeObjectDims(QuadFrom({Vec2(10, 20), Vec2(90, 20), Vec2(90, 60), Vec2(10, 60)}));
  EXPECT_DOUBLE_EQ(d.width, 80.0);
  EXPECT_DOUBLE_EQ(d.height, 40.0);
}

TEST(ComputeObjectDims, PerspectiveMatchesEdgeLengthOracle) {
  Mat3 m;
  m << 1.1, 0.05, 200, -0.04, 0.95, 80, 4e-4, -2e-4, 1;
  const auto pts = ProjectTemplate(Homography::FromMatrix(m), {100, 100, 0.5});
  const CornerQuad q = MakeQuad(pts);
  const auto& c = q.corners;
  const double top = (c[1] - c[0]).norm(), right = (c[2] - c[1]).norm();
  const double bottom = (c[3] - c[2]).norm(), left = (c[0] - c[3]).norm();
  const auto d = ComputeObjectDims(q);
  EXPECT_NEAR(d.width, 0.5 * (top + bottom), 1e-12);
  EXPECT_NEAR(d.height, 0.5 * (left + right), 1e-12);
}

TEST(ComputeAngle, ReferenceAngles) {
  EXPECT_NEAR(ComputeAngle(QuadFrom(Square({320, 160}, 100, 0.0))), 0.0, 1e-12);
  EXPECT_NEAR(ComputeAngle(QuadFrom(Square({320, 160}, 100, 45.0))), 45.0, 1e-9);
  EXPECT_NEAR(ReduceAngle90(120.0), 30.0, 1e-12);
  EXPECT_NEAR(ReduceAngle90(-10.0), 80.0, 1e-12);
  EXPECT_NEAR(ReduceAngle90(90.0), 0.0, 1e-12);
}

TEST(WrapAngle90, ShortestSignedDistance) {
  EXPECT_NEAR(WrapAngle90(-89.0), 1.0, 1e-12);
  EXPECT_NEAR(WrapAngle90(89.0), -1.0, 1e-12);
  EXPECT_NEAR(WrapAngle90(45.0), 45.0, 1e-12);
  EXPECT_NEAR(WrapAngle90(-45.0), 45.0, 1e-12);
  EXPECT_NEAR(WrapAngle90(10.0), 10.0, 1e-12);
}

TEST(BuildObservation, CenteredSquareIsValid) {
  const Observation o = BuildObservation(QuadFrom(Square({320, 160}, 100, 0.0)), 640, 320);
  EXPECT_TRUE(o.valid);
  const ObsVec expected(320, 160, 100, 100, 0);
  EXPECT_LT((o.z.AsVector() - expected).norm(), 1e-12);
}

TEST(BuildObservation, OutOfBoundsCentroidIsInvalid) {
  const Observation o = BuildObservation(QuadFrom(Square({900, 160}, 100, 0.0)), 640, 320);
  EXPECT_FALSE(o.valid);
  EXPECT_NEAR(o.z.x_c, 900.0, 1e-12);
}

TEST(BuildObservation, BowtieIsInvalid) {
  // Corners given in crossing order; the mapped quad is not convex.
  CornerQuad q;
  q.corners = {Vec2(0, 0), Vec2(100, 100), Vec2(100, 0), Vec2(0, 100)};
  q.centroid = {50, 50};
  EXPECT_FALSE(IsConvex(q.corners));
  EXPECT_FALSE(BuildObservation(q, 640, 320).valid);
  // Sorting the same points repairs the order.
  EXPECT_TRUE(IsConvex(SortCorners(q.corners)));
}

TEST(BuildObservation, SmallAndElongatedQuadsAreInvalid) {
  EXPECT_FALSE(BuildObservation(QuadFrom(Square({320, 160}, 9, 0.0)), 640, 320).valid);
  const Quad thin = {Vec2(100, 100), Vec2(300, 100), Vec2(300, 140), Vec2(100, 140)};
  EXPECT_FALSE(BuildObservation(QuadFrom(thin), 640, 320).valid);
}

TEST(ObservationProperties, RotationCovariance) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 360.0);
  const Vec2 c(320, 160);
  const auto d0 = ComputeObjectDims(QuadFrom(Square(c, 90, 10.0)));
  const double th0 = ComputeAngle(QuadFrom(Square(c, 90, 10.0)));
  for (int i = 0; i < 100; ++i) {
    const double phi = u(rng);
    const CornerQuad q = QuadFrom(Square(c, 90, 10.0 + phi));
    const auto d = ComputeObjectDims(q);
    const double th = ComputeAngle(q);
    EXPECT_NEAR(d.width, d0.width, 1e-9);
    EXPECT_NEAR(d.height, d0.height, 1e-9);
    EXPECT_NEAR(WrapAngle90(th - ReduceAngle90(th0 + phi)), 0.0, 1e-9);
    EXPECT_GE(th, 0.0);
    EXPECT_LT(th, 90.0);
  }
}

TEST(ObservationProperties, TranslationMovesOnlyCentroid) {
  const Quad base = Square({300, 150}, 70, 17.0);
  const Observation a = BuildObservation(QuadFrom(base), 640, 320);
  const Vec2 shift(12.5, -7.25);
  Quad moved = base;
  for (Vec2& p : moved) p += shift;
  const Observation b = BuildObservation(QuadFrom(moved), 640, 320);
  EXPECT_NEAR(b.z.x_c - a.z.x_c, shift.x(), 1e-12);
  EXPECT_NEAR(b.z.y_c - a.z.y_c, shift.y(), 1e-12);
  EXPECT_NEAR(b.z.width, a.z.width, 1e-9);
  EXPECT_NEAR(b.z.height, a.z.height, 1e-9);
  EXPECT_NEAR(b.z.theta_deg, a.z.theta_deg, 1e-9);
}

TEST(ObservationProperties, ScalingKeepsValidity) {
  const Vec2 c(320, 160);
  for (double s = 0.5; s <= 2.0 + 1e-12; s += 0.05) {
    EXPECT_TRUE(BuildObservation(QuadFrom(Square(c, 100 * s, 33.0)), 640, 320).valid) << s;
  }
}

}  // namespace
}  // namespace landsim
