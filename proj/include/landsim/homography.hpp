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

#ifndef LANDSIM_HOMOGRAPHY_HPP_
#define LANDSIM_HOMOGRAPHY_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "landsim/common.hpp"

namespace landsim {

// Keypoints of one image together with their descriptors. Row i of
// `descriptors` belongs to points[i].
struct FeatureSet {
  std::vector<Vec2> points;
  Eigen::MatrixXd descriptors;

  int size() const { return static_cast<int>(points.size()); }
  int dim() const { return static_cast<int>(descriptors.cols()); }

  // Throws kDimensionMismatch if the point and descriptor counts differ or
  // the descriptor dimension is below 2.
  void Validate() const;
};

struct Match {
  int template_index = 0;
  int scene_index = 0;
  double distance = 0.0;
};

using MatchSet = std::vector<Match>;

struct PointPair {
  Vec2 src;  // template image
  Vec2 dst;  // scene image
};

// Projective map from the template image to the scene image, stored with
// h(2,2) == 1.
class Homography {
 public:
  Homography() : h_(Mat3::Identity()) {}

  // Scales `m` so that m(2,2) == 1. Throws kDegenerateConfiguration when
  // m(2,2) vanishes or the normalized matrix is singular (|det| <= 1e-12).
  static Homography FromMatrix(const Mat3& m);

  const Mat3& matrix() const { return h_; }

  // Maps a point and dehomogenizes. Throws kProjectiveDegeneracy when the
  // homogeneous scale is below 1e-9 in magnitude.
  Vec2 Map(const Vec2& p) const;

  Homography Inverse() const;

 private:
  explicit Homography(const Mat3& h) : h_(h) {}
  Mat3 h_;
};

// Nearest-neighbour matching under Euclidean descriptor distance. A template
// feature is kept only when nearest / second-nearest < ratio (Lowe's test);
// with ratio == 1 and a single-candidate scene the test is skipped.
MatchSet MatchDescriptors(const FeatureSet& templ, const FeatureSet& scene,
                          double ratio);

std::vector<PointPair> ResolveMatches(const MatchSet& matches,
                                      const FeatureSet& templ,
                                      const FeatureSet& scene);

// Normalized DLT. Both point sets are conditioned (centroid at the origin,
// mean distance sqrt(2)) before the 2n x 9 design matrix is decomposed.
Homography EstimateHomographyDlt(std::span<const PointPair> pairs);

// RMS of the forward (template -> scene) and backward reprojection
// distances, in pixels.
double SymmetricTransferError(const Homography& h, const Homography& h_inv,
                              const PointPair& pair);

struct RansacOptions {
  double inlier_threshold_px = 3.0;
  int max_iters = 500;
  std::uint64_t seed = 0;
};

struct RansacResult {
  Homography h;
  std::vector<bool> inlier_mask;
  int num_inliers = 0;
};

// Fixed-iteration RANSAC over 4-point minimal sets, followed by a DLT refit
// on the consensus set. Deterministic in (pairs, options).
RansacResult RansacHomography(std::span<const PointPair> pairs,
                              const RansacOptions& options);

struct TemplateSpec {
  double width_px = 64.0;
  double height_px = 64.0;
  double physical_side_m = 0.5;
};

// Corners (0,0), (w,0), (w,h), (0,h) followed by the center (w/2, h/2),
// each mapped through `h`.
std::array<Vec2, 5> ProjectTemplate(const Homography& h,
                                    const TemplateSpec& templ);

}  // namespace landsim

#endif  // LANDSIM_HOMOGRAPHY_HPP_
