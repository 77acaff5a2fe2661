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

#include "landsim/homography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace landsim {
namespace {

constexpr double kMinDet = 1e-12;
constexpr double kMinScale = 1e-9;
// Ratio of the 8th to the 1st singular value below which the design matrix
// is treated as having a null space of dimension > 1.
constexpr double kRankTolerance = 1e-10;

// Similarity that moves the centroid to the origin and scales the mean
// distance to sqrt(2).
Mat3 ConditioningTransform(std::span<const Vec2> pts) {
  Vec2 mean = Vec2::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += (p - mean).norm();
  mean_dist /= static_cast<double>(pts.size());
  if (mean_dist < 1e-12) {
    throw Error(ErrorKind::kDegenerateConfiguration, "coincident points");
  }
  const double s = std::sqrt(2.0) / mean_dist;
  Mat3 t;
  t << s, 0, -s * mean.x(),
       0, s, -s * mean.y(),
       0, 0, 1;
  return t;
}

Vec2 Apply(const Mat3& t, const Vec2& p) {
  return Vec2(t(0, 0) * p.x() + t(0, 2), t(1, 1) * p.y() + t(1, 2));
}

bool Collinear(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Vec2 ab = b - a;
  const Vec2 ac = c - a;
  const double cross = ab.x() * ac.y() - ab.y() * ac.x();
  const double scale = std::max(ab.squaredNorm(), ac.squaredNorm());
  return std::abs(cross) <= 1e-9 * std::max(scale, 1e-300);
}

bool MinimalSetDegenerate(const std::array<PointPair, 4>& s) {
  for (int i = 0; i < 4; ++i) {
    const int a = (i + 1) % 4, b = (i + 2) % 4, c = (i + 3) % 4;
    if (Collinear(s[a].src, s[b].src, s[c].src) ||
        Collinear(s[a].dst, s[b].dst, s[c].dst)) {
      return true;
    }
  }
  return false;
}

// Exact fit through a 4-point sample: the conditioned DLT system with h33
// fixed to 1, solved directly. Empty when that system is singular.
std::optional<Mat3> MinimalFit(const std::array<PointPair, 4>& s) {
  std::array<Vec2, 4> src, dst;
  for (int i = 0; i < 4; ++i) {
    src[i] = s[i].src;
    dst[i] = s[i].dst;
  }
  const Mat3 t_src = ConditioningTransform(src);
  const Mat3 t_dst = ConditioningTransform(dst);
  Eigen::Matrix<double, 8, 8> a;
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    const Vec2 p = Apply(t_src, src[i]);
    const Vec2 q = Apply(t_dst, dst[i]);
    const double x = p.x(), y = p.y(), u = q.x(), v = q.y();
    a.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
    a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
    b[2 * i] = u;
    b[2 * i + 1] = v;
  }
  const Eigen::PartialPivLU<Eigen::Matrix<double, 8, 8>> lu(a);
  const Eigen::Matrix<double, 8, 1> h = lu.solve(b);
  if (!h.allFinite() || (a * h - b).norm() > 1e-9 * (1.0 + b.norm())) {
    return std::nullopt;
  }
  Mat3 hn;
  hn << h[0], h[1], h[2],
        h[3], h[4], h[5],
        h[6], h[7], 1.0;
  return t_dst.inverse() * hn * t_src;
}

}  // namespace

void FeatureSet::Validate() const {
  if (static_cast<Eigen::Index>(points.size()) != descriptors.rows()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "feature set has " + std::to_string(points.size()) +
                    " points but " + std::to_string(descriptors.rows()) +
                    " descriptors");
  }
  if (!points.empty() && descriptors.cols() < 2) {
    throw Error(ErrorKind::kDimensionMismatch,
                "descriptor dimension must be at least 2");
  }
}

Homography Homography::FromMatrix(const Mat3& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale) ||
      std::abs(m(2, 2)) < 1e-12 * scale) {
    throw Error(ErrorKind::kDegenerateConfiguration,
                "homography has vanishing h33");
  }
  const Mat3 h = m / m(2, 2);
  if (!(std::abs(h.determinant()) > kMinDet)) {
    throw Error(ErrorKind::kDegenerateConfiguration, "singular homography");
  }
  return Homography(h);
}

Vec2 Homography::Map(const Vec2& p) const {
  const Vec3 q = h_ * Vec3(p.x(), p.y(), 1.0);
  if (std::abs(q.z()) < kMinScale) {
    throw Error(ErrorKind::kProjectiveDegeneracy,
                "point maps to the line at infinity");
  }
  return q.head<2>() / q.z();
}

Homography Homography::Inverse() const { return FromMatrix(h_.inverse()); }

MatchSet MatchDescriptors(const FeatureSet& templ, const FeatureSet& scene,
                          double ratio) {
  if (templ.size() == 0 || scene.size() == 0) {
    throw Error(ErrorKind::kEmptyInput, "cannot match an empty feature set");
  }
  templ.Validate();
  scene.Validate();
  if (templ.dim() != scene.dim()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "template descriptors have dimension " +
                    std::to_string(templ.dim()) + ", scene " +
                    std::to_string(scene.dim()));
  }
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "ratio must lie in (0, 1]");
  }

  // Column-major copies keep each descriptor contiguous.
  const Eigen::MatrixXd sd = scene.descriptors.transpose();
  const Eigen::MatrixXd td = templ.descriptors.transpose();
  MatchSet matches;
  matches.reserve(templ.size());
  for (int i = 0; i < templ.size(); ++i) {
    const Eigen::RowVectorXd d2 = (sd.colwise() - td.col(i)).colwise().squaredNorm();
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    double second_d2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < d2.size(); ++j) {
      if (d2[j] < best_d2) {
        second_d2 = best_d2;
        best_d2 = d2[j];
        best = static_cast<int>(j);
      } else if (d2[j] < second_d2) {
        second_d2 = d2[j];
      }
    }
    const double nearest = std::sqrt(best_d2);
    if (std::isfinite(second_d2)) {
      const double second = std::sqrt(second_d2);
      if (!(nearest < ratio * second)) continue;
    }
    matches.push_back({i, best, nearest});
  }
  return matches;
}

std::vector<PointPair> ResolveMatches(const MatchSet& matches,
                                      const FeatureSet& templ,
                                      const FeatureSet& scene) {
  std::vector<PointPair> pairs;
  pairs.reserve(matches.size());
  for (const auto& m : matches) {
    pairs.push_back({templ.points.at(m.template_index),
                     scene.points.at(m.scene_index)});
  }
  return pairs;
}

Homography EstimateHomographyDlt(std::span<const PointPair> pairs) {
  const auto n = static_cast<Eigen::Index>(pairs.size());
  if (n < 4) {
    throw Error(ErrorKind::kInsufficientMatches,
                "need at least 4 correspondences, got " + std::to_string(n));
  }
  std::vector<Vec2> src(pairs.size()), dst(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    src[i] = pairs[i].src;
    dst[i] = pairs[i].dst;
  }
  const Mat3 t_src = ConditioningTransform(src);
  const Mat3 t_dst = ConditioningTransform(dst);

  Eigen::Matrix<double, Eigen::Dynamic, 9> a(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec2 p = Apply(t_src, src[i]);
    const Vec2 q = Apply(t_dst, dst[i]);
    const double x = p.x(), y = p.y(), u = q.x(), v = q.y();
    a.row(2 * i) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
    a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
  }

  const Eigen::JacobiSVD<Eigen::Matrix<double, Eigen::Dynamic, 9>> svd(
      a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv[0] > 0.0) || sv[7] < kRankTolerance * sv[0]) {
    throw Error(ErrorKind::kDegenerateConfiguration,
                "design matrix is rank deficient");
  }
  const Eigen::Matrix<double, 9, 1> h = svd.matrixV().col(8);
  Mat3 hn;
  hn << h[0], h[1], h[2],
        h[3], h[4], h[5],
        h[6], h[7], h[8];
  return Homography::FromMatrix(t_dst.inverse() * hn * t_src);
}

double SymmetricTransferError(const Homography& h, const Homography& h_inv,
                              const PointPair& pair) {
  const Vec3 f = h.matrix() * Vec3(pair.src.x(), pair.src.y(), 1.0);
  const Vec3 b = h_inv.matrix() * Vec3(pair.dst.x(), pair.dst.y(), 1.0);
  if (std::abs(f.z()) < kMinScale || std::abs(b.z()) < kMinScale) {
    return std::numeric_limits<double>::infinity();
  }
  const double d_fwd = (f.head<2>() / f.z() - pair.dst).squaredNorm();
  const double d_bwd = (b.head<2>() / b.z() - pair.src).squaredNorm();
  return std::sqrt(0.5 * (d_fwd + d_bwd));
}

RansacResult RansacHomography(std::span<const PointPair> pairs,
                              const RansacOptions& options) {
  if (pairs.size() < 4) {
    throw Error(ErrorKind::kNoConsensus,
                "RANSAC needs at least 4 correspondences, got " +
                    std::to_string(pairs.size()));
  }
  if (!(options.inlier_threshold_px > 0.0) || options.max_iters < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "RANSAC threshold must be positive and max_iters >= 1");
  }

  const int n = static_cast<int>(pairs.size());
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> pick(0, n - 1);

  auto consensus = [&](const Homography& h, std::vector<bool>* mask) {
    const Homography h_inv = h.Inverse();
    int count = 0;
    const double thr = options.inlier_threshold_px;
    const Mat3& m = h.matrix();
    for (int i = 0; i < n; ++i) {
      // The forward half alone can already rule a pair out.
      const Vec3 f = m * Vec3(pairs[i].src.x(), pairs[i].src.y(), 1.0);
      const bool near =
          std::abs(f.z()) >= kMinScale &&
          0.5 * (f.head<2>() / f.z() - pairs[i].dst).squaredNorm() < thr * thr;
      const bool in =
          near && SymmetricTransferError(h, h_inv, pairs[i]) < thr;
      (*mask)[i] = in;
      count += in ? 1 : 0;
    }
    return count;
  };

  std::vector<bool> best_mask(n, false), mask(n, false);
  int best_count = -1;
  bool any_model = false;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    std::array<int, 4> idx{};
    for (int k = 0; k < 4; ++k) {
      int candidate;
      do {
        candidate = pick(rng);
      } while (std::find(idx.begin(), idx.begin() + k, candidate) !=
               idx.begin() + k);
      idx[k] = candidate;
    }
    const std::array<PointPair, 4> sample = {pairs[idx[0]], pairs[idx[1]],
                                             pairs[idx[2]], pairs[idx[3]]};
    if (MinimalSetDegenerate(sample)) continue;
    int count;
    try {
      const std::optional<Mat3> fit = MinimalFit(sample);
      count = consensus(fit ? Homography::FromMatrix(*fit)
                            : EstimateHomographyDlt(sample),
                        &mask);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kDegenerateConfiguration) continue;
      throw;
    }
    any_model = true;
    if (count > best_count) {
      best_count = count;
      best_mask = mask;
    }
  }
  if (!any_model) {
    throw Error(ErrorKind::kDegenerateConfiguration,
                "every sampled minimal set was degenerate");
  }
  if (best_count < 4) {
    throw Error(ErrorKind::kNoConsensus,
                "best consensus has " + std::to_string(best_count) +
                    " inliers");
  }

  auto refit = [&](const std::vector<bool>& m) {
    std::vector<PointPair> inliers;
    inliers.reserve(n);
    for (int i = 0; i < n; ++i) {
      if (m[i]) inliers.push_back(pairs[i]);
    }
    return EstimateHomographyDlt(inliers);
  };

  RansacResult result;
  result.h = refit(best_mask);
  result.inlier_mask.assign(n, false);
  const int refined = consensus(result.h, &result.inlier_mask);
  if (refined >= best_count) {
    result.h = refit(result.inlier_mask);
    result.num_inliers = consensus(result.h, &result.inlier_mask);
  } else {
    result.inlier_mask = best_mask;
    result.num_inliers = best_count;
  }
  return result;
}

std::array<Vec2, 5> ProjectTemplate(const Homography& h,
                                    const TemplateSpec& templ) {
  const double w = templ.width_px, ht = templ.height_px;
  if (!(w > 0.0 && ht > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "template dimensions must be positive");
  }
  return {h.Map({0.0, 0.0}), h.Map({w, 0.0}), h.Map({w, ht}),
          h.Map({0.0, ht}), h.Map({w / 2.0, ht / 2.0})};
}

}  // namespace landsim
