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


#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "landsim/harness.hpp"
#include "landsim/homography.hpp"
#include "landsim/observation.hpp"
#include "landsim/tracker.hpp"

namespace py = pybind11;
using namespace pybind11::literals;  // NOLINT

namespace {

using landsim::PointPair;
using landsim::Vec2;
using Points = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

std::vector<PointPair> ToPairs(const Points& src, const Points& dst) {
  if (src.rows() != dst.rows()) {
    throw landsim::Error(landsim::ErrorKind::kDimensionMismatch,
                         "src and dst must have the same number of rows");
  }
  std::vector<PointPair> pairs(src.rows());
  for (Eigen::Index i = 0; i < src.rows(); ++i) {
    pairs[i] = {src.row(i).transpose(), dst.row(i).transpose()};
  }
  return pairs;
}

landsim::FeatureSet ToFeatures(const Points& pts, const Eigen::MatrixXd& desc) {
  landsim::FeatureSet f;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) f.points.push_back(pts.row(i).transpose());
  f.descriptors = desc;
  return f;
}

template <std::size_t N>
Points FromArray(const std::array<Vec2, N>& a) {
  Points out(N, 2);
  for (std::size_t i = 0; i < N; ++i) out.row(i) = a[i].transpose();
  return out;
}

py::dict ObservationDict(const landsim::Observation& o) {
  return py::dict("x_c"_a = o.z.x_c, "y_c"_a = o.z.y_c, "width"_a = o.z.width,
                  "height"_a = o.z.height, "theta_deg"_a = o.z.theta_deg, "valid"_a = o.valid);
}

landsim::FilterState MakeState(const landsim::StateVec& x, const landsim::StateCov& p) {
  return {x, p};
}

// Per-step trajectory as a dict of numpy-convertible columns.
py::dict TrajectoryDict(const landsim::TrialLog& log) {
  const auto n = static_cast<Eigen::Index>(log.steps.size());
  Eigen::VectorXd t(n), z_p(n);
  Eigen::MatrixXd truth(n, 4), kf(n, 5), err(n, 3), cmd(n, 3);
  std::vector<bool> detected(n);
  std::vector<std::string> events(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = log.steps[i];
    t[i] = s.t;
    truth.row(i) << s.truth.x, s.truth.y, s.truth.z, s.truth.psi_deg;
    kf.row(i) = s.kf.head<5>().transpose();
    err.row(i) = s.error.transpose();
    cmd.row(i) = s.command.u.transpose();
    z_p[i] = s.command.u_z;
    detected[i] = s.has_detection;
    events[i] = s.event;
  }
  return py::dict("t"_a = t, "truth"_a = truth, "kf"_a = kf, "error"_a = err,
                  "command"_a = cmd, "u_z"_a = z_p, "detected"_a = detected,
                  "events"_a = events);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Vision-based landing simulator core";

  static py::exception<landsim::Error> error(m, "LandsimError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const landsim::Error& e) {
      py::set_error(error, e.what());
    }
  });

  // Homography.
  m.def(
      "match_descriptors",
      [](const Points& tp, const Eigen::MatrixXd& td, const Points& sp, const Eigen::MatrixXd& sd,
         double ratio) {
        std::vector<std::tuple<int, int, double>> out;
        for (const auto& mt : landsim::MatchDescriptors(ToFeatures(tp, td), ToFeatures(sp, sd), ratio)) {
          out.emplace_back(mt.template_index, mt.scene_index, mt.distance);
        }
        return out;
      },
      "template_points"_a, "template_descriptors"_a, "scene_points"_a, "scene_descriptors"_a,
      "ratio"_a = 0.8, "Returns (template_index, scene_index, distance) triples.");
  m.def(
      "estimate_homography",
      [](const Points& src, const Points& dst) {
        return landsim::EstimateHomographyDlt(ToPairs(src, dst)).matrix();
      },
      "src"_a, "dst"_a);
  m.def(
      "ransac_homography",
      [](const Points& src, const Points& dst, double threshold, int iters, std::uint64_t seed) {
        const auto r = landsim::RansacHomography(ToPairs(src, dst), {threshold, iters, seed});
        return py::make_tuple(r.h.matrix(), r.inlier_mask);
      },
      "src"_a, "dst"_a, "threshold"_a = 3.0, "iters"_a = 500, "seed"_a = 0,
      "Returns (H, inlier_mask).");
  m.def(
      "symmetric_transfer_error",
      [](const landsim::Mat3& h, const Vec2& src, const Vec2& dst) {
        const auto hh = landsim::Homography::FromMatrix(h);
        return landsim::SymmetricTransferError(hh, hh.Inverse(), {src, dst});
      },
      "h"_a, "src"_a, "dst"_a);
  m.def(
      "project_template",
      [](const landsim::Mat3& h, double w, double hgt) {
        return FromArray(landsim::ProjectTemplate(landsim::Homography::FromMatrix(h),
                                                  {w, hgt, 0.5}));
      },
      "h"_a, "width_px"_a = 64.0, "height_px"_a = 64.0,
      "Four corners and the center mapped through h, as a 5x2 array.");

  // Observation.
  m.def(
      "sort_corners",
      [](const Eigen::Matrix<double, 4, 2, Eigen::RowMajor>& c) {
        return FromArray(landsim::SortCorners(
            {c.row(0).transpose(), c.row(1).transpose(), c.row(2).transpose(), c.row(3).transpose()}));
      },
      "corners"_a);
  m.def(
      "build_observation",
      [](const Eigen::Matrix<double, 5, 2, Eigen::RowMajor>& projected, double image_w,
         double image_h) {
        std::array<Vec2, 5> pts;
        for (int i = 0; i < 5; ++i) pts[i] = projected.row(i).transpose();
        return ObservationDict(landsim::BuildObservation(landsim::MakeQuad(pts), image_w, image_h));
      },
      "projected"_a, "image_w"_a = 640.0, "image_h"_a = 320.0);
  m.def("wrap_angle90", &landsim::WrapAngle90, "deg"_a);
  m.def("reduce_angle90", &landsim::ReduceAngle90, "deg"_a);

  // Tracker.
  py::class_<landsim::FilterConfig>(m, "FilterConfig")
      .def(py::init(&landsim::DefaultFilterConfig))
      .def_readwrite("q", &landsim::FilterConfig::q)
      .def_readwrite("r", &landsim::FilterConfig::r)
      .def_readwrite("p0", &landsim::FilterConfig::p0);
  m.def(
      "initialize_filter",
      [](const landsim::ObsVec& z, const landsim::FilterConfig& cfg) {
        const auto s = landsim::InitializeFilter(landsim::ObservationVector::FromVector(z), cfg);
        return py::make_tuple(s.x, s.p);
      },
      "z"_a, "config"_a = landsim::DefaultFilterConfig());
  m.def(
      "kf_predict",
      [](const landsim::StateVec& x, const landsim::StateCov& p, double dt,
         const landsim::FilterConfig& cfg) {
        const auto s = landsim::Predict(MakeState(x, p), dt, cfg);
        return py::make_tuple(s.x, s.p);
      },
      "x"_a, "p"_a, "dt"_a, "config"_a = landsim::DefaultFilterConfig());
  m.def(
      "kf_correct",
      [](const landsim::StateVec& x, const landsim::StateCov& p, const landsim::ObsVec& z,
         const landsim::FilterConfig& cfg) {
        const auto r =
            landsim::Correct(MakeState(x, p), landsim::ObservationVector::FromVector(z), cfg);
        return py::make_tuple(r.state.x, r.state.p, r.innovation.y, r.innovation.k);
      },
      "x"_a, "p"_a, "z"_a, "config"_a = landsim::DefaultFilterConfig(),
      "Returns (x, P, innovation, gain).");

  // Trials.
  py::class_<landsim::TrialConfig>(m, "TrialConfig")
      .def(py::init(&landsim::DefaultTrialConfig))
      .def_static("load", &landsim::LoadTrialConfig, "path"_a)
      .def_property(
          "controller",
          [](const landsim::TrialConfig& c) { return std::string(landsim::ControllerKindName(c.controller)); },
          [](landsim::TrialConfig& c, const std::string& k) { c.controller = landsim::ParseControllerKind(k); })
      .def_readwrite("seed", &landsim::TrialConfig::seed)
      .def_readwrite("dt", &landsim::TrialConfig::dt)
      .def_readwrite("max_duration", &landsim::TrialConfig::max_duration)
      .def_readwrite("seeds", &landsim::TrialConfig::seeds)
      .def_property(
          "noise_preset", [](const landsim::TrialConfig& c) { return c.noise_preset; },
          [](landsim::TrialConfig& c, const std::string& name) {
            c.noise = landsim::NoisePreset(name, c.seed);
            c.noise_preset = name;
          })
      .def_property(
          "wind_bias", [](const landsim::TrialConfig& c) { return Vec2(c.wind.bias); },
          [](landsim::TrialConfig& c, const Vec2& b) { c.wind.bias = b; })
      .def_property(
          "initial_pose",
          [](const landsim::TrialConfig& c) {
            return py::make_tuple(c.initial.x, c.initial.y, c.initial.z, c.initial.psi_deg);
          },
          [](landsim::TrialConfig& c, std::tuple<double, double, double, double> p) {
            std::tie(c.initial.x, c.initial.y, c.initial.z, c.initial.psi_deg) = p;
          })
      .def("validate", &landsim::TrialConfig::Validate);

  py::class_<landsim::ErrorSummary>(m, "ErrorSummary")
      .def_property_readonly("controller",
                             [](const landsim::ErrorSummary& s) { return std::string(landsim::ControllerKindName(s.controller)); })
      .def_readonly("seed", &landsim::ErrorSummary::seed)
      .def_readonly("rmse", &landsim::ErrorSummary::rmse)
      .def_readonly("avg", &landsim::ErrorSummary::avg)
      .def_readonly("std", &landsim::ErrorSummary::stdev)
      .def_readonly("samples", &landsim::ErrorSummary::samples)
      .def_readonly("land_offset_x", &landsim::ErrorSummary::land_offset_x)
      .def_readonly("land_offset_y", &landsim::ErrorSummary::land_offset_y)
      .def_readonly("land_angle_deg", &landsim::ErrorSummary::land_angle_deg)
      .def_readonly("touchdown_s", &landsim::ErrorSummary::touchdown_s)
      .def_readonly("success", &landsim::ErrorSummary::success)
      .def_property_readonly("planar_offset", &landsim::ErrorSummary::PlanarOffset);

  py::class_<landsim::ExperimentSummary>(m, "ExperimentSummary")
      .def_readonly("trials", &landsim::ExperimentSummary::trials)
      .def_readonly("success_rate", &landsim::ExperimentSummary::success_rate)
      .def_readonly("mean_planar_offset", &landsim::ExperimentSummary::mean_planar_offset)
      .def_readonly("mean_angle_deg", &landsim::ExperimentSummary::mean_angle_deg)
      .def_readonly("mean_touchdown_s", &landsim::ExperimentSummary::mean_touchdown_s)
      .def_readonly("std_touchdown_s", &landsim::ExperimentSummary::std_touchdown_s);

  m.def(
      "run_trial",
      [](const landsim::TrialConfig& cfg) {
        landsim::TrialLog log;
        {
          py::gil_scoped_release nogil;
          log = landsim::RunTrial(cfg);
        }
        return py::make_tuple(landsim::SummarizeErrors(log), TrajectoryDict(log));
      },
      "config"_a, "Returns (ErrorSummary, trajectory dict).");
  m.def(
      "run_experiment",
      [](const landsim::TrialConfig& cfg, int n, const std::vector<std::uint64_t>& seeds) {
        py::gil_scoped_release nogil;
        return landsim::RunExperiment(cfg, n, seeds).summary;
      },
      "config"_a, "trials"_a, "seeds"_a);
  m.def(
      "detector_sweep",
      [](const landsim::TrialConfig& cfg, const std::string& preset, int frames,
         std::uint64_t seed) {
        landsim::DetectorSweepTable t;
        {
          py::gil_scoped_release nogil;
          t = landsim::DetectorSweep(cfg, landsim::NoisePreset(preset, seed), preset,
                                     cfg.hold_pose, frames, seed);
        }
        py::dict out;
        for (std::size_t i = 0; i < t.stats.size(); ++i) {
          const auto& s = t.stats[i];
          out[landsim::kObservedNames[i]] =
              py::dict("raw_avg"_a = s.raw_avg, "raw_std"_a = s.raw_std, "kf_avg"_a = s.kf_avg,
                       "kf_std"_a = s.kf_std);
        }
        out["valid_frames"] = t.valid_frames;
        return out;
      },
      "config"_a, "preset"_a = "sift-like", "frames"_a = 1000, "seed"_a = 1);
  m.def(
      "wind_sweep",
      [](const landsim::TrialConfig& cfg, const std::vector<double>& biases,
         const std::vector<std::uint64_t>& seeds) {
        std::vector<landsim::WindSweepRow> rows;
        {
          py::gil_scoped_release nogil;
          rows = landsim::WindSweep(cfg, biases, seeds);
        }
        std::vector<std::pair<double, landsim::ErrorSummary>> out;
        for (const auto& r : rows) out.emplace_back(r.bias_mps, r.summary);
        return out;
      },
      "config"_a, "biases"_a, "seeds"_a, "Returns (bias_mps, ErrorSummary) pairs.");
}
