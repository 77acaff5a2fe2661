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

#include "landsim/csv.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

namespace landsim {
namespace {

std::string Bool01(bool b) { return b ? "1" : "0"; }

std::vector<std::string> SummaryRow(const ErrorSummary& s) {
  return {ControllerKindName(s.controller), std::to_string(s.seed),
          FormatDouble(s.rmse[0]),          FormatDouble(s.rmse[1]),
          FormatDouble(s.rmse[2]),          FormatDouble(s.stdev[0]),
          FormatDouble(s.stdev[1]),         FormatDouble(s.stdev[2]),
          FormatDouble(s.land_offset_x),    FormatDouble(s.land_offset_y),
          FormatDouble(s.land_angle_deg),   FormatDouble(s.touchdown_s),
          Bool01(s.success)};
}

}  // namespace

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void CsvWriter::WriteRow(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) *out_ << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
      *out_ << f;
      continue;
    }
    *out_ << '"';
    for (char c : f) {
      if (c == '"') *out_ << '"';
      *out_ << c;
    }
    *out_ << '"';
  }
  *out_ << "\r\n";
}

void WriteTrialCsv(std::ostream& out, const TrialLog& log) {
  CsvWriter w(out);
  w.WriteHeader(kTrialColumns);
  for (const auto& r : log.steps) {
    std::vector<std::string> row = {
        FormatDouble(r.t),          FormatDouble(r.truth.x),
        FormatDouble(r.truth.y),    FormatDouble(r.truth.z),
        FormatDouble(r.truth.psi_deg), Bool01(r.has_detection && r.raw.valid)};
    const ObsVec z = r.has_detection ? r.raw.z.AsVector()
                                     : ObsVec::Constant(std::nan(""));
    for (int i = 0; i < 5; ++i) row.push_back(FormatDouble(z[i]));
    for (int i = 0; i < 5; ++i) row.push_back(FormatDouble(r.kf[i]));
    for (int i = 0; i < 3; ++i) row.push_back(FormatDouble(r.error[i]));
    for (int i = 0; i < 3; ++i) row.push_back(FormatDouble(r.command.u[i]));
    row.push_back(FormatDouble(r.command.u_z));
    row.push_back(r.event);
    w.WriteRow(row);
  }
}

void WriteSummaryCsv(std::ostream& out, const std::vector<ErrorSummary>& rows) {
  CsvWriter w(out);
  w.WriteHeader(kSummaryColumns);
  for (const auto& s : rows) w.WriteRow(SummaryRow(s));
}

void WriteAggregateCsv(std::ostream& out, const std::string& label,
                       const ExperimentSummary& s) {
  CsvWriter w(out);
  w.WriteRow({"controller", "n_trials", "success_rate", "mean_offset_x_m",
              "std_offset_x_m", "mean_offset_y_m", "std_offset_y_m",
              "mean_planar_offset_m", "mean_angle_deg", "std_angle_deg",
              "mean_touchdown_s", "std_touchdown_s", "mean_rmse_x_px",
              "mean_rmse_y_px", "mean_rmse_theta_deg"});
  w.WriteRow({label, std::to_string(s.trials.size()),
              FormatDouble(s.success_rate), FormatDouble(s.mean_offset_x),
              FormatDouble(s.std_offset_x), FormatDouble(s.mean_offset_y),
              FormatDouble(s.std_offset_y), FormatDouble(s.mean_planar_offset),
              FormatDouble(s.mean_angle_deg), FormatDouble(s.std_angle_deg),
              FormatDouble(s.mean_touchdown_s), FormatDouble(s.std_touchdown_s),
              FormatDouble(s.mean_rmse[0]), FormatDouble(s.mean_rmse[1]),
              FormatDouble(s.mean_rmse[2])});
}

void WriteDetectorCsv(std::ostream& out, const DetectorSweepTable& t) {
  CsvWriter w(out);
  w.WriteRow({"preset", "seed", "variable", "raw_avg", "raw_std", "kf_avg",
              "kf_std", "valid_frames", "kf_frames", "frames"});
  for (int i = 0; i < 5; ++i) {
    const auto& s = t.stats[i];
    w.WriteRow({t.preset, std::to_string(t.seed), kObservedNames[i],
                FormatDouble(s.raw_avg), FormatDouble(s.raw_std),
                FormatDouble(s.kf_avg), FormatDouble(s.kf_std),
                std::to_string(t.valid_frames), std::to_string(t.kf_frames),
                std::to_string(t.frames)});
  }
}

void WriteWindCsv(std::ostream& out, const std::vector<WindSweepRow>& rows) {
  CsvWriter w(out);
  std::vector<std::string> header = {"wind_bias_mps"};
  header.insert(header.end(), kSummaryColumns.begin(), kSummaryColumns.end());
  w.WriteRow(header);
  for (const auto& r : rows) {
    std::vector<std::string> row = {FormatDouble(r.bias_mps)};
    const auto rest = SummaryRow(r.summary);
    row.insert(row.end(), rest.begin(), rest.end());
    w.WriteRow(row);
  }
}

void EnsureDirectory(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::kIoFailure, "cannot create directory " + dir + ": " + ec.message());
  }
}

std::ofstream OpenForWrite(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) EnsureDirectory(parent.string());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::kIoFailure, "cannot open " + path + " for writing");
  return f;
}

void FinishWrite(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw Error(ErrorKind::kIoFailure, "failed writing " + path);
}

}  // namespace landsim
