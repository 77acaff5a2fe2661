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

#ifndef LANDSIM_CSV_HPP_
#define LANDSIM_CSV_HPP_

#include <array>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "landsim/harness.hpp"

namespace landsim {

inline constexpr std::array<const char*, 24> kTrialColumns = {
    "t",       "gt_x",     "gt_y",     "gt_z",     "gt_psi",   "z_valid",
    "z_xc",    "z_yc",     "z_ow",     "z_oh",     "z_theta",  "kf_xc",
    "kf_yc",   "kf_ow",    "kf_oh",    "kf_theta", "e_x",      "e_y",
    "e_theta", "u_vx",     "u_vy",     "u_psirate", "u_z",     "event"};

inline constexpr std::array<const char*, 13> kSummaryColumns = {
    "controller",      "seed",           "rmse_x_px",      "rmse_y_px",
    "rmse_theta_deg",  "std_x_px",       "std_y_px",       "std_theta_deg",
    "land_offset_x_m", "land_offset_y_m", "land_angle_deg", "touchdown_s",
    "success"};

// 9 significant digits ("%.9g"); non-finite values print as nan/inf.
std::string FormatDouble(double v);

// RFC 4180 writer: CRLF line endings; fields containing a comma, quote or
// line break are quoted with embedded quotes doubled.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(&out) {}
  void WriteRow(const std::vector<std::string>& fields);

  template <std::size_t N>
  void WriteHeader(const std::array<const char*, N>& names) {
    WriteRow(std::vector<std::string>(names.begin(), names.end()));
  }

 private:
  std::ostream* out_;
};

void WriteTrialCsv(std::ostream& out, const TrialLog& log);
void WriteSummaryCsv(std::ostream& out, const std::vector<ErrorSummary>& rows);
void WriteAggregateCsv(std::ostream& out, const std::string& label,
                       const ExperimentSummary& summary);
void WriteDetectorCsv(std::ostream& out, const DetectorSweepTable& table);
void WriteWindCsv(std::ostream& out, const std::vector<WindSweepRow>& rows);

// Opens `path` for writing (creating parent directories) and runs `fill`.
// Throws kIoFailure with the path on any failure.
template <typename Fill>
void WriteFile(const std::string& path, Fill&& fill);

void EnsureDirectory(const std::string& dir);
std::ofstream OpenForWrite(const std::string& path);
void FinishWrite(std::ofstream& f, const std::string& path);

template <typename Fill>
void WriteFile(const std::string& path, Fill&& fill) {
  std::ofstream f = OpenForWrite(path);
  fill(static_cast<std::ostream&>(f));
  FinishWrite(f, path);
}

}  // namespace landsim

#endif  // LANDSIM_CSV_HPP_
