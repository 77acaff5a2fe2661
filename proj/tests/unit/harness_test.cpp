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


#include "landsim/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "landsim/csv.hpp"

namespace landsim {
namespace {

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF records.
std::vector<std::vector<std::string>> ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      row.push_back(field);
      rows.push_back(row);
      row.clear();
      field.clear();
      ++i;
    } else {
      field += c;
    }
  }
  EXPECT_TRUE(field.empty() && row.empty()) << "unterminated record";
  return rows;
}

TrialLog SyntheticLog(const std::vector<double>& ex) {
  TrialLog log;
  for (std::size_t i = 0; i < ex.size(); ++i) {
    StepRecord r;
    r.t = static_cast<double>(i) / 15.0;
    r.locked = true;
    r.error = {ex[i], 0.0, 0.0};
    log.steps.push_back(r);
  }
  log.touchdown = TouchdownReason::kLandCommand;
  log.touchdown_time = log.steps.back().t;
  return log;
}

TrialConfig FastConfig() {
  TrialConfig cfg = DefaultTrialConfig();
  cfg.noise_preset = "zero";
  cfg.noise = NoisePreset("zero");
  cfg.max_duration = 60.0;
  return cfg;
}

TEST(SummarizeErrors, RmseOfTwoSamples) {
  const ErrorSummary s = SummarizeErrors(SyntheticLog({3.0, 4.0}));
  EXPECT_NEAR(s.rmse[0], std::sqrt(12.5), 1e-12);
  EXPECT_NEAR(s.avg[0], 3.5, 1e-12);
  EXPECT_NEAR(s.stdev[0], 0.5, 1e-12);
  EXPECT_EQ(s.samples, 2);
}

TEST(SummarizeErrors, AllZeroLog) {
  const ErrorSummary s = SummarizeErrors(SyntheticLog(std::vector<double>(10, 0.0)));
  EXPECT_EQ(s.rmse[0], 0.0);
  EXPECT_EQ(s.stdev[0], 0.0);
}

TEST(SummarizeErrors, MatchesTwoPassOracle) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n(4.0, 12.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> e(50 + trial * 7);
    for (double& v : e) v = n(rng);
    const ErrorSummary s = SummarizeErrors(SyntheticLog(e));
    double mean = 0.0;
    for (double v : e) mean += v;
    mean /= static_cast<double>(e.size());
    double var = 0.0, sq = 0.0;
    for (double v : e) {
      var += (v - mean) * (v - mean);
      sq += v * v;
    }
    var /= static_cast<double>(e.size());
    EXPECT_NEAR(s.avg[0], mean, 1e-12);
    EXPECT_NEAR(s.stdev[0], std::sqrt(var), 1e-12);
    EXPECT_NEAR(s.rmse[0], std::sqrt(sq / static_cast<double>(e.size())), 1e-12);
  }
}

TEST(SummarizeErrors, EmptyLogThrows) {
  try {
    SummarizeErrors(TrialLog{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyLog);
  }
}

TEST(RunTrial, ZeroNoiseLandsOnPad) {
  TrialConfig cfg = FastConfig();
  cfg.initial = {1.0, 1.0, 3.5, 0.0};
  const TrialLog log = RunTrial(cfg);
  ASSERT_NE(log.touchdown, TouchdownReason::kNone);
  EXPECT_FALSE(log.timed_out);
  const ErrorSummary s = SummarizeErrors(log);
  EXPECT_LT(s.PlanarOffset(), 0.05);

  int touchdowns = 0;
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    if (i > 0) EXPECT_GT(log.steps[i].t, log.steps[i - 1].t);
    if (log.steps[i].event.find("touchdown") != std::string::npos) ++touchdowns;
  }
  EXPECT_EQ(touchdowns, 1);
  EXPECT_EQ(CountDescentGateViolations(log, cfg.altitude), 0);
}

TEST(RunTrial, FullDropoutNeverLands) {
  TrialConfig cfg = FastConfig();
  cfg.noise.dropout_rate = 1.0;
  cfg.max_duration = 10.0;
  const TrialLog log = RunTrial(cfg);
  EXPECT_EQ(log.touchdown, TouchdownReason::kNone);
  EXPECT_TRUE(log.timed_out);
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    EXPECT_FALSE(log.steps[i].raw.valid);
    if (i > 0) EXPECT_GT(log.steps[i].kf_trace, log.steps[i - 1].kf_trace);
  }
}

TEST(RunTrial, SameConfigGivesIdenticalCsv) {
  TrialConfig cfg = DefaultTrialConfig();
  cfg.max_duration = 4.0;
  std::ostringstream a, b;
  WriteTrialCsv(a, RunTrial(cfg));
  WriteTrialCsv(b, RunTrial(cfg));
  EXPECT_EQ(a.str(), b.str());
}

TEST(RunExperiment, SingleTrialEqualsTrialMetrics) {
  TrialConfig cfg = FastConfig();
  cfg.seed = 3;
  const ExperimentResult r = RunExperiment(cfg, 1, {3});
  const ErrorSummary direct = SummarizeErrors(RunTrial(cfg));
  ASSERT_EQ(r.summary.trials.size(), 1u);
  EXPECT_EQ(r.summary.trials[0].touchdown_s, direct.touchdown_s);
  EXPECT_EQ(r.summary.mean_touchdown_s, direct.touchdown_s);
  EXPECT_EQ(r.summary.mean_planar_offset, direct.PlanarOffset());
  EXPECT_EQ(r.summary.success_rate, 1.0);
}

TEST(RunExperiment, RejectsBadSeedLists) {
  const TrialConfig cfg = FastConfig();
  EXPECT_THROW(RunExperiment(cfg, 0, {1}), Error);
  EXPECT_THROW(RunExperiment(cfg, 2, {1, 1}), Error);
  EXPECT_THROW(RunExperiment(cfg, 3, {1, 2}), Error);
}

TEST(DetectorSweep, ZeroNoiseHasNoError) {
  const TrialConfig cfg = DefaultTrialConfig();
  const DetectorSweepTable t =
      DetectorSweep(cfg, NoisePreset("zero"), "zero", cfg.hold_pose, 100, 1);
  EXPECT_EQ(t.valid_frames, 100);
  for (const auto& s : t.stats) {
    EXPECT_LT(s.raw_avg, 1e-6);
    EXPECT_LT(s.kf_avg, 1e-6);
  }
  EXPECT_THROW(DetectorSweep(cfg, NoisePreset("zero"), "zero", cfg.hold_pose, 99, 1), Error);
}

TEST(DetectorSweep, SameSeedSameTable) {
  const TrialConfig cfg = DefaultTrialConfig();
  std::ostringstream a, b;
  WriteDetectorCsv(a, DetectorSweep(cfg, NoisePreset("orb-like"), "orb-like", cfg.hold_pose, 150, 8));
  WriteDetectorCsv(b, DetectorSweep(cfg, NoisePreset("orb-like"), "orb-like", cfg.hold_pose, 150, 8));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Csv, EmptySummaryIsHeaderOnly) {
  std::ostringstream out;
  WriteSummaryCsv(out, {});
  const auto rows = ParseCsv(out.str());
  ASSERT_EQ(rows.size(), 1u);
  ASSERT_EQ(rows[0].size(), kSummaryColumns.size());
  for (std::size_t i = 0; i < rows[0].size(); ++i) EXPECT_EQ(rows[0][i], kSummaryColumns[i]);
}

TEST(Csv, OneStepLogIsTwoLines) {
  TrialLog log = SyntheticLog({1.5});
  std::ostringstream out;
  WriteTrialCsv(out, log);
  const auto rows = ParseCsv(out.str());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].size(), 24u);
  EXPECT_EQ(rows[1].size(), 24u);
  EXPECT_EQ(rows[0].front(), "t");
  EXPECT_EQ(rows[0].back(), "event");
}

TEST(Csv, QuotesFieldsThatNeedIt) {
  std::ostringstream out;
  CsvWriter(out).WriteRow({"a,b", "say \"hi\"", "plain"});
  EXPECT_EQ(out.str(), "\"a,b\",\"say \"\"hi\"\"\",plain\r\n");
  const auto rows = ParseCsv(out.str());
  EXPECT_EQ(rows[0][0], "a,b");
  EXPECT_EQ(rows[0][1], "say \"hi\"");
}

TEST(Csv, RoundTripKeepsNineDigits) {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(-1000.0, 1000.0);
  std::vector<ErrorSummary> rows;
  for (int i = 0; i < 20; ++i) {
    ErrorSummary s;
    s.seed = static_cast<std::uint64_t>(i + 1);
    s.rmse = {u(rng), u(rng), u(rng) * 1e-6};
    s.stdev = {u(rng), u(rng), u(rng)};
    s.land_offset_x = std::abs(u(rng)) * 1e-4;
    s.land_offset_y = 0.125;
    s.land_angle_deg = std::abs(u(rng));
    s.touchdown_s = 10.5;
    s.success = i % 2 == 0;
    rows.push_back(s);
  }
  std::ostringstream out;
  WriteSummaryCsv(out, rows);
  const auto parsed = ParseCsv(out.str());
  ASSERT_EQ(parsed.size(), rows.size() + 1);
  // %.9g keeps 9 significant digits: relative error at most 5e-9.
  auto near = [](double expect, const std::string& text) {
    const double got = std::stod(text);
    return std::abs(got - expect) <= 5e-9 * std::abs(expect) + 1e-300;
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = parsed[i + 1];
    const auto& s = rows[i];
    EXPECT_EQ(r[0], "pd");
    EXPECT_EQ(std::stoull(r[1]), s.seed);
    EXPECT_TRUE(near(s.rmse[0], r[2]));
    EXPECT_TRUE(near(s.rmse[1], r[3]));
    EXPECT_TRUE(near(s.rmse[2], r[4]));
    EXPECT_TRUE(near(s.stdev[0], r[5]));
    EXPECT_TRUE(near(s.land_offset_x, r[8]));
    EXPECT_NEAR(std::stod(r[9]), 0.125, 1e-9);
    EXPECT_TRUE(near(s.land_angle_deg, r[10]));
    EXPECT_NEAR(std::stod(r[11]), 10.5, 1e-9);
    EXPECT_EQ(r[12], s.success ? "1" : "0");
  }
}

TEST(Csv, UnwritablePathReportsIt) {
  const std::string path = "/proc/landsim-no-such-dir/out.csv";
  try {
    WriteFile(path, [](std::ostream& o) { o << "x"; });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIoFailure);
    EXPECT_NE(std::string(e.what()).find("landsim-no-such-dir"), std::string::npos);
  }
}

TEST(Config, ShippedDefaultsMatchBuiltIns) {
  const TrialConfig file = LoadTrialConfig(LANDSIM_SOURCE_DIR "/configs/default.toml");
  const TrialConfig builtin = DefaultTrialConfig();
  EXPECT_EQ(file.controller, builtin.controller);
  EXPECT_EQ(file.camera.f, builtin.camera.f);
  EXPECT_EQ(file.initial.x, builtin.initial.x);
  EXPECT_EQ(file.initial.psi_deg, builtin.initial.psi_deg);
  EXPECT_EQ(file.filter.q, builtin.filter.q);
  EXPECT_EQ(file.filter.r, builtin.filter.r);
  EXPECT_EQ(file.seeds, builtin.seeds);
  for (auto kind : {ControllerKind::kP, ControllerKind::kPD, ControllerKind::kPID}) {
    for (int ch = 0; ch < 3; ++ch) {
      const PidGains& a = file.gains.at(kind)[ch];
      const PidGains& b = builtin.gains.at(kind)[ch];
      EXPECT_EQ(a.kp, b.kp);
      EXPECT_EQ(a.ki, b.ki);
      EXPECT_EQ(a.kd, b.kd);
      EXPECT_EQ(a.out_min, b.out_min);
      EXPECT_EQ(a.out_max, b.out_max);
    }
  }
}

ErrorKind ConfigErrorOf(const std::string& text) {
  try {
    TrialConfigFromMap(ConfigMap::Parse(text));
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kInvalidArgument;
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_EQ(ConfigErrorOf("[trial]\ncontroler = pd\n"), ErrorKind::kConfigError);
  EXPECT_EQ(ConfigErrorOf("[trial]\ncontroller = lqr\n"), ErrorKind::kConfigError);
  EXPECT_EQ(ConfigErrorOf("[camera]\nf_px = wide\n"), ErrorKind::kConfigError);
  EXPECT_EQ(ConfigErrorOf("[camera]\nf_px = 300\nf_px = 310\n"), ErrorKind::kConfigError);
  EXPECT_EQ(ConfigErrorOf("[trial\n"), ErrorKind::kConfigError);
  EXPECT_EQ(ConfigErrorOf("just words\n"), ErrorKind::kConfigError);
  EXPECT_EQ(ConfigErrorOf("[filter]\nr_diag = 1, 2\n"), ErrorKind::kConfigError);
  EXPECT_EQ(ConfigErrorOf("[noise]\npreset = fast\n"), ErrorKind::kConfigError);
  EXPECT_EQ(ConfigErrorOf("[trial]\nmax_duration_s = -1\n"), ErrorKind::kConfigError);
  EXPECT_THROW(LoadTrialConfig("/nonexistent/landsim.toml"), Error);
}

TEST(Config, SectionsCommentsAndOverrides) {
  const TrialConfig c = TrialConfigFromMap(ConfigMap::Parse(
      "# comment\n[trial]\ncontroller = \"pid\"  # inline\nseed = 9\n"
      "[gains.pid]\nx.kp = 0.5\n[wind]\nbias_x = 0.25\n"));
  EXPECT_EQ(c.controller, ControllerKind::kPID);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.gains.at(ControllerKind::kPID)[0].kp, 0.5);
  EXPECT_EQ(c.wind.bias.x(), 0.25);
}

}  // namespace
}  // namespace landsim
