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

// land-sim: command line front end for the landing simulation.
//
//   land-sim run --config FILE [--controller p|pd|pid] [--seed N] [--out DIR]
//   land-sim experiment --config FILE --trials N --seeds s1,s2,... --out DIR
//   land-sim detector-sweep --config FILE --frames N --out DIR
//   land-sim wind-sweep --config FILE --bias-list 0,0.25,0.5 --out DIR
//
// Exit codes: 0 success, 2 configuration error, 3 trial timeout (run only),
// 1 any other failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "landsim/csv.hpp"
#include "landsim/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitTimeout = 3;

std::string TrialFileName(const landsim::TrialConfig& cfg) {
  return std::string("trial_") + landsim::ControllerKindName(cfg.controller) +
         "_seed" + std::to_string(cfg.seed) + ".csv";
}

std::string Join(const std::string& dir, const std::string& name) {
  return dir.empty() ? name : dir + "/" + name;
}

void PrintSummary(const landsim::ErrorSummary& s) {
  std::printf(
      "%-4s seed %-4llu %s  t=%.2f s  offset=(%.4f, %.4f) m  angle=%.3f deg  "
      "rmse=(%.2f, %.2f, %.2f)\n",
      landsim::ControllerKindName(s.controller),
      static_cast<unsigned long long>(s.seed),
      s.success ? "landed " : "TIMEOUT", s.touchdown_s, s.land_offset_x,
      s.land_offset_y, s.land_angle_deg, s.rmse[0], s.rmse[1], s.rmse[2]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop monocular landing simulation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::string> controller;
  std::optional<std::uint64_t> seed;
  int trials = 5;
  std::string seeds_text;
  int frames = 1000;
  std::string bias_text = "0,0.25,0.5";

  auto* run = app.add_subcommand("run", "Run one landing trial");
  run->add_option("--config", config_path, "Trial configuration file")->required();
  run->add_option("--controller", controller, "p, pd or pid");
  run->add_option("--seed", seed, "Trial seed");
  run->add_option("--out", out_dir, "Output directory");

  auto* exp = app.add_subcommand("experiment", "Run seeded trials and aggregate");
  exp->add_option("--config", config_path, "Trial configuration file")->required();
  exp->add_option("--controller", controller, "p, pd or pid");
  exp->add_option("--trials", trials, "Number of trials")->required();
  exp->add_option("--seeds", seeds_text, "Comma-separated seeds");
  exp->add_option("--out", out_dir, "Output directory")->required();

  auto* det = app.add_subcommand("detector-sweep", "Raw vs filtered detection error at hover");
  det->add_option("--config", config_path, "Trial configuration file")->required();
  det->add_option("--frames", frames, "Frames per preset")->required();
  det->add_option("--seed", seed, "Sweep seed");
  det->add_option("--out", out_dir, "Output directory")->required();

  auto* wind = app.add_subcommand("wind-sweep", "Landing success under bias wind");
  wind->add_option("--config", config_path, "Trial configuration file")->required();
  wind->add_option("--bias-list", bias_text, "Comma-separated wind speeds, m/s");
  wind->add_option("--seeds", seeds_text, "Comma-separated seeds");
  wind->add_option("--controller", controller, "p, pd or pid");
  wind->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  landsim::TrialConfig cfg;
  std::vector<std::uint64_t> seeds;
  try {
    cfg = landsim::LoadTrialConfig(config_path);
    if (controller) cfg.controller = landsim::ParseControllerKind(*controller);
    if (seed) cfg.seed = *seed;
    seeds = seeds_text.empty() ? cfg.seeds : landsim::ParseSeedList(seeds_text);
    cfg.Validate();
  } catch (const landsim::Error& e) {
    std::cerr << "land-sim: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (run->parsed()) {
      const landsim::TrialLog log = landsim::RunTrial(cfg);
      const landsim::ErrorSummary s = landsim::SummarizeErrors(log);
      landsim::WriteFile(Join(out_dir, TrialFileName(cfg)),
                         [&](std::ostream& o) { landsim::WriteTrialCsv(o, log); });
      landsim::WriteFile(Join(out_dir, "summary.csv"),
                         [&](std::ostream& o) { landsim::WriteSummaryCsv(o, {s}); });
      PrintSummary(s);
      return log.timed_out ? kExitTimeout : 0;
    }

    if (exp->parsed()) {
      if (trials < 1 || seeds.size() < static_cast<std::size_t>(trials)) {
        std::cerr << "land-sim: need --trials >= 1 and at least that many seeds\n";
        return kExitConfig;
      }
      const auto res = landsim::RunExperiment(cfg, trials, seeds);
      for (const auto& log : res.logs) {
        landsim::TrialConfig named = cfg;
        named.seed = log.seed;
        landsim::WriteFile(Join(out_dir, TrialFileName(named)),
                           [&](std::ostream& o) { landsim::WriteTrialCsv(o, log); });
      }
      landsim::WriteFile(Join(out_dir, "summary.csv"), [&](std::ostream& o) {
        landsim::WriteSummaryCsv(o, res.summary.trials);
      });
      landsim::WriteFile(Join(out_dir, "aggregate.csv"), [&](std::ostream& o) {
        landsim::WriteAggregateCsv(o, landsim::ControllerKindName(cfg.controller),
                                   res.summary);
      });
      for (const auto& s : res.summary.trials) PrintSummary(s);
      std::printf("success rate %.2f, mean touchdown %.2f s, mean planar offset %.4f m\n",
                  res.summary.success_rate, res.summary.mean_touchdown_s,
                  res.summary.mean_planar_offset);
      return 0;
    }

    if (det->parsed()) {
      if (frames < 100) {
        std::cerr << "land-sim: --frames must be at least 100\n";
        return kExitConfig;
      }
      for (const auto& name : cfg.sweep_presets) {
        const auto table = landsim::DetectorSweep(
            cfg, landsim::NoisePreset(name), name, cfg.hold_pose, frames, cfg.seed);
        landsim::WriteFile(Join(out_dir, "detector_" + name + ".csv"),
                           [&](std::ostream& o) { landsim::WriteDetectorCsv(o, table); });
        std::printf("%-10s valid %d/%d\n", name.c_str(), table.valid_frames, table.frames);
        for (int i = 0; i < 5; ++i) {
          const auto& st = table.stats[i];
          std::printf("  %-7s raw %9.3f +- %9.3f   kf %9.3f +- %9.3f\n",
                      landsim::kObservedNames[i], st.raw_avg, st.raw_std, st.kf_avg,
                      st.kf_std);
        }
      }
      return 0;
    }

    if (wind->parsed()) {
      std::vector<double> biases;
      try {
        biases = landsim::ParseDoubleList(bias_text);
      } catch (const landsim::Error& e) {
        std::cerr << "land-sim: " << e.what() << "\n";
        return kExitConfig;
      }
      const auto rows = landsim::WindSweep(cfg, biases, seeds);
      landsim::WriteFile(Join(out_dir, "wind_sweep.csv"),
                         [&](std::ostream& o) { landsim::WriteWindCsv(o, rows); });
      for (const auto& r : rows) {
        std::printf("wind %.2f m/s  ", r.bias_mps);
        PrintSummary(r.summary);
      }
      return 0;
    }
  } catch (const landsim::Error& e) {
    std::cerr << "land-sim: " << e.what() << "\n";
    return e.kind() == landsim::ErrorKind::kConfigError ? kExitConfig : 1;
  }
  return 1;
}
