// Copyright 2026 The ganlab Authors
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

// ganlab: run, verify and plot the toy experiments.
//
//   ganlab <experiment> --seed 1 --out runs/em [--config file] [--set k=v]... [--verify]
//   ganlab verify <run-dir>
//   ganlab plot --csv file.csv --kind minimax --out file.svg
//
// Exit codes: 0 ok, 2 config or usage error, 3 numeric abort,
// 4 verification failure, 1 anything else.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ganlab/config.hpp"
#include "ganlab/error.hpp"
#include "ganlab/experiments.hpp"
#include "ganlab/svg.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitVerify = 4;

int print_report(const ganlab::VerifyReport& report) {
  for (const auto& c : report.checks) {
    std::cout << c.name << ": " << (c.passed ? "PASS" : "FAIL");
    if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
    std::cout << '\n';
  }
  std::cout << (report.passed() ? "verify: PASS" : "verify: FAIL") << '\n';
  return report.passed() ? 0 : kExitVerify;
}

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> overrides;
  bool verify = false;
};

int run_experiment(ganlab::ExperimentName name, const RunOptions& o) {
  ganlab::ExperimentSpec spec;
  spec.name = name;
  if (!o.config.empty()) spec.config = ganlab::Config::load(o.config);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ganlab::UsageError("--set expects key=value, got " + kv);
    spec.config.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  spec.seed = o.seed;
  spec.out_dir = o.out;
  const ganlab::RunArtifact art = ganlab::run(spec);
  std::cout << "wrote " << art.manifest.string() << " (" << art.csv.size() << " csv, "
            << art.svg.size() << " svg)\n";
  return o.verify ? print_report(ganlab::verify(art.run_dir)) : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toy GAN laboratory: divergences, earth mover's distance, minimax dynamics, WGAN"};
  app.require_subcommand(1);

  std::vector<RunOptions> options(ganlab::all_experiments().size());
  std::vector<CLI::App*> experiment_cmds;
  for (auto name : ganlab::all_experiments()) {
    auto& o = options[static_cast<std::size_t>(name)];
    auto* sub = app.add_subcommand(std::string(ganlab::to_string(name)), "Run " +
                                   std::string(ganlab::to_string(name)));
    sub->add_option("--config", o.config, "key = value file or a run's manifest.json");
    sub->add_option("--seed", o.seed, "Run seed (may also come from the config)");
    sub->add_option("--out", o.out, "Output directory")->required();
    sub->add_option("--set", o.overrides, "Override one config key (key=value)");
    sub->add_flag("--verify", o.verify, "Verify the run after it finishes");
    experiment_cmds.push_back(sub);
  }

  std::string verify_dir;
  auto* verify_cmd = app.add_subcommand("verify", "Re-check a finished run from its stored CSVs");
  verify_cmd->add_option("run_dir", verify_dir, "Run directory")->required();

  std::string plot_csv;
  std::string plot_kind;
  std::string plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "Render a stored CSV as SVG");
  plot_cmd->add_option("--csv", plot_csv, "Input CSV")->required();
  plot_cmd->add_option("--kind", plot_kind, "Plot kind")->required();
  plot_cmd->add_option("--out", plot_out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    for (auto name : ganlab::all_experiments()) {
      if (experiment_cmds[static_cast<std::size_t>(name)]->parsed()) {
        return run_experiment(name, options[static_cast<std::size_t>(name)]);
      }
    }
    if (verify_cmd->parsed()) return print_report(ganlab::verify(verify_dir));
    if (plot_cmd->parsed()) {
      const std::string svg = ganlab::plot(plot_csv, plot_kind);
      std::ofstream out(plot_out, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + plot_out);
      out << svg;
      return 0;
    }
  } catch (const ganlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ganlab::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ganlab::NumericError& e) {
    std::cerr << "numeric abort: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
