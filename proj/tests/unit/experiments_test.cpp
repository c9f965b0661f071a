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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "ganlab/csv.hpp"
#include "ganlab/error.hpp"
#include "ganlab/experiments.hpp"
#include "json.hpp"

#ifndef GANLAB_CLI
#error "GANLAB_CLI must name the ganlab executable"
#endif

namespace ganlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ganlab_experiments_test" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

json manifest(const fs::path& dir) { return json::parse(slurp(dir / "manifest.json")); }

RunArtifact run_with(ExperimentName name, const std::string& dir, const std::string& text,
                     std::optional<std::uint64_t> seed = 1) {
  ExperimentSpec spec;
  spec.name = name;
  spec.config = Config::parse(text);
  spec.seed = seed;
  spec.out_dir = fresh_dir(dir);
  return run(spec);
}

struct CliResult {
  int code = -1;
  std::string output;
};

CliResult cli(const std::string& args) {
  const std::string cmd = std::string(GANLAB_CLI) + " " + args + " 2>&1";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe)) r.output += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

TEST(Names, RoundTrip) {
  for (auto n : all_experiments()) EXPECT_EQ(parse_experiment_name(to_string(n)), n);
  EXPECT_EQ(all_experiments().size(), 8u);
  EXPECT_THROW(parse_experiment_name("nope"), UsageError);
}

TEST(Spearman, Values) {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{2, 4, 6, 8, 100};
  const std::vector<double> c{5, 4, 3, 2, 1};
  const std::vector<double> flat{1, 1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(spearman(a, b), 1.0);
  EXPECT_DOUBLE_EQ(spearman(a, c), -1.0);
  EXPECT_TRUE(std::isnan(spearman(a, flat)));
  // Ties take average ranks: x = {1,2,2,3} has ranks {1, 2.5, 2.5, 4}.
  const std::vector<double> x{1, 2, 2, 3};
  const std::vector<double> y{1, 2, 3, 4};
  EXPECT_NEAR(spearman(x, y), 0.9486832980505138, 1e-12);
}

TEST(Run, SeedIsRequired) {
  try {
    run_with(ExperimentName::em_demo, "noseed", "", std::nullopt);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "seed");
  }
  EXPECT_NO_THROW(run_with(ExperimentName::em_demo, "cfgseed", "seed = 4\n", std::nullopt));
}

TEST(Run, UnknownKeyRejectedBeforeWriting) {
  const fs::path dir = fresh_dir("unknown");
  EXPECT_THROW(run_with(ExperimentName::em_demo, "unknown", "stpes = 3\n"), ConfigError);
  EXPECT_FALSE(fs::exists(dir / "manifest.json"));
}

TEST(EmDemo, OutputsAndVerify) {
  const auto art = run_with(ExperimentName::em_demo, "em", "");
  const auto t = read_csv(art.run_dir / "em_demo.csv");
  EXPECT_EQ(t.numbers("w").back(), 5.0);
  const auto m = manifest(art.run_dir);
  EXPECT_EQ(m["status"], "ok");
  EXPECT_EQ(m["experiment"], "em_demo");
  EXPECT_EQ(m["config"]["p"], "3,2,1,4");
  EXPECT_EQ(m["defaults_filled"]["p"], "paper");
  for (const auto& f : m["outputs"]["csv"]) EXPECT_TRUE(fs::exists(art.run_dir / f.get<std::string>()));
  for (const auto& f : m["outputs"]["svg"]) EXPECT_TRUE(fs::exists(art.run_dir / f.get<std::string>()));
  EXPECT_TRUE(verify(art.run_dir).passed());
}

TEST(EmDemo, TamperedResultFailsVerify) {
  const auto art = run_with(ExperimentName::em_demo, "em_tamper", "");
  const fs::path csv = art.run_dir / "em_demo.csv";
  auto t = read_csv(csv);
  {
    CsvWriter w(csv, t.header);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      for (std::size_t j = 0; j < t.header.size(); ++j) {
        const bool last_w = i + 1 == t.rows.size() && t.header[j] == "w";
        w.cell(last_w ? std::string("4") : t.rows[i][j]);
      }
      w.end_row();
    }
  }
  const auto report = verify(art.run_dir);
  EXPECT_FALSE(report.passed());
  bool named = false;
  for (const auto& c : report.checks) named |= c.name == "EM=5" && !c.passed;
  EXPECT_TRUE(named);
}

TEST(EmDemo, MismatchedBinsRejected) {
  EXPECT_THROW(run_with(ExperimentName::em_demo, "em_bins", "p = 0.5,0.5\nq = 1,0,0\n"),
               UsageError);
}

TEST(Minimax, SpiralsOutward) {
  const auto art = run_with(ExperimentName::minimax_sim, "mm", "steps = 200\n");
  const auto t = read_csv(art.run_dir / "minimax.csv");
  const auto r = t.numbers("radius");
  EXPECT_EQ(r.front(), std::hypot(1.0, 1.0));
  EXPECT_GT(r.back(), r.front());
  EXPECT_TRUE(verify(art.run_dir).passed());
}

TEST(Minimax, ZeroStepsKeepsInitialRow) {
  const auto art = run_with(ExperimentName::minimax_sim, "mm0", "steps = 0\n");
  EXPECT_EQ(read_csv(art.run_dir / "minimax.csv").rows.size(), 1u);
}

TEST(DivergenceSweep, Verifies) {
  const auto art = run_with(ExperimentName::divergence_sweep, "sweep", "");
  const auto t = read_csv(art.run_dir / "divergence_sweep.csv");
  EXPECT_EQ(t.rows.size(), 13u);
  EXPECT_EQ(t.number(0, "kl_pq"), 0.0);
  EXPECT_TRUE(verify(art.run_dir).passed());
}

TEST(ParallelLines, SaturatesOffZero) {
  const auto art = run_with(ExperimentName::parallel_lines, "lines",
                            "empirical.samples = 2000\n");
  const auto t = read_csv(art.run_dir / "parallel_lines.csv");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double theta = t.number(i, "theta_or_param");
    if (theta == 0.0) {
      EXPECT_EQ(t.number(i, "js_nats"), 0.0);
    } else {
      EXPECT_TRUE(std::isinf(t.number(i, "kl_pq")));
      EXPECT_NEAR(t.number(i, "js_nats"), std::log(2.0), 1e-15);
      EXPECT_NEAR(t.number(i, "w"), std::abs(theta), 1e-15);
    }
  }
  EXPECT_TRUE(verify(art.run_dir).passed());
}

TEST(Run, SameSeedSameBytes) {
  const auto a = run_with(ExperimentName::parallel_lines, "det_a", "empirical.samples = 500\n", 9);
  const auto b = run_with(ExperimentName::parallel_lines, "det_b", "empirical.samples = 500\n", 9);
  const auto c = run_with(ExperimentName::parallel_lines, "det_c", "empirical.samples = 500\n", 10);
  const std::string f = "parallel_lines_empirical.csv";
  EXPECT_EQ(slurp(a.run_dir / f), slurp(b.run_dir / f));
  EXPECT_NE(slurp(a.run_dir / f), slurp(c.run_dir / f));
}

TEST(Run, ManifestReproducesRun) {
  const auto a = run_with(ExperimentName::minimax_sim, "rerun_a", "eta = 0.05\nsteps = 50\n");
  ExperimentSpec spec;
  spec.name = ExperimentName::minimax_sim;
  spec.config = Config::load(a.manifest);
  spec.out_dir = fresh_dir("rerun_b");
  const auto b = run(spec);
  EXPECT_EQ(slurp(a.run_dir / "minimax.csv"), slurp(b.run_dir / "minimax.csv"));
  EXPECT_EQ(manifest(a.run_dir)["config"], manifest(b.run_dir)["config"]);
}

TEST(Train, ShortRunWritesEverything) {
  const auto art = run_with(ExperimentName::train, "train_short",
                            "replicas = 1\ntrain.steps = 20\noracle.every = 10\n"
                            "oracle.samples = 1000\ncheckpoint.every = 10\n");
  const auto oracle = read_csv(art.run_dir / "oracle_seed1.csv");
  ASSERT_EQ(oracle.rows.size(), 3u);
  EXPECT_EQ(oracle.rows[0][oracle.column("w_estimate")], "na");
  EXPECT_TRUE(fs::exists(art.run_dir / "metrics_seed1.csv"));
  EXPECT_TRUE(fs::exists(art.run_dir / "checkpoints" / "critic_seed1_step20.bin"));
  EXPECT_EQ(read_csv(art.run_dir / "metrics_seed1.csv").rows.size(), 20u);
}

TEST(Cli, ExitCodes) {
  const std::string out = fresh_dir("cli").string();
  auto ok = cli("em_demo --seed 1 --out " + out + " --verify");
  EXPECT_EQ(ok.code, 0) << ok.output;
  EXPECT_NE(ok.output.find("verify: PASS"), std::string::npos);

  EXPECT_EQ(cli("verify " + out).code, 0);
  EXPECT_EQ(cli("em_demo --out " + fresh_dir("cli_noseed").string()).code, 2);
  EXPECT_EQ(cli("em_demo --seed 1").code, 2);
  EXPECT_EQ(cli("em_demo --seed 1 --set bogus=1 --out " + fresh_dir("cli_bogus").string()).code,
            2);
  EXPECT_EQ(cli("em_demo --seed 1 --set p=1,0 --set q=0,0,1 --out " +
                fresh_dir("cli_bins").string()).code,
            2);
  EXPECT_EQ(cli("no_such_command").code, 2);
}

TEST(Cli, VerifyFailureIsFour) {
  const auto art = run_with(ExperimentName::em_demo, "cli_tamper", "");
  const fs::path csv = art.run_dir / "em_plan.csv";
  std::ofstream(csv) << "from,to,amount\n0,0,1\n";
  const auto r = cli("verify " + art.run_dir.string());
  EXPECT_EQ(r.code, 4) << r.output;
  EXPECT_NE(r.output.find("verify: FAIL"), std::string::npos);
}

TEST(Cli, NumericAbortIsThree) {
  const auto r = cli("train --seed 1 --out " + fresh_dir("cli_blowup").string() +
                     " --set replicas=1 --set train.steps=50 --set train.mode=vanilla_gan"
                     " --set train.g.lr=1e308 --set train.g.identity_init=false"
                     " --set train.g.hidden=8 --set oracle.every=10");
  EXPECT_EQ(r.code, 3) << r.output;
}

TEST(Cli, Plot) {
  const auto art = run_with(ExperimentName::minimax_sim, "cli_plot", "steps = 10\n");
  const fs::path svg = fresh_dir("cli_plot_svg").string() + ".svg";
  const auto r = cli("plot --csv " + (art.run_dir / "minimax.csv").string() +
                     " --kind minimax --out " + svg.string());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_NE(slurp(svg).find("</svg>"), std::string::npos);
  EXPECT_EQ(cli("plot --csv " + (art.run_dir / "minimax.csv").string() +
                " --kind em_demo --out " + svg.string()).code,
            2);
}

}  // namespace
}  // namespace ganlab
