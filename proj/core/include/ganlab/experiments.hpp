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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ganlab/config.hpp"

namespace ganlab {

enum class ExperimentName {
  divergence_sweep,
  minimax_sim,
  em_demo,
  parallel_lines,
  optimal_d,
  vanishing_gradient,
  mode_collapse,
  train,
};

std::string_view to_string(ExperimentName name) noexcept;
ExperimentName parse_experiment_name(std::string_view text);
std::vector<ExperimentName> all_experiments();

/// The seed may come from here or from a "seed" key in the config; one of
/// the two is required. An explicit seed here wins.
struct ExperimentSpec {
  ExperimentName name = ExperimentName::em_demo;
  Config config;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir;
};

/// Paths are relative to the run directory.
struct RunArtifact {
  std::filesystem::path run_dir;
  std::filesystem::path manifest;
  std::vector<std::string> csv;
  std::vector<std::string> svg;
  std::vector<std::string> other;
};

/// Validates parameters, writes manifest.json with status "running", runs
/// the experiment and rewrites the manifest with status "ok" and the output
/// list. On NumericError the manifest records status "failed", files
/// written so far stay in place, and the error propagates.
RunArtifact run(const ExperimentSpec& spec);

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool passed() const noexcept;
};

/// Re-checks a finished run from its manifest and stored CSVs only. Missing
/// files become failed checks.
VerifyReport verify(const std::filesystem::path& run_dir);

/// Spearman rank correlation; ties get their average rank. NaN when either
/// input is constant.
double spearman(std::span<const double> a, std::span<const double> b);

}  // namespace ganlab
