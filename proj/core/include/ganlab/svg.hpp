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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ganlab {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
};

/// Self-contained line chart. Non-finite points (and nonpositive ones on a
/// log axis) break the line. Output bytes depend only on the inputs.
std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);

/// Plot kinds understood by plot(): "minimax", "divergence_sweep",
/// "parallel_lines", "densities", "em_demo", "optimal_d",
/// "vanishing_gradient", "mode_collapse", "metrics", "oracle".
std::vector<std::string_view> plot_kinds();

/// Renders a CSV produced by an experiment. Throws UsageError if the CSV
/// lacks the columns the kind needs.
std::string plot(const std::filesystem::path& csv, std::string_view kind);

}  // namespace ganlab
