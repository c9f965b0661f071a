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

#include "ganlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ganlab/error.hpp"

namespace ganlab {

double trapezoid(const std::function<double(double)>& f, const Grid& grid) {
  if (grid.points < 2 || !(grid.lo < grid.hi)) {
    throw UsageError("quadrature grid needs >= 2 points and lo < hi");
  }
  const double h = grid.spacing();
  double sum = 0.5 * (f(grid.lo) + f(grid.hi));
  for (std::size_t i = 1; i + 1 < grid.points; ++i) sum += f(grid.node(i));
  return sum * h;
}

double trapezoid(const std::function<double(double)>& f, const Grid& grid,
                 std::span<const double> breaks) {
  std::vector<double> cuts;
  for (double b : breaks) {
    if (b > grid.lo && b < grid.hi) cuts.push_back(b);
  }
  if (cuts.empty()) return trapezoid(f, grid);
  if (grid.points < 2 || !(grid.lo < grid.hi)) {
    throw UsageError("quadrature grid needs >= 2 points and lo < hi");
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.insert(cuts.begin(), grid.lo);
  cuts.push_back(grid.hi);

  const double width = grid.hi - grid.lo;
  const double intervals = static_cast<double>(grid.points - 1);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround((b - a) / width * intervals)));
    const double h = (b - a) / static_cast<double>(n);
    const double fa = f(k == 0 ? a : std::nextafter(a, kInf));
    const double fb = f(k + 2 == cuts.size() ? b : std::nextafter(b, -kInf));
    double sum = 0.5 * (fa + fb);
    for (std::size_t i = 1; i < n; ++i) sum += f(a + static_cast<double>(i) * h);
    total += sum * h;
  }
  return total;
}

std::vector<double> density_breakpoints(const AnalyticDistribution& p,
                                        const AnalyticDistribution& q) {
  std::vector<double> out;
  for (const auto* d : {&p, &q}) {
    if (const auto* u = std::get_if<Uniform1D>(d)) {
      out.push_back(u->lo);
      out.push_back(u->hi);
    }
  }
  return out;
}

Grid covering_grid(const AnalyticDistribution& p,
                   const AnalyticDistribution& q, std::size_t points) {
  const auto [plo, phi] = effective_support(p);
  const auto [qlo, qhi] = effective_support(q);
  return Grid{std::min(plo, qlo), std::max(phi, qhi), points};
}

Grid covering_grid(const AnalyticDistribution& p, std::size_t points) {
  const auto [lo, hi] = effective_support(p);
  return Grid{lo, hi, points};
}

}  // namespace ganlab
