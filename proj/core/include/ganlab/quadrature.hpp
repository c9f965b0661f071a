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

#include <cstddef>
#include <functional>

#include <span>
#include <vector>

#include "ganlab/distributions.hpp"

namespace ganlab {

/// Uniform grid with `points` nodes on [lo, hi], endpoints included.
struct Grid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = 100001;

  double spacing() const noexcept {
    return (hi - lo) / static_cast<double>(points - 1);
  }
  double node(std::size_t i) const noexcept {
    return lo + static_cast<double>(i) * spacing();
  }
};

inline constexpr std::size_t kDefaultQuadraturePoints = 100000;

/// Composite trapezoid rule, summed left to right.
double trapezoid(const std::function<double(double)>& f, const Grid& grid);

/// Same rule applied separately on each piece between `breaks` that fall
/// strictly inside the grid. A piece's inner ends are evaluated one ulp
/// inside it, so a density jump at a break costs nothing. Nodes are shared
/// out in proportion to piece length. With no interior break this is
/// trapezoid(f, grid).
double trapezoid(const std::function<double(double)>& f, const Grid& grid,
                 std::span<const double> breaks);

/// Points where either 1-D density jumps (uniform endpoints).
std::vector<double> density_breakpoints(const AnalyticDistribution& p,
                                        const AnalyticDistribution& q);

/// Covers the effective supports of both densities with the default
/// point count.
Grid covering_grid(const AnalyticDistribution& p,
                   const AnalyticDistribution& q,
                   std::size_t points = kDefaultQuadraturePoints);
Grid covering_grid(const AnalyticDistribution& p,
                   std::size_t points = kDefaultQuadraturePoints);

}  // namespace ganlab
