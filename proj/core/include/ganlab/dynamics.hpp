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
#include <vector>

namespace ganlab {

/// Two-player game where one player moves x to minimize x*y and the other
/// moves y to minimize -x*y, both by gradient descent with rate eta.
struct GameState {
  double x = 0.0;
  double y = 0.0;
  double eta = 0.1;
  std::size_t step = 0;

  double radius() const noexcept;
};

enum class UpdateOrder {
  /// Both partial derivatives evaluated at the old point.
  simultaneous,
  /// x moves first, then y sees the new x.
  alternating,
};

GameState step(const GameState& state,
               UpdateOrder order = UpdateOrder::simultaneous);

struct Trajectory {
  std::vector<GameState> states;
  std::vector<double> radius;
};

/// n_steps + 1 states, starting with `initial`. Throws UsageError on
/// eta <= 0.
Trajectory simulate(const GameState& initial, std::size_t n_steps,
                    UpdateOrder order = UpdateOrder::simultaneous);

/// Row stride that keeps a trajectory of `n_states` within `max_rows`
/// emitted rows; 1 when everything fits.
std::size_t trajectory_stride(std::size_t n_states, std::size_t max_rows = 10001);

}  // namespace ganlab
