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

#include "ganlab/dynamics.hpp"

#include <cmath>

#include "ganlab/error.hpp"

namespace ganlab {

double GameState::radius() const noexcept { return std::hypot(x, y); }

GameState step(const GameState& state, UpdateOrder order) {
  GameState next = state;
  // d(xy)/dx = y, d(-xy)/dy = -x.
  next.x = state.x - state.eta * state.y;
  next.y = order == UpdateOrder::simultaneous ? state.y + state.eta * state.x
                                              : state.y + state.eta * next.x;
  ++next.step;
  return next;
}

Trajectory simulate(const GameState& initial, std::size_t n_steps,
                    UpdateOrder order) {
  if (!(initial.eta > 0.0)) throw UsageError("learning rate eta must be > 0");
  Trajectory t;
  t.states.reserve(n_steps + 1);
  t.radius.reserve(n_steps + 1);
  GameState s = initial;
  t.states.push_back(s);
  t.radius.push_back(s.radius());
  for (std::size_t i = 0; i < n_steps; ++i) {
    s = step(s, order);
    t.states.push_back(s);
    t.radius.push_back(s.radius());
  }
  return t;
}

std::size_t trajectory_stride(std::size_t n_states, std::size_t max_rows) {
  if (n_states <= max_rows || max_rows < 2) return 1;
  return (n_states - 1 + (max_rows - 2)) / (max_rows - 1);
}

}  // namespace ganlab
