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

#include <cmath>

#include "ganlab/dynamics.hpp"
#include "ganlab/error.hpp"
#include "ganlab/rng.hpp"

namespace ganlab {
namespace {

int quadrant(const GameState& s) {
  if (s.x >= 0) return s.y >= 0 ? 0 : 3;
  return s.y >= 0 ? 1 : 2;
}

TEST(Step, FixedPoint) {
  const GameState s = step(GameState{0, 0, 0.3, 0});
  EXPECT_EQ(s.x, 0.0);
  EXPECT_EQ(s.y, 0.0);
  EXPECT_EQ(s.step, 1u);
}

TEST(Step, SimultaneousUpdate) {
  const GameState s = step(GameState{1, 1, 0.1, 0});
  EXPECT_DOUBLE_EQ(s.x, 0.9);
  EXPECT_DOUBLE_EQ(s.y, 1.1);
}

TEST(Step, TwoStepsByHand) {
  // Simultaneous: (1, 0) -> (1, 0.1) -> (0.99, 0.2).
  const GameState s = step(step(GameState{1, 0, 0.1, 0}));
  EXPECT_DOUBLE_EQ(s.x, 0.99);
  EXPECT_DOUBLE_EQ(s.y, 0.2);
  EXPECT_EQ(s.step, 2u);
  // Alternating: (1, 0) -> (1, 0.1) -> (0.99, 0.199).
  const GameState a =
      step(step(GameState{1, 0, 0.1, 0}, UpdateOrder::alternating), UpdateOrder::alternating);
  EXPECT_DOUBLE_EQ(a.x, 0.99);
  EXPECT_DOUBLE_EQ(a.y, 0.199);
}

TEST(Step, AlternatingUsesNewX) {
  const GameState s = step(GameState{1, 1, 0.1, 0}, UpdateOrder::alternating);
  EXPECT_DOUBLE_EQ(s.x, 0.9);
  EXPECT_DOUBLE_EQ(s.y, 1.09);
}

TEST(Step, RadiusIdentity) {
  Rng r(4);
  for (int i = 0; i < 1000; ++i) {
    const GameState s{r.uniform(-10, 10), r.uniform(-10, 10), r.uniform(0.001, 1), 0};
    const GameState t = step(s);
    const double lhs = t.x * t.x + t.y * t.y;
    const double rhs = (1 + s.eta * s.eta) * (s.x * s.x + s.y * s.y);
    ASSERT_NEAR(lhs / rhs, 1.0, 1e-12);
  }
}

TEST(Step, Linear) {
  Rng r(6);
  for (int i = 0; i < 200; ++i) {
    const double a = r.uniform(-5, 5);
    const GameState s{r.uniform(-2, 2), r.uniform(-2, 2), 0.1, 0};
    const GameState as{a * s.x, a * s.y, 0.1, 0};
    ASSERT_NEAR(step(as).x, a * step(s).x, 1e-12);
    ASSERT_NEAR(step(as).y, a * step(s).y, 1e-12);
  }
}

TEST(Simulate, LengthAndOrigin) {
  const Trajectory t = simulate(GameState{0, 0, 0.1, 0}, 50);
  ASSERT_EQ(t.states.size(), 51u);
  for (const auto& s : t.states) {
    EXPECT_EQ(s.x, 0.0);
    EXPECT_EQ(s.y, 0.0);
  }
  EXPECT_EQ(simulate(GameState{1, 1, 0.1, 0}, 0).states.size(), 1u);
}

TEST(Simulate, ClosedFormGrowth) {
  const Trajectory t = simulate(GameState{1, 1, 0.1, 0}, 1000);
  EXPECT_NEAR(t.radius[200] / t.radius[0], 2.7048138294215285, 2.7048138294215285 * 1e-6);
  EXPECT_NEAR(t.radius[1000] / t.radius[0], 144.77277243257396, 144.77277243257396 * 1e-6);
  EXPECT_GT(t.radius[1000], 100 * t.radius[0]);
  for (std::size_t i = 1; i < t.radius.size(); ++i) {
    ASSERT_NEAR(t.radius[i] / t.radius[i - 1], std::sqrt(1.01), 1e-9);
    ASSERT_EQ(t.states[i].step, i);
  }
}

TEST(Simulate, Oscillates) {
  const Trajectory t = simulate(GameState{1, 1, 0.1, 0}, 500);
  int changes = 0;
  for (std::size_t i = 1; i < t.states.size(); ++i) {
    changes += quadrant(t.states[i]) != quadrant(t.states[i - 1]);
  }
  EXPECT_GE(changes, 4);
}

TEST(Simulate, RejectsNonPositiveEta) {
  EXPECT_THROW(simulate(GameState{1, 1, 0.0, 0}, 3), UsageError);
  EXPECT_THROW(simulate(GameState{1, 1, -0.1, 0}, 3), UsageError);
}

TEST(Stride, KeepsSmallTrajectoriesWhole) {
  EXPECT_EQ(trajectory_stride(1), 1u);
  EXPECT_EQ(trajectory_stride(10001), 1u);
  EXPECT_EQ(trajectory_stride(10002), 2u);
  EXPECT_EQ(trajectory_stride(1000001), 100u);
}

}  // namespace
}  // namespace ganlab
