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
#include <span>
#include <vector>

#include "ganlab/distributions.hpp"
#include "ganlab/quadrature.hpp"

namespace ganlab {

enum class LogBase { natural, two };

/// A divergence or distance. `value` may be +infinity, which is a legitimate
/// result (disjoint supports), not an error.
struct DivergenceValue {
  double value = 0.0;
  LogBase log_base = LogBase::natural;

  bool is_infinite() const noexcept;
  /// Same quantity expressed in another base.
  DivergenceValue in(LogBase base) const noexcept;
  double nats() const noexcept { return in(LogBase::natural).value; }
  double bits() const noexcept { return in(LogBase::two).value; }
};

// Discrete variants take probability vectors: equal length, each summing to
// 1 within 1e-9. Conventions: 0 log(0/q) = 0, p > 0 with q = 0 gives +inf.
DivergenceValue kl_discrete(std::span<const double> p,
                            std::span<const double> q);
DivergenceValue kl_discrete(const Histogram& p, const Histogram& q);
DivergenceValue js_discrete(std::span<const double> p,
                            std::span<const double> q);
DivergenceValue js_discrete(const Histogram& p, const Histogram& q);

// Continuous variants integrate over `grid` with the trapezoid rule.
DivergenceValue kl_continuous(const AnalyticDistribution& p,
                              const AnalyticDistribution& q, const Grid& grid);
DivergenceValue kl_continuous(const AnalyticDistribution& p,
                              const AnalyticDistribution& q);
DivergenceValue js_continuous(const AnalyticDistribution& p,
                              const AnalyticDistribution& q, const Grid& grid);
DivergenceValue js_continuous(const AnalyticDistribution& p,
                              const AnalyticDistribution& q);

struct EmRecurrence {
  double distance = 0.0;
  /// delta_1 .. delta_n; delta_0 = 0 is implied.
  std::vector<double> deltas;
};

/// Earth mover's distance between equal-mass histograms on unit-spaced bins,
/// carrying the surplus delta_{i+1} = delta_i + P_i - Q_i from pile to pile.
EmRecurrence em_recurrence(const Histogram& source, const Histogram& target);

/// A coupling between a source and a target histogram. Row i of `coupling`
/// is how the mass of source bin i is split over target bins. The source is
/// always the first argument of the producing call.
class TransportPlan {
 public:
  struct Move {
    std::size_t from;
    std::size_t to;
    double amount;
  };

  explicit TransportPlan(std::vector<std::vector<double>> coupling);

  const std::vector<std::vector<double>>& coupling() const noexcept {
    return coupling_;
  }
  /// Nonzero off-diagonal entries; mass that stays in its bin is not a move.
  std::vector<Move> moves() const;
  /// Sum of amount * |from - to|.
  double cost() const noexcept;
  /// Row sums match `source`, column sums match `target`, within `tol`.
  bool satisfies_marginals(const Histogram& source, const Histogram& target,
                           double tol = 1e-9) const;

 private:
  std::vector<std::vector<double>> coupling_;
};

struct EmBruteforce {
  double distance = 0.0;
  TransportPlan plan;
};

inline constexpr double kBruteforceMaxMass = 12.0;
inline constexpr std::size_t kBruteforceMaxBins = 8;

/// Exact minimum-cost search over all integer transport plans. Masses must be
/// nonnegative integers; throws CapacityError past kBruteforceMaxMass total
/// or kBruteforceMaxBins bins.
EmBruteforce em_bruteforce(const Histogram& source, const Histogram& target);

/// Sorted-matching estimator (1/n) sum |a_(i) - b_(i)|. Inputs need not be
/// sorted; counts must match.
double wasserstein_1d(std::span<const double> a, std::span<const double> b);

/// W1 between two 1-D analytic laws as the integral of |F - G|.
double wasserstein_1d(const AnalyticDistribution& p,
                      const AnalyticDistribution& q, const Grid& grid);

/// Closed-form divergences between the vertical unit segments at x = 0 and
/// x = theta.
struct ParallelLinesRow {
  double theta = 0.0;
  DivergenceValue kl_pq;
  DivergenceValue kl_qp;
  DivergenceValue js;
  double w = 0.0;
};

ParallelLinesRow parallel_lines_table(double theta);

}  // namespace ganlab
