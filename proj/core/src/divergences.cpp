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

#include "ganlab/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "ganlab/error.hpp"
#include "ganlab/format.hpp"

namespace ganlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_probability_pair(std::span<const double> p,
                              std::span<const double> q) {
  if (p.size() != q.size()) {
    throw UsageError("divergence inputs differ in length (" +
                     std::to_string(p.size()) + " vs " +
                     std::to_string(q.size()) + ")");
  }
  if (p.empty()) throw UsageError("divergence inputs are empty");
  for (auto side : {p, q}) {
    double total = 0.0;
    for (double v : side) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw UsageError("probabilities must be finite and nonnegative");
      }
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw UsageError("probabilities must sum to 1, got " + format_double(total));
    }
  }
}

// p log(p/q) with 0 log(0/q) = 0 and p log(p/0) = +inf.
double kl_term(double p, double q) {
  if (p == 0.0) return 0.0;
  if (q == 0.0) return kInf;
  return p * std::log(p / q);
}

double js_term(double p, double q) {
  const double m = 0.5 * (p + q);
  return 0.5 * (kl_term(p, m) + kl_term(q, m));
}

void require_one_dimensional(const AnalyticDistribution& p,
                             const AnalyticDistribution& q) {
  if (dimension(p) != 1 || dimension(q) != 1) {
    throw UsageError("continuous divergences need 1-D distributions");
  }
}

void require_equal_mass(const Histogram& a, const Histogram& b) {
  if (a.size() != b.size()) {
    throw UsageError("EM histograms differ in length");
  }
  if (std::abs(a.total() - b.total()) > 1e-9) {
    throw UsageError("EM histograms differ in total mass (" +
                     format_double(a.total()) + " vs " +
                     format_double(b.total()) + ")");
  }
}

}  // namespace

bool DivergenceValue::is_infinite() const noexcept { return std::isinf(value); }

DivergenceValue DivergenceValue::in(LogBase base) const noexcept {
  if (base == log_base) return *this;
  const double factor =
      base == LogBase::two ? 1.0 / std::numbers::ln2 : std::numbers::ln2;
  return {value * factor, base};
}

DivergenceValue kl_discrete(std::span<const double> p,
                            std::span<const double> q) {
  require_probability_pair(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += kl_term(p[i], q[i]);
    if (std::isinf(sum)) break;
  }
  return {std::max(sum, 0.0), LogBase::natural};
}

DivergenceValue kl_discrete(const Histogram& p, const Histogram& q) {
  return kl_discrete(p.masses(), q.masses());
}

DivergenceValue js_discrete(std::span<const double> p,
                            std::span<const double> q) {
  require_probability_pair(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += js_term(p[i], q[i]);
  return {std::max(sum, 0.0), LogBase::natural};
}

DivergenceValue js_discrete(const Histogram& p, const Histogram& q) {
  return js_discrete(p.masses(), q.masses());
}

DivergenceValue kl_continuous(const AnalyticDistribution& p,
                              const AnalyticDistribution& q, const Grid& grid) {
  require_one_dimensional(p, q);
  bool infinite = false;
  const double value = trapezoid(
      [&](double x) {
        const double t = kl_term(pdf(p, x), pdf(q, x));
        if (std::isinf(t)) {
          infinite = true;
          return 0.0;
        }
        return t;
      },
      grid, density_breakpoints(p, q));
  return {infinite ? kInf : std::max(value, 0.0), LogBase::natural};
}

DivergenceValue kl_continuous(const AnalyticDistribution& p,
                              const AnalyticDistribution& q) {
  return kl_continuous(p, q, covering_grid(p, q));
}

DivergenceValue js_continuous(const AnalyticDistribution& p,
                              const AnalyticDistribution& q, const Grid& grid) {
  require_one_dimensional(p, q);
  const double value =
      trapezoid([&](double x) { return js_term(pdf(p, x), pdf(q, x)); }, grid,
                density_breakpoints(p, q));
  return {std::max(value, 0.0), LogBase::natural};
}

DivergenceValue js_continuous(const AnalyticDistribution& p,
                              const AnalyticDistribution& q) {
  return js_continuous(p, q, covering_grid(p, q));
}

EmRecurrence em_recurrence(const Histogram& source, const Histogram& target) {
  require_equal_mass(source, target);
  EmRecurrence out;
  out.deltas.reserve(source.size());
  double delta = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    delta = delta + source[i] - target[i];
    out.deltas.push_back(delta);
    out.distance += std::abs(delta);
  }
  return out;
}

TransportPlan::TransportPlan(std::vector<std::vector<double>> coupling)
    : coupling_(std::move(coupling)) {
  for (const auto& row : coupling_) {
    for (double v : row) {
      if (!(v >= 0.0)) throw UsageError("transport amounts must be >= 0");
    }
  }
}

std::vector<TransportPlan::Move> TransportPlan::moves() const {
  std::vector<Move> out;
  for (std::size_t i = 0; i < coupling_.size(); ++i) {
    for (std::size_t j = 0; j < coupling_[i].size(); ++j) {
      if (i != j && coupling_[i][j] > 0.0) out.push_back({i, j, coupling_[i][j]});
    }
  }
  return out;
}

double TransportPlan::cost() const noexcept {
  double c = 0.0;
  for (std::size_t i = 0; i < coupling_.size(); ++i) {
    for (std::size_t j = 0; j < coupling_[i].size(); ++j) {
      const double dist = i > j ? static_cast<double>(i - j) : static_cast<double>(j - i);
      c += coupling_[i][j] * dist;
    }
  }
  return c;
}

bool TransportPlan::satisfies_marginals(const Histogram& source,
                                        const Histogram& target,
                                        double tol) const {
  if (coupling_.size() != source.size()) return false;
  std::vector<double> cols(target.size(), 0.0);
  for (std::size_t i = 0; i < coupling_.size(); ++i) {
    if (coupling_[i].size() != target.size()) return false;
    double row = 0.0;
    for (std::size_t j = 0; j < target.size(); ++j) {
      row += coupling_[i][j];
      cols[j] += coupling_[i][j];
    }
    if (std::abs(row - source[i]) > tol) return false;
  }
  for (std::size_t j = 0; j < target.size(); ++j) {
    if (std::abs(cols[j] - target[j]) > tol) return false;
  }
  return true;
}

namespace {

// Memoized search over rows: state = (row, remaining column capacities).
// Every integer coupling is reachable, so the minimum is exact.
class PlanSearch {
 public:
  PlanSearch(std::vector<int> rows, std::vector<int> cols)
      : rows_(std::move(rows)), cols_(std::move(cols)) {}

  int solve() { return best(0, cols_); }

  std::vector<std::vector<double>> witness() {
    std::vector<std::vector<double>> plan(rows_.size(),
                                          std::vector<double>(cols_.size(), 0.0));
    std::vector<int> remaining = cols_;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const int target = best(r, remaining);
      std::vector<int> split(cols_.size(), 0);
      std::vector<int> chosen;
      find_split(r, remaining, split, 0, rows_[r], 0, target, chosen);
      for (std::size_t j = 0; j < cols_.size(); ++j) {
        plan[r][j] = chosen[j];
        remaining[j] -= chosen[j];
      }
    }
    return plan;
  }

 private:
  static constexpr int kInfeasible = std::numeric_limits<int>::max() / 2;

  std::uint64_t key(std::size_t row, const std::vector<int>& remaining) const {
    std::uint64_t k = row;
    for (int c : remaining) k = (k << 4) | static_cast<std::uint64_t>(c);
    return k;
  }

  int best(std::size_t row, const std::vector<int>& remaining) {
    if (row == rows_.size()) {
      for (int c : remaining) {
        if (c != 0) return kInfeasible;
      }
      return 0;
    }
    const auto k = key(row, remaining);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    std::vector<int> split(cols_.size(), 0);
    int result = kInfeasible;
    enumerate(row, remaining, split, 0, rows_[row], 0, result);
    memo_.emplace(k, result);
    return result;
  }

  // Distributes `left` units of row `row` over columns >= col.
  void enumerate(std::size_t row, const std::vector<int>& remaining,
                 std::vector<int>& split, std::size_t col, int left,
                 int cost_so_far, int& result) {
    if (col == cols_.size()) {
      if (left != 0) return;
      std::vector<int> next(remaining);
      for (std::size_t j = 0; j < next.size(); ++j) next[j] -= split[j];
      const int tail = best(row + 1, next);
      if (tail < kInfeasible) result = std::min(result, cost_so_far + tail);
      return;
    }
    const int dist = std::abs(static_cast<int>(col) - static_cast<int>(row));
    for (int amount = 0; amount <= std::min(left, remaining[col]); ++amount) {
      split[col] = amount;
      enumerate(row, remaining, split, col + 1, left - amount,
                cost_so_far + amount * dist, result);
    }
    split[col] = 0;
  }

  bool find_split(std::size_t row, const std::vector<int>& remaining,
                  std::vector<int>& split, std::size_t col, int left,
                  int cost_so_far, int target, std::vector<int>& chosen) {
    if (col == cols_.size()) {
      if (left != 0) return false;
      std::vector<int> next(remaining);
      for (std::size_t j = 0; j < next.size(); ++j) next[j] -= split[j];
      if (cost_so_far + best(row + 1, next) == target) {
        chosen = split;
        return true;
      }
      return false;
    }
    const int dist = std::abs(static_cast<int>(col) - static_cast<int>(row));
    for (int amount = 0; amount <= std::min(left, remaining[col]); ++amount) {
      split[col] = amount;
      if (find_split(row, remaining, split, col + 1, left - amount,
                     cost_so_far + amount * dist, target, chosen)) {
        return true;
      }
    }
    split[col] = 0;
    return false;
  }

  std::vector<int> rows_;
  std::vector<int> cols_;
  std::unordered_map<std::uint64_t, int> memo_;
};

std::vector<int> integer_masses(const Histogram& h) {
  std::vector<int> out;
  out.reserve(h.size());
  for (double m : h.masses()) {
    if (m != std::floor(m)) {
      throw UsageError("em_bruteforce needs integer masses, got " + format_double(m));
    }
    out.push_back(static_cast<int>(m));
  }
  return out;
}

}  // namespace

EmBruteforce em_bruteforce(const Histogram& source, const Histogram& target) {
  require_equal_mass(source, target);
  if (source.total() > kBruteforceMaxMass || source.size() > kBruteforceMaxBins) {
    throw CapacityError("em_bruteforce handles at most " +
                        std::to_string(kBruteforceMaxBins) + " bins and total mass " +
                        format_double(kBruteforceMaxMass));
  }
  PlanSearch search(integer_masses(source), integer_masses(target));
  const int cost = search.solve();
  return {static_cast<double>(cost), TransportPlan(search.witness())};
}

double wasserstein_1d(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw UsageError("wasserstein_1d needs equal sample counts (" +
                     std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw UsageError("wasserstein_1d needs at least one sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) sum += std::abs(sa[i] - sb[i]);
  return sum / static_cast<double>(sa.size());
}

double wasserstein_1d(const AnalyticDistribution& p,
                      const AnalyticDistribution& q, const Grid& grid) {
  require_one_dimensional(p, q);
  return trapezoid([&](double x) { return std::abs(cdf_1d(p, x) - cdf_1d(q, x)); },
                   grid);
}

ParallelLinesRow parallel_lines_table(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw UsageError("theta must lie in [0, 1], got " + format_double(theta));
  }
  ParallelLinesRow row;
  row.theta = theta;
  if (theta == 0.0) return row;
  row.kl_pq = {kInf, LogBase::natural};
  row.kl_qp = {kInf, LogBase::natural};
  row.js = {std::log(2.0), LogBase::natural};
  row.w = std::abs(theta);
  return row;
}

}  // namespace ganlab
