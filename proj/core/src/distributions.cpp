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

#include "ganlab/distributions.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ganlab/error.hpp"
#include "ganlab/format.hpp"

namespace ganlab {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1 / sqrt(2 pi)

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double gaussian_pdf(double x, double mean, double stddev) {
  const double z = (x - mean) / stddev;
  return kInvSqrt2Pi / stddev * std::exp(-0.5 * z * z);
}

void require_dim(const AnalyticDistribution& dist, std::size_t got) {
  const int want = dimension(dist);
  if (static_cast<std::size_t>(want) != got) {
    throw UsageError("point has dimension " + std::to_string(got) +
                     ", distribution " + describe(dist) + " expects " +
                     std::to_string(want));
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

Histogram::Histogram(std::vector<double> masses) : masses_(std::move(masses)) {
  if (masses_.empty()) throw UsageError("histogram needs at least one bin");
  for (double m : masses_) {
    if (!std::isfinite(m) || m < 0.0) {
      throw UsageError("histogram masses must be finite and nonnegative, got " +
                       format_double(m));
    }
  }
}

double Histogram::total() const noexcept {
  return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

bool Histogram::is_normalized(double tol) const noexcept {
  return std::abs(total() - 1.0) <= tol;
}

Histogram Histogram::normalized() const {
  const double t = total();
  if (t <= 0.0) throw UsageError("cannot normalize a histogram with zero mass");
  std::vector<double> out(masses_);
  for (double& m : out) m /= t;
  return Histogram(std::move(out));
}

Gaussian1D::Gaussian1D(double mean_, double stddev_)
    : mean(mean_), stddev(stddev_) {
  if (!std::isfinite(mean) || !(stddev > 0.0) || !std::isfinite(stddev)) {
    throw UsageError("gaussian1d needs finite mean and std > 0");
  }
}

Uniform1D::Uniform1D(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw UsageError("uniform1d needs finite lo < hi");
  }
}

GaussianMixture2D::GaussianMixture2D(std::vector<Component> components_,
                                     std::vector<double> weights_)
    : components(std::move(components_)), weights(std::move(weights_)) {
  if (components.empty()) throw UsageError("mixture needs >= 1 component");
  if (weights.size() != components.size()) {
    throw UsageError("mixture weights and components differ in count");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw UsageError("mixture weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw UsageError("mixture weights must sum to 1, got " + format_double(sum));
  }
  for (const auto& c : components) {
    if (!(c.stddev > 0.0)) throw UsageError("mixture stds must be > 0");
  }
}

GaussianMixture2D GaussianMixture2D::ring(int n_modes, double radius,
                                          double stddev) {
  if (n_modes < 1) throw UsageError("ring needs >= 1 mode");
  std::vector<Component> comps;
  comps.reserve(static_cast<std::size_t>(n_modes));
  for (int k = 0; k < n_modes; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / n_modes;
    comps.push_back({{radius * std::cos(angle), radius * std::sin(angle)}, stddev});
  }
  // Equal weights whose sum is 1 to the last bit: the last absorbs rounding.
  std::vector<double> w(static_cast<std::size_t>(n_modes), 1.0 / n_modes);
  w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
  return GaussianMixture2D(std::move(comps), std::move(w));
}

SegmentDistribution::SegmentDistribution(double theta_) : theta(theta_) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw UsageError("segment theta must lie in [0, 1]");
  }
}

int dimension(const AnalyticDistribution& dist) noexcept {
  return std::visit(
      Overloaded{[](const Gaussian1D&) { return 1; },
                 [](const Uniform1D&) { return 1; },
                 [](const GaussianMixture2D&) { return 2; },
                 [](const SegmentDistribution&) { return 2; }},
      dist);
}

double pdf(const AnalyticDistribution& dist, std::span<const double> x) {
  require_dim(dist, x.size());
  return std::visit(
      Overloaded{
          [&](const Gaussian1D& g) { return gaussian_pdf(x[0], g.mean, g.stddev); },
          [&](const Uniform1D& u) {
            return (x[0] >= u.lo && x[0] <= u.hi) ? 1.0 / (u.hi - u.lo) : 0.0;
          },
          [&](const GaussianMixture2D& m) {
            double density = 0.0;
            for (std::size_t k = 0; k < m.components.size(); ++k) {
              const auto& c = m.components[k];
              const double dx = x[0] - c.center[0];
              const double dy = x[1] - c.center[1];
              const double var = c.stddev * c.stddev;
              density += m.weights[k] / (2.0 * std::numbers::pi * var) *
                         std::exp(-0.5 * (dx * dx + dy * dy) / var);
            }
            return density;
          },
          [&](const SegmentDistribution& s) {
            return (x[0] == s.theta && x[1] >= 0.0 && x[1] <= 1.0) ? 1.0 : 0.0;
          }},
      dist);
}

double pdf(const AnalyticDistribution& dist, double x) {
  return pdf(dist, std::span<const double>(&x, 1));
}

double cdf_1d(const AnalyticDistribution& dist, double x) {
  if (dimension(dist) != 1) {
    throw UsageError("cdf_1d called on " + describe(dist));
  }
  if (std::get_if<Gaussian1D>(&dist)) {
    const auto& g = std::get<Gaussian1D>(dist);
    return 0.5 * std::erfc(-(x - g.mean) / (g.stddev * std::numbers::sqrt2));
  }
  const auto& u = std::get<Uniform1D>(dist);
  if (x <= u.lo) return 0.0;
  if (x >= u.hi) return 1.0;
  return (x - u.lo) / (u.hi - u.lo);
}

std::pair<double, double> effective_support(const AnalyticDistribution& dist) {
  if (const auto* g = std::get_if<Gaussian1D>(&dist)) {
    return {g->mean - 8.0 * g->stddev, g->mean + 8.0 * g->stddev};
  }
  if (const auto* u = std::get_if<Uniform1D>(&dist)) return {u->lo, u->hi};
  throw UsageError("effective_support is one-dimensional only, got " +
                   describe(dist));
}

Eigen::MatrixXd sample(const AnalyticDistribution& dist, Rng& rng,
                       std::size_t n) {
  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd out(rows, dimension(dist));
  std::visit(
      Overloaded{
          [&](const Gaussian1D& g) {
            for (Eigen::Index i = 0; i < rows; ++i) {
              out(i, 0) = rng.normal(g.mean, g.stddev);
            }
          },
          [&](const Uniform1D& u) {
            for (Eigen::Index i = 0; i < rows; ++i) {
              out(i, 0) = rng.uniform(u.lo, u.hi);
            }
          },
          [&](const GaussianMixture2D& m) {
            for (Eigen::Index i = 0; i < rows; ++i) {
              const double u = rng.uniform();
              std::size_t k = 0;
              double acc = m.weights[0];
              while (u >= acc && k + 1 < m.weights.size()) acc += m.weights[++k];
              const auto& c = m.components[k];
              out(i, 0) = c.center[0] + c.stddev * rng.normal();
              out(i, 1) = c.center[1] + c.stddev * rng.normal();
            }
          },
          [&](const SegmentDistribution& s) {
            for (Eigen::Index i = 0; i < rows; ++i) {
              out(i, 0) = s.theta;
              out(i, 1) = rng.uniform();
            }
          }},
      dist);
  return out;
}

Eigen::MatrixXd sample(const AnalyticDistribution& dist, std::uint64_t seed,
                       std::size_t n) {
  Rng rng(seed);
  return sample(dist, rng, n);
}

std::vector<std::array<double, 2>> mode_centers(
    const AnalyticDistribution& dist) {
  const auto* m = std::get_if<GaussianMixture2D>(&dist);
  if (m == nullptr) {
    throw UsageError("mode centers need a mixture, got " + describe(dist));
  }
  std::vector<std::array<double, 2>> centers;
  centers.reserve(m->components.size());
  for (const auto& c : m->components) centers.push_back(c.center);
  return centers;
}

std::string describe(const AnalyticDistribution& dist) {
  return std::visit(
      Overloaded{
          [](const Gaussian1D& g) {
            return "gaussian1d(" + format_double(g.mean) + "," +
                   format_double(g.stddev) + ")";
          },
          [](const Uniform1D& u) {
            return "uniform1d(" + format_double(u.lo) + "," +
                   format_double(u.hi) + ")";
          },
          [](const GaussianMixture2D& m) {
            std::string s = "mixture2d(";
            for (std::size_t k = 0; k < m.components.size(); ++k) {
              const auto& c = m.components[k];
              if (k) s += ",";
              s += format_double(m.weights[k]) + "," +
                   format_double(c.center[0]) + "," +
                   format_double(c.center[1]) + "," + format_double(c.stddev);
            }
            return s + ")";
          },
          [](const SegmentDistribution& s) {
            return "segment(" + format_double(s.theta) + ")";
          }},
      dist);
}

AnalyticDistribution parse_distribution(std::string_view text) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw UsageError("distribution must look like name(args): '" +
                     std::string(text) + "'");
  }
  const std::string name(trim(text.substr(0, open)));
  std::vector<double> args;
  std::string_view rest = text.substr(open + 1, text.size() - open - 2);
  while (!trim(rest).empty()) {
    const auto comma = rest.find(',');
    args.push_back(parse_double(trim(rest.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  auto want = [&](std::size_t n) {
    if (args.size() != n) {
      throw UsageError(name + " takes " + std::to_string(n) + " arguments, got " +
                       std::to_string(args.size()));
    }
  };
  if (name == "gaussian1d") {
    want(2);
    return Gaussian1D(args[0], args[1]);
  }
  if (name == "uniform1d") {
    want(2);
    return Uniform1D(args[0], args[1]);
  }
  if (name == "segment") {
    want(1);
    return SegmentDistribution(args[0]);
  }
  if (name == "ring") {
    want(3);
    const double n = args[0];
    if (n != std::floor(n) || n < 1) throw UsageError("ring mode count must be a positive integer");
    return GaussianMixture2D::ring(static_cast<int>(n), args[1], args[2]);
  }
  if (name == "gaussian2d") {
    want(3);
    return GaussianMixture2D({{{args[0], args[1]}, args[2]}}, {1.0});
  }
  if (name == "mixture2d") {
    if (args.empty() || args.size() % 4 != 0) {
      throw UsageError("mixture2d takes groups of (weight, cx, cy, std)");
    }
    std::vector<GaussianMixture2D::Component> comps;
    std::vector<double> weights;
    for (std::size_t i = 0; i < args.size(); i += 4) {
      weights.push_back(args[i]);
      comps.push_back({{args[i + 1], args[i + 2]}, args[i + 3]});
    }
    return GaussianMixture2D(std::move(comps), std::move(weights));
  }
  throw UsageError("unknown distribution '" + name + "'");
}

void validate(const NoiseSource& source) {
  if (source.dimension < 1) throw UsageError("noise dimension must be >= 1");
  if (source.law == NoiseLaw::uniform_cube && !(source.lo < source.hi)) {
    throw UsageError("uniform noise needs lo < hi");
  }
}

Eigen::MatrixXd sample(const NoiseSource& source, Rng& rng, std::size_t n) {
  validate(source);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), source.dimension);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      out(i, j) = source.law == NoiseLaw::standard_normal
                      ? rng.normal()
                      : rng.uniform(source.lo, source.hi);
    }
  }
  return out;
}

Eigen::MatrixXd sample(const NoiseSource& source, std::size_t n) {
  Rng rng(source.seed);
  return sample(source, rng, n);
}

std::string_view to_string(NoiseLaw law) noexcept {
  return law == NoiseLaw::uniform_cube ? "uniform" : "normal";
}

NoiseLaw parse_noise_law(std::string_view text) {
  if (text == "uniform") return NoiseLaw::uniform_cube;
  if (text == "normal") return NoiseLaw::standard_normal;
  throw UsageError("noise law must be 'uniform' or 'normal', got '" +
                   std::string(text) + "'");
}

}  // namespace ganlab
