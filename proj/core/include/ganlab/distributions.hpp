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

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ganlab/rng.hpp"

namespace ganlab {

/// Nonnegative mass over unit-spaced integer bins 0..n-1.
class Histogram {
 public:
  explicit Histogram(std::vector<double> masses);
  Histogram(std::initializer_list<double> masses)
      : Histogram(std::vector<double>(masses)) {}

  std::span<const double> masses() const noexcept { return masses_; }
  std::size_t size() const noexcept { return masses_.size(); }
  double operator[](std::size_t i) const { return masses_.at(i); }
  double total() const noexcept;

  bool is_normalized(double tol = 1e-9) const noexcept;
  /// Rescaled copy with total mass 1. Throws UsageError on zero total.
  Histogram normalized() const;

 private:
  std::vector<double> masses_;
};

struct Gaussian1D {
  Gaussian1D(double mean, double stddev);
  double mean;
  double stddev;
};

struct Uniform1D {
  Uniform1D(double lo, double hi);
  double lo;
  double hi;
};

/// Weighted isotropic Gaussians in the plane.
struct GaussianMixture2D {
  struct Component {
    std::array<double, 2> center;
    double stddev;
  };

  GaussianMixture2D(std::vector<Component> components,
                    std::vector<double> weights);

  /// `n_modes` equally weighted components evenly spaced on a circle,
  /// the first one at angle 0.
  static GaussianMixture2D ring(int n_modes, double radius, double stddev);

  std::vector<Component> components;
  std::vector<double> weights;
};

/// Uniform mass on the vertical unit segment {theta} x [0, 1].
///
/// Its pdf is a density with respect to length along the segment: 1 on the
/// segment, 0 elsewhere.
struct SegmentDistribution {
  explicit SegmentDistribution(double theta);
  double theta;
};

using AnalyticDistribution =
    std::variant<Gaussian1D, Uniform1D, GaussianMixture2D, SegmentDistribution>;

int dimension(const AnalyticDistribution& dist) noexcept;

double pdf(const AnalyticDistribution& dist, std::span<const double> x);
double pdf(const AnalyticDistribution& dist, double x);

/// Only defined for one-dimensional distributions.
double cdf_1d(const AnalyticDistribution& dist, double x);

/// Interval outside of which a 1-D density is negligible (Gaussian: mean
/// +- 8 std) or zero.
std::pair<double, double> effective_support(const AnalyticDistribution& dist);

/// n x dimension matrix, one sample per row.
Eigen::MatrixXd sample(const AnalyticDistribution& dist, Rng& rng,
                       std::size_t n);
Eigen::MatrixXd sample(const AnalyticDistribution& dist, std::uint64_t seed,
                       std::size_t n);

/// Component centers of a mixture; throws UsageError for other laws.
std::vector<std::array<double, 2>> mode_centers(
    const AnalyticDistribution& dist);

/// Config-file notation, e.g. "gaussian1d(0,1)", "ring(8,2,0.02)".
std::string describe(const AnalyticDistribution& dist);
AnalyticDistribution parse_distribution(std::string_view text);

enum class NoiseLaw { uniform_cube, standard_normal };

struct NoiseSource {
  NoiseLaw law = NoiseLaw::standard_normal;
  int dimension = 1;
  std::uint64_t seed = 0;
  // Cube bounds for uniform_cube.
  double lo = -1.0;
  double hi = 1.0;
};

void validate(const NoiseSource& source);

Eigen::MatrixXd sample(const NoiseSource& source, Rng& rng, std::size_t n);
/// Draws from a fresh stream seeded with `source.seed`.
Eigen::MatrixXd sample(const NoiseSource& source, std::size_t n);

std::string_view to_string(NoiseLaw law) noexcept;
NoiseLaw parse_noise_law(std::string_view text);

}  // namespace ganlab
