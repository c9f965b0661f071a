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
#include <limits>
#include <numbers>

#include "ganlab/distributions.hpp"
#include "ganlab/error.hpp"
#include "ganlab/quadrature.hpp"

namespace ganlab {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

TEST(Histogram, Validates) {
  EXPECT_THROW(Histogram(std::vector<double>{}), UsageError);
  EXPECT_THROW(Histogram({1.0, -0.5}), UsageError);
  EXPECT_THROW(Histogram({1.0, std::numeric_limits<double>::infinity()}), UsageError);
  const Histogram h{3, 2, 1, 4};
  EXPECT_EQ(h.size(), 4u);
  EXPECT_EQ(h.total(), 10.0);
  EXPECT_FALSE(h.is_normalized());
  EXPECT_TRUE(h.normalized().is_normalized());
  EXPECT_DOUBLE_EQ(h.normalized()[3], 0.4);
}

TEST(Distributions, ConstructorsValidate) {
  EXPECT_THROW(Gaussian1D(0, 0), UsageError);
  EXPECT_THROW(Gaussian1D(0, -1), UsageError);
  EXPECT_THROW(Uniform1D(1, 1), UsageError);
  EXPECT_THROW(SegmentDistribution(1.5), UsageError);
  EXPECT_THROW(SegmentDistribution(-0.1), UsageError);
  EXPECT_THROW(GaussianMixture2D({{{0, 0}, 1.0}}, {0.5}), UsageError);
  EXPECT_THROW(GaussianMixture2D({}, {}), UsageError);
  EXPECT_THROW(GaussianMixture2D({{{0, 0}, 0.0}}, {1.0}), UsageError);
}

TEST(Pdf, StandardNormalPeak) {
  EXPECT_NEAR(pdf(Gaussian1D(0, 1), 0.0), kInvSqrt2Pi, 1e-15);
}

TEST(Pdf, SingleComponentMixturePeak) {
  const double s = 0.3;
  const AnalyticDistribution m = GaussianMixture2D({{{1.0, -2.0}, s}}, {1.0});
  const double x[2] = {1.0, -2.0};
  EXPECT_NEAR(pdf(m, x), 1.0 / (2 * std::numbers::pi * s * s), 1e-12);
}

TEST(Pdf, DimensionMismatchThrows) {
  const double x2[2] = {0, 0};
  EXPECT_THROW(pdf(Gaussian1D(0, 1), std::span<const double>(x2, 2)), UsageError);
  EXPECT_THROW(pdf(SegmentDistribution(0.5), 0.0), UsageError);
}

TEST(Pdf, TrapezoidNormalizesGaussian) {
  const Grid g{-8, 8, 100000};
  EXPECT_NEAR(trapezoid([](double x) { return pdf(Gaussian1D(0, 1), x); }, g), 1.0, 1e-6);
}

TEST(Pdf, OneDimensionalDensitiesIntegrateToOne) {
  for (const AnalyticDistribution& d :
       {AnalyticDistribution(Gaussian1D(3, 0.5)), AnalyticDistribution(Gaussian1D(-1, 2)),
        AnalyticDistribution(Uniform1D(-1, 3))}) {
    const Grid g = covering_grid(d);
    EXPECT_NEAR(trapezoid([&](double x) { return pdf(d, x); }, g), 1.0, 1e-6) << describe(d);
  }
}

TEST(Pdf, RingIntegratesToOne) {
  // 2-D tensor trapezoid over a box holding all eight modes.
  const AnalyticDistribution ring = GaussianMixture2D::ring(8, 2.0, 0.2);
  const int n = 801;
  const double lo = -4.0;
  const double h = 8.0 / (n - 1);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = (i == 0 || i == n - 1 ? 0.5 : 1.0) * (j == 0 || j == n - 1 ? 0.5 : 1.0);
      const double x[2] = {lo + i * h, lo + j * h};
      const double v = pdf(ring, x);
      ASSERT_GE(v, 0.0);
      sum += w * v;
    }
  }
  EXPECT_NEAR(sum * h * h, 1.0, 1e-6);
}

TEST(Pdf, SegmentIsIndicator) {
  const AnalyticDistribution s = SegmentDistribution(0.25);
  const double on[2] = {0.25, 0.5};
  const double off_x[2] = {0.2, 0.5};
  const double off_y[2] = {0.25, 1.5};
  EXPECT_EQ(pdf(s, on), 1.0);
  EXPECT_EQ(pdf(s, off_x), 0.0);
  EXPECT_EQ(pdf(s, off_y), 0.0);
}

TEST(Cdf, KnownValues) {
  const AnalyticDistribution n01 = Gaussian1D(0, 1);
  EXPECT_EQ(cdf_1d(n01, 0.0), 0.5);
  EXPECT_EQ(cdf_1d(n01, -std::numeric_limits<double>::infinity()), 0.0);
  EXPECT_EQ(cdf_1d(n01, std::numeric_limits<double>::infinity()), 1.0);
  // scipy.stats.norm.cdf(1)
  EXPECT_NEAR(cdf_1d(n01, 1.0), 0.8413447460685429, 1e-6);
  EXPECT_NEAR(cdf_1d(Uniform1D(0, 4), 1.0), 0.25, 1e-15);
}

TEST(Cdf, AgreesWithQuadrature) {
  const AnalyticDistribution d = Gaussian1D(0, 1);
  const double q = trapezoid([&](double x) { return pdf(d, x); }, Grid{-12, 1, 100001});
  EXPECT_NEAR(cdf_1d(d, 1.0), q, 1e-6);
}

TEST(Cdf, TwoDimensionalThrows) {
  EXPECT_THROW(cdf_1d(SegmentDistribution(0), 0.0), UsageError);
  EXPECT_THROW(cdf_1d(GaussianMixture2D::ring(8, 2, 0.1), 0.0), UsageError);
}

TEST(Cdf, MonotoneOnRandomPairs) {
  Rng r(17);
  for (const AnalyticDistribution& d :
       {AnalyticDistribution(Gaussian1D(1, 2)), AnalyticDistribution(Uniform1D(-1, 1))}) {
    for (int i = 0; i < 2000; ++i) {
      double a = r.uniform(-10, 10);
      double b = r.uniform(-10, 10);
      if (a > b) std::swap(a, b);
      const double fa = cdf_1d(d, a);
      const double fb = cdf_1d(d, b);
      ASSERT_LE(fa, fb);
      ASSERT_GE(fa, 0.0);
      ASSERT_LE(fb, 1.0);
    }
  }
}

TEST(Sample, EmptyAndShape) {
  EXPECT_EQ(sample(Gaussian1D(0, 1), 1u, 0).rows(), 0);
  const auto m = sample(GaussianMixture2D::ring(8, 2, 0.1), 1u, 5);
  EXPECT_EQ(m.rows(), 5);
  EXPECT_EQ(m.cols(), 2);
}

TEST(Sample, SameSeedIdentical) {
  const AnalyticDistribution d = GaussianMixture2D::ring(8, 2, 0.1);
  EXPECT_TRUE(sample(d, 99u, 1000) == sample(d, 99u, 1000));
  EXPECT_FALSE(sample(d, 99u, 1000) == sample(d, 100u, 1000));
}

TEST(Sample, GaussianMeanWithinCltBound) {
  const auto m = sample(Gaussian1D(3, 1), 5u, 100000);
  EXPECT_NEAR(m.mean(), 3.0, 0.02);
}

TEST(Sample, UniformWithinBounds) {
  const auto m = sample(Uniform1D(-2, 5), 5u, 10000);
  EXPECT_GE(m.minCoeff(), -2.0);
  EXPECT_LT(m.maxCoeff(), 5.0);
}

TEST(Sample, SegmentFirstCoordinateIsTheta) {
  for (double theta : {0.0, 0.3, 1.0}) {
    const auto m = sample(SegmentDistribution(theta), 8u, 2000);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      ASSERT_EQ(m(i, 0), theta);
      ASSERT_GE(m(i, 1), 0.0);
      ASSERT_LE(m(i, 1), 1.0);
    }
  }
}

TEST(Sample, RingHitsEveryMode) {
  const AnalyticDistribution ring = GaussianMixture2D::ring(8, 2, 0.02);
  const auto centers = mode_centers(ring);
  ASSERT_EQ(centers.size(), 8u);
  const auto m = sample(ring, 3u, 8000);
  std::vector<int> counts(8, 0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (std::size_t k = 0; k < 8; ++k) {
      if (std::hypot(m(i, 0) - centers[k][0], m(i, 1) - centers[k][1]) < 0.1) ++counts[k];
    }
  }
  for (int c : counts) EXPECT_GT(c, 800);
}

TEST(Sample, RingCentersOnCircle) {
  for (const auto& c : mode_centers(GaussianMixture2D::ring(8, 2, 0.1))) {
    EXPECT_NEAR(std::hypot(c[0], c[1]), 2.0, 1e-12);
  }
}

TEST(Noise, DeterministicAndShaped) {
  const NoiseSource n{NoiseLaw::uniform_cube, 3, 12, -1, 1};
  const auto a = sample(n, 500);
  EXPECT_EQ(a.cols(), 3);
  EXPECT_TRUE(a == sample(n, 500));
  EXPECT_GE(a.minCoeff(), -1.0);
  EXPECT_LT(a.maxCoeff(), 1.0);
  EXPECT_THROW(validate(NoiseSource{NoiseLaw::standard_normal, 0, 1}), UsageError);
  EXPECT_EQ(parse_noise_law(to_string(NoiseLaw::uniform_cube)), NoiseLaw::uniform_cube);
  EXPECT_EQ(parse_noise_law(to_string(NoiseLaw::standard_normal)), NoiseLaw::standard_normal);
}

TEST(Describe, RoundTripsThroughParser) {
  for (const AnalyticDistribution& d :
       {AnalyticDistribution(Gaussian1D(0.5, 2)), AnalyticDistribution(Uniform1D(-1, 3)),
        AnalyticDistribution(SegmentDistribution(0.25)),
        AnalyticDistribution(GaussianMixture2D::ring(8, 2, 0.02))}) {
    EXPECT_EQ(describe(parse_distribution(describe(d))), describe(d));
  }
  EXPECT_THROW(parse_distribution("cauchy(0,1)"), UsageError);
  EXPECT_THROW(parse_distribution("gaussian1d(0)"), UsageError);
  EXPECT_THROW(parse_distribution("ring(2.5,1,1)"), UsageError);
}

}  // namespace
}  // namespace ganlab
