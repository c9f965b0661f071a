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
#include <vector>

#include "ganlab/divergences.hpp"
#include "ganlab/error.hpp"
#include "ganlab/gan.hpp"

namespace ganlab {
namespace {

constexpr double kLn2 = std::numbers::ln2;

TEST(VanillaLoss, UninformedDiscriminator) {
  const std::vector<double> half(10, 0.5);
  EXPECT_NEAR(d_loss_vanilla(half, half), 2 * kLn2, 1e-15);
  EXPECT_NEAR(g_loss_vanilla(half), -kLn2, 1e-15);
  EXPECT_NEAR(g_loss_nonsaturating(half), kLn2, 1e-15);
}

TEST(VanillaLoss, ClampKeepsLossFinite) {
  const std::vector<double> zero{0.0};
  const std::vector<double> one{1.0};
  EXPECT_TRUE(std::isfinite(d_loss_vanilla(zero, one)));
  EXPECT_NEAR(d_loss_vanilla(zero, one), -2 * std::log(kProbabilityClamp), 1e-6);
  EXPECT_TRUE(std::isfinite(g_loss_nonsaturating(zero)));
  EXPECT_THROW(d_loss_vanilla({}, one), UsageError);
}

TEST(VanillaLoss, SmoothedReducesToPlain) {
  const std::vector<double> real{0.9, 0.7, 0.6};
  const std::vector<double> fake{0.2, 0.4};
  EXPECT_NEAR(d_loss_smoothed(real, fake, 1.0, 0.0), d_loss_vanilla(real, fake), 1e-15);
  EXPECT_THROW(d_loss_smoothed(real, fake, 0.5, 0.5), UsageError);
  // Cross-entropy against a soft target is minimized at the target.
  const std::vector<double> at{0.9};
  const std::vector<double> off{0.95};
  const std::vector<double> f{0.1};
  EXPECT_LT(d_loss_smoothed(at, f, 0.9, 0.1), d_loss_smoothed(off, f, 0.9, 0.1));
}

TEST(OptimalDiscriminator, PointValues) {
  EXPECT_EQ(*optimal_discriminator(1.0, 1.0), 0.5);
  EXPECT_EQ(*optimal_discriminator(3.0, 1.0), 0.75);
  EXPECT_EQ(*optimal_discriminator(0.0, 2.0), 0.0);
  EXPECT_FALSE(optimal_discriminator(0.0, 0.0).has_value());
  EXPECT_THROW(optimal_discriminator(-1.0, 1.0), UsageError);
}

TEST(OptimalDiscriminator, RangeProperty) {
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const double a = r.uniform() * 5;
    const double b = r.uniform() * 5;
    const auto d = optimal_discriminator(a, b);
    ASSERT_TRUE(d.has_value());
    ASSERT_GE(*d, 0.0);
    ASSERT_LE(*d, 1.0);
    ASSERT_NEAR(*d + *optimal_discriminator(b, a), 1.0, 1e-15);
  }
}

TEST(OptimalDiscriminator, MaximizesPointwiseObjective) {
  // a log y + b log(1 - y) peaks at a / (a + b).
  const double a = 0.3;
  const double b = 1.1;
  const double star = *optimal_discriminator(a, b);
  const auto f = [&](double y) { return a * std::log(y) + b * std::log(1 - y); };
  for (double y = 0.01; y < 1.0; y += 0.01) EXPECT_LE(f(y), f(star) + 1e-15);
}

TEST(Identity, EqualDistributions) {
  const AnalyticDistribution p = Gaussian1D(0, 1);
  const auto c = loss_js_identity_check(p, p);
  EXPECT_NEAR(c.lhs, -2 * kLn2, 1e-9);
  EXPECT_NEAR(c.rhs, -2 * kLn2, 1e-12);
  EXPECT_LT(c.gap, 1e-9);
}

TEST(Identity, HoldsAcrossPairs) {
  Rng r(2);
  for (int i = 0; i < 10; ++i) {
    const AnalyticDistribution p = Gaussian1D(r.uniform(-3, 3), r.uniform(0.3, 3));
    const AnalyticDistribution q = Gaussian1D(r.uniform(-3, 3), r.uniform(0.3, 3));
    const auto c = loss_js_identity_check(p, q);
    EXPECT_LT(c.gap, 1e-6);
    EXPECT_GE(c.lhs, -2 * kLn2 - 1e-9);
    EXPECT_LE(c.lhs, 1e-12);
  }
}

TEST(Identity, FarApartSaturates) {
  // Disjoint supports: JS is log 2 and L(G, D*) reaches 0.
  const auto c = loss_js_identity_check(Gaussian1D(-20, 1), Gaussian1D(20, 1));
  EXPECT_TRUE(std::isfinite(c.lhs));
  EXPECT_NEAR(c.lhs, 0.0, 1e-9);
  EXPECT_LT(c.gap, 1e-6);
}

TEST(WganLoss, Definitions) {
  const std::vector<double> fr{1.0, 2.0, 3.0};
  const std::vector<double> ff{0.5, -0.5};
  EXPECT_EQ(wasserstein_estimate(fr, ff), 2.0);
  EXPECT_EQ(critic_loss_wgan(fr, ff), -2.0);
  EXPECT_EQ(g_loss_wgan(ff), 0.0);
  // A constant shift of the critic leaves the estimate unchanged.
  const std::vector<double> fr2{11.0, 12.0, 13.0};
  const std::vector<double> ff2{10.5, 9.5};
  EXPECT_EQ(wasserstein_estimate(fr2, ff2), 2.0);
  const std::vector<double> huge{1e300, 1e300};
  EXPECT_TRUE(std::isfinite(critic_loss_wgan(huge, huge)));
}

TEST(Tricks, FeatureMatching) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 3, 4;
  Eigen::MatrixXd b(2, 2);
  b << 0, 0, 0, 0;
  EXPECT_EQ(feature_matching_loss(a, a), 0.0);
  EXPECT_EQ(feature_matching_loss(a, b), 4.0 + 9.0);
  EXPECT_THROW(feature_matching_loss(a, Eigen::MatrixXd::Zero(2, 3)), UsageError);
  const auto twice = [](const Eigen::MatrixXd& x) -> Eigen::MatrixXd { return 2 * x; };
  EXPECT_EQ(feature_matching_loss(a, b, twice), 4 * 13.0);
}

TEST(Tricks, MinibatchFeatures) {
  Eigen::MatrixXd same = Eigen::MatrixXd::Ones(4, 3);
  const auto o = minibatch_discrimination(same);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(o(i), 4.0);
  Eigen::MatrixXd apart(2, 1);
  apart << 0, 1000;
  const auto p = minibatch_discrimination(apart);
  EXPECT_EQ(p(0), 1.0);  // self term only
  Eigen::MatrixXd pair(2, 2);
  pair << 0, 0, 1, 1;
  EXPECT_NEAR(minibatch_discrimination(pair)(0), 1.0 + std::exp(-2.0), 1e-15);
}

TEST(Tricks, HistoricalAverage) {
  ParamHistory h;
  const std::vector<double> cur{1.0, 1.0};
  EXPECT_THROW(historical_average_penalty(cur, h), UsageError);
  h.push(std::vector<double>{0.0, 2.0});
  h.push(std::vector<double>{2.0, 4.0});
  EXPECT_EQ(h.count(), 2u);
  EXPECT_EQ(h.mean(), (std::vector<double>{1.0, 3.0}));
  EXPECT_EQ(historical_average_penalty(cur, h), 4.0);
  EXPECT_THROW(h.push(std::vector<double>{1.0}), UsageError);
}

TEST(Tricks, RunningMeanMatchesDirectMean) {
  Rng r(3);
  ParamHistory h;
  std::vector<double> sum(3, 0.0);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> v{r.normal(), r.normal(), r.normal()};
    for (int k = 0; k < 3; ++k) sum[k] += v[k];
    h.push(v);
  }
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(h.mean()[k], sum[k] / 500, 1e-12);
}

TEST(Tricks, LabelSmoothing) {
  const auto l = smooth_labels(3, 2, 0.9, 0.1);
  EXPECT_EQ(l.real.size(), 3);
  EXPECT_EQ(l.fake.size(), 2);
  EXPECT_EQ(l.real(0), 0.9);
  EXPECT_EQ(l.fake(1), 0.1);
  EXPECT_THROW(smooth_labels(1, 1, 0.1, 0.9), UsageError);
  EXPECT_THROW(smooth_labels(1, 1, 1.1, 0.0), UsageError);
}

TEST(Tricks, VirtualBatchNormUsesReferenceOnly) {
  Rng r(4);
  Eigen::MatrixXd ref(4, 1);
  ref << 1, 2, 3, 4;
  const auto stats = reference_statistics(ref);
  EXPECT_EQ(stats.mean(0), 2.5);
  EXPECT_NEAR(stats.scale(0), std::sqrt(1.25 + kVbnEpsilon), 1e-15);
  Eigen::MatrixXd x(2, 1);
  x << 2.5, 100;
  const auto y = virtual_batch_norm(x, stats);
  EXPECT_EQ(y(0, 0), 0.0);
  // Rows are normalized independently of the batch they arrive in.
  EXPECT_EQ(virtual_batch_norm(x.bottomRows(1), stats)(0, 0), y(1, 0));
  EXPECT_THROW(virtual_batch_norm(Eigen::MatrixXd::Zero(1, 2), stats), UsageError);
}

TEST(Tricks, InstanceNoise) {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Zero(20000, 1);
  EXPECT_TRUE(add_instance_noise(x, 0.0, 1) == x);
  const auto y = add_instance_noise(x, 0.5, 7);
  const double var = y.squaredNorm() / 20000;
  EXPECT_NEAR(var, 0.25, 0.01);
  EXPECT_TRUE(add_instance_noise(x, 0.5, 7) == y);
  EXPECT_EQ(instance_noise_sigma(0.5, 0.5, 0), 0.5);
  EXPECT_EQ(instance_noise_sigma(0.5, 0.5, 2), 0.125);
  EXPECT_NEAR(instance_noise_sigma(0.5, TrainConfig{}.noise_decay, 1000), 0.25, 1e-12);
  EXPECT_THROW(add_instance_noise(x, -1.0, 1), UsageError);
}

TEST(ModeCoverage, CountsCentersAndQuality) {
  const std::vector<std::array<double, 2>> centers{{0, 0}, {10, 0}, {0, 10}};
  Eigen::MatrixXd s(5, 2);
  s << 0, 0.1, 0.1, 0, 10, 0.05, 50, 50, -40, 3;
  const auto c = mode_coverage(s, centers, 0.5, 1);
  EXPECT_EQ(c.covered, 2);
  EXPECT_DOUBLE_EQ(c.hq_fraction, 3.0 / 5.0);
  EXPECT_EQ(mode_coverage(s, centers, 0.5, 2).covered, 1);
  EXPECT_EQ(mode_coverage(Eigen::MatrixXd(0, 2), centers, 0.5, 1).covered, 0);
  EXPECT_THROW(mode_coverage(s, {}, 0.5, 1), UsageError);
  EXPECT_THROW(mode_coverage(Eigen::MatrixXd::Zero(2, 3), centers, 0.5, 1), UsageError);
}

TEST(ModeCoverage, RingSamplesCoverEveryMode) {
  const AnalyticDistribution ring = GaussianMixture2D::ring(8, 2.0, 0.02);
  const auto s = sample(ring, 5, 2000);
  const auto c = mode_coverage(s, mode_centers(ring), 0.06, 20);
  EXPECT_EQ(c.covered, 8);
  // Within 3 std of a planar Gaussian: 1 - exp(-4.5) = 0.98889.
  EXPECT_NEAR(c.hq_fraction, 1.0 - std::exp(-4.5), 0.01);
}

TEST(TrainConfig, Validation) {
  EXPECT_NO_THROW(validate(TrainConfig::defaults(GanMode::wgan)));
  EXPECT_NO_THROW(validate(TrainConfig::defaults(GanMode::vanilla_gan)));
  auto c = TrainConfig::defaults(GanMode::wgan);
  c.n_critic = 0;
  EXPECT_THROW(validate(c), UsageError);
  c = TrainConfig::defaults(GanMode::wgan);
  c.clip_c = 0.0;
  EXPECT_THROW(validate(c), UsageError);
  c = TrainConfig::defaults(GanMode::wgan);
  c.label_smoothing = true;
  EXPECT_THROW(validate(c), UsageError);
  c = TrainConfig::defaults(GanMode::wgan);
  c.non_saturating = true;
  EXPECT_THROW(validate(c), UsageError);
  c = TrainConfig::defaults(GanMode::vanilla_gan);
  c.label_smoothing = true;
  c.label_pos = 0.2;
  c.label_neg = 0.3;
  EXPECT_THROW(validate(c), UsageError);
  EXPECT_EQ(parse_gan_mode("vanilla_gan"), GanMode::vanilla_gan);
  EXPECT_THROW(parse_gan_mode("lsgan"), UsageError);
}

TrainConfig small(GanMode mode) {
  auto c = TrainConfig::defaults(mode);
  c.g_hidden = {8};
  c.d_hidden = {8};
  c.batch_size = 16;
  c.noise.dimension = 1;
  c.seed = 11;
  return c;
}

TEST(Trainer, CriticStartsInsideClipWindow) {
  auto state = make_trainer(small(GanMode::wgan), Gaussian1D(0, 1));
  EXPECT_LE(max_abs_parameter(state.critic), 0.01);
}

TEST(Trainer, WganStepKeepsConstraint) {
  const auto cfg = small(GanMode::wgan);
  auto state = make_trainer(cfg, Gaussian1D(2, 1));
  for (int i = 0; i < 20; ++i) {
    const auto row = train_step(state, cfg);
    ASSERT_EQ(row.step, static_cast<std::uint64_t>(i + 1));
    ASSERT_LE(max_abs_parameter(state.critic), cfg.clip_c);
    ASSERT_TRUE(std::isfinite(row.w_estimate));
    ASSERT_NEAR(row.d_loss, -row.w_estimate, 1e-12);
    ASSERT_FALSE(row.modes_covered.has_value());
  }
  EXPECT_EQ(state.metrics.size(), 20u);
}

TEST(Trainer, Deterministic) {
  const auto run = [](GanMode mode) {
    auto cfg = small(mode);
    auto state = make_trainer(cfg, Gaussian1D(1, 0.5));
    for (int i = 0; i < 10; ++i) train_step(state, cfg);
    return std::make_pair(state.generator.flat_parameters(), state.critic.flat_parameters());
  };
  EXPECT_EQ(run(GanMode::wgan), run(GanMode::wgan));
  EXPECT_EQ(run(GanMode::vanilla_gan), run(GanMode::vanilla_gan));
}

TEST(Trainer, EveryTrickRuns) {
  auto cfg = small(GanMode::vanilla_gan);
  cfg.noise.dimension = 2;
  cfg.feature_matching = true;
  cfg.minibatch_discrimination = true;
  cfg.historical_averaging = true;
  cfg.label_smoothing = true;
  cfg.vbn = true;
  cfg.instance_noise = true;
  cfg.non_saturating = true;
  auto state = make_trainer(cfg, GaussianMixture2D::ring(8, 2.0, 0.02));
  ASSERT_TRUE(state.reference.has_value());
  for (int i = 0; i < 5; ++i) {
    const auto row = train_step(state, cfg);
    ASSERT_TRUE(std::isfinite(row.g_loss));
    ASSERT_TRUE(row.modes_covered.has_value());
    ASSERT_LE(*row.modes_covered, 8);
  }
  EXPECT_EQ(state.g_history.count(), 6u);
}

TEST(Trainer, RollsBackOnNumericFailure) {
  auto cfg = small(GanMode::wgan);
  auto state = make_trainer(cfg, Gaussian1D(0, 1));
  train_step(state, cfg);
  auto params = state.generator.flat_parameters();
  params[0] = std::numeric_limits<double>::quiet_NaN();
  state.generator.set_flat_parameters(params);
  const auto critic_before = state.critic.flat_parameters();
  EXPECT_THROW(train_step(state, cfg), NumericError);
  EXPECT_EQ(state.step, 1u);
  EXPECT_EQ(state.metrics.size(), 1u);
  EXPECT_TRUE(std::isnan(state.generator.flat_parameters()[0]));
  EXPECT_EQ(state.critic.flat_parameters(), critic_before);
}

TEST(Trainer, IdentityInitRequiresMatchingShape) {
  auto cfg = small(GanMode::wgan);
  cfg.g_identity_init = true;
  EXPECT_THROW(make_trainer(cfg, Gaussian1D(0, 1)), UsageError);
  cfg.g_hidden.clear();
  auto state = make_trainer(cfg, Gaussian1D(0, 1));
  Eigen::MatrixXd z(1, 1);
  z << 0.75;
  EXPECT_EQ(state.generator.evaluate(z)(0, 0), 0.75);
}

TEST(Trainer, GradientProbeShape) {
  auto cfg = small(GanMode::vanilla_gan);
  auto state = make_trainer(cfg, Gaussian1D(0, 1));
  const auto g_before = state.generator.flat_parameters();
  const auto norms = gradient_norm_probe(state, cfg, 7);
  EXPECT_EQ(norms.size(), 8u);
  for (double n : norms) EXPECT_GE(n, 0.0);
  EXPECT_EQ(state.generator.flat_parameters(), g_before);
}

}  // namespace
}  // namespace ganlab
