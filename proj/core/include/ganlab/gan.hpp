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
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ganlab/distributions.hpp"
#include "ganlab/nn.hpp"
#include "ganlab/quadrature.hpp"
#include "ganlab/rng.hpp"

namespace ganlab {

/// Probabilities are clamped to [eps, 1 - eps] before any log.
inline constexpr double kProbabilityClamp = 1e-7;

// ---------------------------------------------------------------------------
// Vanilla objective. All logs are natural.

/// -(mean log d_real + mean log(1 - d_fake)). Minimizing this over the
/// discriminator maximizes the minimax value L(D, G).
double d_loss_vanilla(std::span<const double> d_real, std::span<const double> d_fake);

/// Cross-entropy against soft targets: real samples labelled `pos`, fake
/// samples `neg`. Equals d_loss_vanilla for pos = 1, neg = 0.
double d_loss_smoothed(std::span<const double> d_real, std::span<const double> d_fake,
                       double pos, double neg);

/// mean log(1 - d_fake), the minimax generator objective.
double g_loss_vanilla(std::span<const double> d_fake);

/// -mean log d_fake.
double g_loss_nonsaturating(std::span<const double> d_fake);

/// p_r / (p_r + p_g); nullopt when both densities vanish.
std::optional<double> optimal_discriminator(double p_real, double p_gen);
std::optional<double> optimal_discriminator(const AnalyticDistribution& p_real,
                                            const AnalyticDistribution& p_gen,
                                            std::span<const double> x);

/// Integral of p_r log D* + p_g log(1 - D*) over `grid`.
double loss_at_optimal_discriminator(const AnalyticDistribution& p_real,
                                     const AnalyticDistribution& p_gen, const Grid& grid);

struct IdentityCheck {
  double lhs = 0.0;  // L(G, D*) by direct integration
  double rhs = 0.0;  // 2 JS(p_r, p_g) - 2 log 2
  double gap = 0.0;  // |lhs - rhs|
};

IdentityCheck loss_js_identity_check(const AnalyticDistribution& p_real,
                                     const AnalyticDistribution& p_gen, const Grid& grid);
IdentityCheck loss_js_identity_check(const AnalyticDistribution& p_real,
                                     const AnalyticDistribution& p_gen);

// ---------------------------------------------------------------------------
// Wasserstein objective. No logarithms.

/// -(mean f_real - mean f_fake).
double critic_loss_wgan(std::span<const double> f_real, std::span<const double> f_fake);
/// -mean f_fake.
double g_loss_wgan(std::span<const double> f_fake);
/// mean f_real - mean f_fake.
double wasserstein_estimate(std::span<const double> f_real, std::span<const double> f_fake);

// ---------------------------------------------------------------------------
// Training tricks.

/// Squared Euclidean distance between the column means of two feature
/// matrices of equal width.
double feature_matching_loss(const Eigen::MatrixXd& real_features,
                             const Eigen::MatrixXd& fake_features);
double feature_matching_loss(
    const Eigen::MatrixXd& real_batch, const Eigen::MatrixXd& fake_batch,
    const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& features);

/// o(x_i) = sum_j exp(-|x_i - x_j|_1) over the rows, self term included.
Eigen::VectorXd minibatch_discrimination(const Eigen::MatrixXd& features);

/// Running mean of past parameter vectors; O(1) memory in the number of
/// steps.
class ParamHistory {
 public:
  void push(std::span<const double> params);
  std::size_t count() const noexcept { return count_; }
  const std::vector<double>& mean() const noexcept { return mean_; }

 private:
  std::vector<double> mean_;
  std::size_t count_ = 0;
};

/// |theta - mean(history)|^2. Throws UsageError on empty history.
double historical_average_penalty(std::span<const double> current,
                                  const ParamHistory& history);

struct LabelVectors {
  Eigen::VectorXd real;
  Eigen::VectorXd fake;
};

/// Requires 0 <= neg < pos <= 1.
LabelVectors smooth_labels(std::size_t n_real, std::size_t n_fake, double pos, double neg);

inline constexpr double kVbnEpsilon = 1e-6;

struct ReferenceStats {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;  // sqrt(population variance + kVbnEpsilon)
};

ReferenceStats reference_statistics(const Eigen::MatrixXd& reference_batch);
Eigen::MatrixXd virtual_batch_norm(const Eigen::MatrixXd& batch, const ReferenceStats& ref);

Eigen::MatrixXd add_instance_noise(const Eigen::MatrixXd& batch, double sigma, Rng& rng);
Eigen::MatrixXd add_instance_noise(const Eigen::MatrixXd& batch, double sigma,
                                   std::uint64_t seed);

/// sigma0 * decay^step.
double instance_noise_sigma(double sigma0, double decay, std::uint64_t step);

struct ModeCoverage {
  int covered = 0;
  double hq_fraction = 0.0;
};

/// A center is covered once at least `min_count` samples lie within `radius`
/// of it. hq_fraction is the share of samples within `radius` of any center.
ModeCoverage mode_coverage(const Eigen::MatrixXd& samples,
                           const std::vector<std::array<double, 2>>& centers,
                           double radius, std::size_t min_count);

// ---------------------------------------------------------------------------
// Training.

enum class GanMode { vanilla_gan, wgan };

std::string_view to_string(GanMode m) noexcept;
GanMode parse_gan_mode(std::string_view text);

struct TrainConfig {
  GanMode mode = GanMode::wgan;
  int n_critic = 5;
  double clip_c = 0.01;
  int batch_size = 64;
  NoiseSource noise{NoiseLaw::standard_normal, 2, 0};
  std::vector<int> g_hidden{64, 64};
  std::vector<int> d_hidden{64, 64};
  /// Start the generator at the identity map (no hidden layers and
  /// noise dimension equal to the data dimension).
  bool g_identity_init = false;
  OptimizerConfig g_opt{OptimizerKind::rmsprop, 5e-5};
  OptimizerConfig d_opt{OptimizerKind::rmsprop, 5e-5};
  bool non_saturating = false;

  bool feature_matching = false;
  bool minibatch_discrimination = false;
  int mbd_kernel_dims = 8;
  bool historical_averaging = false;
  double historical_weight = 1e-2;
  bool label_smoothing = false;
  double label_pos = 0.9;
  double label_neg = 0.1;
  bool vbn = false;
  bool instance_noise = false;
  double noise_sigma0 = 0.5;
  double noise_decay = 0.9993070929904525;  // halves every 1000 steps

  /// Mode coverage radius; <= 0 means 3 x the target's component std.
  double mode_radius = 0.0;
  double mode_min_fraction = 0.01;

  std::uint64_t steps = 2000;
  std::uint64_t seed = 0;

  /// Per-mode defaults: WGAN uses RMSProp at 5e-5 with
  /// n_critic 5 and clip 0.01; vanilla uses Adam at 2e-4, beta1 0.5.
  static TrainConfig defaults(GanMode mode);
};

void validate(const TrainConfig& cfg);

struct MetricsRow {
  std::uint64_t step = 0;
  GanMode mode = GanMode::wgan;
  double d_loss = 0.0;
  double g_loss = 0.0;
  double w_estimate = 0.0;
  double g_grad_norm = 0.0;
  double d_acc_real = 0.0;
  double d_acc_fake = 0.0;
  std::optional<int> modes_covered;
  std::optional<double> hq_fraction;
};

// Random streams derived from the run seed. Each consumer owns its stream
// so enabling a trick never shifts another consumer's draws.
enum RngStream : std::uint64_t {
  kStreamGeneratorInit = 1,
  kStreamCriticInit = 2,
  kStreamData = 3,
  kStreamNoise = 4,
  kStreamInstanceNoise = 5,
  kStreamReference = 6,
};

struct TrainerState {
  AnalyticDistribution target;
  Network generator;
  Network critic;
  OptimizerState g_opt;
  OptimizerState d_opt;
  std::uint64_t step = 0;
  ParamHistory g_history;
  ParamHistory d_history;
  std::optional<ReferenceStats> reference;
  Rng data_rng;
  Rng noise_rng;
  Rng instance_noise_rng;
  std::vector<MetricsRow> metrics;
};

/// Builds and initializes both networks. In wgan mode the critic is clipped
/// right after initialization so it starts inside the constraint set.
TrainerState make_trainer(const TrainConfig& cfg, AnalyticDistribution target);

/// One outer iteration: n_critic (wgan) or one (vanilla) discriminator
/// updates, then one generator update. Appends and returns the metrics row.
/// On a non-finite loss or gradient the state is rolled back to before the
/// call and NumericError is thrown.
MetricsRow train_step(TrainerState& state, const TrainConfig& cfg);

/// Generator loss gradient norm |d g_loss / d theta_G| on a fixed noise
/// batch, with the discriminator frozen.
double generator_gradient_norm(TrainerState& state, const TrainConfig& cfg,
                               const Eigen::MatrixXd& z);

/// Trains only the discriminator/critic for `d_train_steps` with the
/// generator frozen, recording the generator gradient norm before training
/// and after every step (d_train_steps + 1 values).
std::vector<double> gradient_norm_probe(TrainerState& state, const TrainConfig& cfg,
                                        std::size_t d_train_steps);

/// One discriminator/critic update against the frozen generator. Returns
/// the discriminator loss.
double discriminator_step(TrainerState& state, const TrainConfig& cfg);

}  // namespace ganlab
