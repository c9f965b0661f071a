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

#include "ganlab/gan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ganlab/divergences.hpp"
#include "ganlab/error.hpp"

namespace ganlab {

namespace {

double clamp_probability(double p) {
  return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

void require_nonempty(std::span<const double> v, const char* what) {
  if (v.empty()) throw UsageError(std::string(what) + " batch is empty");
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::span<const double> column(const Eigen::MatrixXd& m) {
  return {m.data(), static_cast<std::size_t>(m.rows())};
}

// Cross-entropy of probabilities against a constant target.
double cross_entropy(std::span<const double> p, double target) {
  double s = 0.0;
  for (double v : p) {
    const double c = clamp_probability(v);
    s += target * std::log(c) + (1.0 - target) * std::log(1.0 - c);
  }
  return -s / static_cast<double>(p.size());
}

// d cross_entropy / d p, clamp treated as pass-through.
Eigen::MatrixXd cross_entropy_grad(const Eigen::MatrixXd& p, double target) {
  const double n = static_cast<double>(p.rows());
  Eigen::MatrixXd g(p.rows(), 1);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double c = clamp_probability(p(i, 0));
    g(i, 0) = -(target / c - (1.0 - target) / (1.0 - c)) / n;
  }
  return g;
}

void add_history_gradient(Network& net, const ParamHistory& history, double weight) {
  std::size_t k = 0;
  const auto& avg = history.mean();
  for (auto& block : net.parameters()) {
    for (std::size_t i = 0; i < block.value.size(); ++i, ++k) {
      block.grad[i] += weight * 2.0 * (block.value[i] - avg[k]);
    }
  }
}

struct DiscriminatorOutputs {
  double loss = 0.0;
  Eigen::MatrixXd real;
  Eigen::MatrixXd fake;
};

Eigen::MatrixXd discriminator_input(TrainerState& state, const TrainConfig& cfg,
                                    const Eigen::MatrixXd& batch) {
  if (!cfg.instance_noise) return batch;
  const double sigma = instance_noise_sigma(cfg.noise_sigma0, cfg.noise_decay, state.step);
  return add_instance_noise(batch, sigma, state.instance_noise_rng);
}

DiscriminatorOutputs update_discriminator(TrainerState& state, const TrainConfig& cfg) {
  const auto n = static_cast<std::size_t>(cfg.batch_size);
  const Eigen::MatrixXd real_clean = sample(state.target, state.data_rng, n);
  const Eigen::MatrixXd z = sample(cfg.noise, state.noise_rng, n);
  const Eigen::MatrixXd fake_clean = state.generator.evaluate(z);
  const Eigen::MatrixXd real = discriminator_input(state, cfg, real_clean);
  const Eigen::MatrixXd fake = discriminator_input(state, cfg, fake_clean);

  Network& d = state.critic;
  d.zero_grad();
  DiscriminatorOutputs out;
  out.real = d.forward(real);
  if (cfg.mode == GanMode::vanilla_gan) {
    const double pos = cfg.label_smoothing ? cfg.label_pos : 1.0;
    const double neg = cfg.label_smoothing ? cfg.label_neg : 0.0;
    d.backward(cross_entropy_grad(out.real, pos));
    out.fake = d.forward(fake);
    d.backward(cross_entropy_grad(out.fake, neg));
    out.loss = d_loss_smoothed(column(out.real), column(out.fake), pos, neg);
  } else {
    const double inv_n = 1.0 / static_cast<double>(n);
    d.backward(Eigen::MatrixXd::Constant(out.real.rows(), 1, -inv_n));
    out.fake = d.forward(fake);
    d.backward(Eigen::MatrixXd::Constant(out.fake.rows(), 1, inv_n));
    out.loss = critic_loss_wgan(column(out.real), column(out.fake));
  }
  if (cfg.historical_averaging) {
    out.loss += cfg.historical_weight *
                historical_average_penalty(d.flat_parameters(), state.d_history);
    add_history_gradient(d, state.d_history, cfg.historical_weight);
  }
  if (!std::isfinite(out.loss)) throw NumericError("discriminator loss is not finite");
  optimizer_step(d, state.d_opt);
  if (cfg.mode == GanMode::wgan) clip_weights(d, cfg.clip_c);
  if (cfg.historical_averaging) state.d_history.push(d.flat_parameters());
  return out;
}

// Leaves d g_loss / d theta_G in the generator's accumulators.
double generator_gradient(TrainerState& state, const TrainConfig& cfg,
                          const Eigen::MatrixXd& z, Eigen::MatrixXd* fake_out) {
  Network& g = state.generator;
  Network& d = state.critic;
  g.zero_grad();
  const Eigen::MatrixXd fake = g.forward(z);
  if (fake_out) *fake_out = fake;
  const Eigen::MatrixXd input = discriminator_input(state, cfg, fake);
  const double n = static_cast<double>(z.rows());
  double loss = 0.0;
  Eigen::MatrixXd dx;
  if (cfg.feature_matching) {
    const std::size_t trunk = d.layers().size() - 1;
    const Eigen::MatrixXd real = discriminator_input(
        state, cfg, sample(state.target, state.data_rng, static_cast<std::size_t>(z.rows())));
    const Eigen::MatrixXd real_features = d.evaluate(real, trunk);
    const Eigen::MatrixXd fake_features = d.forward(input, trunk);
    loss = feature_matching_loss(real_features, fake_features);
    const Eigen::RowVectorXd diff =
        real_features.colwise().mean() - fake_features.colwise().mean();
    Eigen::MatrixXd grad = (-2.0 / n) * diff.replicate(fake_features.rows(), 1);
    dx = d.backward(grad, GradMode::input_only);
  } else {
    const Eigen::MatrixXd out = d.forward(input);
    Eigen::MatrixXd grad(out.rows(), 1);
    if (cfg.mode == GanMode::wgan) {
      loss = g_loss_wgan(column(out));
      grad.setConstant(-1.0 / n);
    } else if (cfg.non_saturating) {
      loss = g_loss_nonsaturating(column(out));
      for (Eigen::Index i = 0; i < out.rows(); ++i) {
        grad(i, 0) = -1.0 / (clamp_probability(out(i, 0)) * n);
      }
    } else {
      loss = g_loss_vanilla(column(out));
      for (Eigen::Index i = 0; i < out.rows(); ++i) {
        grad(i, 0) = -1.0 / ((1.0 - clamp_probability(out(i, 0))) * n);
      }
    }
    dx = d.backward(grad, GradMode::input_only);
  }
  g.backward(dx);
  return loss;
}

MetricsRow step_impl(TrainerState& state, const TrainConfig& cfg) {
  MetricsRow row;
  row.mode = cfg.mode;
  const int d_updates = cfg.mode == GanMode::wgan ? cfg.n_critic : 1;
  DiscriminatorOutputs last;
  for (int k = 0; k < d_updates; ++k) last = update_discriminator(state, cfg);
  row.d_loss = last.loss;
  const auto real = column(last.real);
  const auto fake = column(last.fake);
  row.w_estimate = wasserstein_estimate(real, fake);
  const double threshold =
      cfg.mode == GanMode::vanilla_gan ? 0.5 : 0.5 * (mean(real) + mean(fake));
  row.d_acc_real = static_cast<double>(std::count_if(real.begin(), real.end(),
                                                     [&](double v) { return v > threshold; })) /
                   static_cast<double>(real.size());
  row.d_acc_fake = static_cast<double>(std::count_if(fake.begin(), fake.end(),
                                                     [&](double v) { return v < threshold; })) /
                   static_cast<double>(fake.size());

  const Eigen::MatrixXd z =
      sample(cfg.noise, state.noise_rng, static_cast<std::size_t>(cfg.batch_size));
  Eigen::MatrixXd generated;
  row.g_loss = generator_gradient(state, cfg, z, &generated);
  row.g_grad_norm = state.generator.gradient_norm();
  if (cfg.historical_averaging) {
    row.g_loss += cfg.historical_weight *
                  historical_average_penalty(state.generator.flat_parameters(), state.g_history);
    add_history_gradient(state.generator, state.g_history, cfg.historical_weight);
  }
  if (!std::isfinite(row.g_loss)) throw NumericError("generator loss is not finite");
  optimizer_step(state.generator, state.g_opt);
  if (cfg.historical_averaging) state.g_history.push(state.generator.flat_parameters());

  if (const auto* mix = std::get_if<GaussianMixture2D>(&state.target)) {
    const double radius =
        cfg.mode_radius > 0.0 ? cfg.mode_radius : 3.0 * mix->components.front().stddev;
    const auto min_count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(cfg.mode_min_fraction * cfg.batch_size)));
    const auto cov = mode_coverage(generated, mode_centers(state.target), radius, min_count);
    row.modes_covered = cov.covered;
    row.hq_fraction = cov.hq_fraction;
  }
  ++state.step;
  row.step = state.step;
  return row;
}

}  // namespace

double d_loss_vanilla(std::span<const double> d_real, std::span<const double> d_fake) {
  require_nonempty(d_real, "real");
  require_nonempty(d_fake, "fake");
  double lr = 0.0;
  for (double p : d_real) lr += std::log(clamp_probability(p));
  double lf = 0.0;
  for (double p : d_fake) lf += std::log(1.0 - clamp_probability(p));
  return -(lr / static_cast<double>(d_real.size()) + lf / static_cast<double>(d_fake.size()));
}

double d_loss_smoothed(std::span<const double> d_real, std::span<const double> d_fake,
                       double pos, double neg) {
  require_nonempty(d_real, "real");
  require_nonempty(d_fake, "fake");
  if (!(neg >= 0.0 && neg < pos && pos <= 1.0)) {
    throw UsageError("label targets need 0 <= neg < pos <= 1");
  }
  return cross_entropy(d_real, pos) + cross_entropy(d_fake, neg);
}

double g_loss_vanilla(std::span<const double> d_fake) {
  require_nonempty(d_fake, "fake");
  double s = 0.0;
  for (double p : d_fake) s += std::log(1.0 - clamp_probability(p));
  return s / static_cast<double>(d_fake.size());
}

double g_loss_nonsaturating(std::span<const double> d_fake) {
  require_nonempty(d_fake, "fake");
  double s = 0.0;
  for (double p : d_fake) s += std::log(clamp_probability(p));
  return -s / static_cast<double>(d_fake.size());
}

std::optional<double> optimal_discriminator(double p_real, double p_gen) {
  if (!(p_real >= 0.0) || !(p_gen >= 0.0)) {
    throw UsageError("densities must be nonnegative");
  }
  if (p_real + p_gen == 0.0) return std::nullopt;
  return p_real / (p_real + p_gen);
}

std::optional<double> optimal_discriminator(const AnalyticDistribution& p_real,
                                            const AnalyticDistribution& p_gen,
                                            std::span<const double> x) {
  return optimal_discriminator(pdf(p_real, x), pdf(p_gen, x));
}

double loss_at_optimal_discriminator(const AnalyticDistribution& p_real,
                                     const AnalyticDistribution& p_gen, const Grid& grid) {
  return trapezoid(
      [&](double x) {
        const double a = pdf(p_real, x);
        const double b = pdf(p_gen, x);
        if (a + b == 0.0) return 0.0;
        // log D* and log(1 - D*) from the densities directly; 1 - a/(a+b)
        // rounds to 0 long before b does. 0 log 0 = 0 on either side.
        const double log_sum = std::log(a + b);
        const double real_term = a > 0.0 ? a * (std::log(a) - log_sum) : 0.0;
        const double gen_term = b > 0.0 ? b * (std::log(b) - log_sum) : 0.0;
        return real_term + gen_term;
      },
      grid, density_breakpoints(p_real, p_gen));
}

IdentityCheck loss_js_identity_check(const AnalyticDistribution& p_real,
                                     const AnalyticDistribution& p_gen, const Grid& grid) {
  IdentityCheck c;
  c.lhs = loss_at_optimal_discriminator(p_real, p_gen, grid);
  c.rhs = 2.0 * js_continuous(p_real, p_gen, grid).nats() - 2.0 * std::numbers::ln2;
  c.gap = std::abs(c.lhs - c.rhs);
  return c;
}

IdentityCheck loss_js_identity_check(const AnalyticDistribution& p_real,
                                     const AnalyticDistribution& p_gen) {
  return loss_js_identity_check(p_real, p_gen, covering_grid(p_real, p_gen));
}

double critic_loss_wgan(std::span<const double> f_real, std::span<const double> f_fake) {
  return -wasserstein_estimate(f_real, f_fake);
}

double g_loss_wgan(std::span<const double> f_fake) {
  require_nonempty(f_fake, "fake");
  return -mean(f_fake);
}

double wasserstein_estimate(std::span<const double> f_real, std::span<const double> f_fake) {
  require_nonempty(f_real, "real");
  require_nonempty(f_fake, "fake");
  return mean(f_real) - mean(f_fake);
}

double feature_matching_loss(const Eigen::MatrixXd& real_features,
                             const Eigen::MatrixXd& fake_features) {
  if (real_features.cols() != fake_features.cols()) {
    throw UsageError("feature widths differ (" + std::to_string(real_features.cols()) +
                     " vs " + std::to_string(fake_features.cols()) + ")");
  }
  if (real_features.rows() == 0 || fake_features.rows() == 0) {
    throw UsageError("feature matching needs nonempty batches");
  }
  return (real_features.colwise().mean() - fake_features.colwise().mean()).squaredNorm();
}

double feature_matching_loss(
    const Eigen::MatrixXd& real_batch, const Eigen::MatrixXd& fake_batch,
    const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& features) {
  return feature_matching_loss(features(real_batch), features(fake_batch));
}

Eigen::VectorXd minibatch_discrimination(const Eigen::MatrixXd& features) {
  const Eigen::Index n = features.rows();
  if (n < 1) throw UsageError("minibatch discrimination needs at least one row");
  Eigen::VectorXd o = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      o(i) += std::exp(-(features.row(i) - features.row(j)).cwiseAbs().sum());
    }
  }
  return o;
}

void ParamHistory::push(std::span<const double> params) {
  if (count_ == 0) {
    mean_.assign(params.begin(), params.end());
    count_ = 1;
    return;
  }
  if (params.size() != mean_.size()) {
    throw UsageError("parameter history width changed");
  }
  ++count_;
  const double inv = 1.0 / static_cast<double>(count_);
  for (std::size_t i = 0; i < mean_.size(); ++i) mean_[i] += (params[i] - mean_[i]) * inv;
}

double historical_average_penalty(std::span<const double> current,
                                  const ParamHistory& history) {
  if (history.count() == 0) throw UsageError("historical averaging needs a nonempty history");
  if (current.size() != history.mean().size()) {
    throw UsageError("parameter vector and history differ in width");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < current.size(); ++i) {
    const double d = current[i] - history.mean()[i];
    s += d * d;
  }
  return s;
}

LabelVectors smooth_labels(std::size_t n_real, std::size_t n_fake, double pos, double neg) {
  if (!(neg >= 0.0 && neg < pos && pos <= 1.0)) {
    throw UsageError("label targets need 0 <= neg < pos <= 1");
  }
  return {Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n_real), pos),
          Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n_fake), neg)};
}

ReferenceStats reference_statistics(const Eigen::MatrixXd& reference_batch) {
  if (reference_batch.rows() < 1) throw UsageError("reference batch is empty");
  ReferenceStats s;
  s.mean = reference_batch.colwise().mean();
  const Eigen::MatrixXd centered = reference_batch.rowwise() - s.mean;
  const Eigen::RowVectorXd var =
      centered.array().square().colwise().sum() / static_cast<double>(reference_batch.rows());
  s.scale = (var.array() + kVbnEpsilon).sqrt().matrix();
  return s;
}

Eigen::MatrixXd virtual_batch_norm(const Eigen::MatrixXd& batch, const ReferenceStats& ref) {
  if (batch.cols() != ref.mean.size()) {
    throw UsageError("batch width does not match the reference statistics");
  }
  return ((batch.rowwise() - ref.mean).array().rowwise() / ref.scale.array()).matrix();
}

Eigen::MatrixXd add_instance_noise(const Eigen::MatrixXd& batch, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw UsageError("instance noise sigma must be >= 0");
  if (sigma == 0.0) return batch;
  Eigen::MatrixXd out = batch;
  // Row-major draw order.
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) += sigma * rng.normal();
  }
  return out;
}

Eigen::MatrixXd add_instance_noise(const Eigen::MatrixXd& batch, double sigma,
                                   std::uint64_t seed) {
  Rng rng(seed);
  return add_instance_noise(batch, sigma, rng);
}

double instance_noise_sigma(double sigma0, double decay, std::uint64_t step) {
  return sigma0 * std::pow(decay, static_cast<double>(step));
}

ModeCoverage mode_coverage(const Eigen::MatrixXd& samples,
                           const std::vector<std::array<double, 2>>& centers,
                           double radius, std::size_t min_count) {
  if (centers.empty()) throw UsageError("mode coverage needs at least one center");
  if (!(radius > 0.0)) throw UsageError("mode coverage radius must be > 0");
  if (samples.rows() > 0 && samples.cols() != 2) {
    throw UsageError("mode coverage expects 2-D samples");
  }
  std::vector<std::size_t> hits(centers.size(), 0);
  std::size_t near_any = 0;
  const double r2 = radius * radius;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    bool near = false;
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const double dx = samples(i, 0) - centers[k][0];
      const double dy = samples(i, 1) - centers[k][1];
      if (dx * dx + dy * dy <= r2) {
        ++hits[k];
        near = true;
      }
    }
    near_any += near ? 1 : 0;
  }
  ModeCoverage c;
  for (auto h : hits) c.covered += h >= min_count ? 1 : 0;
  c.hq_fraction = samples.rows() == 0
                      ? 0.0
                      : static_cast<double>(near_any) / static_cast<double>(samples.rows());
  return c;
}

std::string_view to_string(GanMode m) noexcept {
  return m == GanMode::wgan ? "wgan" : "vanilla_gan";
}

GanMode parse_gan_mode(std::string_view text) {
  if (text == "wgan") return GanMode::wgan;
  if (text == "vanilla_gan" || text == "vanilla") return GanMode::vanilla_gan;
  throw UsageError("mode must be 'wgan' or 'vanilla_gan', got '" + std::string(text) + "'");
}

TrainConfig TrainConfig::defaults(GanMode mode) {
  TrainConfig cfg;
  cfg.mode = mode;
  if (mode == GanMode::vanilla_gan) {
    cfg.g_opt = {OptimizerKind::adam, 2e-4};
    cfg.d_opt = {OptimizerKind::adam, 2e-4};
  }
  return cfg;
}

void validate(const TrainConfig& cfg) {
  if (cfg.n_critic < 1) throw UsageError("n_critic must be >= 1");
  if (cfg.mode == GanMode::wgan && !(cfg.clip_c > 0.0)) {
    throw UsageError("clip_c must be > 0 in wgan mode");
  }
  if (cfg.batch_size < 1) throw UsageError("batch_size must be >= 1");
  validate(cfg.noise);
  if (cfg.label_smoothing) {
    if (cfg.mode != GanMode::vanilla_gan) {
      throw UsageError("label_smoothing applies to vanilla_gan only");
    }
    if (!(cfg.label_neg >= 0.0 && cfg.label_neg < cfg.label_pos && cfg.label_pos <= 1.0)) {
      throw UsageError("label smoothing needs 0 <= neg < pos <= 1");
    }
  }
  if (cfg.non_saturating && cfg.mode != GanMode::vanilla_gan) {
    throw UsageError("non_saturating applies to vanilla_gan only");
  }
  if (cfg.mbd_kernel_dims < 1) throw UsageError("mbd_kernel_dims must be >= 1");
  if (!(cfg.historical_weight >= 0.0)) throw UsageError("historical_weight must be >= 0");
  if (!(cfg.noise_sigma0 >= 0.0)) throw UsageError("noise_sigma0 must be >= 0");
  if (!(cfg.noise_decay > 0.0 && cfg.noise_decay <= 1.0)) {
    throw UsageError("noise_decay must lie in (0, 1]");
  }
  if (!(cfg.mode_min_fraction >= 0.0 && cfg.mode_min_fraction <= 1.0)) {
    throw UsageError("mode_min_fraction must lie in [0, 1]");
  }
  for (int h : cfg.g_hidden) {
    if (h < 1) throw UsageError("g_hidden widths must be >= 1");
  }
  for (int h : cfg.d_hidden) {
    if (h < 1) throw UsageError("d_hidden widths must be >= 1");
  }
}

TrainerState make_trainer(const TrainConfig& cfg, AnalyticDistribution target) {
  validate(cfg);
  const int data_dim = dimension(target);
  const std::uint64_t seed = cfg.seed;

  Network generator =
      Network::mlp(cfg.noise.dimension, cfg.g_hidden, data_dim, Activation::tanh,
                   Activation::identity);
  if (cfg.g_identity_init) {
    if (!cfg.g_hidden.empty() || cfg.noise.dimension != data_dim) {
      throw UsageError("g_identity_init needs no hidden layers and noise dimension " +
                       std::to_string(data_dim));
    }
    auto& layer = std::get<DenseLayer>(generator.layers().front());
    layer.weight.setIdentity();
    layer.bias.setZero();
  } else {
    Rng init(seed, kStreamGeneratorInit);
    generator.init_glorot(init);
  }

  std::vector<Layer> layers;
  std::optional<ReferenceStats> reference;
  if (cfg.vbn) {
    Rng ref_rng(seed, kStreamReference);
    reference = reference_statistics(
        sample(target, ref_rng, static_cast<std::size_t>(cfg.batch_size)));
    layers.emplace_back(VirtualBatchNorm(reference->mean, reference->scale));
  }
  int width = data_dim;
  for (int h : cfg.d_hidden) {
    layers.emplace_back(DenseLayer(width, h, Activation::relu));
    width = h;
  }
  if (cfg.minibatch_discrimination) {
    layers.emplace_back(MinibatchDiscrimination(width, cfg.mbd_kernel_dims));
    width += 1;
  }
  layers.emplace_back(DenseLayer(
      width, 1, cfg.mode == GanMode::wgan ? Activation::identity : Activation::sigmoid));
  Network critic(std::move(layers));
  Rng critic_init(seed, kStreamCriticInit);
  critic.init_glorot(critic_init);
  if (cfg.mode == GanMode::wgan) clip_weights(critic, cfg.clip_c);

  const std::size_t g_params = generator.param_count();
  const std::size_t d_params = critic.param_count();
  TrainerState state{std::move(target),
                     std::move(generator),
                     std::move(critic),
                     OptimizerState(cfg.g_opt, g_params),
                     OptimizerState(cfg.d_opt, d_params),
                     0,
                     {},
                     {},
                     std::move(reference),
                     Rng(seed, kStreamData),
                     Rng(seed, kStreamNoise),
                     Rng(seed, kStreamInstanceNoise),
                     {}};
  if (cfg.historical_averaging) {
    state.g_history.push(state.generator.flat_parameters());
    state.d_history.push(state.critic.flat_parameters());
  }
  return state;
}

MetricsRow train_step(TrainerState& state, const TrainConfig& cfg) {
  std::vector<MetricsRow> log;
  log.swap(state.metrics);
  TrainerState last_good = state;
  try {
    MetricsRow row = step_impl(state, cfg);
    state.metrics.swap(log);
    state.metrics.push_back(row);
    return row;
  } catch (const NumericError& e) {
    state = std::move(last_good);
    state.metrics.swap(log);
    throw NumericError(std::string(e.what()) + " during step " +
                       std::to_string(state.step + 1) + "; state rolled back to step " +
                       std::to_string(state.step));
  }
}

double generator_gradient_norm(TrainerState& state, const TrainConfig& cfg,
                               const Eigen::MatrixXd& z) {
  generator_gradient(state, cfg, z, nullptr);
  const double norm = state.generator.gradient_norm();
  state.generator.zero_grad();
  return norm;
}

double discriminator_step(TrainerState& state, const TrainConfig& cfg) {
  return update_discriminator(state, cfg).loss;
}

std::vector<double> gradient_norm_probe(TrainerState& state, const TrainConfig& cfg,
                                        std::size_t d_train_steps) {
  const Eigen::MatrixXd z =
      sample(cfg.noise, state.noise_rng, static_cast<std::size_t>(cfg.batch_size));
  std::vector<double> norms;
  norms.reserve(d_train_steps + 1);
  norms.push_back(generator_gradient_norm(state, cfg, z));
  for (std::size_t i = 0; i < d_train_steps; ++i) {
    update_discriminator(state, cfg);
    norms.push_back(generator_gradient_norm(state, cfg, z));
  }
  return norms;
}

}  // namespace ganlab
