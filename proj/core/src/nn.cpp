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

#include "ganlab/nn.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include "ganlab/error.hpp"

namespace ganlab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Eigen::MatrixXd activate(const Eigen::MatrixXd& z, Activation act) {
  switch (act) {
    case Activation::relu:
      return z.cwiseMax(0.0);
    case Activation::tanh:
      return z.array().tanh().matrix();
    case Activation::sigmoid:
      return (1.0 / (1.0 + (-z.array()).exp())).matrix();
    case Activation::identity:
      return z;
  }
  return z;
}

// d act / d z expressed through z and the activation output a.
Eigen::MatrixXd activation_slope(const Eigen::MatrixXd& z,
                                 const Eigen::MatrixXd& a, Activation act) {
  switch (act) {
    case Activation::relu:
      return (z.array() > 0.0).cast<double>().matrix();
    case Activation::tanh:
      return (1.0 - a.array().square()).matrix();
    case Activation::sigmoid:
      return (a.array() * (1.0 - a.array())).matrix();
    case Activation::identity:
      return Eigen::MatrixXd::Ones(z.rows(), z.cols());
  }
  return Eigen::MatrixXd::Ones(z.rows(), z.cols());
}

// c_ij = exp(-|m_i - m_j|_1) for the rows of m.
Eigen::MatrixXd closeness(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::exp(-(m.row(i) - m.row(j)).cwiseAbs().sum());
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  return c;
}

double sign(double v) { return (v > 0.0) - (v < 0.0); }

// Visits (value, grad, size) for every parameter tensor in layer order.
template <class Layers, class Fn>
void for_each_block(Layers& layers, Fn&& fn) {
  for (auto& layer : layers) {
    std::visit(
        [&](auto& l) {
          using T = std::remove_cvref_t<decltype(l)>;
          if constexpr (std::is_same_v<T, DenseLayer>) {
            fn(l.weight.data(), l.weight_grad.data(),
               static_cast<std::size_t>(l.weight.size()));
            fn(l.bias.data(), l.bias_grad.data(), static_cast<std::size_t>(l.bias.size()));
          } else if constexpr (std::is_same_v<T, MinibatchDiscrimination>) {
            fn(l.projection.data(), l.projection_grad.data(),
               static_cast<std::size_t>(l.projection.size()));
          }
        },
        layer);
  }
}

}  // namespace

std::string_view to_string(Activation a) noexcept {
  switch (a) {
    case Activation::relu:
      return "relu";
    case Activation::tanh:
      return "tanh";
    case Activation::sigmoid:
      return "sigmoid";
    case Activation::identity:
      return "identity";
  }
  return "identity";
}

Activation parse_activation(std::string_view text) {
  for (auto a : {Activation::relu, Activation::tanh, Activation::sigmoid,
                 Activation::identity}) {
    if (text == to_string(a)) return a;
  }
  throw UsageError("unknown activation '" + std::string(text) + "'");
}

DenseLayer::DenseLayer(int in, int out, Activation act)
    : weight(Eigen::MatrixXd::Zero(out, in)),
      bias(Eigen::VectorXd::Zero(out)),
      activation(act),
      weight_grad(Eigen::MatrixXd::Zero(out, in)),
      bias_grad(Eigen::VectorXd::Zero(out)) {
  if (in < 1 || out < 1) throw UsageError("dense layer dimensions must be >= 1");
}

MinibatchDiscrimination::MinibatchDiscrimination(int in, int kernel_dims)
    : projection(Eigen::MatrixXd::Zero(in, kernel_dims)),
      projection_grad(Eigen::MatrixXd::Zero(in, kernel_dims)) {
  if (in < 1 || kernel_dims < 1) {
    throw UsageError("minibatch discrimination dimensions must be >= 1");
  }
}

VirtualBatchNorm::VirtualBatchNorm(Eigen::RowVectorXd mean_,
                                   Eigen::RowVectorXd scale_)
    : mean(std::move(mean_)), scale(std::move(scale_)) {
  if (mean.size() != scale.size() || mean.size() < 1) {
    throw UsageError("virtual batch norm statistics must have equal, nonzero width");
  }
  if ((scale.array() <= 0.0).any()) {
    throw UsageError("virtual batch norm scales must be > 0");
  }
}

int input_dim(const Layer& layer) noexcept {
  return std::visit(
      Overloaded{[](const DenseLayer& d) { return static_cast<int>(d.weight.cols()); },
                 [](const MinibatchDiscrimination& m) {
                   return static_cast<int>(m.projection.rows());
                 },
                 [](const VirtualBatchNorm& v) { return static_cast<int>(v.mean.size()); }},
      layer);
}

int output_dim(const Layer& layer) noexcept {
  return std::visit(
      Overloaded{[](const DenseLayer& d) { return static_cast<int>(d.weight.rows()); },
                 [](const MinibatchDiscrimination& m) {
                   return static_cast<int>(m.projection.rows()) + 1;
                 },
                 [](const VirtualBatchNorm& v) { return static_cast<int>(v.mean.size()); }},
      layer);
}

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw UsageError("network needs at least one layer");
  for (std::size_t i = 1; i < layers_.size(); ++i) {
    if (ganlab::output_dim(layers_[i - 1]) != ganlab::input_dim(layers_[i])) {
      throw UsageError("layer " + std::to_string(i) + " expects width " +
                       std::to_string(ganlab::input_dim(layers_[i])) + " but receives " +
                       std::to_string(ganlab::output_dim(layers_[i - 1])));
    }
  }
}

Network Network::mlp(int in, const std::vector<int>& hidden, int out,
                     Activation hidden_act, Activation out_act) {
  std::vector<Layer> layers;
  int width = in;
  for (int h : hidden) {
    layers.emplace_back(DenseLayer(width, h, hidden_act));
    width = h;
  }
  layers.emplace_back(DenseLayer(width, out, out_act));
  return Network(std::move(layers));
}

int Network::input_dim() const noexcept { return ganlab::input_dim(layers_.front()); }
int Network::output_dim() const noexcept { return ganlab::output_dim(layers_.back()); }

std::size_t Network::param_count() const noexcept {
  std::size_t n = 0;
  for (const auto& layer : layers_) {
    std::visit(Overloaded{[&](const DenseLayer& d) {
                            n += static_cast<std::size_t>(d.weight.size() + d.bias.size());
                          },
                          [&](const MinibatchDiscrimination& m) {
                            n += static_cast<std::size_t>(m.projection.size());
                          },
                          [](const VirtualBatchNorm&) {}},
               layer);
  }
  return n;
}

void Network::init_glorot(Rng& rng) {
  auto fill = [&](Eigen::MatrixXd& w, double fan_sum) {
    const double limit = std::sqrt(6.0 / fan_sum);
    // Column-major fill order, fixed for replay.
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-limit, limit);
    }
  };
  for (auto& layer : layers_) {
    std::visit(Overloaded{[&](DenseLayer& d) {
                            fill(d.weight, static_cast<double>(d.weight.rows() + d.weight.cols()));
                            d.bias.setZero();
                          },
                          [&](MinibatchDiscrimination& m) {
                            fill(m.projection, static_cast<double>(m.projection.rows() +
                                                                   m.projection.cols()));
                          },
                          [](VirtualBatchNorm&) {}},
               layer);
  }
}

Eigen::MatrixXd Network::run(const Eigen::MatrixXd& batch, std::size_t n_layers,
                             Cache* cache) const {
  if (batch.cols() != input_dim()) {
    throw UsageError("batch width " + std::to_string(batch.cols()) +
                     " does not match network input " + std::to_string(input_dim()));
  }
  if (n_layers > layers_.size()) throw UsageError("forward past the last layer");
  if (cache) {
    cache->n_layers = n_layers;
    cache->inputs.assign(n_layers, {});
    cache->pre.assign(n_layers, {});
    cache->outputs.assign(n_layers, {});
  }
  Eigen::MatrixXd x = batch;
  for (std::size_t l = 0; l < n_layers; ++l) {
    Eigen::MatrixXd y = std::visit(
        Overloaded{[&](const DenseLayer& d) -> Eigen::MatrixXd {
                     Eigen::MatrixXd z = x * d.weight.transpose();
                     z.rowwise() += d.bias.transpose();
                     Eigen::MatrixXd a = activate(z, d.activation);
                     if (cache) cache->pre[l] = std::move(z);
                     return a;
                   },
                   [&](const MinibatchDiscrimination& m) -> Eigen::MatrixXd {
                     const Eigen::MatrixXd c = closeness(x * m.projection);
                     Eigen::MatrixXd out(x.rows(), x.cols() + 1);
                     out.leftCols(x.cols()) = x;
                     out.col(x.cols()) = c.rowwise().sum();
                     return out;
                   },
                   [&](const VirtualBatchNorm& v) -> Eigen::MatrixXd {
                     return ((x.rowwise() - v.mean).array().rowwise() /
                             v.scale.array())
                         .matrix();
                   }},
        layers_[l]);
    if (cache) {
      cache->inputs[l] = std::move(x);
      cache->outputs[l] = y;
    }
    x = std::move(y);
  }
  if (!x.allFinite()) throw NumericError("network produced a non-finite value");
  return x;
}

Eigen::MatrixXd Network::forward(const Eigen::MatrixXd& batch) {
  return forward(batch, layers_.size());
}

Eigen::MatrixXd Network::forward(const Eigen::MatrixXd& batch, std::size_t n_layers) {
  has_cache_ = false;
  Eigen::MatrixXd out = run(batch, n_layers, &cache_);
  has_cache_ = true;
  return out;
}

Eigen::MatrixXd Network::evaluate(const Eigen::MatrixXd& batch) const {
  return run(batch, layers_.size(), nullptr);
}

Eigen::MatrixXd Network::evaluate(const Eigen::MatrixXd& batch,
                                  std::size_t n_layers) const {
  return run(batch, n_layers, nullptr);
}

Eigen::MatrixXd Network::backward(const Eigen::MatrixXd& upstream, GradMode mode) {
  if (!has_cache_) throw UsageError("backward called without a matching forward");
  const std::size_t n = cache_.n_layers;
  if (n == 0) return upstream;
  const auto& last = cache_.outputs[n - 1];
  if (upstream.rows() != last.rows() || upstream.cols() != last.cols()) {
    throw UsageError("upstream gradient shape does not match the forward output");
  }
  const bool acc = mode == GradMode::accumulate;
  Eigen::MatrixXd g = upstream;
  for (std::size_t l = n; l-- > 0;) {
    const Eigen::MatrixXd& x = cache_.inputs[l];
    g = std::visit(
        Overloaded{[&](DenseLayer& d) -> Eigen::MatrixXd {
                     const Eigen::MatrixXd dz =
                         (g.array() *
                          activation_slope(cache_.pre[l], cache_.outputs[l], d.activation)
                              .array())
                             .matrix();
                     if (acc) {
                       d.weight_grad.noalias() += dz.transpose() * x;
                       d.bias_grad += dz.colwise().sum().transpose();
                     }
                     return dz * d.weight;
                   },
                   [&](MinibatchDiscrimination& m) -> Eigen::MatrixXd {
                     const Eigen::MatrixXd proj = x * m.projection;
                     const Eigen::MatrixXd c = closeness(proj);
                     const Eigen::VectorXd go = g.col(x.cols());
                     Eigen::MatrixXd dproj = Eigen::MatrixXd::Zero(proj.rows(), proj.cols());
                     for (Eigen::Index k = 0; k < proj.rows(); ++k) {
                       for (Eigen::Index j = 0; j < proj.rows(); ++j) {
                         if (j == k) continue;
                         const double w = (go(k) + go(j)) * c(k, j);
                         for (Eigen::Index b = 0; b < proj.cols(); ++b) {
                           dproj(k, b) -= w * sign(proj(k, b) - proj(j, b));
                         }
                       }
                     }
                     if (acc) m.projection_grad.noalias() += x.transpose() * dproj;
                     Eigen::MatrixXd dx = g.leftCols(x.cols());
                     dx.noalias() += dproj * m.projection.transpose();
                     return dx;
                   },
                   [&](VirtualBatchNorm& v) -> Eigen::MatrixXd {
                     return (g.array().rowwise() / v.scale.array()).matrix();
                   }},
        layers_[l]);
  }
  has_cache_ = false;
  return g;
}

std::vector<bool> Network::relu_pattern() const {
  std::vector<bool> pattern;
  if (!has_cache_) return pattern;
  for (std::size_t l = 0; l < cache_.n_layers; ++l) {
    const auto* d = std::get_if<DenseLayer>(&layers_[l]);
    if (d == nullptr || d->activation != Activation::relu) continue;
    const auto& z = cache_.pre[l];
    for (Eigen::Index i = 0; i < z.size(); ++i) pattern.push_back(z.data()[i] > 0.0);
  }
  return pattern;
}

std::vector<ParamBlock> Network::parameters() {
  std::vector<ParamBlock> blocks;
  for_each_block(layers_, [&](double* v, double* g, std::size_t n) {
    blocks.push_back({std::span<double>(v, n), std::span<double>(g, n)});
  });
  return blocks;
}

std::vector<double> Network::flat_parameters() const {
  std::vector<double> out;
  out.reserve(param_count());
  for_each_block(layers_, [&](const double* v, const double*, std::size_t n) {
    out.insert(out.end(), v, v + n);
  });
  return out;
}

void Network::set_flat_parameters(std::span<const double> values) {
  if (values.size() != param_count()) {
    throw UsageError("parameter vector has " + std::to_string(values.size()) +
                     " entries, network has " + std::to_string(param_count()));
  }
  std::size_t offset = 0;
  for_each_block(layers_, [&](double* v, double*, std::size_t n) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(offset), n, v);
    offset += n;
  });
}

std::vector<double> Network::flat_gradients() const {
  std::vector<double> out;
  out.reserve(param_count());
  for_each_block(layers_, [&](const double*, const double* g, std::size_t n) {
    out.insert(out.end(), g, g + n);
  });
  return out;
}

void Network::zero_grad() {
  for_each_block(layers_, [](double*, double* g, std::size_t n) {
    std::fill_n(g, n, 0.0);
  });
}

bool Network::gradients_finite() const {
  for (double g : flat_gradients()) {
    if (!std::isfinite(g)) return false;
  }
  return true;
}

double Network::gradient_norm() const {
  double sum = 0.0;
  for (double g : flat_gradients()) sum += g * g;
  return std::sqrt(sum);
}

GradCheckReport grad_check(Network& net, const LossFn& loss,
                           const Eigen::MatrixXd& batch, double h, double tol) {
  if (!(h > 0.0)) throw UsageError("grad_check step h must be > 0");
  GradCheckReport report;
  net.zero_grad();
  const Eigen::MatrixXd out = net.forward(batch);
  const std::vector<bool> base_pattern = net.relu_pattern();
  net.backward(loss(out).grad);
  const std::vector<double> analytic = net.flat_gradients();
  net.zero_grad();

  std::vector<double> params = net.flat_parameters();
  auto probe = [&](std::size_t i, double value, std::vector<bool>& pattern) {
    params[i] = value;
    net.set_flat_parameters(params);
    const double l = loss(net.forward(batch)).value;
    pattern = net.relu_pattern();
    return l;
  };
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double original = params[i];
    std::vector<bool> plus_pattern;
    std::vector<bool> minus_pattern;
    const double lp = probe(i, original + h, plus_pattern);
    const double lm = probe(i, original - h, minus_pattern);
    params[i] = original;
    if (plus_pattern != base_pattern || minus_pattern != base_pattern) {
      report.non_comparable.push_back(i);
      continue;
    }
    const double numeric = (lp - lm) / (2.0 * h);
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
    const double err = std::abs(analytic[i] - numeric) / denom;
    ++report.compared;
    if (err > report.max_relative_error) {
      report.max_relative_error = err;
      report.worst_index = i;
    }
  }
  net.set_flat_parameters(params);
  // Leave the cache consistent with the unperturbed parameters.
  net.forward(batch);
  net.backward(Eigen::MatrixXd::Zero(out.rows(), out.cols()), GradMode::input_only);
  report.passed = report.max_relative_error < tol;
  return report;
}

std::string_view to_string(OptimizerKind k) noexcept {
  switch (k) {
    case OptimizerKind::sgd:
      return "sgd";
    case OptimizerKind::rmsprop:
      return "rmsprop";
    case OptimizerKind::adam:
      return "adam";
  }
  return "sgd";
}

OptimizerKind parse_optimizer(std::string_view text) {
  for (auto k : {OptimizerKind::sgd, OptimizerKind::rmsprop, OptimizerKind::adam}) {
    if (text == to_string(k)) return k;
  }
  throw UsageError("unknown optimizer '" + std::string(text) + "'");
}

OptimizerState::OptimizerState(OptimizerConfig config_, std::size_t n_params)
    : config(config_), first_moment(n_params, 0.0), second_moment(n_params, 0.0) {
  if (!(config.learning_rate >= 0.0)) throw UsageError("learning rate must be >= 0");
  if (!(config.decay >= 0.0 && config.decay < 1.0)) {
    throw UsageError("rmsprop decay must lie in [0, 1)");
  }
  if (!(config.beta1 >= 0.0 && config.beta1 < 1.0 && config.beta2 >= 0.0 &&
        config.beta2 < 1.0)) {
    throw UsageError("adam betas must lie in [0, 1)");
  }
  if (!(config.epsilon > 0.0)) throw UsageError("optimizer epsilon must be > 0");
}

void optimizer_step(Network& net, OptimizerState& opt) {
  if (opt.second_moment.size() != net.param_count()) {
    throw UsageError("optimizer buffers do not match the network");
  }
  auto blocks = net.parameters();
  std::size_t index = 0;
  for (const auto& b : blocks) {
    for (double g : b.grad) {
      if (!std::isfinite(g)) {
        throw NumericError("non-finite gradient at parameter " + std::to_string(index));
      }
      ++index;
    }
  }
  ++opt.steps;
  const auto& cfg = opt.config;
  const double bias1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(opt.steps));
  const double bias2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(opt.steps));
  index = 0;
  for (auto& b : blocks) {
    for (std::size_t k = 0; k < b.value.size(); ++k, ++index) {
      const double g = b.grad[k];
      double& v = opt.second_moment[index];
      double& m = opt.first_moment[index];
      switch (cfg.kind) {
        case OptimizerKind::sgd:
          b.value[k] -= cfg.learning_rate * g;
          break;
        case OptimizerKind::rmsprop:
          v = cfg.decay * v + (1.0 - cfg.decay) * g * g;
          b.value[k] -= cfg.learning_rate * g / (std::sqrt(v) + cfg.epsilon);
          break;
        case OptimizerKind::adam:
          m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
          v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
          b.value[k] -= cfg.learning_rate * (m / bias1) /
                        (std::sqrt(v / bias2) + cfg.epsilon);
          break;
      }
      b.grad[k] = 0.0;
    }
  }
}

void clip_weights(Network& net, double c) {
  if (!(c > 0.0)) throw UsageError("clip window must be > 0");
  for (auto& b : net.parameters()) {
    for (double& v : b.value) v = std::clamp(v, -c, c);
  }
}

double max_abs_parameter(const Network& net) {
  double m = 0.0;
  for (double v : net.flat_parameters()) m = std::max(m, std::abs(v));
  return m;
}

double lipschitz_probe(const Network& net, const Eigen::MatrixXd& a,
                       const Eigen::MatrixXd& b) {
  if (net.output_dim() != 1) throw UsageError("lipschitz_probe needs a scalar network");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw UsageError("lipschitz_probe needs paired batches of equal shape");
  }
  const Eigen::MatrixXd fa = net.evaluate(a);
  const Eigen::MatrixXd fb = net.evaluate(b);
  double best = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double dist = (a.row(i) - b.row(i)).norm();
    if (dist == 0.0) throw UsageError("lipschitz_probe pair " + std::to_string(i) + " coincides");
    best = std::max(best, std::abs(fa(i, 0) - fb(i, 0)) / dist);
  }
  return best;
}

double lipschitz_bound(const Network& net) {
  double bound = 1.0;
  for (const auto& layer : net.layers()) {
    bound *= std::visit(
        Overloaded{[](const DenseLayer& d) {
                     const Eigen::JacobiSVD<Eigen::MatrixXd> svd(d.weight);
                     const double act = d.activation == Activation::sigmoid ? 0.25 : 1.0;
                     return svd.singularValues()(0) * act;
                   },
                   [](const MinibatchDiscrimination&) -> double {
                     throw UsageError(
                         "no per-sample Lipschitz bound through minibatch discrimination");
                   },
                   [](const VirtualBatchNorm& v) { return v.scale.cwiseInverse().maxCoeff(); }},
        layer);
  }
  return bound;
}

ParamSnapshot snapshot(const Network& net, std::uint64_t step) {
  return {net.flat_parameters(), step};
}

void restore(Network& net, const ParamSnapshot& snap) {
  net.set_flat_parameters(snap.values);
}

namespace {

constexpr std::array<char, 8> kMagic = {'G', 'A', 'N', 'L', 'A', 'B', 'N', 'N'};
constexpr std::uint32_t kFormatVersion = 1;

enum class LayerKind : std::uint8_t { dense = 0, minibatch = 1, vbn = 2 };

template <class T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

template <class T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw UsageError("checkpoint truncated");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<T>(bytes[i]) << (8 * i));
  }
  return value;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

}  // namespace

void write_checkpoint(std::ostream& out, const Network& net, std::uint64_t step) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(net.layers().size()));
  for (const auto& layer : net.layers()) {
    std::visit(Overloaded{[&](const DenseLayer& d) {
                            put_le<std::uint8_t>(out, static_cast<std::uint8_t>(LayerKind::dense));
                            put_le<std::uint32_t>(out, static_cast<std::uint32_t>(d.weight.cols()));
                            put_le<std::uint32_t>(out, static_cast<std::uint32_t>(d.weight.rows()));
                            put_le<std::uint8_t>(out, static_cast<std::uint8_t>(d.activation));
                          },
                          [&](const MinibatchDiscrimination& m) {
                            put_le<std::uint8_t>(out, static_cast<std::uint8_t>(LayerKind::minibatch));
                            put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.projection.rows()));
                            put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.projection.cols()));
                            put_le<std::uint8_t>(out, 0);
                          },
                          [&](const VirtualBatchNorm& v) {
                            put_le<std::uint8_t>(out, static_cast<std::uint8_t>(LayerKind::vbn));
                            put_le<std::uint32_t>(out, static_cast<std::uint32_t>(v.mean.size()));
                            put_le<std::uint32_t>(out, static_cast<std::uint32_t>(v.mean.size()));
                            put_le<std::uint8_t>(out, 0);
                            for (Eigen::Index i = 0; i < v.mean.size(); ++i) put_f64(out, v.mean(i));
                            for (Eigen::Index i = 0; i < v.scale.size(); ++i) put_f64(out, v.scale(i));
                          }},
               layer);
  }
  put_le<std::uint64_t>(out, step);
  const auto params = net.flat_parameters();
  put_le<std::uint64_t>(out, params.size());
  for (double p : params) put_f64(out, p);
  if (!out) throw std::runtime_error("checkpoint write failed");
}

void write_checkpoint(const std::filesystem::path& path, const Network& net,
                      std::uint64_t step) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_checkpoint(out, net, step);
}

Checkpoint read_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw UsageError("not a ganlab checkpoint");
  if (get_le<std::uint32_t>(in) != kFormatVersion) {
    throw UsageError("unsupported checkpoint version");
  }
  const auto n_layers = get_le<std::uint32_t>(in);
  std::vector<Layer> layers;
  for (std::uint32_t l = 0; l < n_layers; ++l) {
    const auto kind = static_cast<LayerKind>(get_le<std::uint8_t>(in));
    const auto a = static_cast<int>(get_le<std::uint32_t>(in));
    const auto b = static_cast<int>(get_le<std::uint32_t>(in));
    const auto act = get_le<std::uint8_t>(in);
    switch (kind) {
      case LayerKind::dense:
        if (act > static_cast<std::uint8_t>(Activation::identity)) {
          throw UsageError("checkpoint has an unknown activation");
        }
        layers.emplace_back(DenseLayer(a, b, static_cast<Activation>(act)));
        break;
      case LayerKind::minibatch:
        layers.emplace_back(MinibatchDiscrimination(a, b));
        break;
      case LayerKind::vbn: {
        Eigen::RowVectorXd mean(a);
        Eigen::RowVectorXd scale(a);
        for (int i = 0; i < a; ++i) mean(i) = get_f64(in);
        for (int i = 0; i < a; ++i) scale(i) = get_f64(in);
        layers.emplace_back(VirtualBatchNorm(mean, scale));
        break;
      }
      default:
        throw UsageError("checkpoint has an unknown layer kind");
    }
  }
  Network net(std::move(layers));
  const auto step = get_le<std::uint64_t>(in);
  const auto count = get_le<std::uint64_t>(in);
  if (count != net.param_count()) throw UsageError("checkpoint parameter count mismatch");
  std::vector<double> params(count);
  for (auto& p : params) p = get_f64(in);
  net.set_flat_parameters(params);
  return {std::move(net), step};
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace ganlab
