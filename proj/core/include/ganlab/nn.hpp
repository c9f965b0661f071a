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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "ganlab/rng.hpp"

namespace ganlab {

enum class Activation { relu, tanh, sigmoid, identity };

std::string_view to_string(Activation a) noexcept;
Activation parse_activation(std::string_view text);

/// Mutable view of one parameter tensor and its gradient accumulator.
struct ParamBlock {
  std::span<double> value;
  std::span<double> grad;
};

/// Affine map followed by an elementwise nonlinearity. Batches are n x in,
/// one sample per row; weight is out x in.
struct DenseLayer {
  DenseLayer(int in, int out, Activation act);

  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
  Activation activation;
  Eigen::MatrixXd weight_grad;
  Eigen::VectorXd bias_grad;
};

/// Appends o(x_i) = sum_j exp(-|T x_i - T x_j|_1) to every row, where T is a
/// learned in x kernel_dims projection. Output width is in + 1.
struct MinibatchDiscrimination {
  MinibatchDiscrimination(int in, int kernel_dims);

  Eigen::MatrixXd projection;
  Eigen::MatrixXd projection_grad;
};

/// Fixed per-feature standardization, (x - mean) / scale. No parameters.
struct VirtualBatchNorm {
  VirtualBatchNorm(Eigen::RowVectorXd mean, Eigen::RowVectorXd scale);

  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;
};

using Layer = std::variant<DenseLayer, MinibatchDiscrimination, VirtualBatchNorm>;

int input_dim(const Layer& layer) noexcept;
int output_dim(const Layer& layer) noexcept;

enum class GradMode {
  /// Add parameter gradients into the accumulators.
  accumulate,
  /// Only propagate to the input; leave accumulators untouched.
  input_only,
};

/// A feed-forward stack of layers with reverse-mode gradients.
///
/// forward() caches intermediates for exactly one matching backward(). A
/// partial forward (first k layers) pairs with a backward starting at layer
/// k; this is how penultimate-feature losses are differentiated.
class Network {
 public:
  explicit Network(std::vector<Layer> layers);

  /// Dense stack in -> hidden... -> out.
  static Network mlp(int in, const std::vector<int>& hidden, int out,
                     Activation hidden_act, Activation out_act);

  int input_dim() const noexcept;
  int output_dim() const noexcept;
  std::size_t param_count() const noexcept;
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::vector<Layer>& layers() noexcept { return layers_; }

  /// Uniform in +-sqrt(6 / (fan_in + fan_out)) for every weight matrix and
  /// projection; zero biases.
  void init_glorot(Rng& rng);

  Eigen::MatrixXd forward(const Eigen::MatrixXd& batch);
  Eigen::MatrixXd forward(const Eigen::MatrixXd& batch, std::size_t n_layers);
  /// Forward without touching the cache.
  Eigen::MatrixXd evaluate(const Eigen::MatrixXd& batch) const;
  Eigen::MatrixXd evaluate(const Eigen::MatrixXd& batch,
                           std::size_t n_layers) const;

  /// Gradient with respect to the batch passed to the last forward().
  Eigen::MatrixXd backward(const Eigen::MatrixXd& upstream,
                           GradMode mode = GradMode::accumulate);

  /// Signs (pre-activation > 0) of every relu unit from the last forward().
  std::vector<bool> relu_pattern() const;

  std::vector<ParamBlock> parameters();
  std::vector<double> flat_parameters() const;
  void set_flat_parameters(std::span<const double> values);
  std::vector<double> flat_gradients() const;
  void zero_grad();
  bool gradients_finite() const;
  double gradient_norm() const;

 private:
  struct Cache {
    std::size_t n_layers = 0;
    std::vector<Eigen::MatrixXd> inputs;
    std::vector<Eigen::MatrixXd> pre;  // pre-activations, dense layers only
    std::vector<Eigen::MatrixXd> outputs;
  };

  Eigen::MatrixXd run(const Eigen::MatrixXd& batch, std::size_t n_layers,
                      Cache* cache) const;

  std::vector<Layer> layers_;
  Cache cache_;
  bool has_cache_ = false;
};

struct LossAndGrad {
  double value = 0.0;
  Eigen::MatrixXd grad;  // d value / d network output
};

using LossFn = std::function<LossAndGrad(const Eigen::MatrixXd& output)>;

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  std::size_t compared = 0;
  /// Parameters whose central difference straddles a relu kink.
  std::vector<std::size_t> non_comparable;
  bool passed = true;
};

/// Compares backward() against central differences parameter by parameter.
/// Relative error is |a - n| / max(|a|, |n|, 1e-6). Coordinates whose +-h
/// perturbation flips any relu unit are reported, not compared.
GradCheckReport grad_check(Network& net, const LossFn& loss,
                           const Eigen::MatrixXd& batch, double h = 1e-5,
                           double tol = 1e-4);

enum class OptimizerKind { sgd, rmsprop, adam };

std::string_view to_string(OptimizerKind k) noexcept;
OptimizerKind parse_optimizer(std::string_view text);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::rmsprop;
  double learning_rate = 5e-5;
  double decay = 0.9;  // RMSProp second-moment decay
  double beta1 = 0.5;  // Adam
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct OptimizerState {
  OptimizerState(OptimizerConfig config, std::size_t n_params);

  OptimizerConfig config;
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t steps = 0;
};

/// Applies one update from the accumulated gradients, then zeroes them.
/// Throws NumericError (naming the parameter) on a non-finite gradient.
void optimizer_step(Network& net, OptimizerState& opt);

/// Projects every parameter onto [-c, c].
void clip_weights(Network& net, double c);
double max_abs_parameter(const Network& net);

/// max over rows i of |f(a_i) - f(b_i)| / |a_i - b_i|_2 for a scalar-output
/// network. A lower bound on the Lipschitz constant.
double lipschitz_probe(const Network& net, const Eigen::MatrixXd& a,
                       const Eigen::MatrixXd& b);

/// Product of per-layer bounds: spectral norm times the activation's
/// Lipschitz constant (1/4 for sigmoid, 1 otherwise). Fixed
/// standardizations contribute max 1/scale. Throws UsageError for
/// minibatch discrimination, whose output depends on the whole batch.
double lipschitz_bound(const Network& net);

struct ParamSnapshot {
  std::vector<double> values;
  std::uint64_t step = 0;
};

ParamSnapshot snapshot(const Network& net, std::uint64_t step);
void restore(Network& net, const ParamSnapshot& snap);

struct Checkpoint {
  Network net;
  std::uint64_t step = 0;
};

/// Binary checkpoint: "GANLABNN", u32 version, u32 layer count, per-layer
/// header, u64 step, u64 parameter count, then the flat parameters. All
/// integers and doubles little-endian.
void write_checkpoint(std::ostream& out, const Network& net, std::uint64_t step);
void write_checkpoint(const std::filesystem::path& path, const Network& net,
                      std::uint64_t step);
Checkpoint read_checkpoint(std::istream& in);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace ganlab
