// Copyright 2026 The landmark-hrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Core>
#include <vector>

#include "hrl/binio.hpp"
#include "hrl/rng.hpp"

namespace hrl::nn {

enum class OutputActivation : uint8_t { kIdentity = 0, kTanhScaled = 1 };

/// Dense network shape: layer_sizes = (input, hidden..., output), ReLU on
/// hidden layers, Identity or per-dimension scaled tanh on the output.
struct MlpSpec {
  std::vector<int> layer_sizes;
  OutputActivation output_activation = OutputActivation::kIdentity;
  Eigen::VectorXd output_scale;  // per output dim, > 0; kTanhScaled only

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  int num_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }
  void validate() const;  // throws std::invalid_argument
  bool operator==(const MlpSpec&) const = default;
};

/// Network parameters. weights[l] is (layer_sizes[l+1] x layer_sizes[l]).
struct Mlp {
  MlpSpec spec;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  /// Uniform init in +-1/sqrt(fan_in).
  static Mlp init(const MlpSpec& spec, Rng& rng);
  static Mlp zeros(const MlpSpec& spec);

  int64_t num_params() const;
  void set_zero();
};

Eigen::VectorXd forward(const Mlp& net, const Eigen::VectorXd& input);
/// Column-per-sample batch forward.
Eigen::MatrixXd forward(const Mlp& net, const Eigen::MatrixXd& inputs);

/// Cached activations of a batch forward pass (inputs + post-activation of
/// every layer), reusable by backward.
struct ForwardTrace {
  std::vector<Eigen::MatrixXd> activations;  // activations[0] = inputs
  const Eigen::MatrixXd& output() const { return activations.back(); }
};
ForwardTrace forward_trace(const Mlp& net, const Eigen::MatrixXd& inputs);

struct BackwardResult {
  Mlp param_grads;
  Eigen::VectorXd input_grad;
};
/// Reverse-mode gradients of upstream_grad . f(input) w.r.t. parameters and
/// the input.
BackwardResult backward(const Mlp& net, const Eigen::VectorXd& input,
                        const Eigen::VectorXd& upstream_grad);

struct BatchBackwardResult {
  Mlp param_grads;  // summed over the batch
  Eigen::MatrixXd input_grads;
};
BatchBackwardResult backward(const Mlp& net, const ForwardTrace& trace,
                             const Eigen::MatrixXd& upstream_grads);

/// Bias-corrected Adam.
struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int64_t step_count = 0;
  std::vector<Eigen::MatrixXd> m_w, v_w;
  std::vector<Eigen::VectorXd> m_b, v_b;

  static AdamState for_mlp(const Mlp& net, double learning_rate);
};
void adam_step(AdamState& opt, Mlp& params, const Mlp& grads);

/// target <- (1 - tau) * target + tau * online, parameter-wise.
void soft_update(Mlp& target, const Mlp& online, double tau);

/// Builds a seeded random net and compares backward against central finite
/// differences on every parameter and input coordinate. Returns the worst
/// relative error, |analytic - numeric| / max(1, |analytic|, |numeric|).
double grad_check(const MlpSpec& spec, uint64_t seed, double epsilon);

void save_mlp(io::Writer& w, const Mlp& net);
Mlp load_mlp(io::Reader& r);
void save_adam(io::Writer& w, const AdamState& opt);
AdamState load_adam(io::Reader& r);

}  // namespace hrl::nn
