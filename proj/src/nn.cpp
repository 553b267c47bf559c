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

#include "hrl/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace hrl::nn {

namespace {
constexpr char kMlpMagic[4] = {'M', 'L', 'P', '0'};

void check_input_dim(const Mlp& net, Eigen::Index dim) {
  if (dim != net.spec.input_dim()) {
    throw std::invalid_argument("mlp forward: input dimension mismatch");
  }
}

// Applies the output activation in place, column-wise.
void apply_output(const MlpSpec& spec, Eigen::MatrixXd& z) {
  if (spec.output_activation == OutputActivation::kTanhScaled) {
    z = z.array().tanh();
    z.array().colwise() *= spec.output_scale.array();
  }
}
}  // namespace

void MlpSpec::validate() const {
  if (layer_sizes.size() < 2) {
    throw std::invalid_argument("mlp spec: need at least input and output");
  }
  for (int s : layer_sizes) {
    if (s <= 0) throw std::invalid_argument("mlp spec: layer size must be > 0");
  }
  if (output_activation == OutputActivation::kTanhScaled) {
    if (output_scale.size() != layer_sizes.back()) {
      throw std::invalid_argument("mlp spec: output_scale size mismatch");
    }
    if ((output_scale.array() <= 0.0).any()) {
      throw std::invalid_argument("mlp spec: output_scale must be positive");
    }
  }
}

Mlp Mlp::init(const MlpSpec& spec, Rng& rng) {
  spec.validate();
  Mlp net;
  net.spec = spec;
  for (int l = 0; l < spec.num_layers(); ++l) {
    const int in = spec.layer_sizes[l];
    const int out = spec.layer_sizes[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    Eigen::MatrixXd w(out, in);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        w(r, c) = rng.uniform(-bound, bound);
      }
    }
    Eigen::VectorXd b(out);
    for (Eigen::Index r = 0; r < b.size(); ++r) {
      b[r] = rng.uniform(-bound, bound);
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

Mlp Mlp::zeros(const MlpSpec& spec) {
  spec.validate();
  Mlp net;
  net.spec = spec;
  for (int l = 0; l < spec.num_layers(); ++l) {
    net.weights.emplace_back(
        Eigen::MatrixXd::Zero(spec.layer_sizes[l + 1], spec.layer_sizes[l]));
    net.biases.emplace_back(Eigen::VectorXd::Zero(spec.layer_sizes[l + 1]));
  }
  return net;
}

int64_t Mlp::num_params() const {
  int64_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    n += weights[l].size() + biases[l].size();
  }
  return n;
}

void Mlp::set_zero() {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l].setZero();
    biases[l].setZero();
  }
}

ForwardTrace forward_trace(const Mlp& net, const Eigen::MatrixXd& inputs) {
  check_input_dim(net, inputs.rows());
  ForwardTrace trace;
  trace.activations.reserve(net.weights.size() + 1);
  trace.activations.push_back(inputs);
  const int layers = net.spec.num_layers();
  for (int l = 0; l < layers; ++l) {
    Eigen::MatrixXd z =
        (net.weights[l] * trace.activations.back()).colwise() + net.biases[l];
    if (l + 1 < layers) {
      z = z.cwiseMax(0.0);  // ReLU
    } else {
      apply_output(net.spec, z);
    }
    trace.activations.push_back(std::move(z));
  }
  return trace;
}

Eigen::MatrixXd forward(const Mlp& net, const Eigen::MatrixXd& inputs) {
  check_input_dim(net, inputs.rows());
  Eigen::MatrixXd x = inputs;
  const int layers = net.spec.num_layers();
  for (int l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = (net.weights[l] * x).colwise() + net.biases[l];
    if (l + 1 < layers) {
      z = z.cwiseMax(0.0);
    } else {
      apply_output(net.spec, z);
    }
    x = std::move(z);
  }
  return x;
}

Eigen::VectorXd forward(const Mlp& net, const Eigen::VectorXd& input) {
  return forward(net, Eigen::MatrixXd(input)).col(0);
}

BatchBackwardResult backward(const Mlp& net, const ForwardTrace& trace,
                             const Eigen::MatrixXd& upstream_grads) {
  const int layers = net.spec.num_layers();
  if (upstream_grads.rows() != net.spec.output_dim() ||
      upstream_grads.cols() != trace.output().cols()) {
    throw std::invalid_argument("mlp backward: upstream gradient shape");
  }
  BatchBackwardResult res;
  res.param_grads = Mlp::zeros(net.spec);

  // delta = dJ/dz for the current layer, starting from the output.
  Eigen::MatrixXd delta = upstream_grads;
  if (net.spec.output_activation == OutputActivation::kTanhScaled) {
    // y = s * tanh(z); dy/dz = s - y^2 / s, reconstructed from the cached y.
    const Eigen::MatrixXd& y = trace.output();
    Eigen::MatrixXd dydz =
        ((-y.array().square()).colwise() / net.spec.output_scale.array())
            .matrix();
    dydz.array().colwise() += net.spec.output_scale.array();
    delta = delta.cwiseProduct(dydz);
  }
  for (int l = layers - 1; l >= 0; --l) {
    res.param_grads.weights[l].noalias() =
        delta * trace.activations[l].transpose();
    res.param_grads.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = net.weights[l].transpose() * delta;
      // ReLU derivative from the cached post-activation (1 where > 0).
      delta = delta.cwiseProduct(
          (trace.activations[l].array() > 0.0).cast<double>().matrix());
    } else {
      res.input_grads = net.weights[0].transpose() * delta;
    }
  }
  return res;
}

BackwardResult backward(const Mlp& net, const Eigen::VectorXd& input,
                        const Eigen::VectorXd& upstream_grad) {
  ForwardTrace trace = forward_trace(net, Eigen::MatrixXd(input));
  BatchBackwardResult batch =
      backward(net, trace, Eigen::MatrixXd(upstream_grad));
  return BackwardResult{std::move(batch.param_grads), batch.input_grads.col(0)};
}

AdamState AdamState::for_mlp(const Mlp& net, double learning_rate) {
  AdamState opt;
  opt.learning_rate = learning_rate;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    opt.m_w.emplace_back(
        Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    opt.v_w.emplace_back(
        Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    opt.m_b.emplace_back(Eigen::VectorXd::Zero(net.biases[l].size()));
    opt.v_b.emplace_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }
  return opt;
}

namespace {
template <typename T>
void adam_update_block(T& param, const T& grad, T& m, T& v, double lr1,
                       double beta1, double beta2, double corr2, double eps) {
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
  param.array() -= lr1 * m.array() / ((v.array() / corr2).sqrt() + eps);
}
}  // namespace

void adam_step(AdamState& opt, Mlp& params, const Mlp& grads) {
  if (grads.weights.size() != params.weights.size() ||
      opt.m_w.size() != params.weights.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  opt.step_count += 1;
  const double corr1 =
      1.0 - std::pow(opt.beta1, static_cast<double>(opt.step_count));
  const double corr2 =
      1.0 - std::pow(opt.beta2, static_cast<double>(opt.step_count));
  const double lr1 = opt.learning_rate / corr1;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    if (grads.weights[l].rows() != params.weights[l].rows() ||
        grads.weights[l].cols() != params.weights[l].cols()) {
      throw std::invalid_argument("adam_step: gradient shape mismatch");
    }
    adam_update_block(params.weights[l], grads.weights[l], opt.m_w[l],
                      opt.v_w[l], lr1, opt.beta1, opt.beta2, corr2,
                      opt.epsilon);
    adam_update_block(params.biases[l], grads.biases[l], opt.m_b[l],
                      opt.v_b[l], lr1, opt.beta1, opt.beta2, corr2,
                      opt.epsilon);
  }
}

void soft_update(Mlp& target, const Mlp& online, double tau) {
  for (std::size_t l = 0; l < target.weights.size(); ++l) {
    target.weights[l] = (1.0 - tau) * target.weights[l] + tau * online.weights[l];
    target.biases[l] = (1.0 - tau) * target.biases[l] + tau * online.biases[l];
  }
}

double grad_check(const MlpSpec& spec, uint64_t seed, double epsilon) {
  if (epsilon <= 0.0 || epsilon > 1e-2) {
    throw std::invalid_argument("grad_check: epsilon out of (0, 1e-2]");
  }
  Rng rng(seed);
  Mlp net = Mlp::init(spec, rng);

  // Draw an input whose hidden pre-activations stay clear of the ReLU kink,
  // otherwise central differences straddle the non-differentiable point.
  Eigen::VectorXd input(spec.input_dim());
  for (int attempt = 0; attempt < 200; ++attempt) {
    for (Eigen::Index i = 0; i < input.size(); ++i) input[i] = rng.normal();
    bool clear = true;
    Eigen::VectorXd x = input;
    for (int l = 0; l + 1 < spec.num_layers() && clear; ++l) {
      Eigen::VectorXd z = net.weights[l] * x + net.biases[l];
      if (z.cwiseAbs().minCoeff() < 1e-3) clear = false;
      x = z.cwiseMax(0.0);
    }
    if (clear) break;
  }
  Eigen::VectorXd upstream(spec.output_dim());
  for (Eigen::Index i = 0; i < upstream.size(); ++i) upstream[i] = rng.normal();

  const BackwardResult analytic = backward(net, input, upstream);
  const auto objective = [&](const Mlp& n, const Eigen::VectorXd& x) {
    return upstream.dot(forward(n, x));
  };

  double worst = 0.0;
  const auto record = [&](double a, double n) {
    const double denom = std::max({1.0, std::abs(a), std::abs(n)});
    worst = std::max(worst, std::abs(a - n) / denom);
  };

  Mlp probe = net;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    for (Eigen::Index r = 0; r < net.weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < net.weights[l].cols(); ++c) {
        const double saved = probe.weights[l](r, c);
        probe.weights[l](r, c) = saved + epsilon;
        const double plus = objective(probe, input);
        probe.weights[l](r, c) = saved - epsilon;
        const double minus = objective(probe, input);
        probe.weights[l](r, c) = saved;
        record(analytic.param_grads.weights[l](r, c),
               (plus - minus) / (2.0 * epsilon));
      }
    }
    for (Eigen::Index r = 0; r < net.biases[l].size(); ++r) {
      const double saved = probe.biases[l][r];
      probe.biases[l][r] = saved + epsilon;
      const double plus = objective(probe, input);
      probe.biases[l][r] = saved - epsilon;
      const double minus = objective(probe, input);
      probe.biases[l][r] = saved;
      record(analytic.param_grads.biases[l][r],
             (plus - minus) / (2.0 * epsilon));
    }
  }
  Eigen::VectorXd x = input;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + epsilon;
    const double plus = objective(net, x);
    x[i] = saved - epsilon;
    const double minus = objective(net, x);
    x[i] = saved;
    record(analytic.input_grad[i], (plus - minus) / (2.0 * epsilon));
  }
  return worst;
}

void save_mlp(io::Writer& w, const Mlp& net) {
  w.write_bytes(kMlpMagic, 4);
  w.write_u32(static_cast<uint32_t>(net.spec.layer_sizes.size()));
  for (int s : net.spec.layer_sizes) w.write_u32(static_cast<uint32_t>(s));
  w.write_u8(static_cast<uint8_t>(net.spec.output_activation));
  w.write_vector(net.spec.output_scale);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    w.write_matrix(net.weights[l]);
    w.write_vector(net.biases[l]);
  }
}

Mlp load_mlp(io::Reader& r) {
  char magic[4];
  for (char& c : magic) c = static_cast<char>(r.read_u8());
  if (magic[0] != 'M' || magic[1] != 'L' || magic[2] != 'P' || magic[3] != '0') {
    throw io::FormatError("bad mlp record magic");
  }
  Mlp net;
  uint32_t n = r.read_u32();
  for (uint32_t i = 0; i < n; ++i) {
    net.spec.layer_sizes.push_back(static_cast<int>(r.read_u32()));
  }
  net.spec.output_activation = static_cast<OutputActivation>(r.read_u8());
  net.spec.output_scale = r.read_vector();
  net.spec.validate();
  for (int l = 0; l < net.spec.num_layers(); ++l) {
    net.weights.push_back(r.read_matrix());
    net.biases.push_back(r.read_vector());
    if (net.weights[l].rows() != net.spec.layer_sizes[l + 1] ||
        net.weights[l].cols() != net.spec.layer_sizes[l] ||
        net.biases[l].size() != net.spec.layer_sizes[l + 1]) {
      throw io::FormatError("mlp record: layer shape mismatch");
    }
  }
  return net;
}

void save_adam(io::Writer& w, const AdamState& opt) {
  w.write_f64(opt.learning_rate);
  w.write_f64(opt.beta1);
  w.write_f64(opt.beta2);
  w.write_f64(opt.epsilon);
  w.write_i64(opt.step_count);
  w.write_u32(static_cast<uint32_t>(opt.m_w.size()));
  for (std::size_t l = 0; l < opt.m_w.size(); ++l) {
    w.write_matrix(opt.m_w[l]);
    w.write_matrix(opt.v_w[l]);
    w.write_vector(opt.m_b[l]);
    w.write_vector(opt.v_b[l]);
  }
}

AdamState load_adam(io::Reader& r) {
  AdamState opt;
  opt.learning_rate = r.read_f64();
  opt.beta1 = r.read_f64();
  opt.beta2 = r.read_f64();
  opt.epsilon = r.read_f64();
  opt.step_count = r.read_i64();
  uint32_t n = r.read_u32();
  for (uint32_t l = 0; l < n; ++l) {
    opt.m_w.push_back(r.read_matrix());
    opt.v_w.push_back(r.read_matrix());
    opt.m_b.push_back(r.read_vector());
    opt.v_b.push_back(r.read_vector());
  }
  return opt;
}

}  // namespace hrl::nn
