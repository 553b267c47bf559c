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

#include "hrl/agents.hpp"

#include <cmath>

namespace hrl::agents {

namespace {
Eigen::MatrixXd vstack(const Eigen::MatrixXd& top,
                       const Eigen::MatrixXd& bottom) {
  Eigen::MatrixXd out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}
}  // namespace

void Td3Config::validate(int action_dim) const {
  if (discount < 0.0 || discount >= 1.0) {
    throw std::invalid_argument("td3: discount must be in [0,1)");
  }
  if (soft_update_rate <= 0.0 || soft_update_rate > 1.0) {
    throw std::invalid_argument("td3: soft_update_rate must be in (0,1]");
  }
  if (policy_delay < 1) {
    throw std::invalid_argument("td3: policy_delay must be >= 1");
  }
  if (action_high.size() != action_dim ||
      (action_high.array() <= 0.0).any()) {
    throw std::invalid_argument("td3: action_high must be positive per dim");
  }
}

ActorCritic::ActorCritic(int obs_dim, int action_dim, const Td3Config& cfg,
                         Rng& init_rng)
    : obs_dim_(obs_dim), action_dim_(action_dim), cfg_(cfg) {
  cfg_.validate(action_dim);
  nn::MlpSpec actor_spec;
  actor_spec.layer_sizes.push_back(obs_dim);
  for (int h : cfg_.hidden_sizes) actor_spec.layer_sizes.push_back(h);
  actor_spec.layer_sizes.push_back(action_dim);
  actor_spec.output_activation = nn::OutputActivation::kTanhScaled;
  actor_spec.output_scale = cfg_.action_high;

  nn::MlpSpec critic_spec;
  critic_spec.layer_sizes.push_back(obs_dim + action_dim);
  for (int h : cfg_.hidden_sizes) critic_spec.layer_sizes.push_back(h);
  critic_spec.layer_sizes.push_back(1);

  actor_ = nn::Mlp::init(actor_spec, init_rng);
  critic1_ = nn::Mlp::init(critic_spec, init_rng);
  critic2_ = nn::Mlp::init(critic_spec, init_rng);
  actor_target_ = actor_;
  critic1_target_ = critic1_;
  critic2_target_ = critic2_;
  actor_opt_ = nn::AdamState::for_mlp(actor_, cfg_.actor_lr);
  critic1_opt_ = nn::AdamState::for_mlp(critic1_, cfg_.critic_lr);
  critic2_opt_ = nn::AdamState::for_mlp(critic2_, cfg_.critic_lr);
}

Eigen::VectorXd ActorCritic::clamp_action(Eigen::VectorXd a) const {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a[i] = std::min(std::max(a[i], -cfg_.action_high[i]), cfg_.action_high[i]);
  }
  return a;
}

ActionVector ActorCritic::act(const Eigen::VectorXd& obs, bool explore,
                              Rng& noise_rng) const {
  ActionVector a = nn::forward(actor_, obs);
  if (explore) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      a[i] += noise_rng.normal(0.0, cfg_.exploration_sigma);
    }
    a = clamp_action(std::move(a));
  }
  return a;
}

Eigen::MatrixXd ActorCritic::act_batch(const Eigen::MatrixXd& obs) const {
  return nn::forward(actor_, obs);
}

double ActorCritic::critic_update(const Batch& batch, Rng& smoothing_rng) {
  const Eigen::Index b = batch.obs.cols();
  if (b == 0) throw std::invalid_argument("critic_update: empty batch");

  // Target-policy smoothing: clipped Gaussian added to the target action.
  Eigen::MatrixXd next_a = nn::forward(actor_target_, batch.next_obs);
  for (Eigen::Index col = 0; col < b; ++col) {
    for (Eigen::Index d = 0; d < action_dim_; ++d) {
      double noise = smoothing_rng.normal(0.0, cfg_.policy_noise);
      noise = std::min(std::max(noise, -cfg_.noise_clip), cfg_.noise_clip);
      double v = next_a(d, col) + noise;
      next_a(d, col) =
          std::min(std::max(v, -cfg_.action_high[d]), cfg_.action_high[d]);
    }
  }
  const Eigen::MatrixXd next_in = vstack(batch.next_obs, next_a);
  const Eigen::RowVectorXd q1t = nn::forward(critic1_target_, next_in).row(0);
  const Eigen::RowVectorXd q2t = nn::forward(critic2_target_, next_in).row(0);
  Eigen::VectorXd target(b);
  for (Eigen::Index col = 0; col < b; ++col) {
    target[col] = batch.rewards[col] + cfg_.discount *
                                           (1.0 - batch.done[col]) *
                                           std::min(q1t[col], q2t[col]);
  }

  const Eigen::MatrixXd in = vstack(batch.obs, batch.actions);
  double total_mse = 0.0;
  const auto update_one = [&](nn::Mlp& critic, nn::AdamState& opt) {
    nn::ForwardTrace trace = nn::forward_trace(critic, in);
    Eigen::RowVectorXd err = trace.output().row(0) - target.transpose();
    total_mse += err.squaredNorm() / static_cast<double>(b);
    Eigen::MatrixXd upstream = (2.0 / static_cast<double>(b)) * err;
    nn::BatchBackwardResult grads = nn::backward(critic, trace, upstream);
    nn::adam_step(opt, critic, grads.param_grads);
  };
  update_one(critic1_, critic1_opt_);
  update_one(critic2_, critic2_opt_);
  return total_mse / 2.0;
}

ActorCritic::ActorUpdateResult ActorCritic::actor_update(
    const Eigen::MatrixXd& obs, const ExtraActionLoss& extra) {
  const Eigen::Index b = obs.cols();
  if (b == 0) throw std::invalid_argument("actor_update: empty batch");

  nn::ForwardTrace actor_trace = nn::forward_trace(actor_, obs);
  const Eigen::MatrixXd& actions = actor_trace.output();
  const Eigen::MatrixXd critic_in = vstack(obs, actions);
  nn::ForwardTrace critic_trace = nn::forward_trace(critic1_, critic_in);

  ActorUpdateResult result;
  result.loss = -critic_trace.output().row(0).mean();

  // d(-mean Q1)/d[obs; a]; only the action rows flow into the actor.
  Eigen::MatrixXd critic_upstream =
      Eigen::MatrixXd::Constant(1, b, -1.0 / static_cast<double>(b));
  nn::BatchBackwardResult critic_grads =
      nn::backward(critic1_, critic_trace, critic_upstream);
  Eigen::MatrixXd action_grad =
      critic_grads.input_grads.bottomRows(action_dim_);

  if (extra) {
    result.extra_loss = extra(actions, action_grad);
    result.loss += result.extra_loss;
  }

  nn::BatchBackwardResult actor_grads =
      nn::backward(actor_, actor_trace, action_grad);
  double sq = 0.0;
  for (std::size_t l = 0; l < actor_grads.param_grads.weights.size(); ++l) {
    sq += actor_grads.param_grads.weights[l].squaredNorm();
    sq += actor_grads.param_grads.biases[l].squaredNorm();
  }
  result.grad_norm = std::sqrt(sq);
  nn::adam_step(actor_opt_, actor_, actor_grads.param_grads);

  actor_updates_ += 1;
  if (actor_updates_ % cfg_.policy_delay == 0) {
    nn::soft_update(actor_target_, actor_, cfg_.soft_update_rate);
    nn::soft_update(critic1_target_, critic1_, cfg_.soft_update_rate);
    nn::soft_update(critic2_target_, critic2_, cfg_.soft_update_rate);
  }
  return result;
}

double ActorCritic::value_estimate(const StateVector& state,
                                   const GoalVector& goal) const {
  Eigen::VectorXd obs(state.size() + goal.size());
  obs << state, goal;
  const ActionVector a = nn::forward(actor_, obs);
  Eigen::VectorXd in(obs.size() + a.size());
  in << obs, a;
  return nn::forward(critic1_, in)[0];
}

Eigen::VectorXd ActorCritic::value_estimate_batch(
    const Eigen::MatrixXd& states, const Eigen::MatrixXd& goals) const {
  const Eigen::MatrixXd obs = vstack(states, goals);
  const Eigen::MatrixXd actions = nn::forward(actor_, obs);
  const Eigen::MatrixXd in = vstack(obs, actions);
  return nn::forward(critic1_, in).row(0).transpose();
}

void ActorCritic::save(io::Writer& w) const {
  nn::save_mlp(w, actor_);
  nn::save_mlp(w, actor_target_);
  nn::save_mlp(w, critic1_);
  nn::save_mlp(w, critic2_);
  nn::save_mlp(w, critic1_target_);
  nn::save_mlp(w, critic2_target_);
  nn::save_adam(w, actor_opt_);
  nn::save_adam(w, critic1_opt_);
  nn::save_adam(w, critic2_opt_);
  w.write_i64(actor_updates_);
}

void ActorCritic::load(io::Reader& r) {
  actor_ = nn::load_mlp(r);
  actor_target_ = nn::load_mlp(r);
  critic1_ = nn::load_mlp(r);
  critic2_ = nn::load_mlp(r);
  critic1_target_ = nn::load_mlp(r);
  critic2_target_ = nn::load_mlp(r);
  actor_opt_ = nn::load_adam(r);
  critic1_opt_ = nn::load_adam(r);
  critic2_opt_ = nn::load_adam(r);
  actor_updates_ = r.read_i64();
  if (actor_.spec.input_dim() != obs_dim_ ||
      actor_.spec.output_dim() != action_dim_) {
    throw io::FormatError("actor-critic record: dimension mismatch");
  }
}

void save_transition(io::Writer& w, const Transition& t) {
  w.write_vector(t.state);
  w.write_vector(t.subgoal);
  w.write_vector(t.action);
  w.write_f64(t.reward);
  w.write_vector(t.next_state);
  w.write_u8(t.done ? 1 : 0);
}

Transition load_transition(io::Reader& r) {
  Transition t;
  t.state = r.read_vector();
  t.subgoal = r.read_vector();
  t.action = r.read_vector();
  t.reward = r.read_f64();
  t.next_state = r.read_vector();
  t.done = r.read_u8() != 0;
  return t;
}

void save_high_transition(io::Writer& w, const HighTransition& t) {
  w.write_vector(t.state);
  w.write_vector(t.subgoal);
  w.write_f64(t.segment_reward);
  w.write_vector(t.next_state);
  w.write_u8(t.done ? 1 : 0);
}

HighTransition load_high_transition(io::Reader& r) {
  HighTransition t;
  t.state = r.read_vector();
  t.subgoal = r.read_vector();
  t.segment_reward = r.read_f64();
  t.next_state = r.read_vector();
  t.done = r.read_u8() != 0;
  return t;
}

}  // namespace hrl::agents
