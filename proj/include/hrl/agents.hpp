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

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hrl/core.hpp"
#include "hrl/nn.hpp"
#include "hrl/rng.hpp"

namespace hrl::agents {

struct Td3Config {
  double discount = 0.99;
  double soft_update_rate = 0.005;
  double policy_noise = 0.2;  // target smoothing sigma, absolute units
  double noise_clip = 0.5;
  double exploration_sigma = 0.1;
  int policy_delay = 1;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  std::vector<int> hidden_sizes{64, 64};
  // Symmetric per-dimension action bounds: low = -high, high > 0.
  Eigen::VectorXd action_high;

  void validate(int action_dim) const;
};

/// One TD3 actor-critic pair: deterministic tanh-scaled actor, twin critics,
/// and target copies tracked as soft-update EMAs.
class ActorCritic {
 public:
  ActorCritic(int obs_dim, int action_dim, const Td3Config& cfg, Rng& init_rng);

  /// Deterministic actor output, plus clamped Gaussian noise when exploring.
  ActionVector act(const Eigen::VectorXd& obs, bool explore,
                   Rng& noise_rng) const;
  Eigen::MatrixXd act_batch(const Eigen::MatrixXd& obs) const;

  struct Batch {
    Eigen::MatrixXd obs;       // obs_dim x B
    Eigen::MatrixXd actions;   // action_dim x B
    Eigen::VectorXd rewards;   // B
    Eigen::MatrixXd next_obs;  // obs_dim x B
    Eigen::VectorXd done;      // B, in {0,1}
  };

  /// Clipped double-Q regression toward r + gamma*(1-done)*min(Q1',Q2') at
  /// the target-policy-smoothed action. Returns the mean squared TD error
  /// (averaged over the two critics) before the gradient step.
  double critic_update(const Batch& batch, Rng& smoothing_rng);

  /// Adds gradient contributions w.r.t. the actor's actions and returns the
  /// already-weighted extra loss value. `actions` is action_dim x B;
  /// the callback accumulates into `grad`.
  using ExtraActionLoss = std::function<double(const Eigen::MatrixXd& actions,
                                               Eigen::MatrixXd& grad)>;

  struct ActorUpdateResult {
    double loss = 0.0;        // -mean Q1 + extra
    double extra_loss = 0.0;  // weighted extra term, 0 when absent
    double grad_norm = 0.0;   // L2 norm of the raw actor gradient
  };
  /// Gradient step on -mean Q1(s, actor(s)) plus an optional extra loss on
  /// the generated actions; soft-updates targets every policy_delay calls.
  ActorUpdateResult actor_update(const Eigen::MatrixXd& obs,
                                 const ExtraActionLoss& extra = nullptr);

  /// Goal-conditioned value V(s, g) = Q1([s;g], actor([s;g])), the planner's
  /// distance oracle.
  double value_estimate(const StateVector& state, const GoalVector& goal) const;
  Eigen::VectorXd value_estimate_batch(const Eigen::MatrixXd& states,
                                       const Eigen::MatrixXd& goals) const;

  int obs_dim() const { return obs_dim_; }
  int action_dim() const { return action_dim_; }
  const Td3Config& config() const { return cfg_; }
  const nn::Mlp& actor() const { return actor_; }
  const nn::Mlp& actor_target() const { return actor_target_; }
  const nn::Mlp& critic1() const { return critic1_; }
  const nn::Mlp& critic2() const { return critic2_; }
  const nn::Mlp& critic1_target() const { return critic1_target_; }
  const nn::Mlp& critic2_target() const { return critic2_target_; }
  nn::Mlp& actor_mut() { return actor_; }
  nn::Mlp& critic1_mut() { return critic1_; }
  nn::Mlp& critic2_mut() { return critic2_; }
  nn::Mlp& critic1_target_mut() { return critic1_target_; }
  nn::Mlp& critic2_target_mut() { return critic2_target_; }

  void save(io::Writer& w) const;
  void load(io::Reader& r);

 private:
  Eigen::VectorXd clamp_action(Eigen::VectorXd a) const;

  int obs_dim_;
  int action_dim_;
  Td3Config cfg_;
  nn::Mlp actor_, actor_target_;
  nn::Mlp critic1_, critic2_, critic1_target_, critic2_target_;
  nn::AdamState actor_opt_, critic1_opt_, critic2_opt_;
  int64_t actor_updates_ = 0;
};

/// Fixed-capacity ring buffer with uniform with-replacement sampling.
template <typename T>
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
      throw std::invalid_argument("replay buffer: capacity must be > 0");
    }
  }

  void push(T item) {
    if (items_.size() < capacity_) {
      items_.push_back(std::move(item));
    } else {
      items_[head_] = std::move(item);
      head_ = (head_ + 1) % capacity_;
    }
  }

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const T& operator[](std::size_t i) const { return items_[i]; }

  std::vector<std::size_t> sample_indices(std::size_t count, Rng& rng) const {
    if (items_.size() < count) {
      throw std::invalid_argument("replay buffer: fewer items than batch");
    }
    std::vector<std::size_t> idx(count);
    for (std::size_t i = 0; i < count; ++i) {
      idx[i] = static_cast<std::size_t>(
          rng.uniform_int(static_cast<int64_t>(items_.size())));
    }
    return idx;
  }

  template <typename SaveItem>
  void save(io::Writer& w, const SaveItem& save_item) const {
    w.write_u64(capacity_);
    w.write_u64(items_.size());
    w.write_u64(head_);
    for (const T& item : items_) save_item(w, item);
  }

  template <typename LoadItem>
  void load(io::Reader& r, const LoadItem& load_item) {
    capacity_ = r.read_u64();
    const uint64_t n = r.read_u64();
    head_ = r.read_u64();
    items_.clear();
    items_.reserve(n);
    for (uint64_t i = 0; i < n; ++i) items_.push_back(load_item(r));
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // next eviction slot once full
  std::vector<T> items_;
};

/// High-level experience: state at the segment start, the emitted subgoal,
/// the scaled sum of the segment's environment rewards, and the segment-end
/// state.
struct HighTransition {
  StateVector state;
  GoalVector subgoal;
  double segment_reward = 0.0;
  StateVector next_state;
  bool done = false;
};

void save_transition(io::Writer& w, const Transition& t);
Transition load_transition(io::Reader& r);
void save_high_transition(io::Writer& w, const HighTransition& t);
HighTransition load_high_transition(io::Reader& r);

}  // namespace hrl::agents
