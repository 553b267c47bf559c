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

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "hrl/adjacency.hpp"
#include "hrl/agents.hpp"
#include "hrl/config.hpp"
#include "hrl/coverage.hpp"
#include "hrl/envs.hpp"
#include "hrl/metrics.hpp"
#include "hrl/novelty.hpp"
#include "hrl/planner.hpp"

namespace hrl {

/// Raised when training produces a non-finite quantity; carries a diagnostic
/// of where it happened.
class TrainingDiverged : public std::runtime_error {
 public:
  explicit TrainingDiverged(const std::string& what)
      : std::runtime_error(what) {}
};

void ensure_finite(const char* what, double value, int64_t step);

/// A per-step policy: maps (state, step-in-episode) to an action. The
/// hierarchical policy holds its subgoal between high-level decisions.
using StepPolicy = std::function<ActionVector(const StateVector&, int)>;

struct EvalResult {
  double success_rate = 0.0;
  double mean_return = 0.0;
};
/// Runs `episodes` eval-mode episodes under the policy and reports the
/// success fraction and mean raw return.
EvalResult run_eval_episodes(envs::MazeEnv& env, const StepPolicy& policy,
                             int episodes);

struct CheckpointManifest {
  uint32_t version = 0;
  std::string env_preset;
  int state_dim = 0;
  int goal_dim = 0;
  int action_dim = 0;
  int64_t total_step = 0;
  int64_t episode = 0;
  std::vector<std::pair<std::string, uint64_t>> sections;  // name, byte size
};
CheckpointManifest inspect_checkpoint(const std::string& path);

/// The full training loop: per-step subgoal transitions and novelty-queue
/// updates, per-episode batched TD3 updates with landmark-guided high-level
/// training, periodic adjacency retraining, periodic evaluation, and
/// checkpointing. Deterministic given config and seed.
class Trainer {
 public:
  explicit Trainer(const TrainConfig& config);
  static std::unique_ptr<Trainer> from_checkpoint(const std::string& path);

  /// Runs until trainer.total_steps. Appends metrics to out_dir/metrics.csv
  /// when an output directory is set.
  void run();

  void save_checkpoint(const std::string& path) const;
  void set_out_dir(const std::string& dir);

  /// Observer called once per environment step with (episode step, total
  /// step, state, active subgoal); used by tests to instrument subgoal
  /// timing and goal transitions.
  using StepObserver = std::function<void(
      int t, int64_t total_step, const StateVector& state,
      const GoalVector& subgoal)>;
  void set_step_observer(StepObserver obs) { observer_ = std::move(obs); }

  /// Per-high-update record of (total actor loss, plain TD3 part, raw hinge
  /// mean); collected only when auditing is enabled. Diagnostic only, not
  /// part of checkpoints.
  struct HighLossAudit {
    double total = 0.0;
    double base = 0.0;
    double hinge = 0.0;
  };
  void enable_loss_audit(bool on) { audit_enabled_ = on; }
  const std::vector<HighLossAudit>& high_loss_audit() const { return audit_; }

  EvalResult evaluate(int episodes);
  EvalResult evaluate(int episodes, uint64_t env_seed);

  const TrainConfig& config() const { return cfg_; }
  const std::vector<MetricsRecord>& metrics() const { return metrics_; }
  int64_t total_step() const { return total_step_; }
  int64_t episode() const { return episode_; }
  const agents::ActorCritic& low_policy() const { return *low_; }
  const agents::ActorCritic& high_policy() const { return *high_; }
  const novelty::NoveltyQueue& queue() const { return *queue_; }
  bool landmarks_active() const;

 private:
  void init_components();
  void run_episode();
  void train_batches(int iterations);
  void low_update();
  void high_update();
  void maybe_eval_and_checkpoint();
  void do_eval();
  void write_metrics_row(const MetricsRecord& rec);
  void adjacency_round();
  StepPolicy greedy_policy() const;
  Eigen::VectorXd low_obs(const StateVector& state, const GoalVector& g) const;
  double current_delta_pseudo() const;

  // Plans pseudo-landmarks for a batch of high-level samples. Returns per
  // sample the pseudo goal and whether planning succeeded.
  void plan_pseudo_landmarks(const Eigen::MatrixXd& states,
                             const coverage::LandmarkSet& landmarks,
                             Eigen::MatrixXd& pseudo, std::vector<uint8_t>& ok);

  TrainConfig cfg_;
  envs::MazeSpec env_spec_;
  SubgoalScheme scheme_;
  std::unique_ptr<envs::MazeEnv> env_;
  RngHub rngs_;
  std::unique_ptr<agents::ActorCritic> low_;
  std::unique_ptr<agents::ActorCritic> high_;
  std::unique_ptr<agents::ReplayBuffer<Transition>> low_buffer_;
  std::unique_ptr<agents::ReplayBuffer<agents::HighTransition>> high_buffer_;
  std::unique_ptr<novelty::RndPair> rnd_;
  std::unique_ptr<novelty::NoveltyQueue> queue_;
  std::unique_ptr<adjacency::AdjacencyMatrix> adj_matrix_;
  std::unique_ptr<adjacency::AdjacencyNet> adj_net_;
  std::deque<std::vector<GoalVector>> recent_trajectories_;

  int64_t total_step_ = 0;
  int64_t episode_ = 0;
  int64_t eval_index_ = 0;
  int64_t batch_iter_ = 0;  // global batch-iteration counter
  int64_t low_critic_updates_ = 0;
  int64_t high_critic_updates_ = 0;
  int64_t last_checkpoint_mark_ = 0;
  // Running mean of ||g_sel - g_cur|| for the automatic shift magnitude.
  double sel_dist_sum_ = 0.0;
  int64_t sel_dist_count_ = 0;
  // Loss accumulators since the last metrics row.
  double acc_high_critic_ = 0, acc_high_actor_ = 0, acc_low_critic_ = 0,
         acc_low_actor_ = 0, acc_landmark_ = 0, acc_rnd_ = 0;
  int64_t n_high_ = 0, n_low_ = 0, n_landmark_ = 0, n_rnd_ = 0;
  int64_t last_cov_ = 0, last_nov_ = 0;

  std::vector<MetricsRecord> metrics_;
  std::string out_dir_;
  bool csv_started_ = false;
  StepObserver observer_;
  bool audit_enabled_ = false;
  std::vector<HighLossAudit> audit_;
  double start_wall_time_ = 0.0;
};

}  // namespace hrl
