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

#include "hrl/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

namespace hrl {

namespace {
constexpr char kCheckpointMagic[8] = {'L', 'H', 'R', 'L', 'C', 'K', 'P', 'T'};
constexpr uint32_t kCheckpointVersion = 1;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

agents::Td3Config make_td3(const AgentLevelConfig& level, int action_dim,
                           double bound) {
  agents::Td3Config cfg;
  cfg.discount = level.discount;
  cfg.soft_update_rate = level.soft_update_rate;
  cfg.policy_noise = level.policy_noise;
  cfg.noise_clip = level.noise_clip;
  cfg.exploration_sigma = level.exploration_sigma;
  cfg.policy_delay = 1;  // delay is applied by the trainer's update schedule
  cfg.actor_lr = level.actor_lr;
  cfg.critic_lr = level.critic_lr;
  cfg.hidden_sizes = {level.hidden_size, level.hidden_size};
  cfg.action_high = Eigen::VectorXd::Constant(action_dim, bound);
  return cfg;
}
}  // namespace

void ensure_finite(const char* what, double value, int64_t step) {
  if (!std::isfinite(value)) {
    throw TrainingDiverged(std::string("non-finite ") + what + " at step " +
                           std::to_string(step) + ": " +
                           std::to_string(value));
  }
}

EvalResult run_eval_episodes(envs::MazeEnv& env, const StepPolicy& policy,
                             int episodes) {
  EvalResult result;
  for (int e = 0; e < episodes; ++e) {
    StateVector s = env.reset(false);
    double ep_return = 0.0;
    int t = 0;
    while (true) {
      const ActionVector a = policy(s, t);
      const auto step = env.step(a);
      ep_return += step.reward;
      s = step.state;
      ++t;
      if (step.done) break;
    }
    if (envs::success(env.state().position, env.state().target,
                      env.spec().success_radius)) {
      result.success_rate += 1.0;
    }
    result.mean_return += ep_return;
  }
  result.success_rate /= episodes;
  result.mean_return /= episodes;
  return result;
}

Trainer::Trainer(const TrainConfig& config)
    : cfg_(config), rngs_(config.seed) {
  cfg_.validate();
  init_components();
  start_wall_time_ = now_seconds();
}

bool Trainer::landmarks_active() const {
  if (cfg_.force_bypass) return false;
  return cfg_.eta > 0 || cfg_.m_cov > 0 || cfg_.m_nov > 0;
}

void Trainer::init_components() {
  env_spec_ = cfg_.make_env_spec();
  scheme_ = cfg_.scheme();
  env_ = std::make_unique<envs::MazeEnv>(env_spec_,
                                         derive_seed(cfg_.seed, "env"));
  const int state_dim = env_spec_.state_dim();
  const int goal_dim = env_spec_.goal_dim();
  const int action_dim = env_spec_.action_dim();

  low_ = std::make_unique<agents::ActorCritic>(
      state_dim + goal_dim, action_dim, make_td3(cfg_.low, action_dim, 1.0),
      rngs_.stream("init_low"));
  high_ = std::make_unique<agents::ActorCritic>(
      state_dim, goal_dim, make_td3(cfg_.high, goal_dim, cfg_.subgoal_bound),
      rngs_.stream("init_high"));
  low_buffer_ = std::make_unique<agents::ReplayBuffer<Transition>>(
      cfg_.low.buffer_capacity);
  high_buffer_ = std::make_unique<agents::ReplayBuffer<agents::HighTransition>>(
      cfg_.high.buffer_capacity);

  if (landmarks_active()) {
    rnd_ = std::make_unique<novelty::RndPair>(novelty::RndPair::init(
        state_dim, cfg_.rnd_embedding_dim,
        {cfg_.rnd_hidden_size, cfg_.rnd_hidden_size}, cfg_.rnd_lr,
        rngs_.stream("init_rnd_target"), rngs_.stream("init_rnd_predictor")));
    queue_ = std::make_unique<novelty::NoveltyQueue>(cfg_.queue_capacity,
                                                     cfg_.queue_lambda,
                                                     goal_dim);
    adj_matrix_ = std::make_unique<adjacency::AdjacencyMatrix>(
        goal_dim, cfg_.anchor_resolution, cfg_.adjacency_k);
    adj_net_ = std::make_unique<adjacency::AdjacencyNet>(
        adjacency::AdjacencyNet::init(
            goal_dim, cfg_.adjacency_embedding_dim,
            {cfg_.adjacency_hidden_size, cfg_.adjacency_hidden_size},
            cfg_.epsilon_k, cfg_.delta_margin, cfg_.adjacency_lr,
            rngs_.stream("init_adjacency")));
    if (cfg_.queue_adjacency_discard) {
      // Alternative discard rule: estimated shortest transition distance.
      adjacency::AdjacencyNet* net = adj_net_.get();
      const int k = cfg_.adjacency_k;
      queue_->set_distance_fn([net, k](const GoalVector& a,
                                       const GoalVector& b) {
        return adjacency::estimate_distance(*net, a, b, k);
      });
    }
  }
}

Eigen::VectorXd Trainer::low_obs(const StateVector& state,
                                 const GoalVector& g) const {
  Eigen::VectorXd obs(state.size() + g.size());
  obs << state, g;
  return obs;
}

double Trainer::current_delta_pseudo() const {
  if (cfg_.auto_delta_pseudo && sel_dist_count_ > 0) {
    return sel_dist_sum_ / static_cast<double>(sel_dist_count_);
  }
  return cfg_.delta_pseudo;
}

void Trainer::run() {
  if (total_step_ == 0 && metrics_.empty()) {
    do_eval();
  }
  while (total_step_ < cfg_.total_steps) {
    run_episode();
  }
}

void Trainer::run_episode() {
  StateVector s = env_->reset(true);
  StateVector s_prev;
  GoalVector g;
  StateVector seg_start;
  GoalVector seg_subgoal;
  double seg_reward = 0.0;
  std::vector<GoalVector> traj;
  traj.push_back(map_state_to_goal(s, env_spec_.goal_dim()));

  int t = 0;
  int collected = 0;
  bool budget_exhausted = false;
  while (true) {
    if (t % cfg_.subgoal_period == 0) {
      g = high_->act(s, true, rngs_.stream("high_noise"));
      seg_start = s;
      seg_subgoal = g;
      seg_reward = 0.0;
    } else {
      g = goal_transition(g, s_prev, s, scheme_);
    }
    if (observer_) observer_(t, total_step_, s, g);

    const ActionVector a = low_->act(low_obs(s, g), true,
                                     rngs_.stream("low_noise"));
    const auto step = env_->step(a);

    if (landmarks_active()) {
      queue_->insert(s, novelty::novelty_score(*rnd_, s));
    }

    const double r_low =
        low_level_reward(s, g, step.state, scheme_) * cfg_.low.reward_scale;
    low_buffer_->push(Transition{s, g, a, r_low, step.state, step.done});
    seg_reward += step.reward;
    traj.push_back(map_state_to_goal(step.state, env_spec_.goal_dim()));

    total_step_ += 1;
    collected += 1;
    if ((t + 1) % cfg_.subgoal_period == 0 || step.done) {
      high_buffer_->push(agents::HighTransition{
          seg_start, seg_subgoal, seg_reward * cfg_.high.reward_scale,
          step.state, step.done});
    }
    if (total_step_ % cfg_.eval_period == 0 &&
        total_step_ <= cfg_.total_steps) {
      do_eval();
    }
    if (total_step_ >= cfg_.total_steps) {
      budget_exhausted = true;
      break;
    }
    s_prev = s;
    s = step.state;
    ++t;
    if (step.done) break;
  }
  episode_ += 1;
  recent_trajectories_.push_back(std::move(traj));
  while (static_cast<int>(recent_trajectories_.size()) >
         cfg_.trajectory_window) {
    recent_trajectories_.pop_front();
  }
  if (budget_exhausted) return;

  train_batches(static_cast<int>(
      std::floor(collected * cfg_.updates_per_step)));
  if (landmarks_active() && episode_ % cfg_.adjacency_period_episodes == 0) {
    adjacency_round();
  }
  if (cfg_.checkpoint_period > 0 && !out_dir_.empty()) {
    // Save at the first episode boundary past each period multiple.
    const int64_t mark = (total_step_ / cfg_.checkpoint_period) *
                         cfg_.checkpoint_period;
    if (mark > last_checkpoint_mark_) {
      save_checkpoint(out_dir_ + "/ckpt_step" + std::to_string(total_step_) +
                      ".bin");
      last_checkpoint_mark_ = mark;
    }
  }
}

void Trainer::train_batches(int iterations) {
  for (int j = 0; j < iterations; ++j) {
    batch_iter_ += 1;
    if (low_buffer_->size() >=
        static_cast<std::size_t>(cfg_.low.batch_size)) {
      low_update();
    }
    if (batch_iter_ % cfg_.high_update_period == 0 &&
        high_buffer_->size() >=
            static_cast<std::size_t>(cfg_.high.batch_size)) {
      high_update();
      if (landmarks_active() &&
          low_buffer_->size() >=
              static_cast<std::size_t>(cfg_.rnd_batch_size)) {
        const auto idx = low_buffer_->sample_indices(cfg_.rnd_batch_size,
                                                     rngs_.stream("rnd"));
        Eigen::MatrixXd states(env_spec_.state_dim(), idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
          states.col(static_cast<Eigen::Index>(i)) = (*low_buffer_)[idx[i]].state;
        }
        const double loss = novelty::rnd_update(*rnd_, states);
        ensure_finite("rnd loss", loss, total_step_);
        acc_rnd_ += loss;
        n_rnd_ += 1;
      }
    }
  }
}

void Trainer::low_update() {
  const auto idx = low_buffer_->sample_indices(cfg_.low.batch_size,
                                               rngs_.stream("low_buffer"));
  const int b = cfg_.low.batch_size;
  const int obs_dim = low_->obs_dim();
  agents::ActorCritic::Batch batch;
  batch.obs.resize(obs_dim, b);
  batch.actions.resize(low_->action_dim(), b);
  batch.rewards.resize(b);
  batch.next_obs.resize(obs_dim, b);
  batch.done.resize(b);
  for (int i = 0; i < b; ++i) {
    const Transition& tr = (*low_buffer_)[idx[static_cast<std::size_t>(i)]];
    batch.obs.col(i) = low_obs(tr.state, tr.subgoal);
    batch.actions.col(i) = tr.action;
    batch.rewards[i] = tr.reward;
    const GoalVector next_g =
        goal_transition(tr.subgoal, tr.state, tr.next_state, scheme_);
    batch.next_obs.col(i) = low_obs(tr.next_state, next_g);
    batch.done[i] = tr.done ? 1.0 : 0.0;
  }
  const double closs = low_->critic_update(batch, rngs_.stream("low_smooth"));
  ensure_finite("low critic loss", closs, total_step_);
  acc_low_critic_ += closs;
  low_critic_updates_ += 1;
  if (low_critic_updates_ % cfg_.low.policy_delay == 0) {
    const auto ares = low_->actor_update(batch.obs);
    ensure_finite("low actor loss", ares.loss, total_step_);
    acc_low_actor_ += ares.loss;
  }
  n_low_ += 1;
}

void Trainer::plan_pseudo_landmarks(const Eigen::MatrixXd& states,
                                    const coverage::LandmarkSet& landmarks,
                                    Eigen::MatrixXd& pseudo,
                                    std::vector<uint8_t>& ok) {
  const int goal_dim = env_spec_.goal_dim();
  const int state_dim = env_spec_.state_dim();
  const int target_off = env_spec_.target_offset();
  const auto lms = landmarks.merged();
  const int num_lm = static_cast<int>(lms.size());
  const int b = static_cast<int>(states.cols());
  const int n = num_lm + 2;
  const bool relative = scheme_ == SubgoalScheme::kRelative;

  const auto query_goal = [&](const GoalVector& dst, const GoalVector& src) {
    return relative ? GoalVector(dst - src) : dst;
  };

  // Landmark-to-landmark traversal costs, shared across the batch.
  Eigen::MatrixXd lm_costs(num_lm, num_lm);
  if (num_lm > 1) {
    Eigen::MatrixXd q_states(state_dim, num_lm * (num_lm - 1));
    Eigen::MatrixXd q_goals(goal_dim, num_lm * (num_lm - 1));
    int q = 0;
    for (int i = 0; i < num_lm; ++i) {
      for (int j = 0; j < num_lm; ++j) {
        if (i == j) continue;
        q_states.col(q) = lms[i].state;
        q_goals.col(q) = query_goal(lms[j].goal, lms[i].goal);
        ++q;
      }
    }
    const Eigen::VectorXd v = low_->value_estimate_batch(q_states, q_goals);
    int p = 0;
    for (int i = 0; i < num_lm; ++i) {
      for (int j = 0; j < num_lm; ++j) {
        lm_costs(i, j) = (i == j) ? 0.0 : -v[p++];
      }
    }
  }

  // Per-sample edges: current -> landmarks, current -> goal, landmarks -> goal.
  const int per_sample = 2 * num_lm + 1;
  Eigen::MatrixXd q_states(state_dim, static_cast<Eigen::Index>(b) * per_sample);
  Eigen::MatrixXd q_goals(goal_dim, static_cast<Eigen::Index>(b) * per_sample);
  std::vector<GoalVector> cur_goals(b), final_goals(b);
  for (int col = 0; col < b; ++col) {
    const StateVector s = states.col(col);
    cur_goals[col] = map_state_to_goal(s, goal_dim);
    final_goals[col] = s.segment(target_off, goal_dim);
    int q = col * per_sample;
    for (int j = 0; j < num_lm; ++j, ++q) {
      q_states.col(q) = s;
      q_goals.col(q) = query_goal(lms[j].goal, cur_goals[col]);
    }
    q_states.col(q) = s;
    q_goals.col(q) = query_goal(final_goals[col], cur_goals[col]);
    ++q;
    for (int i = 0; i < num_lm; ++i, ++q) {
      q_states.col(q) = lms[i].state;
      q_goals.col(q) = query_goal(final_goals[col], lms[i].goal);
    }
  }
  const Eigen::VectorXd values = low_->value_estimate_batch(q_states, q_goals);

  const double delta = total_step_ < cfg_.warmup_steps
                           ? 0.0
                           : current_delta_pseudo();
  const double inf = std::numeric_limits<double>::infinity();
  std::ofstream dump;
  if (!cfg_.graph_dump_path.empty()) {
    dump.open(cfg_.graph_dump_path, std::ios::app);
  }
  for (int col = 0; col < b; ++col) {
    Eigen::MatrixXd raw = Eigen::MatrixXd::Constant(n, n, inf);
    const int base = col * per_sample;
    for (int j = 0; j < num_lm; ++j) raw(0, 1 + j) = -values[base + j];
    raw(0, n - 1) = -values[base + num_lm];
    for (int i = 0; i < num_lm; ++i) {
      raw(1 + i, n - 1) = -values[base + num_lm + 1 + i];
      for (int j = 0; j < num_lm; ++j) {
        if (i != j) raw(1 + i, 1 + j) = lm_costs(i, j);
      }
    }
    std::vector<GoalVector> goals;
    goals.reserve(n);
    goals.push_back(cur_goals[col]);
    for (const auto& lm : lms) goals.push_back(lm.goal);
    goals.push_back(final_goals[col]);
    const planner::LandmarkGraph graph = planner::make_graph_from_costs(
        std::move(raw), std::move(goals), cfg_.gamma_dist);
    if (dump.is_open() && col == 0) {
      dump << "step " << total_step_ << "\n";
      planner::dump_graph(graph, dump);
    }
    const auto sel = planner::select_landmark(graph);
    if (sel.has_value()) {
      pseudo.col(col) = planner::pseudo_landmark(cur_goals[col], sel->goal,
                                                 delta);
      ok[static_cast<std::size_t>(col)] = 1;
      sel_dist_sum_ += (sel->goal - cur_goals[col]).norm();
      sel_dist_count_ += 1;
    } else {
      ok[static_cast<std::size_t>(col)] = 0;
    }
  }
}

void Trainer::high_update() {
  const auto idx = high_buffer_->sample_indices(cfg_.high.batch_size,
                                                rngs_.stream("high_buffer"));
  const int b = cfg_.high.batch_size;
  const int goal_dim = env_spec_.goal_dim();
  agents::ActorCritic::Batch batch;
  batch.obs.resize(high_->obs_dim(), b);
  batch.actions.resize(goal_dim, b);
  batch.rewards.resize(b);
  batch.next_obs.resize(high_->obs_dim(), b);
  batch.done.resize(b);
  for (int i = 0; i < b; ++i) {
    const agents::HighTransition& tr =
        (*high_buffer_)[idx[static_cast<std::size_t>(i)]];
    batch.obs.col(i) = tr.state;
    batch.actions.col(i) = tr.subgoal;
    batch.rewards[i] = tr.segment_reward;
    batch.next_obs.col(i) = tr.next_state;
    batch.done[i] = tr.done ? 1.0 : 0.0;
  }
  const double closs = high_->critic_update(batch, rngs_.stream("high_smooth"));
  ensure_finite("high critic loss", closs, total_step_);
  acc_high_critic_ += closs;

  // Landmark-guided extra loss on the generated subgoals.
  agents::ActorCritic::ExtraActionLoss extra;
  double raw_hinge_mean = 0.0;
  Eigen::MatrixXd pseudo(goal_dim, b);
  std::vector<uint8_t> ok(static_cast<std::size_t>(b), 0);
  if (landmarks_active() && cfg_.eta > 0) {
    bool any = false;
    if (total_step_ < cfg_.warmup_steps) {
      // Warm-up: anchor subgoals to the k-step region around the current
      // state itself (delta_pseudo = 0 collapses the pseudo-landmark onto it).
      for (int i = 0; i < b; ++i) {
        pseudo.col(i) = map_state_to_goal(batch.obs.col(i), goal_dim);
        ok[static_cast<std::size_t>(i)] = 1;
      }
      any = true;
    } else {
      const coverage::LandmarkSet landmarks = coverage::gather_landmarks(
          *low_buffer_, *queue_, cfg_.m_cov, cfg_.m_nov, cfg_.pool_size,
          goal_dim, rngs_.stream("fps"), rngs_.stream("queue_sample"),
          cfg_.queue_sample_mode == "priority");
      last_cov_ = static_cast<int64_t>(landmarks.coverage.size());
      last_nov_ = static_cast<int64_t>(landmarks.novelty.size());
      if (landmarks.total() > 0) {
        plan_pseudo_landmarks(batch.obs, landmarks, pseudo, ok);
        for (uint8_t o : ok) any = any || o;
      }
    }
    if (any) {
      const double eta = cfg_.eta;
      const bool relative = scheme_ == SubgoalScheme::kRelative;
      Eigen::MatrixXd cur_goals = batch.obs.topRows(goal_dim);
      extra = [this, eta, relative, &pseudo, &ok, &raw_hinge_mean,
               cur_goals = std::move(cur_goals)](
                  const Eigen::MatrixXd& actions, Eigen::MatrixXd& grad) {
        // Subgoals compared in absolute goal space (Eq. 8 operates on points).
        const Eigen::MatrixXd abs_subgoals =
            relative ? Eigen::MatrixXd(actions + cur_goals) : actions;
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(actions.rows(),
                                                  actions.cols());
        raw_hinge_mean =
            planner::landmark_loss_batch(*adj_net_, pseudo, abs_subgoals, ok,
                                         &g);
        grad += eta * g;
        return eta * raw_hinge_mean;
      };
    }
  }

  high_critic_updates_ += 1;
  if (high_critic_updates_ % cfg_.high.policy_delay == 0) {
    const auto ares = high_->actor_update(batch.obs, extra);
    ensure_finite("high actor loss", ares.loss, total_step_);
    acc_high_actor_ += ares.loss;
    acc_landmark_ += raw_hinge_mean;
    n_landmark_ += 1;
    if (audit_enabled_) {
      audit_.push_back(HighLossAudit{ares.loss, ares.loss - ares.extra_loss,
                                     raw_hinge_mean});
    }
  }
  n_high_ += 1;
}

void Trainer::adjacency_round() {
  std::vector<std::vector<GoalVector>> trajs(recent_trajectories_.begin(),
                                             recent_trajectories_.end());
  adj_matrix_->update(trajs);
  adjacency::AdjacencyTrainOptions opts;
  opts.epochs = cfg_.adjacency_epochs;
  opts.batch_size = cfg_.adjacency_batch_size;
  opts.pairs_per_epoch = cfg_.adjacency_pairs_per_epoch;
  adjacency::train_adjacency(*adj_net_, *adj_matrix_, opts,
                             rngs_.stream("adjacency"));
}

StepPolicy Trainer::greedy_policy() const {
  struct PolicyState {
    GoalVector g;
    StateVector prev;
    Rng dummy{0};
  };
  auto st = std::make_shared<PolicyState>();
  return [this, st](const StateVector& s, int t) {
    if (t % cfg_.subgoal_period == 0) {
      st->g = high_->act(s, false, st->dummy);
    } else {
      st->g = goal_transition(st->g, st->prev, s, scheme_);
    }
    st->prev = s;
    return low_->act(low_obs(s, st->g), false, st->dummy);
  };
}

EvalResult Trainer::evaluate(int episodes) {
  return evaluate(episodes, derive_seed(cfg_.seed, "evaluate-adhoc"));
}

EvalResult Trainer::evaluate(int episodes, uint64_t env_seed) {
  envs::MazeEnv eval_env(env_spec_, env_seed);
  return run_eval_episodes(eval_env, greedy_policy(), episodes);
}

void Trainer::do_eval() {
  envs::MazeEnv eval_env(
      env_spec_,
      derive_seed(cfg_.seed, "eval#" + std::to_string(eval_index_)));
  eval_index_ += 1;
  const EvalResult res =
      run_eval_episodes(eval_env, greedy_policy(), cfg_.eval_episodes);

  MetricsRecord rec;
  rec.step = total_step_;
  rec.episode = episode_;
  rec.eval_success_rate = res.success_rate;
  rec.mean_episode_return = res.mean_return;
  rec.high_critic_loss = n_high_ > 0 ? acc_high_critic_ / n_high_ : 0.0;
  rec.high_actor_loss = n_high_ > 0 ? acc_high_actor_ / n_high_ : 0.0;
  rec.low_critic_loss = n_low_ > 0 ? acc_low_critic_ / n_low_ : 0.0;
  rec.low_actor_loss = n_low_ > 0 ? acc_low_actor_ / n_low_ : 0.0;
  rec.landmark_loss_mean = n_landmark_ > 0 ? acc_landmark_ / n_landmark_ : 0.0;
  rec.rnd_loss = n_rnd_ > 0 ? acc_rnd_ / n_rnd_ : 0.0;
  rec.queue_size = queue_ ? queue_->size() : 0;
  rec.landmarks_cov = last_cov_;
  rec.landmarks_nov = last_nov_;
  rec.wall_clock_seconds = now_seconds() - start_wall_time_;
  metrics_.push_back(rec);
  write_metrics_row(rec);

  acc_high_critic_ = acc_high_actor_ = acc_low_critic_ = acc_low_actor_ = 0.0;
  acc_landmark_ = acc_rnd_ = 0.0;
  n_high_ = n_low_ = n_landmark_ = n_rnd_ = 0;
}

void Trainer::set_out_dir(const std::string& dir) { out_dir_ = dir; }

void Trainer::write_metrics_row(const MetricsRecord& rec) {
  if (out_dir_.empty()) return;
  const std::string path = out_dir_ + "/metrics.csv";
  std::ofstream out(path, csv_started_ ? std::ios::app : std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write metrics file: " + path);
  if (!csv_started_) {
    out << metrics_csv_header() << "\n";
    csv_started_ = true;
  }
  out << metrics_csv_row(rec) << "\n";
}

void Trainer::save_checkpoint(const std::string& path) const {
  io::Writer w;
  io::write_container_header(w, kCheckpointMagic, kCheckpointVersion);

  io::Writer manifest;
  manifest.write_string(cfg_.env_preset);
  manifest.write_u32(static_cast<uint32_t>(env_spec_.state_dim()));
  manifest.write_u32(static_cast<uint32_t>(env_spec_.goal_dim()));
  manifest.write_u32(static_cast<uint32_t>(env_spec_.action_dim()));
  manifest.write_i64(total_step_);
  manifest.write_i64(episode_);
  io::write_section(w, "manifest", manifest);

  io::Writer config;
  config.write_string(cfg_.to_text());
  io::write_section(w, "config", config);

  io::Writer rng;
  rngs_.save(rng);
  io::write_section(w, "rng", rng);

  io::Writer env;
  env_->save(env);
  io::write_section(w, "env", env);

  io::Writer low;
  low_->save(low);
  io::write_section(w, "low_policy", low);
  io::Writer high;
  high_->save(high);
  io::write_section(w, "high_policy", high);

  io::Writer buffers;
  low_buffer_->save(buffers, agents::save_transition);
  high_buffer_->save(buffers, agents::save_high_transition);
  io::write_section(w, "buffers", buffers);

  io::Writer lm;
  lm.write_u8(landmarks_active() ? 1 : 0);
  if (landmarks_active()) {
    rnd_->save(lm);
    queue_->save(lm);
    adj_matrix_->save(lm);
    adj_net_->save(lm);
  }
  io::write_section(w, "landmarks", lm);

  io::Writer st;
  st.write_i64(eval_index_);
  st.write_i64(batch_iter_);
  st.write_i64(low_critic_updates_);
  st.write_i64(high_critic_updates_);
  st.write_f64(sel_dist_sum_);
  st.write_i64(sel_dist_count_);
  st.write_f64(acc_high_critic_);
  st.write_f64(acc_high_actor_);
  st.write_f64(acc_low_critic_);
  st.write_f64(acc_low_actor_);
  st.write_f64(acc_landmark_);
  st.write_f64(acc_rnd_);
  st.write_i64(n_high_);
  st.write_i64(n_low_);
  st.write_i64(n_landmark_);
  st.write_i64(n_rnd_);
  st.write_i64(last_cov_);
  st.write_i64(last_nov_);
  st.write_u64(recent_trajectories_.size());
  for (const auto& traj : recent_trajectories_) {
    st.write_u64(traj.size());
    for (const GoalVector& gv : traj) st.write_vector(gv);
  }
  st.write_u64(metrics_.size());
  for (const MetricsRecord& rec : metrics_) save_metrics_record(st, rec);
  io::write_section(w, "trainer_state", st);

  w.save_file(path);
}

std::unique_ptr<Trainer> Trainer::from_checkpoint(const std::string& path) {
  io::Reader reader = io::Reader::from_file(path);
  io::read_container_header(reader, kCheckpointMagic, kCheckpointVersion);
  const io::SectionMap sections = io::SectionMap::parse(reader);

  TrainConfig cfg;
  {
    io::Reader r(sections.get("config"));
    cfg.load_text(r.read_string());
  }
  auto trainer = std::make_unique<Trainer>(cfg);

  {
    io::Reader r(sections.get("manifest"));
    r.read_string();  // preset echo
    const int state_dim = static_cast<int>(r.read_u32());
    const int goal_dim = static_cast<int>(r.read_u32());
    const int action_dim = static_cast<int>(r.read_u32());
    if (state_dim != trainer->env_spec_.state_dim() ||
        goal_dim != trainer->env_spec_.goal_dim() ||
        action_dim != trainer->env_spec_.action_dim()) {
      throw io::FormatError("checkpoint: environment dimension mismatch");
    }
    trainer->total_step_ = r.read_i64();
    trainer->episode_ = r.read_i64();
  }
  {
    io::Reader r(sections.get("rng"));
    trainer->rngs_.load(r);
  }
  {
    io::Reader r(sections.get("env"));
    trainer->env_->load(r);
  }
  {
    io::Reader r(sections.get("low_policy"));
    trainer->low_->load(r);
  }
  {
    io::Reader r(sections.get("high_policy"));
    trainer->high_->load(r);
  }
  {
    io::Reader r(sections.get("buffers"));
    trainer->low_buffer_->load(r, agents::load_transition);
    trainer->high_buffer_->load(r, agents::load_high_transition);
  }
  {
    io::Reader r(sections.get("landmarks"));
    const bool active = r.read_u8() != 0;
    if (active != trainer->landmarks_active()) {
      throw io::FormatError("checkpoint: landmark configuration mismatch");
    }
    if (active) {
      trainer->rnd_->load(r);
      trainer->queue_->load(r);
      trainer->adj_matrix_->load(r);
      trainer->adj_net_->load(r);
    }
  }
  {
    io::Reader r(sections.get("trainer_state"));
    trainer->eval_index_ = r.read_i64();
    trainer->batch_iter_ = r.read_i64();
    trainer->low_critic_updates_ = r.read_i64();
    trainer->high_critic_updates_ = r.read_i64();
    trainer->sel_dist_sum_ = r.read_f64();
    trainer->sel_dist_count_ = r.read_i64();
    trainer->acc_high_critic_ = r.read_f64();
    trainer->acc_high_actor_ = r.read_f64();
    trainer->acc_low_critic_ = r.read_f64();
    trainer->acc_low_actor_ = r.read_f64();
    trainer->acc_landmark_ = r.read_f64();
    trainer->acc_rnd_ = r.read_f64();
    trainer->n_high_ = r.read_i64();
    trainer->n_low_ = r.read_i64();
    trainer->n_landmark_ = r.read_i64();
    trainer->n_rnd_ = r.read_i64();
    trainer->last_cov_ = r.read_i64();
    trainer->last_nov_ = r.read_i64();
    const uint64_t n_traj = r.read_u64();
    trainer->recent_trajectories_.clear();
    for (uint64_t i = 0; i < n_traj; ++i) {
      std::vector<GoalVector> traj;
      const uint64_t len = r.read_u64();
      traj.reserve(len);
      for (uint64_t j = 0; j < len; ++j) traj.push_back(r.read_vector());
      trainer->recent_trajectories_.push_back(std::move(traj));
    }
    const uint64_t n_metrics = r.read_u64();
    trainer->metrics_.clear();
    for (uint64_t i = 0; i < n_metrics; ++i) {
      trainer->metrics_.push_back(load_metrics_record(r));
    }
  }
  return trainer;
}

CheckpointManifest inspect_checkpoint(const std::string& path) {
  io::Reader reader = io::Reader::from_file(path);
  CheckpointManifest m;
  m.version = io::read_container_header(reader, kCheckpointMagic,
                                        kCheckpointVersion);
  const io::SectionMap sections = io::SectionMap::parse(reader);
  for (const auto& [name, payload] : sections.entries()) {
    m.sections.emplace_back(name, payload.size());
  }
  io::Reader r(sections.get("manifest"));
  m.env_preset = r.read_string();
  m.state_dim = static_cast<int>(r.read_u32());
  m.goal_dim = static_cast<int>(r.read_u32());
  m.action_dim = static_cast<int>(r.read_u32());
  m.total_step = r.read_i64();
  m.episode = r.read_i64();
  return m;
}

}  // namespace hrl
