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

#include <cstdint>
#include <string>
#include <vector>

#include "hrl/core.hpp"
#include "hrl/envs.hpp"

namespace hrl {

struct AgentLevelConfig {
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double discount = 0.99;
  double soft_update_rate = 0.005;
  double policy_noise = 0.2;
  double noise_clip = 0.5;
  double exploration_sigma = 1.0;
  int policy_delay = 1;
  int batch_size = 64;
  int buffer_capacity = 200000;
  double reward_scale = 1.0;
  int hidden_size = 64;
};

/// Flat training configuration, addressable through dotted keys (see
/// config_key_docs()). Defaults are the desk-scale maze setup.
struct TrainConfig {
  // env.*
  std::string env_preset = "point_umaze";
  std::string env_layout_file;  // overrides the preset layout when set
  std::string env_reward_mode = "dense";
  int env_max_steps = 200;
  double env_noise_sigma = 0.0;
  double env_success_radius = 2.5;

  // scheme / periods
  std::string subgoal_scheme = "relative";  // or "absolute"
  int subgoal_period = 10;                  // m
  double subgoal_bound = 2.5;               // high-level action box half-width

  // landmarks.*
  int m_cov = 20;
  int m_nov = 20;
  int pool_size = 400;
  bool force_bypass = false;

  // queue.*
  int queue_capacity = 500;
  double queue_lambda = 0.2;
  bool queue_adjacency_discard = false;  // discard rule via d_st estimate
  std::string queue_sample_mode = "uniform";  // or "priority"

  // rnd.*
  int rnd_embedding_dim = 32;
  int rnd_hidden_size = 64;
  double rnd_lr = 1e-3;
  int rnd_batch_size = 128;

  // adjacency.*
  int adjacency_k = 5;
  double epsilon_k = 1.0;
  double delta_margin = 0.2;
  int adjacency_embedding_dim = 32;
  int adjacency_hidden_size = 64;
  double adjacency_lr = 2e-4;
  int adjacency_batch_size = 64;
  int adjacency_epochs = 25;
  int adjacency_pairs_per_epoch = 2048;
  int adjacency_period_episodes = 40;
  double anchor_resolution = 0.5;
  int trajectory_window = 50;

  // planner.*
  double gamma_dist = 15.2;
  double delta_pseudo = 2.0;
  int64_t warmup_steps = 9000;
  bool auto_delta_pseudo = false;
  std::string graph_dump_path;

  // high.* / low.*
  AgentLevelConfig high{.policy_noise = 0.8,
                        .noise_clip = 2.0,
                        .exploration_sigma = 0.3,
                        .reward_scale = 0.1};
  AgentLevelConfig low{.discount = 0.95,
                       .policy_noise = 0.2,
                       .noise_clip = 0.5,
                       .exploration_sigma = 0.15};
  double eta = 20.0;

  // trainer.*
  int64_t total_steps = 150000;
  int64_t eval_period = 5000;
  int eval_episodes = 5;
  int high_update_period = 10;   // high-level update every N batch iterations
  double updates_per_step = 1.0; // batch iterations per collected env step
  int64_t checkpoint_period = 0; // 0 = final checkpoint only
  uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument

  /// The environment spec implied by the env.* settings.
  envs::MazeSpec make_env_spec() const;
  SubgoalScheme scheme() const;

  /// Applies one `key=value` assignment; throws on unknown key or bad value.
  void apply(const std::string& key, const std::string& value);
  /// Parses a flat key=value file ('#' comments, blank lines ignored).
  static TrainConfig from_file(const std::string& path);
  void load_file(const std::string& path);
  void load_text(const std::string& text);
  /// Every key in canonical order, serialized as a config file.
  std::string to_text() const;
};

struct ConfigKeyDoc {
  std::string key;
  std::string type;
  std::string doc;
};
const std::vector<ConfigKeyDoc>& config_key_docs();

}  // namespace hrl
