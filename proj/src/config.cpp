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

#include "hrl/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace hrl {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int64_t parse_int(const std::string& key, const std::string& v) {
  int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("config: bad integer for " + key + ": " + v);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": " + v);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct KeyEntry {
  std::string key;
  std::string type;
  std::string doc;
  std::function<void(TrainConfig&, const std::string&)> set;
  std::function<std::string(const TrainConfig&)> get;
};

#define INT_KEY(name, field, doc_str)                                      \
  KeyEntry{name, "int", doc_str,                                           \
           [](TrainConfig& c, const std::string& v) {                      \
             c.field = static_cast<decltype(c.field)>(parse_int(name, v)); \
           },                                                              \
           [](const TrainConfig& c) { return std::to_string(c.field); }}

#define FLOAT_KEY(name, field, doc_str)                              \
  KeyEntry{name, "float", doc_str,                                   \
           [](TrainConfig& c, const std::string& v) {                \
             c.field = parse_double(name, v);                        \
           },                                                        \
           [](const TrainConfig& c) { return fmt_double(c.field); }}

#define BOOL_KEY(name, field, doc_str)                                  \
  KeyEntry{name, "bool", doc_str,                                       \
           [](TrainConfig& c, const std::string& v) {                   \
             c.field = parse_bool(name, v);                             \
           },                                                           \
           [](const TrainConfig& c) {                                   \
             return c.field ? std::string("true") : std::string("false"); \
           }}

#define STR_KEY(name, field, doc_str)                                        \
  KeyEntry{name, "string", doc_str,                                          \
           [](TrainConfig& c, const std::string& v) { c.field = v; },        \
           [](const TrainConfig& c) { return c.field; }}

std::vector<KeyEntry> make_registry() {
  std::vector<KeyEntry> keys;
  keys.push_back(STR_KEY("env.preset", env_preset,
                         "built-in maze: point_umaze or grid_maze"));
  keys.push_back(STR_KEY("env.layout_file", env_layout_file,
                         "optional maze text file replacing the preset layout"));
  keys.push_back(STR_KEY("env.reward_mode", env_reward_mode,
                         "dense or sparse"));
  keys.push_back(INT_KEY("env.max_steps", env_max_steps,
                         "episode step limit"));
  keys.push_back(FLOAT_KEY("env.noise_sigma", env_noise_sigma,
                           "position noise stddev (stochastic variant)"));
  keys.push_back(FLOAT_KEY("env.success_radius", env_success_radius,
                           "L2 success distance"));
  keys.push_back(STR_KEY("scheme", subgoal_scheme, "relative or absolute"));
  keys.push_back(INT_KEY("subgoal.period", subgoal_period,
                         "high-level action frequency m"));
  keys.push_back(FLOAT_KEY("subgoal.bound", subgoal_bound,
                           "subgoal box half-width per dimension"));
  keys.push_back(INT_KEY("landmarks.m_cov", m_cov,
                         "coverage landmarks per gather"));
  keys.push_back(INT_KEY("landmarks.m_nov", m_nov,
                         "novelty landmarks per gather"));
  keys.push_back(INT_KEY("landmarks.pool_size", pool_size,
                         "buffer sample pool for farthest point sampling"));
  keys.push_back(BOOL_KEY("landmarks.force_bypass", force_bypass,
                          "disable all landmark machinery regardless of eta"));
  keys.push_back(INT_KEY("queue.capacity", queue_capacity,
                         "novelty queue capacity K"));
  keys.push_back(FLOAT_KEY("queue.lambda", queue_lambda,
                           "similarity threshold for queue discard"));
  keys.push_back(BOOL_KEY("queue.adjacency_discard", queue_adjacency_discard,
                          "discard by estimated transition distance instead of L2"));
  keys.push_back(STR_KEY("queue.sample_mode", queue_sample_mode,
                         "uniform or priority"));
  keys.push_back(INT_KEY("rnd.embedding_dim", rnd_embedding_dim,
                         "random network output width"));
  keys.push_back(INT_KEY("rnd.hidden_size", rnd_hidden_size,
                         "random network hidden width (two layers)"));
  keys.push_back(FLOAT_KEY("rnd.lr", rnd_lr, "predictor learning rate"));
  keys.push_back(INT_KEY("rnd.batch_size", rnd_batch_size,
                         "predictor update batch"));
  keys.push_back(INT_KEY("adjacency.k", adjacency_k, "adjacency degree k"));
  keys.push_back(FLOAT_KEY("adjacency.epsilon_k", epsilon_k,
                           "embedding scale epsilon_k"));
  keys.push_back(FLOAT_KEY("adjacency.delta_margin", delta_margin,
                           "contrastive margin"));
  keys.push_back(INT_KEY("adjacency.embedding_dim", adjacency_embedding_dim,
                         "embedding output width"));
  keys.push_back(INT_KEY("adjacency.hidden_size", adjacency_hidden_size,
                         "embedding hidden width (two layers)"));
  keys.push_back(FLOAT_KEY("adjacency.lr", adjacency_lr,
                           "embedding learning rate"));
  keys.push_back(INT_KEY("adjacency.batch_size", adjacency_batch_size,
                         "pairs per training batch"));
  keys.push_back(INT_KEY("adjacency.epochs", adjacency_epochs,
                         "epochs per retraining round"));
  keys.push_back(INT_KEY("adjacency.pairs_per_epoch", adjacency_pairs_per_epoch,
                         "pair draws per epoch"));
  keys.push_back(INT_KEY("adjacency.period_episodes", adjacency_period_episodes,
                         "episodes between matrix update + retraining"));
  keys.push_back(FLOAT_KEY("adjacency.anchor_resolution", anchor_resolution,
                           "minimum goal-space spacing of anchors"));
  keys.push_back(INT_KEY("adjacency.trajectory_window", trajectory_window,
                         "recent episodes kept for matrix updates"));
  keys.push_back(FLOAT_KEY("planner.gamma_dist", gamma_dist,
                           "edge pruning threshold"));
  keys.push_back(FLOAT_KEY("planner.delta_pseudo", delta_pseudo,
                           "pseudo-landmark shift magnitude"));
  keys.push_back(INT_KEY("planner.warmup_steps", warmup_steps,
                         "steps with delta_pseudo forced to 0"));
  keys.push_back(BOOL_KEY("planner.auto_delta_pseudo", auto_delta_pseudo,
                          "use the running mean selected-landmark distance"));
  keys.push_back(STR_KEY("planner.graph_dump_path", graph_dump_path,
                         "optional text dump of planned graphs"));
  keys.push_back(FLOAT_KEY("eta", eta, "landmark loss coefficient"));

  const auto level_keys = [&keys](const std::string& prefix,
                                  AgentLevelConfig TrainConfig::* level) {
    const auto add_f = [&, level](const std::string& name,
                                  double AgentLevelConfig::* f,
                                  const std::string& doc) {
      keys.push_back(KeyEntry{
          prefix + "." + name, "float", doc,
          [level, f, name](TrainConfig& c, const std::string& v) {
            (c.*level).*f = parse_double(name, v);
          },
          [level, f](const TrainConfig& c) { return fmt_double((c.*level).*f); }});
    };
    const auto add_i = [&, level](const std::string& name,
                                  int AgentLevelConfig::* f,
                                  const std::string& doc) {
      keys.push_back(KeyEntry{
          prefix + "." + name, "int", doc,
          [level, f, name](TrainConfig& c, const std::string& v) {
            (c.*level).*f = static_cast<int>(parse_int(name, v));
          },
          [level, f](const TrainConfig& c) {
            return std::to_string((c.*level).*f);
          }});
    };
    add_f("actor_lr", &AgentLevelConfig::actor_lr, "actor learning rate");
    add_f("critic_lr", &AgentLevelConfig::critic_lr, "critic learning rate");
    add_f("discount", &AgentLevelConfig::discount, "discount gamma");
    add_f("soft_update_rate", &AgentLevelConfig::soft_update_rate,
          "target EMA rate tau");
    add_f("policy_noise", &AgentLevelConfig::policy_noise,
          "target smoothing noise stddev");
    add_f("noise_clip", &AgentLevelConfig::noise_clip,
          "target smoothing noise clip");
    add_f("exploration_sigma", &AgentLevelConfig::exploration_sigma,
          "exploration Gaussian stddev");
    add_i("policy_delay", &AgentLevelConfig::policy_delay,
          "critic updates per actor update");
    add_i("batch_size", &AgentLevelConfig::batch_size, "training batch");
    add_i("buffer_capacity", &AgentLevelConfig::buffer_capacity,
          "replay buffer size");
    add_f("reward_scale", &AgentLevelConfig::reward_scale,
          "reward scaling applied at buffer insert");
    add_i("hidden_size", &AgentLevelConfig::hidden_size,
          "actor/critic hidden width (two layers)");
  };
  level_keys("high", &TrainConfig::high);
  level_keys("low", &TrainConfig::low);

  keys.push_back(INT_KEY("trainer.total_steps", total_steps,
                         "environment steps to train for"));
  keys.push_back(INT_KEY("trainer.eval_period", eval_period,
                         "steps between evaluations"));
  keys.push_back(INT_KEY("trainer.eval_episodes", eval_episodes,
                         "episodes per evaluation"));
  keys.push_back(INT_KEY("trainer.high_update_period", high_update_period,
                         "batch iterations between high-level updates"));
  keys.push_back(FLOAT_KEY("trainer.updates_per_step", updates_per_step,
                           "batch iterations per collected step"));
  keys.push_back(INT_KEY("trainer.checkpoint_period", checkpoint_period,
                         "steps between checkpoints (0 = final only)"));
  keys.push_back(INT_KEY("seed", seed, "master random seed"));
  return keys;
}

#undef INT_KEY
#undef FLOAT_KEY
#undef BOOL_KEY
#undef STR_KEY

const std::vector<KeyEntry>& registry() {
  static const std::vector<KeyEntry> keys = make_registry();
  return keys;
}

}  // namespace

void TrainConfig::apply(const std::string& key, const std::string& value) {
  for (const KeyEntry& entry : registry()) {
    if (entry.key == key) {
      entry.set(*this, value);
      return;
    }
  }
  throw std::invalid_argument("config: unknown key: " + key);
}

void TrainConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  load_text(text);
}

void TrainConfig::load_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " is not key=value");
    }
    apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

TrainConfig TrainConfig::from_file(const std::string& path) {
  TrainConfig cfg;
  cfg.load_file(path);
  return cfg;
}

std::string TrainConfig::to_text() const {
  std::ostringstream os;
  for (const KeyEntry& entry : registry()) {
    os << entry.key << " = " << entry.get(*this) << "\n";
  }
  return os.str();
}

SubgoalScheme TrainConfig::scheme() const {
  if (subgoal_scheme == "relative") return SubgoalScheme::kRelative;
  if (subgoal_scheme == "absolute") return SubgoalScheme::kAbsolute;
  throw std::invalid_argument("config: scheme must be relative or absolute");
}

envs::MazeSpec TrainConfig::make_env_spec() const {
  envs::MazeSpec spec = envs::make_preset(env_preset);
  if (!env_layout_file.empty()) {
    spec.layout = envs::MazeLayout::load_file(env_layout_file);
    if (spec.layout.goal_cell.has_value()) {
      const auto [gr, gc] = *spec.layout.goal_cell;
      spec.eval_goal = spec.cell_center(gr, gc);
    }
    spec.fit_goal_box_to_free_space();
  }
  if (env_reward_mode == "dense") {
    spec.reward_mode = envs::RewardMode::kDense;
  } else if (env_reward_mode == "sparse") {
    spec.reward_mode = envs::RewardMode::kSparse;
  } else {
    throw std::invalid_argument("config: env.reward_mode must be dense|sparse");
  }
  spec.max_steps = env_max_steps;
  spec.noise_sigma = env_noise_sigma;
  spec.success_radius = env_success_radius;
  spec.validate();
  return spec;
}

void TrainConfig::validate() const {
  const auto positive = [](const char* name, auto v) {
    if (v <= 0) {
      throw std::invalid_argument(std::string("config: ") + name +
                                  " must be > 0");
    }
  };
  const auto nonneg = [](const char* name, auto v) {
    if (v < 0) {
      throw std::invalid_argument(std::string("config: ") + name +
                                  " must be >= 0");
    }
  };
  scheme();  // validates the string
  make_env_spec();
  positive("subgoal.period", subgoal_period);
  positive("subgoal.bound", subgoal_bound);
  nonneg("landmarks.m_cov", m_cov);
  nonneg("landmarks.m_nov", m_nov);
  positive("landmarks.pool_size", pool_size);
  positive("queue.capacity", queue_capacity);
  positive("queue.lambda", queue_lambda);
  if (queue_sample_mode != "uniform" && queue_sample_mode != "priority") {
    throw std::invalid_argument("config: queue.sample_mode must be uniform|priority");
  }
  positive("rnd.embedding_dim", rnd_embedding_dim);
  positive("rnd.hidden_size", rnd_hidden_size);
  positive("rnd.lr", rnd_lr);
  positive("rnd.batch_size", rnd_batch_size);
  positive("adjacency.k", adjacency_k);
  positive("adjacency.epsilon_k", epsilon_k);
  positive("adjacency.delta_margin", delta_margin);
  positive("adjacency.embedding_dim", adjacency_embedding_dim);
  positive("adjacency.hidden_size", adjacency_hidden_size);
  positive("adjacency.lr", adjacency_lr);
  positive("adjacency.batch_size", adjacency_batch_size);
  positive("adjacency.epochs", adjacency_epochs);
  positive("adjacency.pairs_per_epoch", adjacency_pairs_per_epoch);
  positive("adjacency.period_episodes", adjacency_period_episodes);
  positive("adjacency.anchor_resolution", anchor_resolution);
  positive("adjacency.trajectory_window", trajectory_window);
  positive("planner.gamma_dist", gamma_dist);
  nonneg("planner.delta_pseudo", delta_pseudo);
  nonneg("planner.warmup_steps", warmup_steps);
  nonneg("eta", eta);
  for (const AgentLevelConfig* level : {&high, &low}) {
    positive("actor_lr", level->actor_lr);
    positive("critic_lr", level->critic_lr);
    if (level->discount < 0.0 || level->discount >= 1.0) {
      throw std::invalid_argument("config: discount must be in [0,1)");
    }
    if (level->soft_update_rate <= 0.0 || level->soft_update_rate > 1.0) {
      throw std::invalid_argument("config: soft_update_rate must be in (0,1]");
    }
    nonneg("policy_noise", level->policy_noise);
    nonneg("noise_clip", level->noise_clip);
    nonneg("exploration_sigma", level->exploration_sigma);
    positive("policy_delay", level->policy_delay);
    positive("batch_size", level->batch_size);
    positive("buffer_capacity", level->buffer_capacity);
    positive("reward_scale", level->reward_scale);
    positive("hidden_size", level->hidden_size);
  }
  nonneg("trainer.total_steps", total_steps);
  positive("trainer.eval_period", eval_period);
  positive("trainer.eval_episodes", eval_episodes);
  positive("trainer.high_update_period", high_update_period);
  nonneg("trainer.updates_per_step", updates_per_step);
  nonneg("trainer.checkpoint_period", checkpoint_period);
}

const std::vector<ConfigKeyDoc>& config_key_docs() {
  static const std::vector<ConfigKeyDoc> docs = [] {
    std::vector<ConfigKeyDoc> out;
    for (const KeyEntry& entry : registry()) {
      out.push_back(ConfigKeyDoc{entry.key, entry.type, entry.doc});
    }
    return out;
  }();
  return docs;
}

}  // namespace hrl
