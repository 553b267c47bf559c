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

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <queue>
#include <set>

#include "hrl/trainer.hpp"

using namespace hrl;

namespace {
TrainConfig tiny_config(uint64_t seed = 1) {
  TrainConfig cfg;
  cfg.env_preset = "grid_maze";
  cfg.env_max_steps = 40;
  cfg.total_steps = 1200;
  cfg.eval_period = 400;
  cfg.eval_episodes = 2;
  cfg.warmup_steps = 300;
  cfg.adjacency_period_episodes = 10;
  cfg.adjacency_epochs = 2;
  cfg.adjacency_pairs_per_epoch = 64;
  cfg.subgoal_period = 5;
  cfg.high.batch_size = 16;
  cfg.low.batch_size = 16;
  cfg.rnd_batch_size = 16;
  cfg.m_cov = 4;
  cfg.m_nov = 4;
  cfg.pool_size = 50;
  cfg.seed = seed;
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

// Scripted grid-maze expert: breadth-first path from the current cell to the
// eval goal, re-derived at every step.
StepPolicy bfs_policy(const envs::MazeSpec& spec, envs::MazeEnv* env) {
  return [spec, env](const StateVector&, int) {
    const auto [row, col] = spec.cell_of(env->state().position[0],
                                         env->state().position[1]);
    const auto [gr, gc] = *spec.layout.goal_cell;
    // BFS over free cells.
    std::map<std::pair<int, int>, std::pair<int, int>> parent;
    std::queue<std::pair<int, int>> frontier;
    frontier.push({row, col});
    parent[{row, col}] = {row, col};
    while (!frontier.empty()) {
      const auto [r, c] = frontier.front();
      frontier.pop();
      if (r == gr && c == gc) break;
      const int dr[4] = {1, -1, 0, 0};
      const int dc[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        const std::pair<int, int> next{r + dr[d], c + dc[d]};
        if (spec.layout.wall(next.first, next.second)) continue;
        if (parent.contains(next)) continue;
        parent[next] = {r, c};
        frontier.push(next);
      }
    }
    ActionVector a = ActionVector::Zero(2);
    if (!parent.contains({gr, gc})) return a;
    std::pair<int, int> step{gr, gc};
    while (parent[step] != std::pair<int, int>{row, col} &&
           step != std::pair<int, int>{row, col}) {
      step = parent[step];
    }
    if (step == std::pair<int, int>{row, col}) return a;  // already there
    a[0] = step.second - col;
    a[1] = step.first - row;
    return a;
  };
}
}  // namespace

TEST_CASE("config round-trips through text and rejects bad input") {
  TrainConfig cfg = tiny_config(7);
  cfg.eta = 3.5;
  cfg.queue_lambda = 0.77;
  const std::string text = cfg.to_text();
  TrainConfig parsed;
  parsed.load_text(text);
  CHECK(parsed.to_text() == text);
  CHECK(parsed.eta == 3.5);
  CHECK(parsed.queue_lambda == 0.77);

  CHECK_THROWS_AS(parsed.apply("no.such.key", "1"), std::invalid_argument);
  CHECK_THROWS_AS(parsed.apply("eta", "abc"), std::invalid_argument);
  CHECK_THROWS_AS(parsed.apply("landmarks.m_cov", "1.5"),
                  std::invalid_argument);

  TrainConfig bad = tiny_config();
  bad.subgoal_period = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = tiny_config();
  bad.eta = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = tiny_config();
  bad.env_reward_mode = "bogus";
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("documented key list covers every key exactly once") {
  const auto& docs = config_key_docs();
  std::set<std::string> keys;
  for (const auto& d : docs) {
    CHECK(!d.doc.empty());
    CHECK(keys.insert(d.key).second);
  }
  CHECK(keys.size() == docs.size());
  CHECK(keys.contains("planner.gamma_dist"));
  CHECK(keys.contains("high.actor_lr"));
  CHECK(keys.contains("low.reward_scale"));
}

TEST_CASE("ensure_finite raises a diagnostic on non-finite losses") {
  ensure_finite("loss", 1.0, 5);
  CHECK_THROWS_AS(ensure_finite("loss", std::nan(""), 5), TrainingDiverged);
  CHECK_THROWS_AS(
      ensure_finite("loss", std::numeric_limits<double>::infinity(), 5),
      TrainingDiverged);
}

TEST_CASE("subgoals resample exactly on the period and follow h between") {
  TrainConfig cfg = tiny_config(3);
  cfg.total_steps = 400;
  Trainer trainer(cfg);
  struct Entry {
    int t;
    StateVector state;
    GoalVector subgoal;
  };
  std::vector<Entry> log;
  trainer.set_step_observer(
      [&](int t, int64_t, const StateVector& s, const GoalVector& g) {
        log.push_back(Entry{t, s, g});
      });
  trainer.run();
  REQUIRE(log.size() >= 100);
  int within_segment = 0;
  for (std::size_t i = 1; i < log.size(); ++i) {
    const Entry& prev = log[i - 1];
    const Entry& cur = log[i];
    if (cur.t == 0) continue;  // new episode
    REQUIRE(cur.t == prev.t + 1);  // steps within an episode are contiguous
    if (cur.t % cfg.subgoal_period != 0) {
      // Relative goal transition preserves the pointed-at goal-space
      // location: g_t + phi(s_t) == g_{t-1} + phi(s_{t-1}) exactly.
      const GoalVector before =
          prev.subgoal + map_state_to_goal(prev.state, 2);
      const GoalVector after = cur.subgoal + map_state_to_goal(cur.state, 2);
      CHECK((before - after).norm() < 1e-12);
      ++within_segment;
    }
  }
  CHECK(within_segment > 100);
}

TEST_CASE("metrics row count is floor(total/eval)+1") {
  SUBCASE("aligned budget") {
    TrainConfig cfg = tiny_config(5);
    cfg.total_steps = 1200;
    cfg.eval_period = 400;
    Trainer t(cfg);
    t.run();
    CHECK(t.metrics().size() == 4);  // steps 0, 400, 800, 1200
    CHECK(t.metrics().front().step == 0);
    CHECK(t.metrics().back().step == 1200);
  }
  SUBCASE("unaligned budget skips the trailing partial period") {
    TrainConfig cfg = tiny_config(5);
    cfg.total_steps = 1000;
    cfg.eval_period = 400;
    Trainer t(cfg);
    t.run();
    CHECK(t.metrics().size() == 3);  // steps 0, 400, 800
  }
  SUBCASE("zero-step run emits only the initial row and a checkpoint") {
    TrainConfig cfg = tiny_config(5);
    cfg.total_steps = 0;
    Trainer t(cfg);
    t.run();
    CHECK(t.metrics().size() == 1);
    CHECK(t.metrics()[0].step == 0);
  }
}

TEST_CASE("high actor loss equals plain TD3 loss plus eta times hinge mean") {
  TrainConfig cfg = tiny_config(6);
  cfg.total_steps = 800;
  cfg.eta = 7.0;
  cfg.warmup_steps = 200;  // cover both warm-up and planned updates
  Trainer t(cfg);
  t.enable_loss_audit(true);
  t.run();
  const auto& audit = t.high_loss_audit();
  REQUIRE(!audit.empty());
  for (const auto& rec : audit) {
    CHECK(rec.total ==
          doctest::Approx(rec.base + cfg.eta * rec.hinge).epsilon(1e-12));
    CHECK(rec.hinge >= 0.0);
  }
  // The logged eval-row means reflect the same accumulators.
  const MetricsRecord& last = t.metrics().back();
  double total_sum = 0, hinge_sum = 0;
  for (const auto& rec : audit) {
    total_sum += rec.total;
    hinge_sum += rec.hinge;
  }
  (void)total_sum;
  (void)hinge_sum;
  CHECK(last.landmark_loss_mean >= 0.0);
}

TEST_CASE("two identical seeded runs produce identical metrics files") {
  namespace fs = std::filesystem;
  const std::string dir_a = (fs::temp_directory_path() / "hrl_det_a").string();
  const std::string dir_b = (fs::temp_directory_path() / "hrl_det_b").string();
  fs::create_directories(dir_a);
  fs::create_directories(dir_b);
  TrainConfig cfg = tiny_config(8);
  {
    Trainer t(cfg);
    t.set_out_dir(dir_a);
    t.run();
  }
  {
    Trainer t(cfg);
    t.set_out_dir(dir_b);
    t.run();
  }
  const std::string a = read_file(dir_a + "/metrics.csv");
  CHECK(!a.empty());
  CHECK(a == read_file(dir_b + "/metrics.csv"));
}

TEST_CASE("checkpoint round-trip from step zero replays the run exactly") {
  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "hrl_ck0").string();
  fs::create_directories(dir);
  const std::string ck = dir + "/fresh.ckpt";
  TrainConfig cfg = tiny_config(9);
  Trainer original(cfg);
  original.save_checkpoint(ck);
  original.run();

  auto resumed = Trainer::from_checkpoint(ck);
  resumed->run();
  REQUIRE(resumed->metrics().size() == original.metrics().size());
  for (std::size_t i = 0; i < original.metrics().size(); ++i) {
    CHECK(metrics_csv_row(resumed->metrics()[i]) ==
          metrics_csv_row(original.metrics()[i]));
  }
}

TEST_CASE("mid-run checkpoint resumes to identical final metrics") {
  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "hrl_ckmid").string();
  fs::remove_all(dir);  // stale checkpoints from older runs would be found
  fs::create_directories(dir);
  TrainConfig cfg = tiny_config(10);
  cfg.checkpoint_period = 600;  // first episode boundary past step 600
  Trainer a(cfg);
  a.set_out_dir(dir);
  a.run();

  std::string mid;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.starts_with("ckpt_step")) mid = entry.path().string();
  }
  REQUIRE(!mid.empty());
  auto b = Trainer::from_checkpoint(mid);
  b->run();
  REQUIRE(b->metrics().size() == a.metrics().size());
  CHECK(metrics_csv_row(b->metrics().back()) ==
        metrics_csv_row(a.metrics().back()));
}

TEST_CASE("corrupted magic bytes are a format error") {
  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "hrl_ckbad").string();
  fs::create_directories(dir);
  const std::string good = dir + "/good.ckpt";
  TrainConfig cfg = tiny_config(11);
  cfg.total_steps = 0;
  Trainer t(cfg);
  t.run();
  t.save_checkpoint(good);

  std::string bytes = read_file(good);
  bytes[0] = 'X';
  const std::string bad = dir + "/bad.ckpt";
  std::ofstream(bad, std::ios::binary) << bytes;
  CHECK_THROWS_AS(Trainer::from_checkpoint(bad), io::FormatError);
  CHECK_THROWS_AS(inspect_checkpoint(bad), io::FormatError);

  // Truncation is also a format error, not partial state.
  const std::string trunc = dir + "/trunc.ckpt";
  std::ofstream(trunc, std::ios::binary)
      << read_file(good).substr(0, bytes.size() / 2);
  CHECK_THROWS_AS(Trainer::from_checkpoint(trunc), io::FormatError);
}

TEST_CASE("checkpoint manifest is inspectable") {
  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "hrl_ckinfo").string();
  fs::create_directories(dir);
  TrainConfig cfg = tiny_config(12);
  cfg.total_steps = 0;
  Trainer t(cfg);
  t.run();
  const std::string path = dir + "/info.ckpt";
  t.save_checkpoint(path);
  const CheckpointManifest m = inspect_checkpoint(path);
  CHECK(m.env_preset == "grid_maze");
  CHECK(m.state_dim == 5);
  CHECK(m.goal_dim == 2);
  CHECK(m.total_step == 0);
  bool has_config = false;
  for (const auto& [name, size] : m.sections) {
    if (name == "config") has_config = size > 0;
  }
  CHECK(has_config);
}

TEST_CASE("ablation identity: degenerate config equals forced bypass") {
  namespace fs = std::filesystem;
  const std::string dir_a = (fs::temp_directory_path() / "hrl_abl_a").string();
  const std::string dir_b = (fs::temp_directory_path() / "hrl_abl_b").string();
  fs::create_directories(dir_a);
  fs::create_directories(dir_b);
  TrainConfig cfg = tiny_config(13);
  cfg.eta = 0;
  cfg.m_cov = 0;
  cfg.m_nov = 0;
  {
    Trainer t(cfg);
    CHECK(!t.landmarks_active());
    t.set_out_dir(dir_a);
    t.run();
  }
  cfg.force_bypass = true;
  {
    Trainer t(cfg);
    t.set_out_dir(dir_b);
    t.run();
  }
  CHECK(read_file(dir_a + "/metrics.csv") == read_file(dir_b + "/metrics.csv"));
}

TEST_CASE("landmark machinery does not perturb policy training when eta = 0") {
  // eta = 0 with landmarks gathered consumes only the landmark-specific RNG
  // streams, so policy-related metric columns match the full bypass.
  namespace fs = std::filesystem;
  TrainConfig with = tiny_config(14);
  with.eta = 0;  // machinery on (m_cov, m_nov > 0), loss off
  Trainer a(with);
  CHECK(a.landmarks_active());
  a.run();

  TrainConfig without = tiny_config(14);
  without.eta = 0;
  without.force_bypass = true;
  Trainer b(without);
  b.run();

  REQUIRE(a.metrics().size() == b.metrics().size());
  for (std::size_t i = 0; i < a.metrics().size(); ++i) {
    const MetricsRecord& ra = a.metrics()[i];
    const MetricsRecord& rb = b.metrics()[i];
    CHECK(ra.eval_success_rate == rb.eval_success_rate);
    CHECK(ra.mean_episode_return == rb.mean_episode_return);
    CHECK(ra.high_critic_loss == rb.high_critic_loss);
    CHECK(ra.high_actor_loss == rb.high_actor_loss);
    CHECK(ra.low_critic_loss == rb.low_critic_loss);
    CHECK(ra.low_actor_loss == rb.low_actor_loss);
  }
}

TEST_CASE("scripted oracle policy reaches the grid goal every episode") {
  envs::MazeSpec spec = envs::make_preset("grid_maze");
  envs::MazeEnv env(spec, 77);
  const EvalResult res = run_eval_episodes(env, bfs_policy(spec, &env), 5);
  CHECK(res.success_rate == doctest::Approx(1.0));
}

TEST_CASE("a random-initialization policy fails the sparse U-maze") {
  TrainConfig cfg;
  cfg.env_preset = "point_umaze";
  cfg.env_reward_mode = "sparse";
  cfg.total_steps = 0;
  cfg.seed = 15;
  Trainer t(cfg);
  const EvalResult res = t.evaluate(5);
  CHECK(res.success_rate <= 0.2);
  // Five-episode rates are quantized to multiples of 0.2.
  const double q = res.success_rate * 5.0;
  CHECK(q == doctest::Approx(std::round(q)));
}

TEST_CASE("evaluate rejects dimension-mismatched checkpoints") {
  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "hrl_dim").string();
  fs::create_directories(dir);
  TrainConfig cfg = tiny_config(16);
  cfg.total_steps = 0;
  Trainer t(cfg);
  t.run();
  const std::string path = dir + "/grid.ckpt";
  t.save_checkpoint(path);

  // Hand-corrupt the embedded config to a different env; the stored nets no
  // longer match the environment dimensions.
  io::Reader reader = io::Reader::from_file(path);
  char magic[8];
  for (char& c : magic) c = static_cast<char>(reader.read_u8());
  (void)reader.read_u32();
  io::SectionMap sections = io::SectionMap::parse(reader);
  io::Writer w;
  io::write_container_header(w, magic, 1);
  for (const auto& [name, payload] : sections.entries()) {
    if (name == "config") {
      io::Reader pr(payload);
      std::string text = pr.read_string();
      const std::string from = "env.preset = grid_maze";
      const std::string to = "env.preset = point_umaze";
      text.replace(text.find(from), from.size(), to);
      io::Writer pw;
      pw.write_string(text);
      io::write_section(w, name, pw);
    } else {
      io::Writer pw;
      pw.write_bytes(payload.data(), payload.size());
      io::write_section(w, name, pw);
    }
  }
  const std::string mutated = dir + "/mutated.ckpt";
  w.save_file(mutated);
  CHECK_THROWS_AS(Trainer::from_checkpoint(mutated), io::FormatError);
}

TEST_CASE("optional flags run end to end: auto shift, adjacency discard") {
  TrainConfig cfg = tiny_config(18);
  cfg.total_steps = 800;
  cfg.warmup_steps = 100;
  cfg.auto_delta_pseudo = true;
  cfg.queue_adjacency_discard = true;
  cfg.queue_sample_mode = "priority";
  Trainer t(cfg);
  t.run();
  CHECK(t.metrics().size() == 3);
  CHECK(t.total_step() == 800);
}

TEST_CASE("graph dump file is written when configured") {
  namespace fs = std::filesystem;
  const std::string dir = (fs::temp_directory_path() / "hrl_dump").string();
  fs::create_directories(dir);
  const std::string dump = dir + "/graphs.txt";
  std::error_code ec;
  fs::remove(dump, ec);
  TrainConfig cfg = tiny_config(17);
  cfg.total_steps = 900;
  cfg.warmup_steps = 100;  // leave warm-up so planning happens
  cfg.graph_dump_path = dump;
  Trainer t(cfg);
  t.run();
  const std::string text = read_file(dump);
  REQUIRE(!text.empty());
  CHECK(text.find("node 0 current") != std::string::npos);
  CHECK(text.find("edge ") != std::string::npos);
  CHECK(text.find("step ") != std::string::npos);
}
