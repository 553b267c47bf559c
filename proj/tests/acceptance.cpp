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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// its measured quantities; the process exit code is the number of failures.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hrl/trainer.hpp"

using namespace hrl;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

GoalVector g2(double x, double y) {
  GoalVector g(2);
  g << x, y;
  return g;
}

// ---------------------------------------------------------------------------
// 1. Gradient correctness across seeded architectures.
Outcome criterion_gradients() {
  std::vector<nn::MlpSpec> specs;
  Rng rng(1001);
  for (int i = 0; i < 24; ++i) {
    nn::MlpSpec spec;
    const int layers = 2 + static_cast<int>(rng.uniform_int(3));  // 2..4
    spec.layer_sizes.push_back(2 + static_cast<int>(rng.uniform_int(5)));
    for (int l = 1; l < layers; ++l) {
      spec.layer_sizes.push_back(3 + static_cast<int>(rng.uniform_int(8)));
    }
    spec.layer_sizes.push_back(1 + static_cast<int>(rng.uniform_int(4)));
    if (i % 2 == 1) {
      spec.output_activation = nn::OutputActivation::kTanhScaled;
      spec.output_scale = Eigen::VectorXd::Constant(
          spec.layer_sizes.back(), 0.5 + rng.uniform(0.0, 2.0));
    }
    specs.push_back(std::move(spec));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    worst = std::max(worst,
                     nn::grad_check(specs[i], 2000 + 7 * i, 1e-5));
  }
  std::ostringstream os;
  os << specs.size() << " architectures, max relative error " << worst;
  return {worst < 1e-4, os.str()};
}

// ---------------------------------------------------------------------------
// 2. FPS vs exhaustive greedy oracle.
Outcome criterion_fps() {
  Rng rng(1002);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(12));
    std::vector<GoalVector> pool;
    for (int i = 0; i < n; ++i) {
      pool.push_back(g2(rng.uniform(-8, 8), rng.uniform(-8, 8)));
    }
    const int count = 1 + static_cast<int>(rng.uniform_int(4));
    Rng pick(3000 + trial);
    const std::vector<int> got = coverage::fps_sample(pool, count, pick);

    std::vector<int> want{got[0]};  // seeded first pick
    while (static_cast<int>(want.size()) < std::min(count, n)) {
      int best = -1;
      double best_d = -1;
      for (int j = 0; j < n; ++j) {
        if (std::find(want.begin(), want.end(), j) != want.end()) continue;
        double dmin = kInf;
        for (int s : want) dmin = std::min(dmin, (pool[j] - pool[s]).norm());
        if (dmin > best_d) {
          best_d = dmin;
          best = j;
        }
      }
      want.push_back(best);
    }
    if (got != want) ++mismatches;
  }
  std::ostringstream os;
  os << "200 pools, " << mismatches << " mismatches";
  return {mismatches == 0, os.str()};
}

// ---------------------------------------------------------------------------
// 3. Planner vs Dijkstra and value iteration.
Outcome criterion_planner() {
  Rng rng(1003);
  int mismatches = 0, reachable = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(14));
    Eigen::MatrixXd raw(n, n);
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) raw(u, v) = rng.uniform(0.0, 50.0);
    }
    std::vector<GoalVector> goals;
    for (int i = 0; i < n; ++i) {
      goals.push_back(g2(rng.uniform(-5, 5), rng.uniform(-5, 5)));
    }
    const double gamma = rng.uniform(5.0, 45.0);
    const planner::LandmarkGraph g =
        planner::make_graph_from_costs(raw, goals, gamma);
    const auto sel = planner::select_landmark(g);

    // Dijkstra oracle.
    std::vector<double> dist(n, kInf);
    std::vector<int> pred(n, -1);
    std::vector<bool> done(n, false);
    dist[0] = 0;
    for (int it = 0; it < n; ++it) {
      int u = -1;
      for (int i = 0; i < n; ++i) {
        if (!done[i] && dist[i] < kInf && (u < 0 || dist[i] < dist[u])) u = i;
      }
      if (u < 0) break;
      done[u] = true;
      for (int v = 0; v < n; ++v) {
        if (g.weights(u, v) < kInf && dist[u] + g.weights(u, v) < dist[v]) {
          dist[v] = dist[u] + g.weights(u, v);
          pred[v] = u;
        }
      }
    }
    // Value-iteration oracle (cost-to-goal sweeps to a fixed point).
    std::vector<double> value(n, kInf);
    value[n - 1] = 0;
    for (int sweep = 0; sweep < n + 1; ++sweep) {
      for (int u = 0; u < n - 1; ++u) {
        for (int v = 0; v < n; ++v) {
          if (g.weights(u, v) < kInf && value[v] < kInf) {
            value[u] = std::min(value[u], g.weights(u, v) + value[v]);
          }
        }
      }
    }

    if (dist[n - 1] == kInf) {
      if (sel.has_value() || value[0] != kInf) ++mismatches;
      continue;
    }
    ++reachable;
    int first = n - 1;
    while (pred[first] != 0) first = pred[first];
    int vi_first = -1;
    double vi_best = kInf;
    for (int v = 1; v < n; ++v) {
      if (g.weights(0, v) < kInf && value[v] < kInf &&
          g.weights(0, v) + value[v] < vi_best) {
        vi_best = g.weights(0, v) + value[v];
        vi_first = v;
      }
    }
    if (!sel.has_value() || sel->node_id != first ||
        std::abs(sel->path_cost - dist[n - 1]) > 1e-9 ||
        sel->node_id != vi_first || std::abs(sel->path_cost - value[0]) > 1e-9) {
      ++mismatches;
    }
  }
  std::ostringstream os;
  os << "500 graphs (" << reachable << " reachable), " << mismatches
     << " mismatches";
  return {mismatches == 0, os.str()};
}

// ---------------------------------------------------------------------------
// 4. Adjacency matrix vs brute-force pair scan.
Outcome criterion_adjacency_matrix() {
  Rng rng(1004);
  int mismatches = 0;
  for (int k : {1, 3, 5}) {
    adjacency::AdjacencyMatrix m(2, 0.5, k);
    std::vector<std::vector<GoalVector>> trajectories;
    for (int traj = 0; traj < 50; ++traj) {
      std::vector<GoalVector> path;
      int x = 4, y = 4;
      const int len = 20 + static_cast<int>(rng.uniform_int(30));
      for (int t = 0; t < len; ++t) {
        path.push_back(g2(x, y));
        switch (rng.uniform_int(4)) {
          case 0: x = std::min(8, x + 1); break;
          case 1: x = std::max(0, x - 1); break;
          case 2: y = std::min(8, y + 1); break;
          default: y = std::max(0, y - 1); break;
        }
      }
      trajectories.push_back(std::move(path));
    }
    m.update(trajectories);

    std::map<std::pair<int, int>, bool> expect;
    for (const auto& path : trajectories) {
      for (std::size_t a = 0; a < path.size(); ++a) {
        for (std::size_t b = a;
             b < path.size() && b <= a + static_cast<std::size_t>(k); ++b) {
          const int ia = m.anchor_for(path[a]);
          const int ib = m.anchor_for(path[b]);
          expect[{ia, ib}] = true;
          expect[{ib, ia}] = true;
        }
      }
    }
    for (int i = 0; i < m.num_anchors(); ++i) {
      for (int j = 0; j < m.num_anchors(); ++j) {
        const bool want = i == j || expect.count({i, j}) > 0;
        if (m.adjacent(i, j) != want) ++mismatches;
      }
    }
  }
  std::ostringstream os;
  os << "k in {1,3,5}, 50 trajectories each, " << mismatches << " mismatches";
  return {mismatches == 0, os.str()};
}

// ---------------------------------------------------------------------------
// 5. Contrastive-loss margins on a 1-D chain.
Outcome criterion_contrastive() {
  const int k = 2;
  adjacency::AdjacencyMatrix matrix(1, 0.4, k);
  std::vector<GoalVector> chain;
  for (int i = 0; i < 10; ++i) {
    GoalVector g(1);
    g << i;
    chain.push_back(g);
  }
  matrix.update({chain});

  Rng init(1005);
  adjacency::AdjacencyNet net =
      adjacency::AdjacencyNet::init(1, 8, {64, 64}, 1.0, 0.2, 3e-3, init);
  Rng train_rng(1006);
  adjacency::AdjacencyTrainOptions opts;
  opts.epochs = 80;
  opts.batch_size = 32;
  opts.pairs_per_epoch = 256;
  adjacency::train_adjacency(net, matrix, opts, train_rng);

  std::vector<adjacency::LabeledPair> all;
  for (int i = 0; i < 10; ++i) {
    for (int j = i + 1; j < 10; ++j) {
      all.push_back(adjacency::LabeledPair{chain[i], chain[j],
                                           matrix.adjacent(i, j) ? 1 : 0});
    }
  }
  const double loss = adjacency::adjacency_loss(net, all);

  int margin_violations = 0, separation_violations = 0;
  for (const auto& p : all) {
    const double d =
        (adjacency::embed(net, p.a) - adjacency::embed(net, p.b)).norm();
    const double est = adjacency::estimate_distance(net, p.a, p.b, k);
    if (p.label == 1) {
      if (d > net.epsilon_k + 0.05) ++margin_violations;
      if (est > k * 1.05) ++separation_violations;
    } else {
      if (d < net.epsilon_k + net.margin - 0.05) ++margin_violations;
      if (est <= k * 1.05) ++separation_violations;
    }
  }
  std::ostringstream os;
  os << "final loss " << loss << ", margin violations " << margin_violations
     << ", separation violations " << separation_violations;
  return {loss < 1e-3 && margin_violations == 0 && separation_violations == 0,
          os.str()};
}

// ---------------------------------------------------------------------------
// 6. Novelty-queue invariants under randomized insertion streams.
Outcome criterion_queue() {
  Rng rng(1007);
  int64_t inserts = 0;
  struct Entry {
    GoalVector g;
    double priority;
  };
  for (int trial = 0; trial < 25; ++trial) {
    const int capacity = 1 + static_cast<int>(rng.uniform_int(10));
    const double lambda = rng.uniform(0.1, 1.5);
    novelty::NoveltyQueue q(capacity, lambda, 2);
    std::vector<Entry> ref;
    for (int i = 0; i < 400; ++i) {
      StateVector s(2);
      s << rng.uniform(-3, 3), rng.uniform(-3, 3);
      const double score = rng.uniform(0, 10);
      q.insert(s, score);
      ++inserts;

      std::erase_if(ref,
                    [&](const Entry& e) { return (s - e.g).norm() < lambda; });
      ref.push_back(Entry{s, score});
      if (static_cast<int>(ref.size()) > capacity) {
        std::size_t worst = 0;
        for (std::size_t j = 1; j < ref.size(); ++j) {
          if (ref[j].priority < ref[worst].priority) worst = j;
        }
        ref.erase(ref.begin() + static_cast<std::ptrdiff_t>(worst));
      }

      if (q.size() > capacity) return {false, "capacity exceeded"};
      const auto& es = q.entries();
      for (std::size_t a = 0; a < es.size(); ++a) {
        for (std::size_t b = a + 1; b < es.size(); ++b) {
          if ((es[a].goal - es[b].goal).norm() < lambda) {
            return {false, "lambda separation violated"};
          }
        }
      }
      std::multiset<double> got, want;
      for (const auto& e : es) got.insert(e.priority);
      for (const auto& e : ref) want.insert(e.priority);
      if (got != want) return {false, "priority multiset mismatch"};
    }
  }
  std::ostringstream os;
  os << inserts << " inserts across 25 random (K, lambda) settings";
  return {true, os.str()};
}

// ---------------------------------------------------------------------------
// 7. RND habituation with relative dishabituation of a distant state.
Outcome criterion_rnd() {
  Rng t_rng(1008), p_rng(1009);
  novelty::RndPair rnd =
      novelty::RndPair::init(2, 32, {64, 64}, 1e-3, t_rng, p_rng);
  StateVector trained(2), held_out(2);
  trained << 0.5, -0.5;
  held_out << 8.0, 8.0;
  const double trained_before = novelty::novelty_score(rnd, trained);
  const double held_before = novelty::novelty_score(rnd, held_out);
  Eigen::MatrixXd batch(2, 1);
  batch.col(0) = trained;
  for (int i = 0; i < 200; ++i) novelty::rnd_update(rnd, batch);
  const double trained_after = novelty::novelty_score(rnd, trained);
  const double held_after = novelty::novelty_score(rnd, held_out);

  const bool habituated = trained_after < 0.1 * trained_before;
  const bool held_retained = held_after > 0.5 * held_before;
  std::ostringstream os;
  os << "trained " << trained_before << " -> " << trained_after
     << ", held-out " << held_before << " -> " << held_after;
  return {habituated && held_retained, os.str()};
}

// ---------------------------------------------------------------------------
// 8. Pseudo-landmark geometry.
Outcome criterion_pseudo() {
  Rng rng(1010);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const GoalVector cur = g2(rng.uniform(-10, 10), rng.uniform(-10, 10));
    const GoalVector sel = g2(rng.uniform(-10, 10), rng.uniform(-10, 10));
    double delta = rng.uniform(0.0, 8.0);
    if (i % 10 == 0) delta = 0.0;  // warm-up identity
    const GoalVector p = planner::pseudo_landmark(cur, sel, delta);
    const double want = std::min(delta, (sel - cur).norm());
    worst = std::max(worst, std::abs((p - cur).norm() - want));
    if (delta == 0.0 && (p - cur).norm() != 0.0) {
      return {false, "warm-up identity violated"};
    }
    // On-segment check: p = cur + t (sel - cur) with t in [0, 1].
    const GoalVector dir = sel - cur;
    if (dir.norm() > 0) {
      const double t = (p - cur).dot(dir) / dir.squaredNorm();
      const double off = (p - cur - t * dir).norm();
      if (t < -1e-12 || t > 1.0 + 1e-12 || off > 1e-9) {
        return {false, "point off the segment"};
      }
    }
  }
  std::ostringstream os;
  os << "10000 triples, worst distance error " << worst;
  return {worst <= 1e-12, os.str()};
}

// ---------------------------------------------------------------------------
// 9. Ablation identity: degenerate config vs bypassed machinery.
Outcome criterion_ablation() {
  const fs::path base = fs::temp_directory_path() / "hrl_acc_ablation";
  fs::remove_all(base);
  fs::create_directories(base / "a");
  fs::create_directories(base / "b");

  TrainConfig cfg;
  cfg.env_preset = "grid_maze";
  cfg.total_steps = 5000;
  cfg.eval_period = 1000;
  cfg.seed = 7;
  cfg.eta = 0;
  cfg.m_cov = 0;
  cfg.m_nov = 0;
  {
    Trainer t(cfg);
    t.set_out_dir((base / "a").string());
    t.run();
  }
  cfg.force_bypass = true;
  {
    Trainer t(cfg);
    t.set_out_dir((base / "b").string());
    t.run();
  }
  const std::string a = read_file((base / "a" / "metrics.csv").string());
  const std::string b = read_file((base / "b" / "metrics.csv").string());
  std::ostringstream os;
  os << "5000 grid-maze steps, csv bytes " << a.size();
  return {!a.empty() && a == b, os.str()};
}

// ---------------------------------------------------------------------------
// 10. Directional learning result on the continuous U-maze.
Outcome criterion_directional() {
  struct RunResult {
    double final_success = 0.0;
  };
  const auto run_one = [](uint64_t seed, bool landmark_guided) {
    TrainConfig cfg;  // point_umaze dense, 200-step episodes, 150k steps
    cfg.seed = seed;
    cfg.eval_episodes = 20;
    if (!landmark_guided) {
      cfg.eta = 0;
      cfg.m_cov = 0;
      cfg.m_nov = 0;
    }
    Trainer trainer(cfg);
    trainer.run();
    return RunResult{trainer.metrics().back().eval_success_rate};
  };

  // Six runs on a small worker pool.
  struct Job {
    uint64_t seed;
    bool guided;
    RunResult result;
  };
  std::vector<Job> jobs;
  for (uint64_t seed : {1, 2, 3}) {
    jobs.push_back({seed, true, {}});
    jobs.push_back({seed, false, {}});
  }
  const unsigned workers =
      std::max(1u, std::min(4u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        jobs[i].result = run_one(jobs[i].seed, jobs[i].guided);
      }
    });
  }
  for (auto& th : pool) th.join();

  int satisfying = 0;
  std::ostringstream os;
  for (uint64_t seed : {1, 2, 3}) {
    double guided = 0, baseline = 0;
    for (const Job& j : jobs) {
      if (j.seed != seed) continue;
      (j.guided ? guided : baseline) = j.result.final_success;
    }
    const bool ok = guided >= 0.6 && guided - baseline >= 0.15;
    satisfying += ok ? 1 : 0;
    os << "seed " << seed << ": guided " << guided << " vs baseline "
       << baseline << (ok ? " (ok) " : " (insufficient) ");
  }
  return {satisfying >= 2, os.str()};
}

// ---------------------------------------------------------------------------
// 11. Determinism and checkpoint persistence.
Outcome criterion_determinism() {
  const fs::path base = fs::temp_directory_path() / "hrl_acc_determinism";
  fs::remove_all(base);
  fs::create_directories(base / "a");
  fs::create_directories(base / "b");
  fs::create_directories(base / "resume");

  TrainConfig cfg;  // full landmark machinery on the continuous maze
  cfg.total_steps = 10000;
  cfg.eval_period = 2500;
  cfg.warmup_steps = 2000;
  cfg.adjacency_period_episodes = 10;
  cfg.checkpoint_period = 5000;
  cfg.seed = 11;
  {
    Trainer t(cfg);
    t.set_out_dir((base / "a").string());
    t.run();
  }
  {
    Trainer t(cfg);
    t.set_out_dir((base / "b").string());
    t.run();
  }
  const std::string csv_a = read_file((base / "a" / "metrics.csv").string());
  const std::string csv_b = read_file((base / "b" / "metrics.csv").string());
  const bool identical = !csv_a.empty() && csv_a == csv_b;

  std::string mid;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    const std::string name = entry.path().filename().string();
    if (name.starts_with("ckpt_step")) mid = entry.path().string();
  }
  bool resume_ok = false;
  std::string resume_note = "no midpoint checkpoint";
  if (!mid.empty()) {
    auto resumed = Trainer::from_checkpoint(mid);
    resumed->run();
    // Run A's final metrics row is the last non-empty line of its CSV.
    std::string last_a;
    std::istringstream lines(csv_a);
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty()) last_a = line;
    }
    resume_note = "resumed from " + fs::path(mid).filename().string();
    resume_ok = metrics_csv_row(resumed->metrics().back()) == last_a;
  }
  std::ostringstream os;
  os << "csv identical: " << (identical ? "yes" : "no") << ", " << resume_note
     << ", resume matches: " << (resume_ok ? "yes" : "no");
  return {identical && resume_ok, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_seconds;
    bool limit_hard;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"gradient correctness", 10, true, criterion_gradients},
      {"fps oracle equivalence", 5, true, criterion_fps},
      {"planner oracle equivalence", 5, true, criterion_planner},
      {"adjacency-matrix oracle", 5, true, criterion_adjacency_matrix},
      {"contrastive-loss margins", 60, true, criterion_contrastive},
      {"novelty-queue invariants", 10, true, criterion_queue},
      {"rnd habituation", 10, true, criterion_rnd},
      {"pseudo-landmark geometry", 2, true, criterion_pseudo},
      {"ablation identity", 120, true, criterion_ablation},
      {"directional learning result", 2700, false, criterion_directional},
      {"determinism and persistence", 300, true, criterion_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = seconds_since(t0);
    const bool in_time =
        !criteria[i].limit_hard || elapsed < criteria[i].limit_seconds;
    const bool pass = outcome.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("criterion %2zu [%s]: %s (%.1fs%s) - %s\n", i + 1,
                criteria[i].name, pass ? "PASS" : "FAIL", elapsed,
                in_time ? "" : ", over budget", outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures;
}
