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

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hrl/trainer.hpp"

namespace {

void apply_overrides(hrl::TrainConfig& cfg,
                     const std::vector<std::string>& overrides) {
  for (const std::string& kv : overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--override expects key=value, got: " + kv);
    }
    cfg.apply(kv.substr(0, eq), kv.substr(eq + 1));
  }
}

int cmd_train(const std::string& config_path, int64_t seed,
              const std::string& out_dir,
              const std::vector<std::string>& overrides,
              const std::string& resume) {
  std::unique_ptr<hrl::Trainer> trainer;
  if (!resume.empty()) {
    trainer = hrl::Trainer::from_checkpoint(resume);
  } else {
    hrl::TrainConfig cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    if (seed >= 0) cfg.seed = static_cast<uint64_t>(seed);
    apply_overrides(cfg, overrides);
    cfg.validate();
    trainer = std::make_unique<hrl::Trainer>(cfg);
  }
  std::filesystem::create_directories(out_dir);
  trainer->set_out_dir(out_dir);
  {
    std::ofstream cfg_out(out_dir + "/config_resolved.txt");
    cfg_out << trainer->config().to_text();
  }

  trainer->run();
  trainer->save_checkpoint(out_dir + "/final.ckpt");

  const auto& rows = trainer->metrics();
  if (!rows.empty()) {
    const hrl::MetricsRecord& last = rows.back();
    std::cout << "steps " << last.step << "  episodes " << last.episode
              << "  eval_success " << last.eval_success_rate
              << "  mean_return " << last.mean_episode_return << "\n";
    std::ofstream info(out_dir + "/run_info.txt");
    info << "wall_clock_seconds = " << last.wall_clock_seconds << "\n"
         << "final_step = " << last.step << "\n"
         << "final_eval_success_rate = " << last.eval_success_rate << "\n";
  }
  std::cout << "checkpoint: " << out_dir << "/final.ckpt\n"
            << "metrics: " << out_dir << "/metrics.csv\n";
  return 0;
}

int cmd_eval(const std::string& checkpoint, int episodes, int64_t seed) {
  auto trainer = hrl::Trainer::from_checkpoint(checkpoint);
  const uint64_t env_seed =
      seed >= 0 ? static_cast<uint64_t>(seed)
                : hrl::derive_seed(trainer->config().seed, "cli-eval");
  const hrl::EvalResult res = trainer->evaluate(episodes, env_seed);
  std::cout << "episodes " << episodes << "  success_rate "
            << res.success_rate << "  mean_return " << res.mean_return << "\n";
  return 0;
}

int cmd_inspect(const std::string& checkpoint) {
  const hrl::CheckpointManifest m = hrl::inspect_checkpoint(checkpoint);
  std::cout << "format_version " << m.version << "\n"
            << "env_preset " << m.env_preset << "\n"
            << "state_dim " << m.state_dim << "\n"
            << "goal_dim " << m.goal_dim << "\n"
            << "action_dim " << m.action_dim << "\n"
            << "total_step " << m.total_step << "\n"
            << "episode " << m.episode << "\n"
            << "sections:\n";
  for (const auto& [name, bytes] : m.sections) {
    std::cout << "  " << name << " " << bytes << " bytes\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landmark-guided hierarchical reinforcement learning"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", resume, checkpoint;
  int64_t seed = -1;
  int episodes = 5;
  std::vector<std::string> overrides;

  CLI::App* train = app.add_subcommand("train", "run the training loop");
  train->add_option("--config", config_path, "key=value config file");
  train->add_option("--seed", seed, "master seed (overrides config)");
  train->add_option("--out-dir", out_dir, "output directory");
  train->add_option("--override", overrides,
                    "extra key=value settings (repeatable)");
  train->add_option("--resume", resume, "checkpoint to resume from");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
  eval->add_option("--episodes", episodes, "evaluation episodes");
  eval->add_option("--seed", seed, "evaluation seed");

  CLI::App* inspect =
      app.add_subcommand("inspect-checkpoint", "print checkpoint manifest");
  inspect->add_option("--checkpoint", checkpoint, "checkpoint file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      return cmd_train(config_path, seed, out_dir, overrides, resume);
    }
    if (eval->parsed()) return cmd_eval(checkpoint, episodes, seed);
    if (inspect->parsed()) return cmd_inspect(checkpoint);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
