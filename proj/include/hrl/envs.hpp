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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrl/core.hpp"
#include "hrl/rng.hpp"

namespace hrl::envs {

/// Raised when an operation is invalid in the environment's current state,
/// e.g. stepping a finished episode.
class InvalidStateError : public std::logic_error {
 public:
  explicit InvalidStateError(const std::string& what)
      : std::logic_error(what) {}
};

enum class RewardMode { kDense, kSparse };
enum class MazeKind { kGrid, kContinuous };

/// Occupancy grid parsed from a plain-text maze: '#' wall, '.' free,
/// 'S' start, 'G' eval goal; one row per line, top row first. Internally rows
/// are indexed bottom-up so row index grows with world y.
struct MazeLayout {
  int rows = 0;
  int cols = 0;
  std::vector<uint8_t> walls;                    // row-major, bottom-up
  std::vector<std::pair<int, int>> start_cells;  // (row, col)
  std::optional<std::pair<int, int>> goal_cell;

  bool wall(int row, int col) const {
    if (row < 0 || row >= rows || col < 0 || col >= cols) return true;
    return walls[static_cast<std::size_t>(row) * cols + col] != 0;
  }

  static MazeLayout parse(const std::string& text);
  static MazeLayout load_file(const std::string& path);
};

struct MazeSpec {
  MazeKind kind = MazeKind::kContinuous;
  MazeLayout layout;
  double cell_size = 2.0;
  Eigen::Vector2d origin{0.0, 0.0};  // world position of the grid's bottom-left
  Eigen::Vector2d goal_box_low{0.0, 0.0};  // train-time target sampling box
  Eigen::Vector2d goal_box_high{0.0, 0.0};
  GoalVector eval_goal;
  double success_radius = 2.5;
  int max_steps = 200;
  RewardMode reward_mode = RewardMode::kDense;
  double noise_sigma = 0.0;
  // Continuous point-mass dynamics: damped unit-mass double integrator.
  double dt = 0.2;
  double damping = 0.9;
  double max_speed = 4.0;

  void validate() const;  // throws std::invalid_argument
  int goal_dim() const { return 2; }
  int action_dim() const { return 2; }
  int state_dim() const { return kind == MazeKind::kContinuous ? 7 : 5; }
  /// Index of the target's first component inside the state vector.
  int target_offset() const { return state_dim() - 2; }

  Eigen::Vector2d cell_center(int row, int col) const;
  std::pair<int, int> cell_of(double x, double y) const;
  bool free_at(double x, double y) const;
  /// Derives the sampling box from the free-space bounding rectangle.
  void fit_goal_box_to_free_space();
};

/// True iff position is within `radius` (inclusive) of target in L2.
bool success(const GoalVector& position, const GoalVector& target,
             double radius);

struct EnvState {
  GoalVector position;
  GoalVector velocity;  // continuous kind only (empty for grid)
  int step_count = 0;
  GoalVector target;
};

/// Single-owner mutable maze environment. Distinct instances share nothing
/// and may run on different threads.
class MazeEnv {
 public:
  MazeEnv(MazeSpec spec, uint64_t seed);

  /// Places the agent in the start region; train mode samples the target
  /// uniformly over the goal box, eval mode uses spec.eval_goal.
  StateVector reset(bool train_mode);

  struct StepResult {
    StateVector state;
    double reward = 0.0;
    bool done = false;
  };
  /// Throws InvalidStateError when the episode is already done or not started.
  StepResult step(const ActionVector& action);

  const MazeSpec& spec() const { return spec_; }
  const EnvState& state() const { return state_; }
  bool episode_active() const { return episode_active_; }
  void reseed(uint64_t seed) { rng_ = Rng(seed); }

  void save(io::Writer& w) const;  // rng + episode flag only
  void load(io::Reader& r);

 private:
  StateVector observe() const;
  double axis_move(double from, double other, double to, bool horizontal,
                   bool* hit) const;

  MazeSpec spec_;
  EnvState state_;
  Rng rng_;
  bool episode_active_ = false;
};

/// Built-in desk-scale mazes: "point_umaze" (continuous U-shaped corridor,
/// start (0,0), eval goal (0,8)) and "grid_maze" (small discrete snake maze).
MazeSpec make_preset(const std::string& name);
const std::vector<std::string>& preset_names();

}  // namespace hrl::envs
