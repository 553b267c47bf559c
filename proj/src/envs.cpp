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

#include "hrl/envs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hrl::envs {

namespace {
constexpr double kBoundaryMargin = 1e-9;

double clamp(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}
}  // namespace

MazeLayout MazeLayout::parse(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw std::invalid_argument("maze layout: empty");
  MazeLayout layout;
  layout.rows = static_cast<int>(lines.size());
  layout.cols = static_cast<int>(lines[0].size());
  layout.walls.assign(static_cast<std::size_t>(layout.rows) * layout.cols, 0);
  for (int r = 0; r < layout.rows; ++r) {
    const std::string& row = lines[r];
    if (static_cast<int>(row.size()) != layout.cols) {
      throw std::invalid_argument("maze layout: ragged rows");
    }
    // Text rows run top to bottom; world rows run bottom-up.
    const int world_row = layout.rows - 1 - r;
    for (int c = 0; c < layout.cols; ++c) {
      switch (row[c]) {
        case '#':
          layout.walls[static_cast<std::size_t>(world_row) * layout.cols + c] =
              1;
          break;
        case '.':
          break;
        case 'S':
          layout.start_cells.emplace_back(world_row, c);
          break;
        case 'G':
          if (layout.goal_cell.has_value()) {
            throw std::invalid_argument("maze layout: multiple goal cells");
          }
          layout.goal_cell = {world_row, c};
          break;
        default:
          throw std::invalid_argument(std::string("maze layout: bad char '") +
                                      row[c] + "'");
      }
    }
  }
  if (layout.start_cells.empty()) {
    throw std::invalid_argument("maze layout: no start cell");
  }
  return layout;
}

MazeLayout MazeLayout::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("maze layout: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse(text);
}

void MazeSpec::validate() const {
  if (layout.rows == 0 || layout.cols == 0) {
    throw std::invalid_argument("maze spec: empty layout");
  }
  if (cell_size <= 0) throw std::invalid_argument("maze spec: cell_size <= 0");
  if (success_radius <= 0) {
    throw std::invalid_argument("maze spec: success_radius <= 0");
  }
  if (max_steps <= 0) throw std::invalid_argument("maze spec: max_steps <= 0");
  if (noise_sigma < 0) {
    throw std::invalid_argument("maze spec: noise_sigma < 0");
  }
  if (kind == MazeKind::kGrid && noise_sigma > 0) {
    throw std::invalid_argument("maze spec: grid maze has no noise variant");
  }
  if (kind == MazeKind::kContinuous &&
      (dt <= 0 || damping <= 0 || damping > 1 || max_speed <= 0)) {
    throw std::invalid_argument("maze spec: bad dynamics parameters");
  }
  for (auto [r, c] : layout.start_cells) {
    if (layout.wall(r, c)) {
      throw std::invalid_argument("maze spec: start cell inside wall");
    }
  }
  if (eval_goal.size() != 2) {
    throw std::invalid_argument("maze spec: eval_goal must be 2-dimensional");
  }
  if (!free_at(eval_goal[0], eval_goal[1])) {
    throw std::invalid_argument("maze spec: eval_goal inside wall");
  }
  if (goal_box_low[0] > goal_box_high[0] || goal_box_low[1] > goal_box_high[1]) {
    throw std::invalid_argument("maze spec: inverted goal box");
  }
}

Eigen::Vector2d MazeSpec::cell_center(int row, int col) const {
  return {origin[0] + (col + 0.5) * cell_size,
          origin[1] + (row + 0.5) * cell_size};
}

std::pair<int, int> MazeSpec::cell_of(double x, double y) const {
  const int col = static_cast<int>(std::floor((x - origin[0]) / cell_size));
  const int row = static_cast<int>(std::floor((y - origin[1]) / cell_size));
  return {row, col};
}

bool MazeSpec::free_at(double x, double y) const {
  auto [row, col] = cell_of(x, y);
  return !layout.wall(row, col);
}

void MazeSpec::fit_goal_box_to_free_space() {
  int rmin = layout.rows, rmax = -1, cmin = layout.cols, cmax = -1;
  for (int r = 0; r < layout.rows; ++r) {
    for (int c = 0; c < layout.cols; ++c) {
      if (!layout.wall(r, c)) {
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
      }
    }
  }
  if (rmax < 0) throw std::invalid_argument("maze spec: no free cells");
  goal_box_low = {origin[0] + cmin * cell_size, origin[1] + rmin * cell_size};
  goal_box_high = {origin[0] + (cmax + 1) * cell_size,
                   origin[1] + (rmax + 1) * cell_size};
}

bool success(const GoalVector& position, const GoalVector& target,
             double radius) {
  if (position.size() != target.size()) {
    throw std::invalid_argument("success: dimension mismatch");
  }
  return (position - target).norm() <= radius;
}

MazeEnv::MazeEnv(MazeSpec spec, uint64_t seed)
    : spec_(std::move(spec)), rng_(seed) {
  spec_.validate();
}

StateVector MazeEnv::reset(bool train_mode) {
  const auto& starts = spec_.layout.start_cells;
  std::size_t idx = 0;
  if (starts.size() > 1) {
    idx = static_cast<std::size_t>(
        rng_.uniform_int(static_cast<int64_t>(starts.size())));
  }
  const Eigen::Vector2d center =
      spec_.cell_center(starts[idx].first, starts[idx].second);
  state_.position = GoalVector(2);
  if (spec_.kind == MazeKind::kContinuous) {
    // Start anywhere in the inner 80% of the start cell.
    const double half = 0.4 * spec_.cell_size;
    state_.position[0] = center[0] + rng_.uniform(-half, half);
    state_.position[1] = center[1] + rng_.uniform(-half, half);
    state_.velocity = GoalVector::Zero(2);
  } else {
    state_.position = center;
    state_.velocity = GoalVector();
  }
  state_.target = GoalVector(2);
  if (train_mode) {
    state_.target[0] = rng_.uniform(spec_.goal_box_low[0], spec_.goal_box_high[0]);
    state_.target[1] = rng_.uniform(spec_.goal_box_low[1], spec_.goal_box_high[1]);
  } else {
    state_.target = spec_.eval_goal;
  }
  state_.step_count = 0;
  episode_active_ = true;
  return observe();
}

// Moves one coordinate from `from` toward `to`, the other coordinate fixed at
// `other`, clamping at the first wall boundary crossed.
double MazeEnv::axis_move(double from, double other, double to,
                          bool horizontal, bool* hit) const {
  const double origin = horizontal ? spec_.origin[0] : spec_.origin[1];
  const double other_origin = horizontal ? spec_.origin[1] : spec_.origin[0];
  const int fixed_cell =
      static_cast<int>(std::floor((other - other_origin) / spec_.cell_size));
  int cur = static_cast<int>(std::floor((from - origin) / spec_.cell_size));
  const int dst = static_cast<int>(std::floor((to - origin) / spec_.cell_size));
  const int dir = dst > cur ? 1 : -1;
  while (cur != dst) {
    const int next = cur + dir;
    const bool blocked = horizontal ? spec_.layout.wall(fixed_cell, next)
                                    : spec_.layout.wall(next, fixed_cell);
    if (blocked) {
      *hit = true;
      const double boundary =
          origin + (dir > 0 ? next : cur) * spec_.cell_size;
      return boundary - dir * kBoundaryMargin;
    }
    cur = next;
  }
  return to;
}

MazeEnv::StepResult MazeEnv::step(const ActionVector& action) {
  if (!episode_active_) {
    throw InvalidStateError("step: episode is not active");
  }
  if (action.size() != spec_.action_dim()) {
    throw std::invalid_argument("step: action dimension mismatch");
  }
  ActionVector a(2);
  a[0] = clamp(action[0], -1.0, 1.0);
  a[1] = clamp(action[1], -1.0, 1.0);

  if (spec_.kind == MazeKind::kContinuous) {
    GoalVector& v = state_.velocity;
    v = spec_.damping * v + a * spec_.dt;
    v[0] = clamp(v[0], -spec_.max_speed, spec_.max_speed);
    v[1] = clamp(v[1], -spec_.max_speed, spec_.max_speed);
    Eigen::Vector2d intended = state_.position + v * spec_.dt;
    if (spec_.noise_sigma > 0) {
      intended[0] += rng_.normal(0.0, spec_.noise_sigma);
      intended[1] += rng_.normal(0.0, spec_.noise_sigma);
    }
    bool hit_x = false, hit_y = false;
    const double nx =
        axis_move(state_.position[0], state_.position[1], intended[0],
                  /*horizontal=*/true, &hit_x);
    const double ny = axis_move(state_.position[1], nx, intended[1],
                                /*horizontal=*/false, &hit_y);
    if (hit_x) v[0] = 0.0;
    if (hit_y) v[1] = 0.0;
    state_.position[0] = nx;
    state_.position[1] = ny;
  } else {
    auto [row, col] = spec_.cell_of(state_.position[0], state_.position[1]);
    int dr = 0, dc = 0;
    if (std::max(std::abs(a[0]), std::abs(a[1])) >= 0.5) {
      if (std::abs(a[0]) >= std::abs(a[1])) {
        dc = a[0] > 0 ? 1 : -1;
      } else {
        dr = a[1] > 0 ? 1 : -1;
      }
    }
    if (!spec_.layout.wall(row + dr, col + dc)) {
      state_.position = spec_.cell_center(row + dr, col + dc);
    }
  }

  state_.step_count += 1;
  const double dist = (state_.position - state_.target).norm();
  const bool succeeded = dist <= spec_.success_radius;
  double reward;
  if (spec_.reward_mode == RewardMode::kDense) {
    reward = -dist;
  } else {
    reward = succeeded ? 0.0 : -1.0;
  }
  const bool done = succeeded || state_.step_count >= spec_.max_steps;
  episode_active_ = !done;
  return StepResult{observe(), reward, done};
}

StateVector MazeEnv::observe() const {
  StateVector s(spec_.state_dim());
  s[0] = state_.position[0];
  s[1] = state_.position[1];
  int i = 2;
  if (spec_.kind == MazeKind::kContinuous) {
    s[2] = state_.velocity[0];
    s[3] = state_.velocity[1];
    i = 4;
  }
  s[i] = static_cast<double>(state_.step_count) / spec_.max_steps;
  s[i + 1] = state_.target[0];
  s[i + 2] = state_.target[1];
  return s;
}

void MazeEnv::save(io::Writer& w) const {
  rng_.save(w);
  w.write_u8(episode_active_ ? 1 : 0);
  w.write_vector(state_.position.size() ? state_.position : GoalVector());
  w.write_vector(state_.velocity.size() ? state_.velocity : GoalVector());
  w.write_i64(state_.step_count);
  w.write_vector(state_.target.size() ? state_.target : GoalVector());
}

void MazeEnv::load(io::Reader& r) {
  rng_.load(r);
  episode_active_ = r.read_u8() != 0;
  state_.position = r.read_vector();
  state_.velocity = r.read_vector();
  state_.step_count = static_cast<int>(r.read_i64());
  state_.target = r.read_vector();
}

namespace {
constexpr const char* kPointUmazeText =
    "######\n"
    "#G...#\n"
    "####.#\n"
    "####.#\n"
    "####.#\n"
    "#S...#\n"
    "######\n";

constexpr const char* kGridMazeText =
    "#######\n"
    "#S....#\n"
    "#.###.#\n"
    "#...#.#\n"
    "###.#.#\n"
    "#G....#\n"
    "#######\n";
}  // namespace

MazeSpec make_preset(const std::string& name) {
  MazeSpec spec;
  if (name == "point_umaze") {
    spec.kind = MazeKind::kContinuous;
    spec.layout = MazeLayout::parse(kPointUmazeText);
    spec.cell_size = 2.0;
    spec.origin = {-3.0, -3.0};
    spec.success_radius = 2.5;
    spec.max_steps = 200;
    spec.max_speed = 1.2;
  } else if (name == "grid_maze") {
    spec.kind = MazeKind::kGrid;
    spec.layout = MazeLayout::parse(kGridMazeText);
    spec.cell_size = 1.0;
    spec.origin = {-1.5, -5.5};
    spec.success_radius = 0.5;
    spec.max_steps = 60;
  } else {
    throw std::invalid_argument("unknown maze preset: " + name);
  }
  if (spec.layout.goal_cell.has_value()) {
    const auto [gr, gc] = *spec.layout.goal_cell;
    spec.eval_goal = spec.cell_center(gr, gc);
  }
  spec.fit_goal_box_to_free_space();
  return spec;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"point_umaze", "grid_maze"};
  return names;
}

}  // namespace hrl::envs
