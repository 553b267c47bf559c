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

#include <Eigen/Core>
#include <vector>

namespace hrl {

// Goal-space currency shared by every module. States live in the environment
// state space, goals in the (lower-dimensional) goal space, actions in the
// agent's action space. All are finite real vectors.
using StateVector = Eigen::VectorXd;
using GoalVector = Eigen::VectorXd;
using ActionVector = Eigen::VectorXd;

/// Whether a subgoal denotes a displacement from the current state (Relative)
/// or an absolute goal-space point (Absolute). Fixed per training run.
enum class SubgoalScheme { kRelative, kAbsolute };

struct Transition {
  StateVector state;
  GoalVector subgoal;
  ActionVector action;
  double reward = 0.0;
  StateVector next_state;
  bool done = false;
};

/// A contiguous run of transitions of length m (the high-level action period).
struct TrajectorySegment {
  std::vector<Transition> transitions;
};

/// Goal mapping: projection of a state onto its first goal_dim components.
GoalVector map_state_to_goal(const StateVector& state, int goal_dim);

/// Subgoal carried between high-level decisions. Relative scheme shifts the
/// subgoal by the agent's goal-space displacement so the pointed-at location
/// stays fixed; Absolute holds the subgoal.
GoalVector goal_transition(const GoalVector& prev_goal,
                           const StateVector& prev_state,
                           const StateVector& state, SubgoalScheme scheme);

/// Intrinsic reward for the low-level policy: negative goal-space distance
/// between the subgoal and the achieved displacement (Relative) or the
/// achieved position (Absolute). Always <= 0.
double low_level_reward(const StateVector& state, const GoalVector& subgoal,
                        const StateVector& next_state, SubgoalScheme scheme);

/// High-level reward: sum of the environment rewards over a segment.
double high_level_reward(const TrajectorySegment& segment);

}  // namespace hrl
