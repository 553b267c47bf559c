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

#include "hrl/core.hpp"

#include <stdexcept>

namespace hrl {

GoalVector map_state_to_goal(const StateVector& state, int goal_dim) {
  if (goal_dim <= 0 || goal_dim > state.size()) {
    throw std::invalid_argument("map_state_to_goal: goal_dim out of range");
  }
  return state.head(goal_dim);
}

GoalVector goal_transition(const GoalVector& prev_goal,
                           const StateVector& prev_state,
                           const StateVector& state, SubgoalScheme scheme) {
  if (scheme == SubgoalScheme::kAbsolute) return prev_goal;
  const int goal_dim = static_cast<int>(prev_goal.size());
  if (prev_state.size() != state.size()) {
    throw std::invalid_argument("goal_transition: state dimension mismatch");
  }
  return prev_goal + map_state_to_goal(prev_state, goal_dim) -
         map_state_to_goal(state, goal_dim);
}

double low_level_reward(const StateVector& state, const GoalVector& subgoal,
                        const StateVector& next_state, SubgoalScheme scheme) {
  if (state.size() != next_state.size()) {
    throw std::invalid_argument("low_level_reward: state dimension mismatch");
  }
  const int goal_dim = static_cast<int>(subgoal.size());
  if (scheme == SubgoalScheme::kRelative) {
    const GoalVector achieved = map_state_to_goal(next_state - state, goal_dim);
    return -(subgoal - achieved).norm();
  }
  return -(subgoal - map_state_to_goal(next_state, goal_dim)).norm();
}

double high_level_reward(const TrajectorySegment& segment) {
  if (segment.transitions.empty()) {
    throw std::invalid_argument("high_level_reward: empty segment");
  }
  double sum = 0.0;
  for (const Transition& t : segment.transitions) sum += t.reward;
  return sum;
}

}  // namespace hrl
