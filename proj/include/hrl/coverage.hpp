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

#include <vector>

#include "hrl/agents.hpp"
#include "hrl/core.hpp"
#include "hrl/novelty.hpp"
#include "hrl/rng.hpp"

namespace hrl::coverage {

struct Landmark {
  StateVector state;
  GoalVector goal;
};

struct LandmarkSet {
  std::vector<Landmark> coverage;  // from farthest point sampling
  std::vector<Landmark> novelty;   // from the novelty queue
  int total() const {
    return static_cast<int>(coverage.size() + novelty.size());
  }
  std::vector<Landmark> merged() const;
};

/// Greedy farthest point sampling over goal-space points. The first index is
/// drawn uniformly; each later pick maximizes the minimum L2 distance to the
/// already-selected set, ties broken by lowest index. Returns
/// min(count, pool size) distinct indices in selection order.
std::vector<int> fps_sample(const std::vector<GoalVector>& pool, int count,
                            Rng& rng);

/// Draws a pool of states from the replay buffer and runs FPS for the
/// coverage landmarks; draws novelty landmarks from the queue. An empty
/// buffer yields an empty coverage set.
LandmarkSet gather_landmarks(const agents::ReplayBuffer<Transition>& buffer,
                             const novelty::NoveltyQueue& queue, int m_cov,
                             int m_nov, int pool_size, int goal_dim,
                             Rng& fps_rng, Rng& queue_rng,
                             bool queue_by_priority = false);

}  // namespace hrl::coverage
