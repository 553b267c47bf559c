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

#include "hrl/coverage.hpp"

#include <limits>
#include <stdexcept>

namespace hrl::coverage {

std::vector<Landmark> LandmarkSet::merged() const {
  std::vector<Landmark> all;
  all.reserve(coverage.size() + novelty.size());
  all.insert(all.end(), coverage.begin(), coverage.end());
  all.insert(all.end(), novelty.begin(), novelty.end());
  return all;
}

std::vector<int> fps_sample(const std::vector<GoalVector>& pool, int count,
                            Rng& rng) {
  if (pool.empty()) throw std::invalid_argument("fps_sample: empty pool");
  if (count < 1) throw std::invalid_argument("fps_sample: count must be >= 1");
  const int n = static_cast<int>(pool.size());
  const int take = std::min(count, n);

  std::vector<int> selected;
  selected.reserve(take);
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());

  int cur = static_cast<int>(rng.uniform_int(n));
  for (int i = 0; i < take; ++i) {
    selected.push_back(cur);
    min_dist[cur] = -1.0;  // marks selected
    if (i + 1 == take) break;
    int best = -1;
    double best_dist = -1.0;
    for (int j = 0; j < n; ++j) {
      if (min_dist[j] < 0.0) continue;
      const double d = (pool[j] - pool[cur]).norm();
      if (d < min_dist[j]) min_dist[j] = d;
      if (min_dist[j] > best_dist) {  // strict: ties keep the lowest index
        best_dist = min_dist[j];
        best = j;
      }
    }
    cur = best;
  }
  return selected;
}

LandmarkSet gather_landmarks(const agents::ReplayBuffer<Transition>& buffer,
                             const novelty::NoveltyQueue& queue, int m_cov,
                             int m_nov, int pool_size, int goal_dim,
                             Rng& fps_rng, Rng& queue_rng,
                             bool queue_by_priority) {
  LandmarkSet set;
  if (m_cov > 0 && buffer.size() > 0) {
    // Uniform pool without replacement (all of the buffer when it is small).
    const std::size_t n = buffer.size();
    const std::size_t take = std::min<std::size_t>(pool_size, n);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(
                  fps_rng.uniform_int(static_cast<int64_t>(n - i)));
      std::swap(idx[i], idx[j]);
    }
    std::vector<GoalVector> pool(take);
    for (std::size_t i = 0; i < take; ++i) {
      pool[i] = map_state_to_goal(buffer[idx[i]].state, goal_dim);
    }
    for (int sel : fps_sample(pool, m_cov, fps_rng)) {
      set.coverage.push_back(Landmark{
          buffer[idx[static_cast<std::size_t>(sel)]].state, pool[sel]});
    }
  }
  if (m_nov > 0) {
    const auto entries = queue_by_priority ? queue.top(m_nov)
                                           : queue.sample(m_nov, queue_rng);
    for (const novelty::QueueEntry& e : entries) {
      set.novelty.push_back(Landmark{e.state, e.goal});
    }
  }
  return set;
}

}  // namespace hrl::coverage
