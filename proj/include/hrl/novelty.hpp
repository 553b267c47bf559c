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

#include <functional>
#include <vector>

#include "hrl/core.hpp"
#include "hrl/nn.hpp"
#include "hrl/rng.hpp"

namespace hrl::novelty {

/// Random network distillation pair: a frozen random target net and a trained
/// predictor of the same shape. Novelty of a state is the prediction error.
struct RndPair {
  nn::Mlp target;     // frozen after construction
  nn::Mlp predictor;  // trained
  nn::AdamState opt;

  static RndPair init(int state_dim, int embedding_dim,
                      const std::vector<int>& hidden, double learning_rate,
                      Rng& target_rng, Rng& predictor_rng);
  void save(io::Writer& w) const;
  void load(io::Reader& r);
};

/// n(s) = || predictor(s) - target(s) ||_2, >= 0.
double novelty_score(const RndPair& rnd, const StateVector& state);
Eigen::VectorXd novelty_score_batch(const RndPair& rnd,
                                    const Eigen::MatrixXd& states);

/// One Adam step on the mean squared prediction error over the batch;
/// returns the loss before the step. The target net is never touched.
double rnd_update(RndPair& rnd, const Eigen::MatrixXd& states);

struct QueueEntry {
  StateVector state;
  GoalVector goal;  // phi(state), cached at insertion
  double priority = 0.0;
  uint64_t seq = 0;  // insertion order, for deterministic tie-breaking
};

struct InsertReport {
  int removed_similar = 0;
  bool evicted_capacity = false;
};

/// Fixed-capacity priority structure keyed by novelty. Inserting a state
/// first discards every stored entry within lambda of it in goal space, then
/// stores the new entry; capacity overflow evicts the minimum priority.
class NoveltyQueue {
 public:
  /// Optional replacement for the goal-space L2 similarity metric (e.g. the
  /// adjacency network's transition-distance estimate).
  using DistanceFn = std::function<double(const GoalVector&, const GoalVector&)>;

  NoveltyQueue(int capacity, double lambda, int goal_dim);

  InsertReport insert(const StateVector& state, double score);

  /// min(count, size) entries drawn uniformly without replacement.
  std::vector<QueueEntry> sample(int count, Rng& rng) const;
  /// min(count, size) highest-priority entries.
  std::vector<QueueEntry> top(int count) const;

  int size() const { return static_cast<int>(entries_.size()); }
  int capacity() const { return capacity_; }
  double lambda() const { return lambda_; }
  const std::vector<QueueEntry>& entries() const { return entries_; }
  void set_distance_fn(DistanceFn fn) { distance_ = std::move(fn); }

  void save(io::Writer& w) const;
  void load(io::Reader& r);

 private:
  int capacity_;
  double lambda_;
  int goal_dim_;
  uint64_t next_seq_ = 0;
  std::vector<QueueEntry> entries_;  // insertion order
  DistanceFn distance_;              // empty = goal-space L2
};

}  // namespace hrl::novelty
