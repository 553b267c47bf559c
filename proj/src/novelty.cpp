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

#include "hrl/novelty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hrl::novelty {

RndPair RndPair::init(int state_dim, int embedding_dim,
                      const std::vector<int>& hidden, double learning_rate,
                      Rng& target_rng, Rng& predictor_rng) {
  nn::MlpSpec spec;
  spec.layer_sizes.push_back(state_dim);
  for (int h : hidden) spec.layer_sizes.push_back(h);
  spec.layer_sizes.push_back(embedding_dim);
  RndPair rnd;
  rnd.target = nn::Mlp::init(spec, target_rng);
  rnd.predictor = nn::Mlp::init(spec, predictor_rng);
  rnd.opt = nn::AdamState::for_mlp(rnd.predictor, learning_rate);
  return rnd;
}

void RndPair::save(io::Writer& w) const {
  nn::save_mlp(w, target);
  nn::save_mlp(w, predictor);
  nn::save_adam(w, opt);
}

void RndPair::load(io::Reader& r) {
  target = nn::load_mlp(r);
  predictor = nn::load_mlp(r);
  opt = nn::load_adam(r);
}

double novelty_score(const RndPair& rnd, const StateVector& state) {
  return (nn::forward(rnd.predictor, state) - nn::forward(rnd.target, state))
      .norm();
}

Eigen::VectorXd novelty_score_batch(const RndPair& rnd,
                                    const Eigen::MatrixXd& states) {
  const Eigen::MatrixXd diff =
      nn::forward(rnd.predictor, states) - nn::forward(rnd.target, states);
  return diff.colwise().norm().transpose();
}

double rnd_update(RndPair& rnd, const Eigen::MatrixXd& states) {
  const Eigen::Index b = states.cols();
  if (b == 0) throw std::invalid_argument("rnd_update: empty batch");
  nn::ForwardTrace trace = nn::forward_trace(rnd.predictor, states);
  const Eigen::MatrixXd diff = trace.output() - nn::forward(rnd.target, states);
  const double loss = diff.squaredNorm() / static_cast<double>(b);
  const Eigen::MatrixXd upstream = (2.0 / static_cast<double>(b)) * diff;
  nn::BatchBackwardResult grads = nn::backward(rnd.predictor, trace, upstream);
  nn::adam_step(rnd.opt, rnd.predictor, grads.param_grads);
  return loss;
}

NoveltyQueue::NoveltyQueue(int capacity, double lambda, int goal_dim)
    : capacity_(capacity), lambda_(lambda), goal_dim_(goal_dim) {
  if (capacity <= 0) throw std::invalid_argument("queue: capacity must be > 0");
  if (lambda <= 0) throw std::invalid_argument("queue: lambda must be > 0");
}

InsertReport NoveltyQueue::insert(const StateVector& state, double score) {
  if (!std::isfinite(score) || score < 0.0) {
    throw std::invalid_argument("queue: priority must be finite and >= 0");
  }
  const GoalVector goal = map_state_to_goal(state, goal_dim_);
  InsertReport report;

  // Discard previously stored entries similar to the incoming state.
  auto keep = entries_.begin();
  for (auto it = entries_.begin(); it != entries_.end(); ++it) {
    const double d =
        distance_ ? distance_(goal, it->goal) : (goal - it->goal).norm();
    if (d < lambda_) {
      report.removed_similar += 1;
    } else {
      if (keep != it) *keep = std::move(*it);
      ++keep;
    }
  }
  entries_.erase(keep, entries_.end());

  entries_.push_back(QueueEntry{state, goal, score, next_seq_++});
  if (static_cast<int>(entries_.size()) > capacity_) {
    // Evict the minimum-priority entry, oldest first among ties.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      if (entries_[i].priority < entries_[worst].priority) worst = i;
    }
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(worst));
    report.evicted_capacity = true;
  }
  return report;
}

std::vector<QueueEntry> NoveltyQueue::sample(int count, Rng& rng) const {
  const int n = size();
  const int take = std::min(count, n);
  std::vector<QueueEntry> out;
  if (take <= 0) return out;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int i = 0; i < take; ++i) {
    const int j = i + static_cast<int>(rng.uniform_int(n - i));
    std::swap(idx[i], idx[j]);
    out.push_back(entries_[idx[i]]);
  }
  return out;
}

std::vector<QueueEntry> NoveltyQueue::top(int count) const {
  std::vector<int> idx(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (entries_[a].priority != entries_[b].priority) {
      return entries_[a].priority > entries_[b].priority;
    }
    return entries_[a].seq < entries_[b].seq;
  });
  const int take = std::min<int>(count, static_cast<int>(idx.size()));
  std::vector<QueueEntry> out;
  out.reserve(take);
  for (int i = 0; i < take; ++i) out.push_back(entries_[idx[i]]);
  return out;
}

void NoveltyQueue::save(io::Writer& w) const {
  w.write_u32(static_cast<uint32_t>(capacity_));
  w.write_f64(lambda_);
  w.write_u32(static_cast<uint32_t>(goal_dim_));
  w.write_u64(next_seq_);
  w.write_u64(entries_.size());
  for (const QueueEntry& e : entries_) {
    w.write_vector(e.state);
    w.write_vector(e.goal);
    w.write_f64(e.priority);
    w.write_u64(e.seq);
  }
}

void NoveltyQueue::load(io::Reader& r) {
  capacity_ = static_cast<int>(r.read_u32());
  lambda_ = r.read_f64();
  goal_dim_ = static_cast<int>(r.read_u32());
  next_seq_ = r.read_u64();
  const uint64_t n = r.read_u64();
  entries_.clear();
  for (uint64_t i = 0; i < n; ++i) {
    QueueEntry e;
    e.state = r.read_vector();
    e.goal = r.read_vector();
    e.priority = r.read_f64();
    e.seq = r.read_u64();
    entries_.push_back(std::move(e));
  }
}

}  // namespace hrl::novelty
