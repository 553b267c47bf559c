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

#include "hrl/adjacency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hrl::adjacency {

AdjacencyMatrix::AdjacencyMatrix(int goal_dim, double anchor_resolution,
                                 int degree_k)
    : goal_dim_(goal_dim), resolution_(anchor_resolution), degree_k_(degree_k) {
  if (goal_dim <= 0) throw std::invalid_argument("adjacency: goal_dim <= 0");
  if (anchor_resolution <= 0) {
    throw std::invalid_argument("adjacency: anchor_resolution <= 0");
  }
  if (degree_k <= 0) throw std::invalid_argument("adjacency: degree_k <= 0");
}

int AdjacencyMatrix::anchor_for(const GoalVector& g) const {
  int best = -1;
  double best_dist = resolution_;
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    const double d = (anchors_[i] - g).norm();
    if (d < best_dist) {
      best_dist = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

int AdjacencyMatrix::find_or_add(const GoalVector& g) {
  const int existing = anchor_for(g);
  if (existing >= 0) return existing;
  const int n = num_anchors();
  // Grow the flat n*n label store by one row and column.
  std::vector<uint8_t> grown(static_cast<std::size_t>(n + 1) * (n + 1), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      grown[static_cast<std::size_t>(i) * (n + 1) + j] =
          labels_[static_cast<std::size_t>(i) * n + j];
    }
  }
  labels_ = std::move(grown);
  anchors_.push_back(g);
  labels_[static_cast<std::size_t>(n) * (n + 1) + n] = 1;  // diagonal
  return n;
}

void AdjacencyMatrix::mark(int i, int j) {
  const int n = num_anchors();
  labels_[static_cast<std::size_t>(i) * n + j] = 1;
  labels_[static_cast<std::size_t>(j) * n + i] = 1;
}

bool AdjacencyMatrix::adjacent(int i, int j) const {
  const int n = num_anchors();
  if (i < 0 || i >= n || j < 0 || j >= n) {
    throw std::invalid_argument("adjacency: anchor index out of range");
  }
  return labels_[static_cast<std::size_t>(i) * n + j] != 0;
}

void AdjacencyMatrix::update(
    const std::vector<std::vector<GoalVector>>& trajectories) {
  for (const auto& traj : trajectories) {
    std::vector<int> ids(traj.size());
    for (std::size_t t = 0; t < traj.size(); ++t) {
      if (traj[t].size() != goal_dim_) {
        throw std::invalid_argument("adjacency: goal dimension mismatch");
      }
      ids[t] = find_or_add(traj[t]);
    }
    // States within <= k steps of each other along the trajectory.
    for (std::size_t t = 0; t < ids.size(); ++t) {
      const std::size_t stop =
          std::min(ids.size(), t + static_cast<std::size_t>(degree_k_) + 1);
      for (std::size_t u = t; u < stop; ++u) mark(ids[t], ids[u]);
    }
  }
}

std::vector<std::pair<int, int>> AdjacencyMatrix::adjacent_pairs() const {
  std::vector<std::pair<int, int>> pairs;
  const int n = num_anchors();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (labels_[static_cast<std::size_t>(i) * n + j] != 0) {
        pairs.emplace_back(i, j);
      }
    }
  }
  return pairs;
}

void AdjacencyMatrix::save(io::Writer& w) const {
  w.write_u32(static_cast<uint32_t>(goal_dim_));
  w.write_f64(resolution_);
  w.write_u32(static_cast<uint32_t>(degree_k_));
  w.write_u64(anchors_.size());
  for (const GoalVector& a : anchors_) w.write_vector(a);
  w.write_u64(labels_.size());
  for (uint8_t l : labels_) w.write_u8(l);
}

void AdjacencyMatrix::load(io::Reader& r) {
  goal_dim_ = static_cast<int>(r.read_u32());
  resolution_ = r.read_f64();
  degree_k_ = static_cast<int>(r.read_u32());
  const uint64_t n = r.read_u64();
  anchors_.clear();
  for (uint64_t i = 0; i < n; ++i) anchors_.push_back(r.read_vector());
  const uint64_t ln = r.read_u64();
  if (ln != n * n) throw io::FormatError("adjacency matrix: bad label count");
  labels_.resize(ln);
  for (uint64_t i = 0; i < ln; ++i) labels_[i] = r.read_u8();
}

AdjacencyNet AdjacencyNet::init(int goal_dim, int embedding_dim,
                                const std::vector<int>& hidden,
                                double epsilon_k, double margin,
                                double learning_rate, Rng& rng) {
  if (epsilon_k <= 0 || margin <= 0) {
    throw std::invalid_argument("adjacency net: epsilon_k and margin > 0");
  }
  nn::MlpSpec spec;
  spec.layer_sizes.push_back(goal_dim);
  for (int h : hidden) spec.layer_sizes.push_back(h);
  spec.layer_sizes.push_back(embedding_dim);
  AdjacencyNet net;
  net.embedding = nn::Mlp::init(spec, rng);
  net.epsilon_k = epsilon_k;
  net.margin = margin;
  net.opt = nn::AdamState::for_mlp(net.embedding, learning_rate);
  return net;
}

void AdjacencyNet::save(io::Writer& w) const {
  nn::save_mlp(w, embedding);
  w.write_f64(epsilon_k);
  w.write_f64(margin);
  nn::save_adam(w, opt);
}

void AdjacencyNet::load(io::Reader& r) {
  embedding = nn::load_mlp(r);
  epsilon_k = r.read_f64();
  margin = r.read_f64();
  opt = nn::load_adam(r);
}

namespace {
struct PairBatch {
  Eigen::MatrixXd lhs;  // goal_dim x B
  Eigen::MatrixXd rhs;
  std::vector<int> labels;
};

PairBatch assemble(const std::vector<LabeledPair>& pairs, int goal_dim) {
  PairBatch batch;
  const Eigen::Index b = static_cast<Eigen::Index>(pairs.size());
  batch.lhs.resize(goal_dim, b);
  batch.rhs.resize(goal_dim, b);
  batch.labels.reserve(pairs.size());
  for (Eigen::Index i = 0; i < b; ++i) {
    const LabeledPair& p = pairs[static_cast<std::size_t>(i)];
    if (p.label != 0 && p.label != 1) {
      throw std::invalid_argument("adjacency loss: label must be 0 or 1");
    }
    batch.lhs.col(i) = p.a;
    batch.rhs.col(i) = p.b;
    batch.labels.push_back(p.label);
  }
  return batch;
}

// Shared loss computation. When traces are given, also produces the
// per-embedding upstream gradients of the mean loss.
double pair_loss(const AdjacencyNet& net, const Eigen::MatrixXd& e_lhs,
                 const Eigen::MatrixXd& e_rhs, const std::vector<int>& labels,
                 Eigen::MatrixXd* up_lhs, Eigen::MatrixXd* up_rhs) {
  const Eigen::Index b = e_lhs.cols();
  double total = 0.0;
  if (up_lhs) {
    up_lhs->setZero(e_lhs.rows(), b);
    up_rhs->setZero(e_rhs.rows(), b);
  }
  const double inv_b = 1.0 / static_cast<double>(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const Eigen::VectorXd diff = e_lhs.col(i) - e_rhs.col(i);
    const double d = diff.norm();
    double dloss_dd = 0.0;
    if (labels[static_cast<std::size_t>(i)] == 1) {
      const double v = d - net.epsilon_k;
      if (v > 0) {
        total += v;
        dloss_dd = 1.0;
      }
    } else {
      const double v = net.epsilon_k + net.margin - d;
      if (v > 0) {
        total += v;
        dloss_dd = -1.0;
      }
    }
    if (up_lhs && dloss_dd != 0.0 && d > 0.0) {
      const Eigen::VectorXd g = (dloss_dd * inv_b / d) * diff;
      up_lhs->col(i) = g;
      up_rhs->col(i) = -g;
    }
  }
  return total * inv_b;
}
}  // namespace

double adjacency_loss(const AdjacencyNet& net,
                      const std::vector<LabeledPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("adjacency loss: empty batch");
  const PairBatch batch = assemble(pairs, net.embedding.spec.input_dim());
  const Eigen::MatrixXd e_lhs = nn::forward(net.embedding, batch.lhs);
  const Eigen::MatrixXd e_rhs = nn::forward(net.embedding, batch.rhs);
  return pair_loss(net, e_lhs, e_rhs, batch.labels, nullptr, nullptr);
}

AdjacencyLossGrads adjacency_loss_grads(const AdjacencyNet& net,
                                        const std::vector<LabeledPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("adjacency loss: empty batch");
  const PairBatch batch = assemble(pairs, net.embedding.spec.input_dim());
  nn::ForwardTrace lhs_trace = nn::forward_trace(net.embedding, batch.lhs);
  nn::ForwardTrace rhs_trace = nn::forward_trace(net.embedding, batch.rhs);
  Eigen::MatrixXd up_lhs, up_rhs;
  AdjacencyLossGrads out;
  out.loss = pair_loss(net, lhs_trace.output(), rhs_trace.output(),
                       batch.labels, &up_lhs, &up_rhs);
  nn::BatchBackwardResult g_lhs = nn::backward(net.embedding, lhs_trace, up_lhs);
  nn::BatchBackwardResult g_rhs = nn::backward(net.embedding, rhs_trace, up_rhs);
  for (std::size_t l = 0; l < g_lhs.param_grads.weights.size(); ++l) {
    g_lhs.param_grads.weights[l] += g_rhs.param_grads.weights[l];
    g_lhs.param_grads.biases[l] += g_rhs.param_grads.biases[l];
  }
  out.param_grads = std::move(g_lhs.param_grads);
  return out;
}

double adjacency_train_step(AdjacencyNet& net,
                            const std::vector<LabeledPair>& pairs) {
  AdjacencyLossGrads lg = adjacency_loss_grads(net, pairs);
  nn::adam_step(net.opt, net.embedding, lg.param_grads);
  return lg.loss;
}

void train_adjacency(AdjacencyNet& net, const AdjacencyMatrix& matrix,
                     const AdjacencyTrainOptions& options, Rng& rng) {
  const int n = matrix.num_anchors();
  if (n < 2) return;
  const auto l1_pairs = matrix.adjacent_pairs();
  const int64_t total_pairs = static_cast<int64_t>(n) * (n - 1) / 2;
  const bool has_l0 = total_pairs > static_cast<int64_t>(l1_pairs.size());
  const bool has_l1 = !l1_pairs.empty();
  if (!has_l0 && !has_l1) return;

  const auto& anchors = matrix.anchors();
  const int iterations =
      options.epochs *
      std::max(1, (options.pairs_per_epoch + options.batch_size - 1) /
                      options.batch_size);
  for (int it = 0; it < iterations; ++it) {
    std::vector<LabeledPair> batch;
    batch.reserve(options.batch_size);
    const int half = options.batch_size / 2;
    for (int i = 0; i < options.batch_size; ++i) {
      const bool want_l1 = has_l1 && (i < half || !has_l0);
      if (want_l1) {
        const auto& [a, b] = l1_pairs[static_cast<std::size_t>(
            rng.uniform_int(static_cast<int64_t>(l1_pairs.size())))];
        batch.push_back(LabeledPair{anchors[a], anchors[b], 1});
      } else {
        // Rejection-sample a non-adjacent pair.
        LabeledPair pair;
        bool found = false;
        for (int tries = 0; tries < 64 && !found; ++tries) {
          const int a = static_cast<int>(rng.uniform_int(n));
          const int b = static_cast<int>(rng.uniform_int(n));
          if (a != b && !matrix.adjacent(a, b)) {
            pair = LabeledPair{anchors[a], anchors[b], 0};
            found = true;
          }
        }
        if (!found) continue;
        batch.push_back(std::move(pair));
      }
    }
    if (!batch.empty()) adjacency_train_step(net, batch);
  }
}

Eigen::VectorXd embed(const AdjacencyNet& net, const GoalVector& g) {
  return nn::forward(net.embedding, g);
}

Eigen::MatrixXd embed_batch(const AdjacencyNet& net,
                            const Eigen::MatrixXd& goals) {
  return nn::forward(net.embedding, goals);
}

double estimate_distance(const AdjacencyNet& net, const GoalVector& g1,
                         const GoalVector& g2, int k) {
  if (k <= 0) throw std::invalid_argument("estimate_distance: k must be > 0");
  return (static_cast<double>(k) / net.epsilon_k) *
         (embed(net, g1) - embed(net, g2)).norm();
}

}  // namespace hrl::adjacency
