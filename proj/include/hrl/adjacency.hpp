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

#include <utility>
#include <vector>

#include "hrl/core.hpp"
#include "hrl/nn.hpp"
#include "hrl/rng.hpp"

namespace hrl::adjacency {

/// k-step adjacency labels over discretized explored goal-space points.
/// Two anchors are labeled adjacent (l = 1) once any trajectory visits them
/// within k steps of each other; the label is never withdrawn. All other
/// anchor pairs are non-adjacent (l = 0). The diagonal is adjacent.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix(int goal_dim, double anchor_resolution, int degree_k);

  /// Folds goal-space trajectories into anchors and labels. A state becomes a
  /// new anchor only when it is at least anchor_resolution away from every
  /// existing anchor.
  void update(const std::vector<std::vector<GoalVector>>& trajectories);

  int num_anchors() const { return static_cast<int>(anchors_.size()); }
  const std::vector<GoalVector>& anchors() const { return anchors_; }
  int degree() const { return degree_k_; }
  bool adjacent(int i, int j) const;
  /// All l = 1 pairs with i < j.
  std::vector<std::pair<int, int>> adjacent_pairs() const;
  /// Index of the anchor within anchor_resolution of g, or -1.
  int anchor_for(const GoalVector& g) const;

  void save(io::Writer& w) const;
  void load(io::Reader& r);

 private:
  int find_or_add(const GoalVector& g);
  void mark(int i, int j);

  int goal_dim_;
  double resolution_;
  int degree_k_;
  std::vector<GoalVector> anchors_;
  std::vector<uint8_t> labels_;  // n*n, symmetric
};

/// Adjacency embedding: goals whose embeddings are within epsilon_k are
/// considered k-step adjacent; non-adjacent embeddings are pushed beyond
/// epsilon_k + margin.
struct AdjacencyNet {
  nn::Mlp embedding;
  double epsilon_k = 1.0;
  double margin = 0.2;
  nn::AdamState opt;

  static AdjacencyNet init(int goal_dim, int embedding_dim,
                           const std::vector<int>& hidden, double epsilon_k,
                           double margin, double learning_rate, Rng& rng);
  void save(io::Writer& w) const;
  void load(io::Reader& r);
};

struct LabeledPair {
  GoalVector a;
  GoalVector b;
  int label = 0;  // in {0, 1}
};

/// Mean contrastive hinge loss over the batch:
///   l * max(||e_a - e_b|| - eps_k, 0) + (1-l) * max(eps_k + margin - ||e_a - e_b||, 0).
double adjacency_loss(const AdjacencyNet& net,
                      const std::vector<LabeledPair>& pairs);

struct AdjacencyLossGrads {
  double loss = 0.0;
  nn::Mlp param_grads;  // gradient of the mean loss w.r.t. the embedding
};
AdjacencyLossGrads adjacency_loss_grads(const AdjacencyNet& net,
                                        const std::vector<LabeledPair>& pairs);

/// adjacency_loss plus one Adam step on the embedding; returns the loss
/// before the step.
double adjacency_train_step(AdjacencyNet& net,
                            const std::vector<LabeledPair>& pairs);

struct AdjacencyTrainOptions {
  int epochs = 25;
  int batch_size = 64;
  int pairs_per_epoch = 2048;
};
/// Trains the embedding on balanced batches (half adjacent, half not) drawn
/// from the matrix. A matrix without both label classes trains on whatever
/// class exists; fewer than two anchors is a no-op.
void train_adjacency(AdjacencyNet& net, const AdjacencyMatrix& matrix,
                     const AdjacencyTrainOptions& options, Rng& rng);

Eigen::VectorXd embed(const AdjacencyNet& net, const GoalVector& g);
Eigen::MatrixXd embed_batch(const AdjacencyNet& net,
                            const Eigen::MatrixXd& goals);

/// Estimated shortest transition distance (k / eps_k) * ||psi(g1) - psi(g2)||.
double estimate_distance(const AdjacencyNet& net, const GoalVector& g1,
                         const GoalVector& g2, int k);

}  // namespace hrl::adjacency
