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
#include <optional>
#include <ostream>
#include <vector>

#include "hrl/adjacency.hpp"
#include "hrl/core.hpp"
#include "hrl/coverage.hpp"

namespace hrl::planner {

enum class NodeKind : uint8_t { kCurrent = 0, kLandmark = 1, kGoal = 2 };

/// Weighted digraph over {current state, landmarks, goal}. Node 0 is the
/// current state, the last node is the goal, everything between is a
/// landmark. Edge weights are estimated traversal costs; infinity marks a
/// pruned or absent edge. The goal node has no outgoing edges.
struct LandmarkGraph {
  std::vector<NodeKind> kinds;
  std::vector<GoalVector> goals;
  Eigen::MatrixXd weights;  // weights(u, v); inf = disconnected
  double gamma_dist = 0.0;

  int size() const { return static_cast<int>(kinds.size()); }
  int current_node() const { return 0; }
  int goal_node() const { return size() - 1; }
};

/// Prune rule for a raw traversal cost (-V): costs above gamma_dist
/// disconnect the edge, negative anomalies from an overestimating critic are
/// clamped to zero. Returns infinity for pruned edges.
double prune_weight(double raw_cost, double gamma_dist);

/// Assembles a graph from a precomputed raw-cost matrix (entries are -V;
/// rows = source node, cols = destination). The prune rule is applied here.
LandmarkGraph make_graph_from_costs(Eigen::MatrixXd raw_costs,
                                    std::vector<GoalVector> goals,
                                    double gamma_dist);

/// Batched distance oracle: column i of both matrices describes one query
/// V(state_i, goal_i). Returns one value per column.
using BatchValueFn = std::function<Eigen::VectorXd(
    const Eigen::MatrixXd& states, const Eigen::MatrixXd& goals)>;

/// Builds the landmark graph around a current state and final goal. Edge
/// (u, v) costs -V(s_u, phi(s_v) - phi(s_u)) under the relative scheme and
/// -V(s_u, phi(s_v)) under the absolute scheme.
LandmarkGraph build_graph(const StateVector& current,
                          const GoalVector& final_goal,
                          const std::vector<coverage::Landmark>& landmarks,
                          const BatchValueFn& value_fn, SubgoalScheme scheme,
                          double gamma_dist);

struct SelectedLandmark {
  GoalVector goal;       // goal of the first node after the current state
  int node_id = -1;
  double path_cost = 0.0;  // total cost of the minimum path to the goal
};

/// Shortest path from the current node to the goal node; returns the first
/// node on it (possibly the goal itself), or nullopt when unreachable.
std::optional<SelectedLandmark> select_landmark(const LandmarkGraph& graph);

/// Point at distance min(delta_pseudo, ||g_sel - g_cur||) from g_cur along
/// the segment toward g_sel. delta_pseudo = 0 returns g_cur (warm-up mode).
GoalVector pseudo_landmark(const GoalVector& g_cur, const GoalVector& g_sel,
                           double delta_pseudo);

/// Hinge penalty pushing the subgoal's adjacency embedding within epsilon_k
/// of the pseudo-landmark's: max(||psi(g_pseudo) - psi(g_subgoal)|| - eps_k, 0).
double landmark_loss(const adjacency::AdjacencyNet& net,
                     const GoalVector& g_pseudo, const GoalVector& g_subgoal);

/// Batched landmark loss over columns with an activity mask; inactive samples
/// contribute nothing. Returns the mean over ALL columns and, when grad is
/// non-null, accumulates d(mean loss)/d(subgoal) into it.
double landmark_loss_batch(const adjacency::AdjacencyNet& net,
                           const Eigen::MatrixXd& pseudo_goals,
                           const Eigen::MatrixXd& subgoals,
                           const std::vector<uint8_t>& active,
                           Eigen::MatrixXd* grad_subgoals);

/// Line-oriented debug dump: "node <id> <kind> <goal...>" then
/// "edge <src> <dst> <weight>".
void dump_graph(const LandmarkGraph& graph, std::ostream& os);

}  // namespace hrl::planner
