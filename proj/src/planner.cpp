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

#include "hrl/planner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hrl::planner {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double prune_weight(double raw_cost, double gamma_dist) {
  if (!(raw_cost <= gamma_dist)) return kInf;  // also prunes NaN
  return std::max(raw_cost, 0.0);
}

LandmarkGraph make_graph_from_costs(Eigen::MatrixXd raw_costs,
                                    std::vector<GoalVector> goals,
                                    double gamma_dist) {
  const int n = static_cast<int>(goals.size());
  if (raw_costs.rows() != n || raw_costs.cols() != n || n < 2) {
    throw std::invalid_argument("make_graph_from_costs: bad shape");
  }
  LandmarkGraph graph;
  graph.gamma_dist = gamma_dist;
  graph.goals = std::move(goals);
  graph.kinds.assign(static_cast<std::size_t>(n), NodeKind::kLandmark);
  graph.kinds.front() = NodeKind::kCurrent;
  graph.kinds.back() = NodeKind::kGoal;
  graph.weights = Eigen::MatrixXd::Constant(n, n, kInf);
  for (int u = 0; u < n; ++u) {
    if (u == n - 1) continue;  // goal node: incoming edges only
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      graph.weights(u, v) = prune_weight(raw_costs(u, v), gamma_dist);
    }
  }
  return graph;
}

LandmarkGraph build_graph(const StateVector& current,
                          const GoalVector& final_goal,
                          const std::vector<coverage::Landmark>& landmarks,
                          const BatchValueFn& value_fn, SubgoalScheme scheme,
                          double gamma_dist) {
  const int goal_dim = static_cast<int>(final_goal.size());
  const int n = static_cast<int>(landmarks.size()) + 2;

  std::vector<GoalVector> goals;
  goals.reserve(n);
  goals.push_back(map_state_to_goal(current, goal_dim));
  for (const coverage::Landmark& lm : landmarks) goals.push_back(lm.goal);
  goals.push_back(final_goal);

  // Source states for every node that can emit edges (all but the goal).
  std::vector<const StateVector*> states;
  states.push_back(&current);
  for (const coverage::Landmark& lm : landmarks) states.push_back(&lm.state);

  const int state_dim = static_cast<int>(current.size());
  const int num_queries = (n - 1) * (n - 1);
  Eigen::MatrixXd q_states(state_dim, num_queries);
  Eigen::MatrixXd q_goals(goal_dim, num_queries);
  int q = 0;
  for (int u = 0; u < n - 1; ++u) {
    for (int v = 0; v < n; ++v) {
      if (v == u) continue;
      q_states.col(q) = *states[u];
      q_goals.col(q) = scheme == SubgoalScheme::kRelative
                           ? GoalVector(goals[v] - goals[u])
                           : goals[v];
      ++q;
    }
  }
  const Eigen::VectorXd values = value_fn(q_states, q_goals);

  Eigen::MatrixXd raw = Eigen::MatrixXd::Constant(n, n, kInf);
  q = 0;
  for (int u = 0; u < n - 1; ++u) {
    for (int v = 0; v < n; ++v) {
      if (v == u) continue;
      raw(u, v) = -values[q++];
    }
  }
  return make_graph_from_costs(std::move(raw), std::move(goals), gamma_dist);
}

std::optional<SelectedLandmark> select_landmark(const LandmarkGraph& graph) {
  const int n = graph.size();
  const int src = graph.current_node();
  const int dst = graph.goal_node();
  std::vector<double> dist(static_cast<std::size_t>(n), kInf);
  std::vector<int> pred(static_cast<std::size_t>(n), -1);
  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  dist[src] = 0.0;
  for (int iter = 0; iter < n; ++iter) {
    int u = -1;
    for (int i = 0; i < n; ++i) {
      if (!visited[i] && dist[i] < kInf && (u < 0 || dist[i] < dist[u])) {
        u = i;
      }
    }
    if (u < 0) break;
    visited[u] = true;
    if (u == dst) break;
    for (int v = 0; v < n; ++v) {
      const double w = graph.weights(u, v);
      if (w < kInf && dist[u] + w < dist[v]) {
        dist[v] = dist[u] + w;
        pred[v] = u;
      }
    }
  }
  if (dist[dst] == kInf) return std::nullopt;

  int first = dst;
  while (pred[first] != src) {
    first = pred[first];
    if (first < 0) return std::nullopt;  // src == dst cannot happen (n >= 2)
  }
  return SelectedLandmark{graph.goals[first], first, dist[dst]};
}

GoalVector pseudo_landmark(const GoalVector& g_cur, const GoalVector& g_sel,
                           double delta_pseudo) {
  if (g_cur.size() != g_sel.size()) {
    throw std::invalid_argument("pseudo_landmark: dimension mismatch");
  }
  if (delta_pseudo < 0) {
    throw std::invalid_argument("pseudo_landmark: negative shift");
  }
  const GoalVector offset = g_sel - g_cur;
  const double dist = offset.norm();
  if (delta_pseudo == 0.0 || dist == 0.0) return g_cur;
  if (dist <= delta_pseudo) return g_sel;  // never overshoot a near landmark
  return g_cur + (delta_pseudo / dist) * offset;
}

double landmark_loss(const adjacency::AdjacencyNet& net,
                     const GoalVector& g_pseudo, const GoalVector& g_subgoal) {
  const double d =
      (adjacency::embed(net, g_pseudo) - adjacency::embed(net, g_subgoal))
          .norm();
  return std::max(d - net.epsilon_k, 0.0);
}

double landmark_loss_batch(const adjacency::AdjacencyNet& net,
                           const Eigen::MatrixXd& pseudo_goals,
                           const Eigen::MatrixXd& subgoals,
                           const std::vector<uint8_t>& active,
                           Eigen::MatrixXd* grad_subgoals) {
  const Eigen::Index b = subgoals.cols();
  if (pseudo_goals.cols() != b ||
      static_cast<Eigen::Index>(active.size()) != b) {
    throw std::invalid_argument("landmark_loss_batch: shape mismatch");
  }
  const Eigen::MatrixXd e_pseudo = adjacency::embed_batch(net, pseudo_goals);
  nn::ForwardTrace sub_trace =
      nn::forward_trace(net.embedding, subgoals);
  const Eigen::MatrixXd& e_sub = sub_trace.output();

  double total = 0.0;
  Eigen::MatrixXd upstream = Eigen::MatrixXd::Zero(e_sub.rows(), b);
  const double inv_b = 1.0 / static_cast<double>(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    if (!active[static_cast<std::size_t>(i)]) continue;
    const Eigen::VectorXd diff = e_sub.col(i) - e_pseudo.col(i);
    const double d = diff.norm();
    const double v = d - net.epsilon_k;
    if (v > 0) {
      total += v;
      if (grad_subgoals && d > 0) upstream.col(i) = (inv_b / d) * diff;
    }
  }
  if (grad_subgoals) {
    nn::BatchBackwardResult g =
        nn::backward(net.embedding, sub_trace, upstream);
    *grad_subgoals += g.input_grads;
  }
  return total * inv_b;
}

void dump_graph(const LandmarkGraph& graph, std::ostream& os) {
  const auto kind_name = [](NodeKind k) {
    switch (k) {
      case NodeKind::kCurrent: return "current";
      case NodeKind::kLandmark: return "landmark";
      case NodeKind::kGoal: return "goal";
    }
    return "?";
  };
  for (int i = 0; i < graph.size(); ++i) {
    os << "node " << i << " " << kind_name(graph.kinds[i]);
    for (Eigen::Index d = 0; d < graph.goals[i].size(); ++d) {
      os << " " << graph.goals[i][d];
    }
    os << "\n";
  }
  for (int u = 0; u < graph.size(); ++u) {
    for (int v = 0; v < graph.size(); ++v) {
      const double w = graph.weights(u, v);
      if (w < kInf) os << "edge " << u << " " << v << " " << w << "\n";
    }
  }
}

}  // namespace hrl::planner
