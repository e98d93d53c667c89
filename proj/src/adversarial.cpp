// Copyright 2026 The smoothro authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smoothro/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "smoothro/lp.hpp"

namespace smoothro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_rhs(const SmoothSet& set, const std::vector<double>& s) {
  if (static_cast<int>(s.size()) != set.dim()) {
    throw std::invalid_argument("adversarial: weight vector dimension mismatch");
  }
  for (double v : s) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("adversarial: weight vector not finite");
    }
  }
}

double problem_scale(const SmoothSet& set, const std::vector<double>& s) {
  double scale = 1.0;
  const ProjectionBounds& pb = set.bounds();
  for (int i = 0; i < set.dim(); ++i) {
    scale = std::max({scale, std::abs(pb.lower[i]), std::abs(pb.upper[i])});
  }
  for (double v : s) scale = std::max(scale, std::abs(v));
  return scale;
}

}  // namespace

WorstCase worst_case_lp(const SmoothSet& set, const std::vector<double>& s) {
  check_rhs(set, s);
  const int n = set.dim();
  const ProjectionBounds& pb = set.bounds();

  lp::LinearProgram prog;
  for (int i = 0; i < n; ++i) {
    prog.add_var(-s[i], pb.lower[i], pb.upper[i]);
  }
  for (const UncertaintyGraph::Edge& e : set.graph().edges) {
    prog.add_row(lp::Relation::kLessEqual, e.gamma,
                 {{e.i, 1.0}, {e.j, -1.0}});
    prog.add_row(lp::Relation::kLessEqual, e.gamma,
                 {{e.j, 1.0}, {e.i, -1.0}});
  }
  const lp::Solution sol = lp::solve(prog);
  if (sol.status != lp::SolveStatus::kOptimal) {
    // Nonempty sets have finite projection bounds, so the LP is bounded and
    // feasible; anything else means numerics went wrong.
    throw std::runtime_error(std::string("worst_case_lp: solver returned ") +
                             lp::to_string(sol.status));
  }
  return {-sol.objective, sol.x};
}

FlowNetwork build_flow_network(const SmoothSet& set,
                               const std::vector<double>& s) {
  check_rhs(set, s);
  const int n = set.dim();
  const ProjectionBounds& pb = set.bounds();
  const double scale = problem_scale(set, s);

  FlowNetwork net;
  net.num_nodes = n + 1;
  net.imbalance.assign(n + 1, 0.0);
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    net.imbalance[j] = s[j];
    total += s[j];
    net.constant += pb.lower[j] * s[j];
  }
  net.imbalance[n] = -total;

  const auto push_arc = [&](int from, int to, double cost) {
    if (cost < -1e-9 * scale) {
      throw std::logic_error("build_flow_network: negative rewritten cost");
    }
    net.arcs.push_back({from, to, std::max(cost, 0.0)});
  };

  // Edge slack costs are nonnegative because the projection bounds are
  // 1-Lipschitz in the graph metric.
  for (const UncertaintyGraph::Edge& e : set.graph().edges) {
    push_arc(e.i, e.j, e.gamma + pb.lower[e.i] - pb.lower[e.j]);
    push_arc(e.j, e.i, e.gamma + pb.lower[e.j] - pb.lower[e.i]);
  }
  for (int j = 0; j < n; ++j) {
    push_arc(n, j, pb.upper[j] - pb.lower[j]);
    push_arc(j, n, 0.0);
  }
  return net;
}

FlowResult min_cost_flow(const FlowNetwork& net) {
  const int n_nodes = net.num_nodes;
  const int n_arcs = static_cast<int>(net.arcs.size());

  double scale = 1.0, total = 0.0;
  for (double b : net.imbalance) {
    scale = std::max(scale, std::abs(b));
    total += b;
  }
  for (const FlowNetwork::Arc& a : net.arcs) {
    if (a.cost < 0.0) {
      throw std::invalid_argument("min_cost_flow: negative arc cost");
    }
    scale = std::max(scale, a.cost);
  }
  if (std::abs(total) > 1e-9 * scale * n_nodes) {
    throw std::invalid_argument("min_cost_flow: imbalances do not sum to zero");
  }

  std::vector<std::vector<int>> arcs_out(n_nodes), arcs_in(n_nodes);
  for (int a = 0; a < n_arcs; ++a) {
    arcs_out[net.arcs[a].from].push_back(a);
    arcs_in[net.arcs[a].to].push_back(a);
  }

  FlowResult res;
  res.flow.assign(n_arcs, 0.0);
  res.potential.assign(n_nodes, 0.0);
  std::vector<double> need = net.imbalance;  // required inflow - outflow
  const double eps = 1e-12 * scale;

  std::vector<double> dist(n_nodes);
  std::vector<int> parent_arc(n_nodes);
  std::vector<char> parent_fwd(n_nodes), settled(n_nodes);

  // Each augmentation normally zeroes one deficit; the cap only guards
  // against degenerate float-limited pushes cycling.
  const int max_augmentations = 50 * n_nodes + 1000;

  while (true) {
    if (res.augmentations > max_augmentations) {
      throw std::runtime_error("min_cost_flow: augmentation cap exceeded");
    }
    int source = -1;
    for (int v = 0; v < n_nodes; ++v) {
      if (need[v] < -eps) {
        source = v;
        break;
      }
    }
    if (source < 0) break;

    // Dijkstra on residual reduced costs from the overfull node to the
    // nearest underfull one. Potentials keep every reduced cost >= 0.
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(settled.begin(), settled.end(), 0);
    dist[source] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, source});
    int target = -1;
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (settled[u]) continue;
      settled[u] = 1;
      if (need[u] > eps) {
        target = u;
        break;
      }
      const auto relax = [&](int v, double rc, int arc, bool fwd) {
        const double nd = d + std::max(rc, 0.0);
        if (nd < dist[v] - 1e-15 * scale) {
          dist[v] = nd;
          parent_arc[v] = arc;
          parent_fwd[v] = fwd;
          heap.push({nd, v});
        }
      };
      for (int a : arcs_out[u]) {
        const FlowNetwork::Arc& arc = net.arcs[a];
        relax(arc.to, arc.cost + res.potential[u] - res.potential[arc.to], a,
              true);
      }
      for (int a : arcs_in[u]) {
        if (res.flow[a] <= eps) continue;
        const FlowNetwork::Arc& arc = net.arcs[a];
        relax(arc.from,
              -arc.cost + res.potential[u] - res.potential[arc.from], a,
              false);
      }
    }
    if (target < 0) {
      throw std::runtime_error("min_cost_flow: no augmenting path");
    }

    const double reach = dist[target];
    for (int v = 0; v < n_nodes; ++v) {
      res.potential[v] += std::min(dist[v], reach);
    }

    double push = std::min(-need[source], need[target]);
    for (int v = target; v != source;) {
      const FlowNetwork::Arc& arc = net.arcs[parent_arc[v]];
      if (parent_fwd[v]) {
        v = arc.from;
      } else {
        push = std::min(push, res.flow[parent_arc[v]]);
        v = arc.to;
      }
    }
    for (int v = target; v != source;) {
      const int a = parent_arc[v];
      if (parent_fwd[v]) {
        res.flow[a] += push;
        v = net.arcs[a].from;
      } else {
        res.flow[a] -= push;
        if (res.flow[a] < eps) res.flow[a] = 0.0;
        v = net.arcs[a].to;
      }
    }
    need[source] += push;
    need[target] -= push;
    if (need[source] > -eps) need[source] = 0.0;
    if (need[target] < eps) need[target] = 0.0;
    ++res.augmentations;
  }

  for (int a = 0; a < n_arcs; ++a) {
    res.cost += net.arcs[a].cost * res.flow[a];
  }
  return res;
}

WorstCase worst_case_flow(const SmoothSet& set, const std::vector<double>& s) {
  const FlowNetwork net = build_flow_network(set, s);
  const FlowResult flow = min_cost_flow(net);

  const int n = set.dim();
  const ProjectionBounds& pb = set.bounds();
  WorstCase wc;
  wc.value = flow.cost + net.constant;
  wc.argmax.resize(n);
  // The optimal node potentials are the duals of the flow balance rows;
  // anchored at the depot they are exactly the scenario offsets above the
  // lower projection bound.
  const double anchor = flow.potential[n];
  for (int j = 0; j < n; ++j) {
    const double raw = pb.lower[j] + (flow.potential[j] - anchor);
    wc.argmax[j] = std::clamp(raw, pb.lower[j], pb.upper[j]);
  }

  const double scale = problem_scale(set, s);
  if (!set.contains(wc.argmax, 1e-7 * scale)) {
    throw std::runtime_error("worst_case_flow: recovered scenario infeasible");
  }
  double check = 0.0;
  for (int j = 0; j < n; ++j) check += s[j] * wc.argmax[j];
  if (std::abs(check - wc.value) > 1e-8 * (1.0 + std::abs(wc.value))) {
    throw std::runtime_error("worst_case_flow: scenario value mismatch");
  }
  return wc;
}

std::vector<WorstCase> worst_case_flow_batch(
    const SmoothSet& set, const std::vector<std::vector<double>>& rhs) {
  std::vector<WorstCase> out;
  out.reserve(rhs.size());
  for (const std::vector<double>& s : rhs) {
    out.push_back(worst_case_flow(set, s));
  }
  return out;
}

void write_dimacs(const FlowNetwork& net, std::ostream& out) {
  out << "c uncapacitated transshipment, real-valued costs\n";
  out << "p min " << net.num_nodes << ' ' << net.arcs.size() << '\n';
  for (int v = 0; v < net.num_nodes; ++v) {
    if (net.imbalance[v] != 0.0) {
      // DIMACS supplies are outflow minus inflow.
      out << "n " << (v + 1) << ' ' << -net.imbalance[v] << '\n';
    }
  }
  for (const FlowNetwork::Arc& a : net.arcs) {
    out << "a " << (a.from + 1) << ' ' << (a.to + 1) << " 0 inf " << a.cost
        << '\n';
  }
}

}  // namespace smoothro
