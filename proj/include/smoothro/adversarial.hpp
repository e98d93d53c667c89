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

#ifndef SMOOTHRO_ADVERSARIAL_HPP_
#define SMOOTHRO_ADVERSARIAL_HPP_

#include <iosfwd>
#include <vector>

#include "smoothro/sets.hpp"

namespace smoothro {

struct WorstCase {
  double value = 0.0;
  std::vector<double> argmax;
};

/// max_{delta in set} s' delta as an explicit LP over the original edge rows
/// plus the projection interval. Reference implementation; the flow oracle
/// below is the fast path.
WorstCase worst_case_lp(const SmoothSet& set, const std::vector<double>& s);

/// The same maximum via its min-cost-flow dual. Nodes are the set's
/// vertices plus one depot; arc (k,j) carries the slack of the smoothness
/// bound, depot arcs carry the projection interval width. Costs are all
/// nonnegative by construction, so successive shortest paths with potentials
/// apply directly.
WorstCase worst_case_flow(const SmoothSet& set, const std::vector<double>& s);

std::vector<WorstCase> worst_case_flow_batch(
    const SmoothSet& set, const std::vector<std::vector<double>>& rhs);

/// Transshipment network behind worst_case_flow, exposed for tests and the
/// DIMACS dump. Node ids 0..n-1 are set vertices, node n is the depot.
/// `imbalance[v]` is the required inflow minus outflow at v; `constant` is
/// added to the flow cost to recover the maximum.
struct FlowNetwork {
  struct Arc {
    int from = 0;
    int to = 0;
    double cost = 0.0;
  };
  int num_nodes = 0;
  std::vector<Arc> arcs;
  std::vector<double> imbalance;
  double constant = 0.0;
};

FlowNetwork build_flow_network(const SmoothSet& set,
                               const std::vector<double>& s);

/// Uncapacitated min-cost flow by successive shortest paths. Requires
/// nonnegative arc costs and balanced imbalances. `potential` holds the
/// final node potentials (shortest-path duals); the depot's potential
/// anchors the scenario recovery in worst_case_flow.
struct FlowResult {
  double cost = 0.0;
  std::vector<double> flow;       // parallel to arcs
  std::vector<double> potential;  // per node
  int augmentations = 0;
};

FlowResult min_cost_flow(const FlowNetwork& net);

/// DIMACS-style dump (real-valued costs, so a debugging aid rather than a
/// strict interchange file).
void write_dimacs(const FlowNetwork& net, std::ostream& out);

}  // namespace smoothro

#endif  // SMOOTHRO_ADVERSARIAL_HPP_
