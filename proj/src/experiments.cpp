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

#include "smoothro/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "smoothro/adversarial.hpp"
#include "smoothro/calibration.hpp"
#include "smoothro/numerics.hpp"
#include "smoothro/rng.hpp"

namespace smoothro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd kms_correlation(int n, double rho) {
  Eigen::MatrixXd sigma(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) sigma(i, j) = std::pow(rho, std::abs(i - j));
  }
  return sigma;
}

SetComparison::Entry closed_entry(const std::string& name,
                                  const SetGeometry& geo) {
  SetComparison::Entry e;
  e.name = name;
  e.volume = geo.volume;
  e.diameter = geo.diameter;
  return e;
}

SetComparison::Entry smooth_entry(const std::string& name,
                                  const SmoothSet& set, std::int64_t samples,
                                  std::uint64_t seed) {
  SetComparison::Entry e;
  e.name = name;
  const McVolume mc = mc_volume(set, samples, seed);
  e.volume = mc.volume;
  e.mc_std_error = mc.std_error;
  e.diameter = polytope_diameter(set);
  return e;
}

void fill_ratios(std::vector<SetComparison::Entry>* block) {
  const double base = block->front().volume;
  for (SetComparison::Entry& e : *block) e.volume_ratio = e.volume / base;
}

}  // namespace

SetComparison set_comparison_report(int n, double p, double rho,
                                    std::int64_t samples, std::uint64_t seed) {
  if (n < 1 || n > 8) {
    throw std::invalid_argument("set_comparison_report: need 1 <= n <= 8");
  }
  const Eigen::MatrixXd sigma = kms_correlation(n, rho);
  const std::vector<std::pair<int, int>> edges = complete_edges(n);

  SetComparison rep;
  rep.n = n;
  rep.p = p;
  rep.rho = rho;

  // Distribution-free sizing.
  {
    const double omega = n / p;
    rep.general.push_back(
        closed_entry("ellipsoid", ellipsoid_geometry(sigma, omega)));
    const SmoothSet enclosing =
        SmoothSet::build(enclosing_gamma(sigma, edges, omega));
    rep.general.push_back(
        smooth_entry("graph_enclosing", enclosing, samples, seed));
    rep.general.push_back(
        closed_entry("box", enclosing_box_geometry(enclosing)));
    rep.general.push_back(closed_entry(
        "rotated_box",
        rotated_box_geometry(sigma, rotated_box_radius(p, n, false))));
    fill_ratios(&rep.general);
  }

  // Gaussian sizing.
  {
    const double omega = chi2_quantile(1.0 - p, n);
    rep.gaussian.push_back(
        closed_entry("ellipsoid", ellipsoid_geometry(sigma, omega)));
    const SmoothSet enclosing =
        SmoothSet::build(enclosing_gamma(sigma, edges, omega));
    rep.gaussian.push_back(
        smooth_entry("graph_enclosing", enclosing, samples, seed + 1));
    const SmoothSet direct = SmoothSet::build(
        gamma_from_covariance(sigma, edges, SizingRule::kNormalBest, p));
    rep.gaussian.push_back(
        smooth_entry("graph_gaussian", direct, samples, seed + 2));
    rep.gaussian.push_back(
        closed_entry("box", enclosing_box_geometry(enclosing)));
    rep.gaussian.push_back(closed_entry(
        "rotated_box",
        rotated_box_geometry(sigma, rotated_box_radius(p, n, true))));
    fill_ratios(&rep.gaussian);
  }
  return rep;
}

// --- Transshipment ------------------------------------------------------

namespace {

// Variable layout of the recourse model. The x block carries everything a
// standardized demand component multiplies: a pinned unit entry for the
// constant demand terms, then the shipping and inventory rule coefficients.
struct Layout {
  int n = 0;
  int num_arcs = 0;

  int x_one() const { return 0; }
  int x_ship(int a, int j) const { return 1 + a * n + j; }
  int x_inv(int i, int j) const { return 1 + num_arcs * n + i * n + j; }
  int nx() const { return 1 + num_arcs * n + n * n; }

  int y_order(int i) const { return i; }
  int y_ship(int a) const { return n + a; }
  int y_inv(int i) const { return n + num_arcs + i; }
  int y_total() const { return 2 * n + num_arcs; }
  int ny() const { return 2 * n + num_arcs + 1; }
};

std::vector<double> demand_stddev(const TransshipmentInstance& inst) {
  std::vector<double> sd(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    const double v = inst.sigma(i, i);
    if (!(v > 0.0)) {
      throw std::invalid_argument("transshipment: zero demand variance");
    }
    sd[i] = std::sqrt(v);
  }
  return sd;
}

}  // namespace

TransshipmentInstance make_transshipment_instance(int n, std::uint64_t seed) {
  if (n < 3) {
    throw std::invalid_argument("make_transshipment_instance: n >= 3");
  }
  TransshipmentInstance inst;
  inst.n = n;
  inst.seed = seed;
  for (int i = 0; i < n; ++i) inst.arcs.push_back({i, (i + 1) % n});
  for (int i = 0; i < n; ++i) inst.arcs.push_back({(i + 1) % n, i});
  for (int i = 0; i < n; ++i) inst.arcs.push_back({-1, i});
  for (int i = 0; i < n; ++i) inst.arcs.push_back({i, -1});

  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt > 64) {
      throw std::runtime_error("make_transshipment_instance: all draws degenerate");
    }
    Rng rng = attempt == 0 ? Rng(seed) : Rng(seed, attempt);
    const auto fill = [&](std::vector<double>& v, int count, double lo,
                          double hi) {
      v.resize(count);
      for (double& x : v) x = rng.uniform(lo, hi);
    };
    fill(inst.order_cost, n, 0.0, 1.0);
    fill(inst.holding_cost, n, 0.0, 1.0);
    fill(inst.backlog_cost, n, 0.0, 4.0);
    fill(inst.ship_cost, static_cast<int>(inst.arcs.size()), 0.0, 1.0);
    fill(inst.nominal_demand, n, 50.0, 150.0);
    inst.mu.resize(n);
    for (int i = 0; i < n; ++i) inst.mu[i] = rng.uniform(1.0, 2.0);
    Eigen::MatrixXd r(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) r(i, j) = rng.u01();
    }
    inst.sigma = r * r.transpose();
    // Degenerate draw: backlogging beats ordering at every retailer, so the
    // optimal policy orders nothing. Redraw from the next stream.
    bool backlog_always_wins = true;
    for (int i = 0; i < n; ++i) {
      if (inst.backlog_cost[i] >= inst.order_cost[i]) {
        backlog_always_wins = false;
        break;
      }
    }
    if (!backlog_always_wins) break;
  }
  return inst;
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& sigma) {
  const int n = static_cast<int>(sigma.rows());
  Eigen::VectorXd sd(n);
  for (int i = 0; i < n; ++i) {
    if (!(sigma(i, i) > 0.0)) {
      throw std::invalid_argument("correlation_matrix: zero diagonal");
    }
    sd[i] = std::sqrt(sigma(i, i));
  }
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = sigma(i, j) / (sd[i] * sd[j]);
  }
  return out;
}

RobustLP build_transshipment_aarc(const TransshipmentInstance& inst,
                                  const SmoothSet& set) {
  const int n = inst.n;
  if (set.dim() != n) {
    throw std::invalid_argument("build_transshipment_aarc: set dimension");
  }
  const Layout lay{n, static_cast<int>(inst.arcs.size())};
  const std::vector<double> sd = demand_stddev(inst);

  std::vector<std::vector<int>> arcs_in(n), arcs_out(n);
  for (int a = 0; a < lay.num_arcs; ++a) {
    if (inst.arcs[a].to >= 0) arcs_in[inst.arcs[a].to].push_back(a);
    if (inst.arcs[a].from >= 0) arcs_out[inst.arcs[a].from].push_back(a);
  }

  RobustLP model;
  model.n_delta = n;
  model.n_x = lay.nx();
  model.n_y = lay.ny();
  model.f.assign(model.n_x, 0.0);
  model.g.assign(model.n_y, 0.0);
  model.g[lay.y_total()] = 1.0;
  model.x_lower.assign(model.n_x, -kInf);
  model.x_upper.assign(model.n_x, kInf);
  model.x_lower[lay.x_one()] = model.x_upper[lay.x_one()] = 1.0;
  model.y_lower.assign(model.n_y, -kInf);
  model.y_upper.assign(model.n_y, kInf);
  for (int i = 0; i < n; ++i) model.y_lower[lay.y_order(i)] = 0.0;

  // Total-cost epigraph: ordering + inventory rules + shipping rules stay
  // below the reported cost for every demand in the set.
  {
    UncertainConstraint con;
    con.c_rows.resize(n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) con.c_rows[j].emplace_back(lay.x_inv(i, j), 1.0);
      for (int a = 0; a < lay.num_arcs; ++a) {
        con.c_rows[j].emplace_back(lay.x_ship(a, j), inst.ship_cost[a]);
      }
    }
    for (int i = 0; i < n; ++i) {
      con.d.emplace_back(lay.y_order(i), inst.order_cost[i]);
    }
    for (int a = 0; a < lay.num_arcs; ++a) {
      con.d.emplace_back(lay.y_ship(a), inst.ship_cost[a]);
    }
    for (int i = 0; i < n; ++i) con.d.emplace_back(lay.y_inv(i), 1.0);
    con.d.emplace_back(lay.y_total(), -1.0);
    con.rhs = 0.0;
    model.uncertain.push_back(std::move(con));
  }

  // Backlog and holding rows per retailer: the inventory-cost rule covers
  // cost * (demand - net stock) resp. its negation. The standardized demand
  // enters the retailer's own component through the pinned unit variable.
  for (int i = 0; i < n; ++i) {
    const double cb = inst.backlog_cost[i];
    UncertainConstraint back;
    back.c_rows.resize(n);
    for (int j = 0; j < n; ++j) {
      if (j == i) back.c_rows[j].emplace_back(lay.x_one(), cb * sd[i]);
      for (int a : arcs_in[i]) back.c_rows[j].emplace_back(lay.x_ship(a, j), -cb);
      for (int a : arcs_out[i]) back.c_rows[j].emplace_back(lay.x_ship(a, j), cb);
      back.c_rows[j].emplace_back(lay.x_inv(i, j), -1.0);
    }
    back.d.emplace_back(lay.y_order(i), -cb);
    for (int a : arcs_in[i]) back.d.emplace_back(lay.y_ship(a), -cb);
    for (int a : arcs_out[i]) back.d.emplace_back(lay.y_ship(a), cb);
    back.d.emplace_back(lay.y_inv(i), -1.0);
    back.rhs = -cb * inst.mu[i];
    model.uncertain.push_back(std::move(back));

    const double ch = inst.holding_cost[i];
    UncertainConstraint hold;
    hold.c_rows.resize(n);
    for (int j = 0; j < n; ++j) {
      if (j == i) hold.c_rows[j].emplace_back(lay.x_one(), -ch * sd[i]);
      for (int a : arcs_in[i]) hold.c_rows[j].emplace_back(lay.x_ship(a, j), ch);
      for (int a : arcs_out[i]) hold.c_rows[j].emplace_back(lay.x_ship(a, j), -ch);
      hold.c_rows[j].emplace_back(lay.x_inv(i, j), -1.0);
    }
    hold.d.emplace_back(lay.y_order(i), ch);
    for (int a : arcs_in[i]) hold.d.emplace_back(lay.y_ship(a), ch);
    for (int a : arcs_out[i]) hold.d.emplace_back(lay.y_ship(a), -ch);
    hold.d.emplace_back(lay.y_inv(i), -1.0);
    hold.rhs = ch * inst.mu[i];
    model.uncertain.push_back(std::move(hold));
  }

  // Shipping rules never go negative on the set.
  for (int a = 0; a < lay.num_arcs; ++a) {
    UncertainConstraint nn;
    nn.c_rows.resize(n);
    for (int j = 0; j < n; ++j) {
      nn.c_rows[j].emplace_back(lay.x_ship(a, j), -1.0);
    }
    nn.d.emplace_back(lay.y_ship(a), -1.0);
    nn.rhs = 0.0;
    model.uncertain.push_back(std::move(nn));
  }
  return model;
}

AffineRules extract_rules(const TransshipmentInstance& inst,
                          const std::vector<double>& x,
                          const std::vector<double>& y) {
  const int n = inst.n;
  const Layout lay{n, static_cast<int>(inst.arcs.size())};
  if (static_cast<int>(x.size()) != lay.nx() ||
      static_cast<int>(y.size()) != lay.ny()) {
    throw std::invalid_argument("extract_rules: solution size mismatch");
  }
  AffineRules rules;
  rules.order.resize(n);
  for (int i = 0; i < n; ++i) rules.order[i] = y[lay.y_order(i)];
  rules.ship_const.resize(lay.num_arcs);
  rules.ship_coeff.resize(lay.num_arcs, n);
  for (int a = 0; a < lay.num_arcs; ++a) {
    rules.ship_const[a] = y[lay.y_ship(a)];
    for (int j = 0; j < n; ++j) rules.ship_coeff(a, j) = x[lay.x_ship(a, j)];
  }
  rules.inv_const.resize(n);
  rules.inv_coeff.resize(n, n);
  for (int i = 0; i < n; ++i) {
    rules.inv_const[i] = y[lay.y_inv(i)];
    for (int j = 0; j < n; ++j) rules.inv_coeff(i, j) = x[lay.x_inv(i, j)];
  }
  rules.total_cost = y[lay.y_total()];
  return rules;
}

SimulatedCost evaluate_transshipment(const AffineRules& rules,
                                     const TransshipmentInstance& inst,
                                     int n_scenarios, std::uint64_t seed) {
  const int n = inst.n;
  const int num_arcs = static_cast<int>(inst.arcs.size());
  // psd_factor instead of a strict Cholesky so singular covariances work
  // (zero variance pins the demand at its mean).
  const Eigen::MatrixXd root = psd_factor(inst.sigma).root;
  std::vector<double> sd(n);
  for (int i = 0; i < n; ++i) sd[i] = std::sqrt(std::max(inst.sigma(i, i), 0.0));

  double order_part = 0.0;
  for (int i = 0; i < n; ++i) {
    order_part += inst.order_cost[i] * rules.order[i];
  }

  std::vector<std::vector<int>> arcs_in(n), arcs_out(n);
  for (int a = 0; a < num_arcs; ++a) {
    if (inst.arcs[a].to >= 0) arcs_in[inst.arcs[a].to].push_back(a);
    if (inst.arcs[a].from >= 0) arcs_out[inst.arcs[a].from].push_back(a);
  }

  Rng rng(seed);
  const int q = static_cast<int>(root.cols());
  Eigen::VectorXd z(q), demand(n), std_demand(n), ship(num_arcs);
  SimulatedCost out;
  out.worst = -kInf;
  for (int s = 0; s < n_scenarios; ++s) {
    for (int i = 0; i < q; ++i) z[i] = rng.gaussian();
    demand = inst.mu + root * z;
    demand = demand.cwiseMax(0.0);
    for (int i = 0; i < n; ++i) {
      std_demand[i] = sd[i] > 0.0 ? (demand[i] - inst.mu[i]) / sd[i] : 0.0;
    }
    ship = rules.ship_coeff * std_demand;
    double cost = order_part;
    for (int a = 0; a < num_arcs; ++a) {
      ship[a] += rules.ship_const[a];
      cost += inst.ship_cost[a] * ship[a];
    }
    for (int i = 0; i < n; ++i) {
      double mismatch = demand[i] - rules.order[i];
      for (int a : arcs_in[i]) mismatch -= ship[a];
      for (int a : arcs_out[i]) mismatch += ship[a];
      // Exact inventory charge: the smallest value both rows admit.
      cost += std::max(inst.backlog_cost[i] * mismatch,
                       -inst.holding_cost[i] * mismatch);
    }
    out.mean += cost;
    out.worst = std::max(out.worst, cost);
  }
  out.mean /= n_scenarios;
  return out;
}

// --- Shortest path ------------------------------------------------------

namespace {

PathResult dijkstra_path(const DirectedGraph& g,
                         const std::vector<double>& weights, int origin,
                         int destination) {
  const int n = g.num_nodes;
  if (origin < 0 || origin >= n || destination < 0 || destination >= n ||
      origin == destination) {
    throw std::invalid_argument("shortest path: bad endpoints");
  }
  for (double w : weights) {
    if (w < 0.0) {
      throw std::invalid_argument("shortest path: negative arc weight");
    }
  }
  std::vector<std::vector<int>> out_arcs(n);
  for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
    out_arcs[g.arcs[a].from].push_back(a);
  }
  std::vector<double> dist(n, kInf);
  std::vector<int> parent(n, -1);
  std::vector<char> settled(n, 0);
  dist[origin] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.push({0.0, origin});
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (settled[v]) continue;
    settled[v] = 1;
    if (v == destination) break;
    for (int a : out_arcs[v]) {
      const int u = g.arcs[a].to;
      if (d + weights[a] < dist[u]) {
        dist[u] = d + weights[a];
        parent[u] = a;
        heap.push({dist[u], u});
      }
    }
  }
  if (!settled[destination]) {
    throw std::runtime_error("shortest path: destination unreachable");
  }
  PathResult res;
  res.cost = dist[destination];
  for (int v = destination; v != origin;) {
    res.arcs.push_back(parent[v]);
    v = g.arcs[parent[v]].from;
  }
  std::reverse(res.arcs.begin(), res.arcs.end());
  return res;
}

void check_sp_instance(const ShortestPathInstance& inst) {
  if (static_cast<int>(inst.nominal_time.size()) != static_cast<int>(inst.graph.arcs.size())) {
    throw std::invalid_argument("shortest path: one nominal time per arc");
  }
  for (double f : inst.nominal_time) {
    if (!(f > 0.0)) {
      throw std::invalid_argument("shortest path: nominal times must be positive");
    }
  }
}

}  // namespace

PathResult robust_shortest_path(const ShortestPathInstance& inst,
                                const UncertaintyGraph& deviations) {
  check_sp_instance(inst);
  const int num_arcs = static_cast<int>(inst.graph.arcs.size());
  if (deviations.n != num_arcs) {
    throw std::invalid_argument("robust_shortest_path: deviation graph size");
  }
  const SmoothSet set = SmoothSet::build(deviations);
  std::vector<double> weights(num_arcs);
  for (int a = 0; a < num_arcs; ++a) {
    // Flows are nonnegative, so the worst profile is the componentwise
    // upper projection bound; the robust problem collapses to one
    // deterministic shortest path.
    weights[a] = set.bounds().upper[a] * inst.nominal_time[a];
  }
  return dijkstra_path(inst.graph, weights, inst.origin, inst.destination);
}

PathResult nominal_shortest_path(const ShortestPathInstance& inst) {
  check_sp_instance(inst);
  return dijkstra_path(inst.graph, inst.nominal_time, inst.origin,
                       inst.destination);
}

std::vector<FrontierPoint> nondominated(std::vector<FrontierPoint> points) {
  std::vector<FrontierPoint> keep;
  for (const FrontierPoint& p : points) {
    bool dominated = false;
    for (const FrontierPoint& q : points) {
      if (q.mean_ratio <= p.mean_ratio && q.max_ratio <= p.max_ratio &&
          (q.mean_ratio < p.mean_ratio || q.max_ratio < p.max_ratio)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) keep.push_back(p);
  }
  std::sort(keep.begin(), keep.end(),
            [](const FrontierPoint& a, const FrontierPoint& b) {
              return a.mean_ratio != b.mean_ratio
                         ? a.mean_ratio < b.mean_ratio
                         : a.max_ratio < b.max_ratio;
            });
  keep.erase(std::unique(keep.begin(), keep.end(),
                         [](const FrontierPoint& a, const FrontierPoint& b) {
                           return a.mean_ratio == b.mean_ratio &&
                                  a.max_ratio == b.max_ratio;
                         }),
             keep.end());
  return keep;
}

namespace {

struct PathScore {
  double mean = 0.0;
  double max = 0.0;
};

PathScore score_path(const std::vector<int>& path_arcs,
                     const Eigen::MatrixXd& rows) {
  PathScore sc;
  sc.max = -kInf;
  for (int s = 0; s < rows.rows(); ++s) {
    double t = 0.0;
    for (int a : path_arcs) t += rows(s, a);
    sc.mean += t;
    sc.max = std::max(sc.max, t);
  }
  sc.mean /= rows.rows();
  return sc;
}

}  // namespace

TradeoffTable shortest_path_study(const ShortestPathInstance& inst,
                                  const std::vector<double>& lambda_grid,
                                  const std::vector<double>& lambda_diff_grid,
                                  int splits, double train_frac,
                                  std::uint64_t seed) {
  check_sp_instance(inst);
  const int num_arcs = static_cast<int>(inst.graph.arcs.size());
  const int s_total = static_cast<int>(inst.scenarios.rows());
  if (inst.scenarios.cols() != num_arcs || s_total < 5) {
    throw std::invalid_argument("shortest_path_study: scenario matrix shape");
  }
  if (splits < 1 || !(train_frac > 0.0 && train_frac < 1.0)) {
    throw std::invalid_argument("shortest_path_study: bad split parameters");
  }

  const std::vector<std::pair<int, int>> full_edges = complete_edges(num_arcs);
  const std::vector<std::pair<int, int>> no_edges;

  struct Key {
    double lambda, lambda_diff;
  };
  std::vector<Key> smooth_keys, box_keys;
  for (double l : lambda_grid) {
    for (double ld : lambda_diff_grid) smooth_keys.push_back({l, ld});
    box_keys.push_back({l, 0.0});
  }

  std::vector<PathScore> acc_max(smooth_keys.size());
  std::vector<PathScore> acc_stdev(smooth_keys.size());
  std::vector<PathScore> acc_box_max(box_keys.size());
  std::vector<PathScore> acc_box_stdev(box_keys.size());

  for (int split = 0; split < splits; ++split) {
    Rng rng(seed, static_cast<std::uint64_t>(split));
    std::vector<int> perm(s_total);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = s_total - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    }
    const int n_train =
        std::clamp(static_cast<int>(std::lround(train_frac * s_total)), 2,
                   s_total - 1);
    Eigen::MatrixXd train(n_train, num_arcs);
    Eigen::MatrixXd test(s_total - n_train, num_arcs);
    for (int r = 0; r < n_train; ++r) train.row(r) = inst.scenarios.row(perm[r]);
    for (int r = n_train; r < s_total; ++r) {
      test.row(r - n_train) = inst.scenarios.row(perm[r]);
    }

    ShortestPathInstance split_inst = inst;
    split_inst.nominal_time.assign(num_arcs, 0.0);
    for (int a = 0; a < num_arcs; ++a) {
      split_inst.nominal_time[a] = train.col(a).mean();
      if (!(split_inst.nominal_time[a] > 0.0)) {
        throw std::invalid_argument("shortest_path_study: nonpositive mean time");
      }
    }

    const PathResult nominal = nominal_shortest_path(split_inst);
    const double base = score_path(nominal.arcs, test).mean;
    if (!(base > 0.0)) {
      throw std::runtime_error("shortest_path_study: degenerate normalizer");
    }

    const auto run = [&](const std::vector<std::pair<int, int>>& edges,
                         bool max_scheme, double lambda, double lambda_diff) {
      const UncertaintyGraph dev =
          max_scheme ? gamma_from_scenarios_max(train, edges, lambda,
                                                lambda_diff)
                     : gamma_from_scenarios_stdev(train, edges, lambda,
                                                  lambda_diff);
      const PathResult path = robust_shortest_path(split_inst, dev);
      return score_path(path.arcs, test);
    };

    for (size_t k = 0; k < smooth_keys.size(); ++k) {
      const PathScore a =
          run(full_edges, true, smooth_keys[k].lambda, smooth_keys[k].lambda_diff);
      acc_max[k].mean += a.mean / base;
      acc_max[k].max += a.max / base;
      const PathScore b = run(full_edges, false, smooth_keys[k].lambda,
                              smooth_keys[k].lambda_diff);
      acc_stdev[k].mean += b.mean / base;
      acc_stdev[k].max += b.max / base;
    }
    for (size_t k = 0; k < box_keys.size(); ++k) {
      const PathScore a = run(no_edges, true, box_keys[k].lambda, 0.0);
      acc_box_max[k].mean += a.mean / base;
      acc_box_max[k].max += a.max / base;
      const PathScore b = run(no_edges, false, box_keys[k].lambda, 0.0);
      acc_box_stdev[k].mean += b.mean / base;
      acc_box_stdev[k].max += b.max / base;
    }
  }

  const auto collect = [&](const std::vector<Key>& keys,
                           const std::vector<PathScore>& acc) {
    std::vector<FrontierPoint> pts;
    for (size_t k = 0; k < keys.size(); ++k) {
      pts.push_back({keys[k].lambda, keys[k].lambda_diff,
                     acc[k].mean / splits, acc[k].max / splits});
    }
    return nondominated(std::move(pts));
  };

  TradeoffTable table;
  table.max_based = collect(smooth_keys, acc_max);
  table.stdev_based = collect(smooth_keys, acc_stdev);
  table.box_max = collect(box_keys, acc_box_max);
  table.box_stdev = collect(box_keys, acc_box_stdev);
  return table;
}

// --- Cross-validation ---------------------------------------------------

CrossvalCurves crossval_membership_study(const Eigen::MatrixXd& data,
                                         int folds,
                                         const std::vector<double>& alpha_grid,
                                         const std::vector<double>& beta_grid,
                                         const std::vector<double>& rho_grid,
                                         const std::vector<double>& omega_grid,
                                         std::uint64_t seed) {
  const int s_total = static_cast<int>(data.rows());
  const int n = static_cast<int>(data.cols());
  if (folds < 2 || s_total < 2 * folds) {
    throw std::invalid_argument("crossval: need at least two rows per fold");
  }

  Rng rng(seed);
  std::vector<int> perm(s_total);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = s_total - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.uniform_int(0, i)]);
  }

  struct Fold {
    Eigen::MatrixXd train, validation;
    FoldStats stats;
  };
  std::vector<Fold> fold_data(folds);
  for (int f = 0; f < folds; ++f) {
    const int lo = static_cast<int>(static_cast<std::int64_t>(s_total) * f / folds);
    const int hi =
        static_cast<int>(static_cast<std::int64_t>(s_total) * (f + 1) / folds);
    Fold& fd = fold_data[f];
    fd.validation.resize(hi - lo, n);
    fd.train.resize(s_total - (hi - lo), n);
    int tr = 0;
    for (int r = 0; r < s_total; ++r) {
      if (r >= lo && r < hi) {
        fd.validation.row(r - lo) = data.row(perm[r]);
      } else {
        fd.train.row(tr++) = data.row(perm[r]);
      }
    }
    fd.stats = fold_stats(fd.train);
  }

  const std::vector<std::pair<int, int>> edges = complete_edges(n);
  const auto smooth_membership = [&](double alpha, double beta) {
    double total = 0.0;
    for (const Fold& fd : fold_data) {
      try {
        const SmoothSet set = SmoothSet::build(
            gamma_from_scenarios_range(fd.train, edges, alpha, beta));
        total += membership_fraction(set, fd.validation);
      } catch (const EmptySetError&) {
        // An empty set contains no validation point.
      }
    }
    return total / folds;
  };

  CrossvalCurves curves;
  curves.folds = folds;
  for (double alpha : alpha_grid) {
    for (double beta : beta_grid) {
      curves.direct.push_back({alpha, beta, smooth_membership(alpha, beta)});
    }
  }

  std::vector<FoldStats> all_stats;
  for (const Fold& fd : fold_data) all_stats.push_back(fd.stats);
  for (double rho : rho_grid) {
    for (double omega : omega_grid) {
      const SurrogateParams sp =
          surrogate_ellipsoid_params(all_stats, rho, omega);
      CrossvalCurves::SurrogatePoint pt;
      pt.rho = rho;
      pt.omega = omega;
      pt.alpha_bar = sp.alpha_bar;
      pt.beta_bar = sp.beta_bar;
      pt.smooth_membership = smooth_membership(sp.alpha_bar, sp.beta_bar);
      double ell = 0.0;
      for (const Fold& fd : fold_data) {
        Ellipsoid e;
        e.center = fd.stats.mean;
        e.sigma = corrected_covariance(fd.stats.covariance, rho);
        e.omega = omega;
        ell += membership_fraction(e, fd.validation);
      }
      pt.ellipsoid_membership = ell / folds;
      curves.surrogate.push_back(pt);
    }
  }
  return curves;
}

// --- Synthetic data and scaffolding -------------------------------------

Eigen::MatrixXd synthetic_travel_times(int num_arcs, int rows,
                                       std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> base(num_arcs), load(num_arcs);
  for (int a = 0; a < num_arcs; ++a) base[a] = rng.uniform(1.0, 10.0);
  for (int a = 0; a < num_arcs; ++a) load[a] = rng.uniform(0.5, 1.0);
  Eigen::MatrixXd d(rows, num_arcs);
  for (int s = 0; s < rows; ++s) {
    const double shock = 0.15 * rng.gaussian();
    for (int a = 0; a < num_arcs; ++a) {
      const double rel = 1.0 + shock * load[a] + 0.05 * rng.gaussian();
      d(s, a) = base[a] * std::max(rel, 0.05);
    }
  }
  return d;
}

Eigen::MatrixXd synthetic_low_rank(int n, int rows, int rank,
                                   std::uint64_t seed) {
  if (rank < 1 || rank > n) {
    throw std::invalid_argument("synthetic_low_rank: bad rank");
  }
  Rng rng(seed);
  Eigen::VectorXd level(n);
  for (int j = 0; j < n; ++j) level[j] = rng.uniform(0.0, 5.0);
  Eigen::MatrixXd f(rows, rank), g(rank, n);
  for (int s = 0; s < rows; ++s) {
    for (int r = 0; r < rank; ++r) f(s, r) = rng.gaussian();
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(rank));
  for (int r = 0; r < rank; ++r) {
    for (int j = 0; j < n; ++j) g(r, j) = scale * rng.gaussian();
  }
  Eigen::MatrixXd x = f * g;
  for (int s = 0; s < rows; ++s) {
    for (int j = 0; j < n; ++j) {
      x(s, j) += level[j] + 0.05 * rng.gaussian();
    }
  }
  return x;
}

RandomInstance random_robust_instance(int n_delta, int m_rows,
                                      std::uint64_t seed) {
  if (n_delta < 2 || m_rows < 1) {
    throw std::invalid_argument("random_robust_instance: bad sizes");
  }
  RandomInstance out;

  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt > 64) {
      throw std::runtime_error("random_robust_instance: no nonempty set found");
    }
    Rng rng(seed, attempt);
    UncertaintyGraph g;
    g.n = n_delta;
    g.nominal.resize(n_delta);
    g.node_radii.resize(n_delta);
    for (int i = 0; i < n_delta; ++i) g.nominal[i] = rng.uniform(-0.3, 0.3);
    for (int i = 0; i < n_delta; ++i) g.node_radii[i] = rng.uniform(0.5, 1.5);
    for (int i = 0; i < n_delta; ++i) {
      for (int j = i + 1; j < n_delta; ++j) {
        if (rng.u01() < 0.5) {
          g.edges.push_back({i, j, rng.uniform(0.5, 1.5)});
        }
      }
    }
    try {
      (void)SmoothSet::build(g);
    } catch (const EmptySetError&) {
      continue;
    }
    out.graph = g;

    const int n_x = n_delta;
    const int n_y = 2;
    RobustLP& model = out.model;
    model = RobustLP{};
    model.n_delta = n_delta;
    model.n_x = n_x;
    model.n_y = n_y;
    model.f.resize(n_x);
    for (double& v : model.f) v = rng.uniform(-1.0, 0.25);
    model.g.assign(n_y, 0.0);
    for (double& v : model.g) v = rng.uniform(-0.5, 0.5);
    model.x_lower.assign(n_x, 0.0);
    model.x_upper.assign(n_x, 10.0);
    model.y_lower.assign(n_y, 0.0);
    model.y_upper.assign(n_y, 10.0);

    const SmoothSet set = SmoothSet::build(g);
    const std::vector<double> x0(n_x, 5.0), y0(n_y, 5.0);
    for (int r = 0; r < m_rows; ++r) {
      UncertainConstraint con;
      con.c_rows.resize(n_delta);
      // Mix of certified and mixed sign rows so every reformulation path
      // gets exercised.
      const int mode = static_cast<int>(rng.uniform_int(0, 3));
      const int singleton = static_cast<int>(rng.uniform_int(0, n_delta - 1));
      for (int j = 0; j < n_delta; ++j) {
        const int entries = static_cast<int>(rng.uniform_int(1, 3));
        for (int e = 0; e < entries; ++e) {
          double coeff = rng.uniform(-1.0, 1.0);
          if (mode == 1) coeff = std::abs(coeff);
          if (mode == 2) coeff = -std::abs(coeff);
          if (mode == 3) {
            coeff = (j == singleton) ? std::abs(coeff) : -std::abs(coeff);
          }
          con.c_rows[j].emplace_back(
              static_cast<int>(rng.uniform_int(0, n_x - 1)), coeff);
        }
      }
      con.d.emplace_back(static_cast<int>(rng.uniform_int(0, n_y - 1)),
                         rng.uniform(-1.0, 1.0));
      // Calibrate the rhs so a reference point is strictly feasible.
      std::vector<double> s(n_delta, 0.0);
      for (int j = 0; j < n_delta; ++j) {
        for (const auto& [var, coeff] : con.c_rows[j]) s[j] += coeff * x0[var];
      }
      double rhs = worst_case_flow(set, s).value;
      for (const auto& [w, coeff] : con.d) rhs += coeff * y0[w];
      con.rhs = rhs + rng.uniform(0.05, 1.0);
      model.uncertain.push_back(std::move(con));
    }
    break;
  }
  return out;
}

int sign_test_threshold(int trials, double confidence) {
  if (trials < 1 || !(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("sign_test_threshold: bad arguments");
  }
  const double alpha = 1.0 - confidence;
  // One-sided binomial tail at fair-coin odds, exact via log factorials.
  std::vector<double> logc(trials + 1);
  for (int k = 0; k <= trials; ++k) {
    logc[k] = std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) -
              std::lgamma(trials - k + 1.0);
  }
  const double log_half = std::log(0.5) * trials;
  double tail = 0.0;
  for (int w = trials; w >= 0; --w) {
    tail += std::exp(logc[w] + log_half);
    if (tail > alpha) return w + 1;
  }
  return 0;
}

}  // namespace smoothro
