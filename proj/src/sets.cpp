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

#include "smoothro/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "smoothro/lp.hpp"
#include "smoothro/numerics.hpp"
#include "smoothro/rng.hpp"

namespace smoothro {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void UncertaintyGraph::validate_and_canonicalize() {
  if (n < 1) throw std::invalid_argument("graph: n must be positive");
  if (static_cast<int>(nominal.size()) != n ||
      static_cast<int>(node_radii.size()) != n) {
    throw std::invalid_argument("graph: vector sizes must equal n");
  }
  for (double r : node_radii) {
    if (!(r >= 0.0)) throw std::invalid_argument("graph: negative radius");
  }
  for (Edge& e : edges) {
    if (e.i == e.j) throw std::invalid_argument("graph: self loop");
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= n) {
      throw std::invalid_argument("graph: edge index out of range");
    }
    if (!(e.gamma >= 0.0)) {
      throw std::invalid_argument("graph: negative edge weight");
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::make_pair(a.i, a.j) < std::make_pair(b.i, b.j);
  });
  for (size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].i == edges[k - 1].i && edges[k].j == edges[k - 1].j) {
      throw std::invalid_argument("graph: duplicate edge");
    }
  }
}

EmptySetError::EmptySetError(int vertex_index)
    : std::runtime_error("smooth set is empty; bounds cross at vertex " +
                         std::to_string(vertex_index)),
      vertex(vertex_index) {}

Eigen::MatrixXd metric_closure(const UncertaintyGraph& g) {
  const int n = g.n;
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, kInf);
  for (int i = 0; i < n; ++i) d(i, i) = 0.0;
  for (const auto& e : g.edges) {
    d(e.i, e.j) = std::min(d(e.i, e.j), e.gamma);
    d(e.j, e.i) = d(e.i, e.j);
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (d(i, k) == kInf) continue;
      for (int j = 0; j < n; ++j) {
        const double via = d(i, k) + d(k, j);
        if (via < d(i, j)) d(i, j) = via;
      }
    }
  }
  return d;
}

ProjectionBounds projection_bounds(const UncertaintyGraph& g,
                                   const Eigen::MatrixXd& dist) {
  const int n = g.n;
  ProjectionBounds pb;
  pb.lower.assign(n, -kInf);
  pb.upper.assign(n, kInf);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (dist(k, j) == kInf) continue;
      pb.lower[j] =
          std::max(pb.lower[j], g.nominal[k] - g.node_radii[k] - dist(k, j));
      pb.upper[j] =
          std::min(pb.upper[j], g.nominal[k] + g.node_radii[k] + dist(k, j));
    }
  }
  return pb;
}

SmoothSet SmoothSet::build(UncertaintyGraph g) {
  g.validate_and_canonicalize();
  SmoothSet s;
  s.graph_ = std::move(g);
  s.dist_ = metric_closure(s.graph_);
  s.bounds_ = projection_bounds(s.graph_, s.dist_);
  int tightest = -1;
  double min_gap = kInf;
  for (int j = 0; j < s.graph_.n; ++j) {
    const double gap = s.bounds_.upper[j] - s.bounds_.lower[j];
    if (gap < -1e-12) throw EmptySetError(j);
    if (gap < min_gap) {
      min_gap = gap;
      tightest = j;
    }
  }
  if (min_gap <= 1e-9) {
    // Degenerate bounds: certify with one feasibility solve over the rows.
    lp::LinearProgram prob;
    for (int j = 0; j < s.graph_.n; ++j) prob.add_var(0.0, -lp::kInf);
    for (const ConstraintRow& row : s.constraint_rows()) {
      prob.add_row(lp::Relation::kLessEqual, row.b, row.a);
    }
    if (lp::solve(prob).status == lp::SolveStatus::kInfeasible) {
      throw EmptySetError(tightest);
    }
  }
  return s;
}

bool SmoothSet::contains(const std::vector<double>& delta, double tol) const {
  if (static_cast<int>(delta.size()) != graph_.n) {
    throw std::invalid_argument("contains: dimension mismatch");
  }
  for (int i = 0; i < graph_.n; ++i) {
    if (std::abs(delta[i] - graph_.nominal[i]) > graph_.node_radii[i] + tol) {
      return false;
    }
  }
  for (const auto& e : graph_.edges) {
    if (std::abs(delta[e.i] - delta[e.j]) > e.gamma + tol) return false;
  }
  return true;
}

std::vector<ConstraintRow> SmoothSet::constraint_rows() const {
  std::vector<ConstraintRow> rows;
  rows.reserve(2 * (graph_.n + graph_.edges.size()));
  for (int i = 0; i < graph_.n; ++i) {
    rows.push_back({{{i, 1.0}}, graph_.nominal[i] + graph_.node_radii[i]});
    rows.push_back({{{i, -1.0}}, graph_.node_radii[i] - graph_.nominal[i]});
  }
  for (const auto& e : graph_.edges) {
    rows.push_back({{{e.i, 1.0}, {e.j, -1.0}}, e.gamma});
    rows.push_back({{{e.i, -1.0}, {e.j, 1.0}}, e.gamma});
  }
  return rows;
}

InscribedRadius inscribed_radius(const SmoothSet& set,
                                 const Eigen::MatrixXd& sigma) {
  const UncertaintyGraph& g = set.graph();
  if (sigma.rows() != g.n) {
    throw std::invalid_argument("inscribed_radius: dimension mismatch");
  }
  InscribedRadius out;
  out.value = kInf;
  for (int i = 0; i < g.n; ++i) {
    const double norm = std::sqrt(quad_form_diff(sigma, i, i));
    if (norm > 0.0) out.value = std::min(out.value, g.node_radii[i] / norm);
    if (std::abs(g.nominal[i]) > 1e-12) out.centered = false;
  }
  for (const auto& e : g.edges) {
    const double norm = std::sqrt(quad_form_diff(sigma, e.i, e.j));
    if (norm > 0.0) out.value = std::min(out.value, e.gamma / norm);
  }
  return out;
}

SetGeometry ellipsoid_geometry(const Eigen::MatrixXd& sigma, double omega) {
  if (!(omega > 0.0)) {
    throw std::invalid_argument("ellipsoid_geometry: omega must be positive");
  }
  const int n = static_cast<int>(sigma.rows());
  const Eigen::MatrixXd l = cholesky(sigma);  // throws if not PD
  double sqrt_det = 1.0;
  for (int i = 0; i < n; ++i) sqrt_det *= l(i, i);
  SetGeometry out;
  out.volume = std::pow(std::numbers::pi, 0.5 * n) /
               std::tgamma(0.5 * n + 1.0) * std::pow(omega, 0.5 * n) *
               sqrt_det;
  out.diameter = 2.0 * std::sqrt(omega * max_eigenvalue(sigma));
  return out;
}

SetGeometry rotated_box_geometry(const Eigen::MatrixXd& sigma, double radius) {
  const int n = static_cast<int>(sigma.rows());
  if (n > 20) {
    throw std::invalid_argument("rotated_box_geometry: supports n <= 20");
  }
  if (!(radius > 0.0)) {
    throw std::invalid_argument("rotated_box_geometry: radius not positive");
  }
  const Eigen::MatrixXd l = cholesky(sigma);
  double sqrt_det = 1.0;
  for (int i = 0; i < n; ++i) sqrt_det *= l(i, i);
  SetGeometry out;
  out.volume = std::pow(2.0 * radius, n) * sqrt_det;
  // Diameter between corners u and -u: 2 r sqrt(u' Sigma u); u_0 fixed by
  // symmetry.
  double best = 0.0;
  Eigen::VectorXd u(n);
  const std::uint64_t patterns = 1ULL << (n - 1);
  for (std::uint64_t bits = 0; bits < patterns; ++bits) {
    u[0] = 1.0;
    for (int i = 1; i < n; ++i) u[i] = (bits >> (i - 1)) & 1 ? -1.0 : 1.0;
    best = std::max(best, u.dot(sigma * u));
  }
  out.diameter = 2.0 * radius * std::sqrt(best);
  return out;
}

SetGeometry enclosing_box_geometry(const SmoothSet& set) {
  SetGeometry out;
  out.volume = 1.0;
  double d2 = 0.0;
  for (int j = 0; j < set.dim(); ++j) {
    const double w = set.upper(j) - set.lower(j);
    out.volume *= w;
    d2 += w * w;
  }
  out.diameter = std::sqrt(d2);
  return out;
}

McVolume mc_volume(const SmoothSet& set, std::int64_t samples,
                   std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("mc_volume: samples <= 0");
  const int n = set.dim();
  double box_volume = 1.0;
  for (int j = 0; j < n; ++j) box_volume *= set.upper(j) - set.lower(j);

  constexpr std::int64_t kChunk = 1 << 20;
  std::int64_t hits = 0;
  std::vector<double> delta(n);
  for (std::int64_t start = 0, chunk = 0; start < samples;
       start += kChunk, ++chunk) {
    Rng rng(seed, static_cast<std::uint64_t>(chunk));
    const std::int64_t stop = std::min(samples, start + kChunk);
    for (std::int64_t s = start; s < stop; ++s) {
      for (int j = 0; j < n; ++j) {
        delta[j] = rng.uniform(set.lower(j), set.upper(j));
      }
      if (set.contains(delta, 0.0)) ++hits;
    }
  }
  McVolume out;
  out.samples = samples;
  out.hit_fraction = static_cast<double>(hits) / static_cast<double>(samples);
  out.volume = box_volume * out.hit_fraction;
  out.std_error = box_volume * std::sqrt(out.hit_fraction *
                                         (1.0 - out.hit_fraction) /
                                         static_cast<double>(samples));
  return out;
}

double polytope_diameter(const SmoothSet& set) {
  const int n = set.dim();
  if (n > 8) throw std::invalid_argument("polytope_diameter: supports n <= 8");
  const std::vector<ConstraintRow> rows = set.constraint_rows();
  const int m = static_cast<int>(rows.size());
  std::vector<Eigen::VectorXd> normals(m, Eigen::VectorXd::Zero(n));
  Eigen::VectorXd offsets(m);
  for (int r = 0; r < m; ++r) {
    for (const auto& [j, v] : rows[r].a) normals[r][j] = v;
    offsets[r] = rows[r].b;
  }

  double scale = 1e-7;
  for (int j = 0; j < n; ++j) {
    scale = std::max(scale, std::abs(set.upper(j)));
    scale = std::max(scale, std::abs(set.lower(j)));
  }

  std::vector<Eigen::VectorXd> vertices;
  std::vector<int> pick(n);
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b(n);
  std::vector<double> point(n);

  // Enumerate row n-subsets in lexicographic order.
  for (int i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    for (int i = 0; i < n; ++i) {
      a.row(i) = normals[pick[i]].transpose();
      b[i] = offsets[pick[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.isInvertible()) {
      const Eigen::VectorXd x = lu.solve(b);
      for (int j = 0; j < n; ++j) point[j] = x[j];
      if (set.contains(point, 1e-7 * scale)) {
        bool fresh = true;
        for (const auto& v : vertices) {
          if ((v - x).lpNorm<Eigen::Infinity>() <= 1e-7 * scale) {
            fresh = false;
            break;
          }
        }
        if (fresh) vertices.push_back(x);
      }
    }
    // Advance the combination.
    int i = n - 1;
    while (i >= 0 && pick[i] == m - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int k = i + 1; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }

  double best = 0.0;
  for (size_t p = 0; p < vertices.size(); ++p) {
    for (size_t q = p + 1; q < vertices.size(); ++q) {
      best = std::max(best, (vertices[p] - vertices[q]).norm());
    }
  }
  return best;
}

std::vector<std::vector<double>> sample_points(const SmoothSet& set, int count,
                                               std::uint64_t seed) {
  const int n = set.dim();
  const ProjectionBounds& pb = set.bounds();
  std::vector<double> mid(n);
  for (int i = 0; i < n; ++i) mid[i] = 0.5 * (pb.lower[i] + pb.upper[i]);

  std::vector<std::vector<double>> out;
  out.reserve(count);
  if (count >= 1) out.push_back(pb.lower);
  if (count >= 2) out.push_back(pb.upper);
  if (count >= 3) out.push_back(mid);

  Rng rng(seed);
  std::vector<double> z(n), walk(n);
  while (static_cast<int>(out.size()) < count) {
    bool found = false;
    for (int attempt = 0; attempt < 32 && !found; ++attempt) {
      for (int i = 0; i < n; ++i) {
        z[i] = rng.uniform(pb.lower[i], pb.upper[i]);
      }
      found = set.contains(z, 0.0);
    }
    if (!found) {
      // Walk from the midpoint (a member: both projection bounds are, and
      // the set is convex) toward the rejected box point; the largest
      // feasible step stays a member.
      double t_lo = 0.0, t_hi = 1.0;
      for (int it = 0; it < 50; ++it) {
        const double t = 0.5 * (t_lo + t_hi);
        for (int i = 0; i < n; ++i) walk[i] = mid[i] + t * (z[i] - mid[i]);
        (set.contains(walk, 0.0) ? t_lo : t_hi) = t;
      }
      for (int i = 0; i < n; ++i) z[i] = mid[i] + t_lo * (z[i] - mid[i]);
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace smoothro
