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

#ifndef SMOOTHRO_SETS_HPP_
#define SMOOTHRO_SETS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace smoothro {

/// Weighted graph describing a smooth uncertainty set: per-vertex deviation
/// radii |delta_i - nominal_i| <= node_radii[i] and per-edge difference
/// bounds |delta_i - delta_j| <= gamma.
struct UncertaintyGraph {
  struct Edge {
    int i = 0;
    int j = 0;  // i < j after validate()
    double gamma = 0.0;
  };

  int n = 0;
  std::vector<double> nominal;
  std::vector<double> node_radii;
  std::vector<Edge> edges;

  /// Checks sizes, index ranges, nonnegative weights, absence of self loops
  /// and duplicate edges; canonicalizes edges to i < j, sorted. Throws
  /// std::invalid_argument on violation.
  void validate_and_canonicalize();
};

struct EmptySetError : std::runtime_error {
  explicit EmptySetError(int vertex_index);
  int vertex;
};

/// All-pairs shortest path distances under the edge weights (Floyd-Warshall).
/// Disconnected pairs carry +infinity; diagonal is zero.
Eigen::MatrixXd metric_closure(const UncertaintyGraph& g);

/// Componentwise extremes of the set: lower[j] = max_k { nominal_k -
/// node_radii_k - dist(k,j) } and upper[j] = min_k { nominal_k +
/// node_radii_k + dist(k,j) }. Both vectors are themselves members of a
/// nonempty set, and the set is empty iff lower[j] > upper[j] somewhere.
struct ProjectionBounds {
  std::vector<double> lower;
  std::vector<double> upper;
};
ProjectionBounds projection_bounds(const UncertaintyGraph& g,
                                   const Eigen::MatrixXd& dist);

/// One constraint row a'delta <= b of the set polytope.
struct ConstraintRow {
  std::vector<std::pair<int, double>> a;
  double b = 0.0;
};

class SmoothSet {
 public:
  /// Validates, computes the metric closure and projection bounds, and
  /// certifies nonemptiness. Throws EmptySetError when the bounds cross;
  /// near-degenerate bounds (gap below 1e-9) are additionally certified by
  /// one LP feasibility solve.
  static SmoothSet build(UncertaintyGraph g);

  int dim() const { return graph_.n; }
  const UncertaintyGraph& graph() const { return graph_; }
  const Eigen::MatrixXd& distances() const { return dist_; }
  double distance(int i, int j) const { return dist_(i, j); }
  double lower(int j) const { return bounds_.lower[j]; }
  double upper(int j) const { return bounds_.upper[j]; }
  const ProjectionBounds& bounds() const { return bounds_; }

  /// Membership against the original vertex and edge constraints only
  /// (the closure adds nothing; see projection_bounds).
  bool contains(const std::vector<double>& delta, double tol = 1e-9) const;

  /// Rows in canonical order: per vertex i the pair (+e_i, nominal+radius)
  /// then (-e_i, radius-nominal); per edge {i,j}, i<j lexicographic, the
  /// pair (e_i - e_j, gamma) then (e_j - e_i, gamma).
  std::vector<ConstraintRow> constraint_rows() const;

 private:
  UncertaintyGraph graph_;
  Eigen::MatrixXd dist_;
  ProjectionBounds bounds_;
};

/// Largest r such that the ellipsoid {delta' Sigma^{-1} delta <= r^2} fits
/// inside the set: min over rows of gamma / |Sigma^{1/2} a|. `centered` is
/// false when the nominal point is not the origin, in which case the
/// guarantee attached to this radius does not apply as stated.
struct InscribedRadius {
  double value = 0.0;
  bool centered = true;
};
InscribedRadius inscribed_radius(const SmoothSet& set,
                                 const Eigen::MatrixXd& sigma);

struct SetGeometry {
  double volume = 0.0;
  double diameter = 0.0;
};

/// Closed forms for the ellipsoid {delta : delta' Sigma^{-1} delta <= omega}:
/// volume pi^{n/2}/Gamma(n/2+1) * omega^{n/2} * sqrt(det Sigma), diameter
/// 2 sqrt(omega * lambda_max). Sigma must be positive definite.
SetGeometry ellipsoid_geometry(const Eigen::MatrixXd& sigma, double omega);

/// Closed forms for the rotated box {Sigma^{1/2} u : |u|_inf <= radius}:
/// volume (2 radius)^n sqrt(det Sigma); the diameter enumerates the
/// 2^{n-1} sign patterns, so n <= 20.
SetGeometry rotated_box_geometry(const Eigen::MatrixXd& sigma, double radius);

/// Axis-aligned bounding box of the set, from the projection bounds.
SetGeometry enclosing_box_geometry(const SmoothSet& set);

/// Monte Carlo volume by rejection from the projection-bounds box.
/// Deterministic for a fixed seed; samples are drawn in fixed-size chunks
/// with seed-derived substreams, so the result does not depend on how the
/// chunks are scheduled.
struct McVolume {
  double volume = 0.0;
  double std_error = 0.0;  // binomial
  double hit_fraction = 0.0;
  std::int64_t samples = 0;
};
McVolume mc_volume(const SmoothSet& set, std::int64_t samples,
                   std::uint64_t seed);

/// Exact diameter by vertex enumeration over all n-subsets of the
/// constraint rows; n <= 8.
double polytope_diameter(const SmoothSet& set);

/// Deterministic member samples for feasibility and worst-case checks. The
/// first three points are the lower projection bound, the upper projection
/// bound, and their midpoint; the rest are rejection samples from the
/// bounding box, each falling back to a bisection walk from the midpoint
/// toward the box sample when rejection keeps missing. Not uniform; use
/// mc_volume for volume work.
std::vector<std::vector<double>> sample_points(const SmoothSet& set, int count,
                                               std::uint64_t seed);

}  // namespace smoothro

#endif  // SMOOTHRO_SETS_HPP_
