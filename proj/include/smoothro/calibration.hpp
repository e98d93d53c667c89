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

#ifndef SMOOTHRO_CALIBRATION_HPP_
#define SMOOTHRO_CALIBRATION_HPP_

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "smoothro/sets.hpp"

namespace smoothro {

/// Probabilistic sizing rules for covariance-scaled radii. Each rule picks
/// one multiplier t; the radii are then t * sqrt(var(delta_i - delta_j))
/// (resp. t * stddev(delta_i) on the diagonal).
enum class SizingRule {
  kChebyshevJoint,   // distribution-free, all bounds hold jointly: sqrt(n/p)
  kSingleViolation,  // distribution-free, expected number of violated
                     // constraints stays below p: sqrt(m/p - 1)
  kNormalChi2,       // Gaussian, joint via a chi-square ball
  kNormalUnion,      // Gaussian, union bound over all 2(|E|+n) facets
  kNormalBest,       // min of the two Gaussian multipliers
};

struct SizingReport {
  double multiplier = 0.0;
  int dof = 0;               // chi-square degrees of freedom actually used
  bool unit_diagonal = true; // false when Sigma is not standardized
};

/// All n*(n-1)/2 undirected pairs, i < j lexicographic.
std::vector<std::pair<int, int>> complete_edges(int n);

/// The bare multiplier. `dof` defaults to n and drops to the effective rank
/// for singular covariances; `m_constraints` only matters for
/// kSingleViolation; `num_edges` only for kNormalUnion / kNormalBest.
double sizing_multiplier(SizingRule rule, double p, int n, int num_edges,
                         int m_constraints = 1, int dof = 0);

/// Radii from a covariance matrix: gamma_ii = t * sqrt(Sigma_ii), gamma_ij =
/// t * sqrt(Sigma_ii + Sigma_jj - 2 Sigma_ij). Gaussian rules switch the
/// chi-square degrees of freedom to the effective rank when Sigma is
/// singular. Nominal point is zero; assign afterwards if needed.
UncertaintyGraph gamma_from_covariance(const Eigen::MatrixXd& sigma,
                                       const std::vector<std::pair<int, int>>& edges,
                                       SizingRule rule, double p,
                                       int m_constraints = 1,
                                       SizingReport* report = nullptr);

/// Tightest graph set containing the ellipsoid delta' Sigma^{-1} delta <=
/// omega: every radius is sqrt(omega) times the corresponding standard
/// deviation.
UncertaintyGraph enclosing_gamma(const Eigen::MatrixXd& sigma,
                                 const std::vector<std::pair<int, int>>& edges,
                                 double omega);

/// Half-width r of the rotated box { |(R^-1 delta)_i| <= r } calibrated to
/// coverage 1 - p. Distribution-free: sqrt(n/p). Gaussian: the smaller of
/// the chi-square ball radius and the per-coordinate union bound.
double rotated_box_radius(double p, int n, bool gaussian);

/// Chebyshev bound on the violation probability of a set whose inscribed
/// covariance-scaled ball has radius r: 1 / (1 + r^2).
double violation_bound(double inscribed_radius);

// --- Scenario-driven radii. `scenarios` is S x n, one draw per row. ---

/// Columns are first normalized by their means (nominal becomes all-ones).
/// Diagonal radii scale the worst observed deviation above 1; off-diagonal
/// radii interpolate between the mean and the max of |column differences|.
UncertaintyGraph gamma_from_scenarios_max(const Eigen::MatrixXd& scenarios,
                                          const std::vector<std::pair<int, int>>& edges,
                                          double lambda, double lambda_diff);

/// Same normalization, radii proportional to standard deviations of the
/// components resp. their differences.
UncertaintyGraph gamma_from_scenarios_stdev(const Eigen::MatrixXd& scenarios,
                                            const std::vector<std::pair<int, int>>& edges,
                                            double lambda, double lambda_diff);

/// Raw-data variant used for cross-validation: nominal is the midrange,
/// base widths are the half-range (floored at `node_floor`) and the largest
/// observed |difference| (floored at `edge_floor`), scaled by alpha / beta.
UncertaintyGraph gamma_from_scenarios_range(const Eigen::MatrixXd& scenarios,
                                            const std::vector<std::pair<int, int>>& edges,
                                            double alpha, double beta,
                                            double node_floor = 1.0,
                                            double edge_floor = 0.01);

/// Per-fold summary reused by the surrogate-parameter search.
struct FoldStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd midrange;
  Eigen::VectorXd w_node;     // max(half-range, node_floor)
  Eigen::MatrixXd w_edge;     // max(max |diff|, edge_floor), diag zero
  Eigen::MatrixXd covariance; // unbiased sample covariance
};

FoldStats fold_stats(const Eigen::MatrixXd& scenarios, double node_floor = 1.0,
                     double edge_floor = 0.01);

/// (1 - rho) Sigma + rho D with D = diag(max(1, Sigma_ii)); the blend keeps
/// near-singular sample covariances invertible. rho must lie strictly
/// between 0 and 1 (throws std::invalid_argument otherwise).
Eigen::MatrixXd corrected_covariance(const Eigen::MatrixXd& sigma, double rho);

/// Scale factors that make the range-calibrated set comparable to the
/// ellipsoid (fold mean, corrected Sigma, omega): per fold, the center
/// offset plus omega times the inverse-square-root extent in the facet
/// direction, normalized by the fold's base widths and averaged over folds
/// and components. Both outputs are linear in omega.
struct SurrogateParams {
  double alpha_bar = 0.0;
  double beta_bar = 0.0;
};

SurrogateParams surrogate_ellipsoid_params(const std::vector<FoldStats>& folds,
                                           double rho, double omega);

struct Ellipsoid {
  Eigen::VectorXd center;
  Eigen::MatrixXd sigma;  // shape matrix, (x-c)' Sigma^{-1} (x-c) <= omega
  double omega = 1.0;
};

/// Fraction of rows inside the set / the ellipsoid.
double membership_fraction(const SmoothSet& set, const Eigen::MatrixXd& rows,
                           double tol = 1e-9);
double membership_fraction(const Ellipsoid& ell, const Eigen::MatrixXd& rows,
                           double tol = 1e-9);

}  // namespace smoothro

#endif  // SMOOTHRO_CALIBRATION_HPP_
