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

#include "smoothro/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "smoothro/numerics.hpp"

namespace smoothro {

namespace {

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("calibration: p must lie in (0, 1)");
  }
}

UncertaintyGraph graph_from_radii(
    int n, const std::vector<std::pair<int, int>>& edges,
    const std::vector<double>& nominal,
    const std::function<double(int, int)>& radius) {
  UncertaintyGraph g;
  g.n = n;
  g.nominal = nominal;
  g.node_radii.resize(n);
  for (int i = 0; i < n; ++i) g.node_radii[i] = radius(i, i);
  g.edges.reserve(edges.size());
  for (const auto& [i, j] : edges) {
    g.edges.push_back({i, j, radius(i, j)});
  }
  g.validate_and_canonicalize();
  return g;
}

}  // namespace

std::vector<std::pair<int, int>> complete_edges(int n) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return edges;
}

double sizing_multiplier(SizingRule rule, double p, int n, int num_edges,
                         int m_constraints, int dof) {
  check_probability(p);
  if (n <= 0) throw std::invalid_argument("calibration: n must be positive");
  if (dof <= 0) dof = n;
  switch (rule) {
    case SizingRule::kChebyshevJoint:
      return std::sqrt(n / p);
    case SizingRule::kSingleViolation:
      if (m_constraints <= 0) {
        throw std::invalid_argument("calibration: m must be positive");
      }
      return std::sqrt(m_constraints / p - 1.0);
    case SizingRule::kNormalChi2:
      return std::sqrt(chi2_quantile(1.0 - p, dof));
    case SizingRule::kNormalUnion: {
      const double alpha = p / (num_edges + n);
      return normal_quantile(1.0 - alpha / 2.0);
    }
    case SizingRule::kNormalBest:
      return std::min(
          sizing_multiplier(SizingRule::kNormalChi2, p, n, num_edges,
                            m_constraints, dof),
          sizing_multiplier(SizingRule::kNormalUnion, p, n, num_edges,
                            m_constraints, dof));
  }
  throw std::logic_error("calibration: unknown sizing rule");
}

UncertaintyGraph gamma_from_covariance(
    const Eigen::MatrixXd& sigma, const std::vector<std::pair<int, int>>& edges,
    SizingRule rule, double p, int m_constraints, SizingReport* report) {
  const int n = static_cast<int>(sigma.rows());
  if (sigma.cols() != n || n == 0) {
    throw std::invalid_argument("gamma_from_covariance: square matrix required");
  }
  check_probability(p);

  int dof = n;
  if (rule == SizingRule::kNormalChi2 || rule == SizingRule::kNormalBest) {
    // The chi-square ball lives in the range of Sigma; a rank-deficient
    // covariance concentrates the distribution there and the degrees of
    // freedom drop with it. psd_factor also rejects indefinite input.
    dof = psd_factor(sigma).rank;
    if (dof == 0) {
      throw std::invalid_argument("gamma_from_covariance: zero covariance");
    }
  }
  const double t =
      sizing_multiplier(rule, p, n, static_cast<int>(edges.size()),
                        m_constraints, dof);

  bool unit_diag = true;
  for (int i = 0; i < n; ++i) {
    if (std::abs(sigma(i, i) - 1.0) > 1e-9) unit_diag = false;
  }
  if (report != nullptr) {
    report->multiplier = t;
    report->dof = dof;
    report->unit_diagonal = unit_diag;
  }

  return graph_from_radii(n, edges, std::vector<double>(n, 0.0),
                          [&](int i, int j) {
                            return t * std::sqrt(quad_form_diff(sigma, i, j));
                          });
}

UncertaintyGraph enclosing_gamma(const Eigen::MatrixXd& sigma,
                                 const std::vector<std::pair<int, int>>& edges,
                                 double omega) {
  const int n = static_cast<int>(sigma.rows());
  if (sigma.cols() != n || n == 0) {
    throw std::invalid_argument("enclosing_gamma: square matrix required");
  }
  if (!(omega > 0.0)) {
    throw std::invalid_argument("enclosing_gamma: omega must be positive");
  }
  const double t = std::sqrt(omega);
  return graph_from_radii(n, edges, std::vector<double>(n, 0.0),
                          [&](int i, int j) {
                            return t * std::sqrt(quad_form_diff(sigma, i, j));
                          });
}

double rotated_box_radius(double p, int n, bool gaussian) {
  check_probability(p);
  if (n <= 0) throw std::invalid_argument("rotated_box_radius: n must be positive");
  if (!gaussian) return std::sqrt(n / p);
  const double ball = std::sqrt(chi2_quantile(1.0 - p, n));
  const double facet = normal_quantile(1.0 - p / (2.0 * n));
  return std::min(ball, facet);
}

double violation_bound(double inscribed_radius) {
  if (inscribed_radius < 0.0) {
    throw std::invalid_argument("violation_bound: radius must be nonnegative");
  }
  return 1.0 / (1.0 + inscribed_radius * inscribed_radius);
}

namespace {

// Columnwise mean normalization; throws on near-zero means, where the
// relative radii below lose meaning.
Eigen::MatrixXd normalize_by_means(const Eigen::MatrixXd& scenarios) {
  const Eigen::VectorXd means = scenarios.colwise().mean();
  for (int a = 0; a < means.size(); ++a) {
    if (std::abs(means[a]) < 1e-12) {
      throw std::invalid_argument(
          "scenario calibration: column mean is zero, cannot normalize");
    }
  }
  return scenarios.array().rowwise() / means.transpose().array();
}

void check_scenarios(const Eigen::MatrixXd& scenarios, int min_rows) {
  if (scenarios.rows() < min_rows || scenarios.cols() == 0) {
    throw std::invalid_argument("scenario calibration: too few scenarios");
  }
}

}  // namespace

UncertaintyGraph gamma_from_scenarios_max(
    const Eigen::MatrixXd& scenarios,
    const std::vector<std::pair<int, int>>& edges, double lambda,
    double lambda_diff) {
  check_scenarios(scenarios, 1);
  const Eigen::MatrixXd d = normalize_by_means(scenarios);
  const int n = static_cast<int>(d.cols());
  const int s = static_cast<int>(d.rows());

  return graph_from_radii(
      n, edges, std::vector<double>(n, 1.0), [&](int i, int j) {
        if (i == j) {
          return lambda * std::max(0.0, d.col(i).maxCoeff() - 1.0);
        }
        const Eigen::ArrayXd diff = (d.col(i) - d.col(j)).array().abs();
        const double worst = diff.maxCoeff();
        const double mean = diff.sum() / s;
        return lambda_diff * (worst - mean) + mean;
      });
}

UncertaintyGraph gamma_from_scenarios_stdev(
    const Eigen::MatrixXd& scenarios,
    const std::vector<std::pair<int, int>>& edges, double lambda,
    double lambda_diff) {
  check_scenarios(scenarios, 2);
  const Eigen::MatrixXd d = normalize_by_means(scenarios);
  const int n = static_cast<int>(d.cols());
  const Eigen::MatrixXd centered = d.rowwise() - d.colwise().mean();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(d.rows() - 1);

  return graph_from_radii(n, edges, std::vector<double>(n, 1.0),
                          [&](int i, int j) {
                            const double scale = (i == j) ? lambda : lambda_diff;
                            return scale * std::sqrt(quad_form_diff(cov, i, j));
                          });
}

UncertaintyGraph gamma_from_scenarios_range(
    const Eigen::MatrixXd& scenarios,
    const std::vector<std::pair<int, int>>& edges, double alpha, double beta,
    double node_floor, double edge_floor) {
  check_scenarios(scenarios, 1);
  const FoldStats st = fold_stats(scenarios, node_floor, edge_floor);
  const int n = static_cast<int>(scenarios.cols());
  std::vector<double> nominal(st.midrange.data(), st.midrange.data() + n);
  return graph_from_radii(n, edges, nominal, [&](int i, int j) {
    return (i == j) ? alpha * st.w_node[i] : beta * st.w_edge(i, j);
  });
}

FoldStats fold_stats(const Eigen::MatrixXd& scenarios, double node_floor,
                     double edge_floor) {
  check_scenarios(scenarios, 2);
  const int n = static_cast<int>(scenarios.cols());
  const int s = static_cast<int>(scenarios.rows());

  FoldStats st;
  st.mean = scenarios.colwise().mean();
  const Eigen::VectorXd lo = scenarios.colwise().minCoeff();
  const Eigen::VectorXd hi = scenarios.colwise().maxCoeff();
  st.midrange = 0.5 * (lo + hi);
  st.w_node = ((hi - lo) * 0.5).cwiseMax(node_floor);

  st.w_edge = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double worst =
          (scenarios.col(i) - scenarios.col(j)).array().abs().maxCoeff();
      st.w_edge(i, j) = st.w_edge(j, i) = std::max(worst, edge_floor);
    }
  }

  const Eigen::MatrixXd centered =
      scenarios.rowwise() - st.mean.transpose();
  st.covariance = centered.transpose() * centered / static_cast<double>(s - 1);
  return st;
}

Eigen::MatrixXd corrected_covariance(const Eigen::MatrixXd& sigma, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw std::invalid_argument("corrected_covariance: rho must lie in (0, 1)");
  }
  Eigen::MatrixXd out = (1.0 - rho) * sigma;
  for (int i = 0; i < sigma.rows(); ++i) {
    out(i, i) += rho * std::max(1.0, sigma(i, i));
  }
  return out;
}

SurrogateParams surrogate_ellipsoid_params(const std::vector<FoldStats>& folds,
                                           double rho, double omega) {
  if (folds.empty()) {
    throw std::invalid_argument("surrogate_ellipsoid_params: no folds");
  }
  const int n = static_cast<int>(folds.front().mean.size());
  double alpha_sum = 0.0, beta_sum = 0.0;
  for (const FoldStats& f : folds) {
    if (f.mean.size() != n) {
      throw std::invalid_argument("surrogate_ellipsoid_params: fold size mismatch");
    }
    const Eigen::MatrixXd isq =
        inverse_sqrt(corrected_covariance(f.covariance, rho));
    double a = 0.0, b = 0.0;
    for (int i = 0; i < n; ++i) {
      a += (std::abs(f.mean[i] - f.midrange[i]) + omega * isq(i, i)) /
           f.w_node[i];
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double dir = (isq.col(i) - isq.col(j)).norm();
        b += (std::abs(f.mean[i] - f.mean[j]) + omega * dir) / f.w_edge(i, j);
      }
    }
    alpha_sum += a / n;
    beta_sum += b / (n * (n - 1) / 2.0);
  }
  const double l = static_cast<double>(folds.size());
  return {alpha_sum / l, beta_sum / l};
}

double membership_fraction(const SmoothSet& set, const Eigen::MatrixXd& rows,
                           double tol) {
  if (rows.cols() != set.dim()) {
    throw std::invalid_argument("membership_fraction: dimension mismatch");
  }
  if (rows.rows() == 0) return 0.0;
  std::vector<double> point(set.dim());
  long hits = 0;
  for (int r = 0; r < rows.rows(); ++r) {
    for (int i = 0; i < set.dim(); ++i) point[i] = rows(r, i);
    if (set.contains(point, tol)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rows.rows());
}

double membership_fraction(const Ellipsoid& ell, const Eigen::MatrixXd& rows,
                           double tol) {
  const int n = static_cast<int>(ell.center.size());
  if (rows.cols() != n || ell.sigma.rows() != n || ell.sigma.cols() != n) {
    throw std::invalid_argument("membership_fraction: dimension mismatch");
  }
  if (rows.rows() == 0) return 0.0;
  const Eigen::MatrixXd root = cholesky(ell.sigma);
  const auto solver = root.triangularView<Eigen::Lower>();
  long hits = 0;
  for (int r = 0; r < rows.rows(); ++r) {
    const Eigen::VectorXd z =
        solver.solve((rows.row(r).transpose() - ell.center).eval());
    if (z.squaredNorm() <= ell.omega + tol) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rows.rows());
}

}  // namespace smoothro
