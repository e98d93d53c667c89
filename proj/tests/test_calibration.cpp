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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "smoothro/numerics.hpp"
#include "smoothro/rng.hpp"

using namespace smoothro;

namespace {

Eigen::MatrixXd kms(int n, double rho) {
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = std::pow(rho, std::abs(i - j));
  return s;
}

}  // namespace

TEST_CASE("complete edge list") {
  const auto e = complete_edges(4);
  REQUIRE(e.size() == 6);
  CHECK(e[0] == std::pair<int, int>(0, 1));
  CHECK(e[1] == std::pair<int, int>(0, 2));
  CHECK(e[5] == std::pair<int, int>(2, 3));
  CHECK(complete_edges(1).empty());
}

TEST_CASE("sizing multipliers") {
  SUBCASE("distribution-free joint bound") {
    CHECK(sizing_multiplier(SizingRule::kChebyshevJoint, 0.01, 2, 1) ==
          doctest::Approx(std::sqrt(200.0)));
    CHECK(sizing_multiplier(SizingRule::kChebyshevJoint, 0.05, 5, 10) ==
          doctest::Approx(10.0));
  }
  SUBCASE("expected-violations bound uses the constraint count") {
    CHECK(sizing_multiplier(SizingRule::kSingleViolation, 0.05, 5, 10, 10) ==
          doctest::Approx(std::sqrt(199.0)));
    CHECK(sizing_multiplier(SizingRule::kSingleViolation, 0.5, 3, 0, 1) ==
          doctest::Approx(1.0));
  }
  SUBCASE("gaussian chi-square ball") {
    CHECK(sizing_multiplier(SizingRule::kNormalChi2, 0.05, 5, 10) ==
          doctest::Approx(std::sqrt(chi2_quantile(0.95, 5))));
    // One degree of freedom reduces to a two-sided normal quantile.
    CHECK(sizing_multiplier(SizingRule::kNormalChi2, 0.05, 1, 0) ==
          doctest::Approx(1.959963984540054));
  }
  SUBCASE("gaussian union bound over facets") {
    // Five vertices, complete graph: 15 pair constraints, so the one-sided
    // level is 1 - 0.01/30. External reference value.
    CHECK(sizing_multiplier(SizingRule::kNormalUnion, 0.01, 5, 10) ==
          doctest::Approx(3.402932835385335).epsilon(1e-9));
  }
  SUBCASE("best gaussian rule is the minimum of the two") {
    for (const double p : {0.01, 0.05, 0.2, 0.5}) {
      const double chi = sizing_multiplier(SizingRule::kNormalChi2, p, 5, 10);
      const double uni = sizing_multiplier(SizingRule::kNormalUnion, p, 5, 10);
      CHECK(sizing_multiplier(SizingRule::kNormalBest, p, 5, 10) ==
            doctest::Approx(std::min(chi, uni)));
    }
    // The union bound wins at small p here.
    CHECK(sizing_multiplier(SizingRule::kNormalBest, 0.01, 5, 10) ==
          doctest::Approx(3.402932835385335).epsilon(1e-9));
  }
  SUBCASE("explicit degrees of freedom override the dimension") {
    CHECK(sizing_multiplier(SizingRule::kNormalChi2, 0.05, 5, 10, 1, 1) ==
          doctest::Approx(1.959963984540054));
  }
  SUBCASE("every rule shrinks as the budget p grows") {
    for (const SizingRule rule :
         {SizingRule::kChebyshevJoint, SizingRule::kSingleViolation,
          SizingRule::kNormalChi2, SizingRule::kNormalUnion,
          SizingRule::kNormalBest}) {
      double prev = sizing_multiplier(rule, 0.005, 4, 6, 14);
      for (const double p : {0.02, 0.1, 0.3, 0.6}) {
        const double cur = sizing_multiplier(rule, p, 4, 6, 14);
        CHECK(cur < prev);
        prev = cur;
      }
    }
  }
}

TEST_CASE("radii from a covariance matrix") {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 2.5, 0.5, 0.5, 2.5;
  const auto edges = complete_edges(2);
  SUBCASE("chebyshev example") {
    SizingReport report;
    const UncertaintyGraph g = gamma_from_covariance(
        sigma, edges, SizingRule::kChebyshevJoint, 0.01, 1, &report);
    REQUIRE(g.n == 2);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.nominal[0] == 0.0);
    CHECK(g.node_radii[0] == doctest::Approx(22.360679774997898));
    CHECK(g.node_radii[1] == doctest::Approx(22.360679774997898));
    CHECK(g.edges[0].gamma == doctest::Approx(28.284271247461902));
    CHECK(report.multiplier == doctest::Approx(std::sqrt(200.0)));
    CHECK(report.dof == 2);
    CHECK_FALSE(report.unit_diagonal);
  }
  SUBCASE("singular covariance drops the chi-square degrees of freedom") {
    Eigen::MatrixXd flat(2, 2);
    flat << 1.0, 1.0, 1.0, 1.0;  // rank one
    SizingReport report;
    const UncertaintyGraph g = gamma_from_covariance(
        flat, edges, SizingRule::kNormalChi2, 0.05, 1, &report);
    CHECK(report.dof == 1);
    CHECK(g.node_radii[0] == doctest::Approx(1.959963984540054));
    // Perfectly correlated pair: the difference has zero variance.
    CHECK(g.edges[0].gamma == doctest::Approx(0.0));
    CHECK(report.unit_diagonal);
  }
  SUBCASE("agrees with the enclosing-set construction at matched budgets") {
    const Eigen::MatrixXd s = kms(4, 0.3);
    const auto e = complete_edges(4);
    const double p = 0.02;
    const UncertaintyGraph cheb =
        gamma_from_covariance(s, e, SizingRule::kChebyshevJoint, p);
    const UncertaintyGraph encl = enclosing_gamma(s, e, 4.0 / p);
    for (int i = 0; i < 4; ++i)
      CHECK(cheb.node_radii[i] == doctest::Approx(encl.node_radii[i]));
    for (size_t k = 0; k < e.size(); ++k)
      CHECK(cheb.edges[k].gamma == doctest::Approx(encl.edges[k].gamma));

    const UncertaintyGraph gauss =
        gamma_from_covariance(s, e, SizingRule::kNormalChi2, p);
    const UncertaintyGraph encl2 = enclosing_gamma(s, e, chi2_quantile(1 - p, 4));
    for (int i = 0; i < 4; ++i)
      CHECK(gauss.node_radii[i] == doctest::Approx(encl2.node_radii[i]));
  }
}

TEST_CASE("enclosing set contains the ellipsoid it was built from") {
  const Eigen::MatrixXd sigma = kms(3, 0.5);
  const double omega = 2.5;
  const UncertaintyGraph g = enclosing_gamma(sigma, complete_edges(3), omega);
  const SmoothSet set = SmoothSet::build(g);
  const Eigen::MatrixXd root = cholesky(sigma);
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    Eigen::VectorXd u(3);
    for (int i = 0; i < 3; ++i) u[i] = rng.gaussian();
    u.normalize();
    const Eigen::VectorXd point = std::sqrt(omega) * (root * u);
    CHECK(set.contains({point[0], point[1], point[2]}, 1e-7));
  }
  // The radii are tight: each vertex facet touches the ellipsoid.
  const auto r = inscribed_radius(set, sigma);
  CHECK(r.value == doctest::Approx(std::sqrt(omega)));
}

TEST_CASE("rotated box radius") {
  SUBCASE("distribution-free") {
    CHECK(rotated_box_radius(0.01, 5, false) ==
          doctest::Approx(std::sqrt(500.0)));
    CHECK(rotated_box_radius(0.05, 5, false) == doctest::Approx(10.0));
  }
  SUBCASE("gaussian takes the smaller of ball and union") {
    // p = 0.01, n = 5: the per-coordinate union bound wins.
    CHECK(rotated_box_radius(0.01, 5, true) ==
          doctest::Approx(3.090232306167813).epsilon(1e-9));
    // Large p, n = 2: the chi-square ball wins; closed form for dof 2.
    CHECK(rotated_box_radius(0.8, 2, true) ==
          doctest::Approx(std::sqrt(-2.0 * std::log(0.8))));
    for (const double p : {0.01, 0.1, 0.4}) {
      for (const int n : {1, 2, 6}) {
        const double expect =
            std::min(std::sqrt(chi2_quantile(1 - p, n)),
                     normal_quantile(1 - p / (2.0 * n)));
        CHECK(rotated_box_radius(p, n, true) == doctest::Approx(expect));
      }
    }
  }
}

TEST_CASE("violation bound") {
  CHECK(violation_bound(0.0) == doctest::Approx(1.0));
  CHECK(violation_bound(3.0) == doctest::Approx(0.1));
  SUBCASE("round trip through the expected-violations multiplier") {
    for (const double p : {0.01, 0.05, 0.2}) {
      for (const int m : {1, 4, 25}) {
        const double t =
            sizing_multiplier(SizingRule::kSingleViolation, p, 3, 2, m);
        CHECK(violation_bound(t) * m == doctest::Approx(p).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("scenario radii from worst observations") {
  // Two scenarios of a single series: 10 and 12. Column mean 11, so the
  // normalized maximum sits 1/11 above the all-ones nominal.
  Eigen::MatrixXd one_col(2, 1);
  one_col << 10.0, 12.0;
  const UncertaintyGraph g =
      gamma_from_scenarios_max(one_col, {}, 1.0, 1.0);
  REQUIRE(g.n == 1);
  CHECK(g.nominal[0] == doctest::Approx(1.0));
  CHECK(g.node_radii[0] == doctest::Approx(1.0 / 11.0));

  Eigen::MatrixXd d(3, 2);
  d << 8.0, 2.2, 12.0, 1.8, 10.0, 2.0;  // normalized: (.8,1.1),(1.2,.9),(1,1)
  SUBCASE("interpolation between mean and max difference") {
    const UncertaintyGraph h =
        gamma_from_scenarios_max(d, complete_edges(2), 1.0, 1.0);
    CHECK(h.node_radii[0] == doctest::Approx(0.2));
    CHECK(h.node_radii[1] == doctest::Approx(0.1));
    CHECK(h.edges[0].gamma == doctest::Approx(0.3));
    const UncertaintyGraph mean_only =
        gamma_from_scenarios_max(d, complete_edges(2), 1.0, 0.0);
    CHECK(mean_only.edges[0].gamma == doctest::Approx(0.2));
  }
  SUBCASE("diagonal scales linearly in lambda") {
    const UncertaintyGraph h =
        gamma_from_scenarios_max(d, complete_edges(2), 2.5, 1.0);
    CHECK(h.node_radii[0] == doctest::Approx(0.5));
    CHECK(h.node_radii[1] == doctest::Approx(0.25));
  }
  SUBCASE("zero-mean column is rejected") {
    Eigen::MatrixXd bad(2, 1);
    bad << 1.0, -1.0;
    CHECK_THROWS_AS(gamma_from_scenarios_max(bad, {}, 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(gamma_from_scenarios_stdev(bad, {}, 1.0, 1.0),
                    std::invalid_argument);
  }
}

TEST_CASE("scenario radii from standard deviations") {
  Eigen::MatrixXd d(3, 2);
  d << 8.0, 2.2, 12.0, 1.8, 10.0, 2.0;
  // Normalized columns have sample covariance [[0.04, -0.02], [-0.02, 0.01]].
  const UncertaintyGraph g =
      gamma_from_scenarios_stdev(d, complete_edges(2), 1.0, 1.0);
  CHECK(g.nominal[0] == doctest::Approx(1.0));
  CHECK(g.nominal[1] == doctest::Approx(1.0));
  CHECK(g.node_radii[0] == doctest::Approx(0.2));
  CHECK(g.node_radii[1] == doctest::Approx(0.1));
  // var of the difference: 0.04 + 0.01 + 2 * 0.02.
  CHECK(g.edges[0].gamma == doctest::Approx(0.3));
  const UncertaintyGraph h =
      gamma_from_scenarios_stdev(d, complete_edges(2), 2.0, 0.5);
  CHECK(h.node_radii[0] == doctest::Approx(0.4));
  CHECK(h.edges[0].gamma == doctest::Approx(0.15));
}

TEST_CASE("scenario radii from ranges") {
  Eigen::MatrixXd d(2, 2);
  d << 1.0, 2.0, 3.0, 5.0;
  SUBCASE("midrange nominal and width scaling") {
    const UncertaintyGraph g =
        gamma_from_scenarios_range(d, complete_edges(2), 0.5, 0.25);
    CHECK(g.nominal[0] == doctest::Approx(2.0));
    CHECK(g.nominal[1] == doctest::Approx(3.5));
    // Half-ranges are 1 and 1.5; the first is at the floor.
    CHECK(g.node_radii[0] == doctest::Approx(0.5));
    CHECK(g.node_radii[1] == doctest::Approx(0.75));
    // Largest |column difference| is |3 - 5| = 2.
    CHECK(g.edges[0].gamma == doctest::Approx(0.5));
  }
  SUBCASE("constant column falls back to the node floor") {
    Eigen::MatrixXd flat(3, 1);
    flat << 4.0, 4.0, 4.0;
    const UncertaintyGraph g = gamma_from_scenarios_range(flat, {}, 0.7, 1.0);
    CHECK(g.nominal[0] == doctest::Approx(4.0));
    CHECK(g.node_radii[0] == doctest::Approx(0.7));
  }
  SUBCASE("alpha = beta = 1 keeps every training row inside") {
    Rng rng(29);
    Eigen::MatrixXd data(40, 3);
    for (int r = 0; r < data.rows(); ++r)
      for (int c = 0; c < 3; ++c) data(r, c) = rng.uniform(0.0, 20.0);
    const UncertaintyGraph g =
        gamma_from_scenarios_range(data, complete_edges(3), 1.0, 1.0);
    const SmoothSet set = SmoothSet::build(g);
    CHECK(membership_fraction(set, data) == doctest::Approx(1.0));
  }
}

TEST_CASE("fold statistics") {
  Eigen::MatrixXd d(2, 2);
  d << 1.0, 2.0, 3.0, 5.0;
  const FoldStats f = fold_stats(d);
  CHECK(f.mean[0] == doctest::Approx(2.0));
  CHECK(f.mean[1] == doctest::Approx(3.5));
  CHECK(f.midrange[0] == doctest::Approx(2.0));
  CHECK(f.midrange[1] == doctest::Approx(3.5));
  CHECK(f.w_node[0] == doctest::Approx(1.0));   // floored
  CHECK(f.w_node[1] == doctest::Approx(1.5));
  CHECK(f.w_edge(0, 1) == doctest::Approx(2.0));
  CHECK(f.w_edge(1, 0) == doctest::Approx(2.0));
  CHECK(f.covariance(0, 0) == doctest::Approx(2.0));
  CHECK(f.covariance(0, 1) == doctest::Approx(3.0));
  CHECK(f.covariance(1, 1) == doctest::Approx(4.5));
}

TEST_CASE("corrected covariance blend") {
  Eigen::MatrixXd s(2, 2);
  s << 2.0, 3.0, 3.0, 4.5;
  // Variances above one stay put for every rho; covariances shrink.
  const Eigen::MatrixXd half = corrected_covariance(s, 0.5);
  CHECK(half(0, 0) == doctest::Approx(2.0));
  CHECK(half(0, 1) == doctest::Approx(1.5));
  CHECK(half(1, 1) == doctest::Approx(4.5));
  const Eigen::MatrixXd quarter = corrected_covariance(s, 0.25);
  CHECK(quarter(0, 1) == doctest::Approx(2.25));
  SUBCASE("only interior shrinkage weights are accepted") {
    CHECK_THROWS_AS(corrected_covariance(s, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(corrected_covariance(s, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(corrected_covariance(s, -0.5), std::invalid_argument);
  }
  SUBCASE("endpoint limits") {
    CHECK(corrected_covariance(s, 1e-12).isApprox(s, 1e-9));
    const Eigen::MatrixXd full = corrected_covariance(s, 1.0 - 1e-12);
    CHECK(full(0, 1) == doctest::Approx(0.0));
    CHECK(full(0, 0) == doctest::Approx(2.0));
  }
  SUBCASE("small variances are lifted to one") {
    Eigen::MatrixXd tiny = Eigen::MatrixXd::Zero(2, 2);
    tiny(0, 0) = 0.25;
    tiny(1, 1) = 0.16;
    const Eigen::MatrixXd fixed = corrected_covariance(tiny, 0.5);
    CHECK(fixed(0, 0) == doctest::Approx(0.625));
    CHECK(fixed(1, 1) == doctest::Approx(0.58));
  }
  SUBCASE("rank-deficient sample covariance becomes invertible") {
    Eigen::MatrixXd flat(2, 2);
    flat << 1.0, 1.0, 1.0, 1.0;
    const Eigen::MatrixXd fixed = corrected_covariance(flat, 0.3);
    CHECK_NOTHROW(cholesky(fixed));
  }
}

TEST_CASE("surrogate scale factors") {
  SUBCASE("identity covariance sanity values") {
    FoldStats f;
    f.mean = Eigen::VectorXd::Zero(2);
    f.midrange = Eigen::VectorXd::Zero(2);
    f.w_node = Eigen::VectorXd::Ones(2);
    f.w_edge = Eigen::MatrixXd::Ones(2, 2);
    f.covariance = Eigen::MatrixXd::Identity(2, 2);
    for (const double omega : {2.0, 5.0}) {
      const SurrogateParams sp = surrogate_ellipsoid_params({f}, 0.4, omega);
      CHECK(sp.alpha_bar == doctest::Approx(omega));
      CHECK(sp.beta_bar == doctest::Approx(std::sqrt(2.0) * omega));
    }
  }
  SUBCASE("omega zero leaves only the center offsets") {
    FoldStats f;
    f.mean = Eigen::VectorXd::Zero(2);
    f.midrange = Eigen::VectorXd::Zero(2);
    f.mean << 1.0, 2.0;
    f.midrange << 0.5, 3.0;
    f.w_node = Eigen::VectorXd::Ones(2);
    f.w_node << 1.0, 2.0;
    f.w_edge = Eigen::MatrixXd::Ones(2, 2) * 4.0;
    f.covariance = Eigen::MatrixXd::Identity(2, 2);
    const SurrogateParams sp = surrogate_ellipsoid_params({f}, 0.5, 0.0);
    CHECK(sp.alpha_bar == doctest::Approx(0.5 * (0.5 / 1.0 + 1.0 / 2.0)));
    CHECK(sp.beta_bar == doctest::Approx(1.0 / 4.0));
  }
  SUBCASE("full shrinkage uses the lifted diagonal only") {
    FoldStats f;
    f.mean = Eigen::VectorXd::Zero(2);
    f.midrange = Eigen::VectorXd::Zero(2);
    f.w_node = Eigen::VectorXd::Ones(2);
    f.w_edge = Eigen::MatrixXd::Ones(2, 2);
    f.covariance.resize(2, 2);
    f.covariance << 4.0, 1.9, 1.9, 1.0;
    const double omega = 2.0;
    const SurrogateParams sp =
        surrogate_ellipsoid_params({f}, 1.0 - 1e-10, omega);
    // Corrected covariance tends to diag(4, 1): inverse roots 1/2 and 1.
    CHECK(sp.alpha_bar == doctest::Approx(omega * 0.75));
    CHECK(sp.beta_bar == doctest::Approx(omega * std::sqrt(1.25)));
  }
  SUBCASE("multiple folds average") {
    FoldStats f;
    f.mean = Eigen::VectorXd::Zero(2);
    f.midrange = Eigen::VectorXd::Zero(2);
    f.w_node = Eigen::VectorXd::Ones(2);
    f.w_edge = Eigen::MatrixXd::Ones(2, 2);
    f.covariance = Eigen::MatrixXd::Identity(2, 2);
    FoldStats g = f;
    g.w_node *= 2.0;  // halves the per-fold alpha contribution
    const SurrogateParams sp = surrogate_ellipsoid_params({f, g}, 0.5, 3.0);
    CHECK(sp.alpha_bar == doctest::Approx(0.5 * (3.0 + 1.5)));
  }
  SUBCASE("empty fold list is rejected") {
    CHECK_THROWS_AS(surrogate_ellipsoid_params({}, 0.5, 1.0),
                    std::invalid_argument);
  }
}

TEST_CASE("membership fractions") {
  SUBCASE("graph set") {
    UncertaintyGraph g;
    g.n = 2;
    g.nominal = {0.0, 0.0};
    g.node_radii = {1.0, 1.0};
    const SmoothSet set = SmoothSet::build(g);
    Eigen::MatrixXd rows(3, 2);
    rows << 0.0, 0.0, 0.9, 0.9, 1.5, 0.0;
    CHECK(membership_fraction(set, rows) == doctest::Approx(2.0 / 3.0));
    CHECK(membership_fraction(set, Eigen::MatrixXd(0, 2)) == 0.0);
  }
  SUBCASE("ellipsoid") {
    Ellipsoid ell;
    ell.center = Eigen::VectorXd::Zero(2);
    ell.sigma = Eigen::MatrixXd::Identity(2, 2);
    ell.omega = 1.0;
    Eigen::MatrixXd rows(3, 2);
    rows << 0.0, 0.0, 0.999, 0.0, 2.0, 0.0;
    CHECK(membership_fraction(ell, rows) == doctest::Approx(2.0 / 3.0));
    ell.omega = 5.0;
    CHECK(membership_fraction(ell, rows) == doctest::Approx(1.0));
  }
  SUBCASE("gaussian coverage respects the calibrated budget") {
    // Draw correlated normals and check the chi-square rule's guarantee
    // empirically; the margin is three binomial standard errors.
    const int n = 3;
    const double p = 0.1;
    const Eigen::MatrixXd sigma = kms(n, 0.6);
    const UncertaintyGraph g = gamma_from_covariance(
        sigma, complete_edges(n), SizingRule::kNormalBest, p);
    const SmoothSet set = SmoothSet::build(g);
    const Eigen::MatrixXd root = cholesky(sigma);
    Rng rng(101);
    const int trials = 20000;
    Eigen::MatrixXd draws(trials, n);
    Eigen::VectorXd z(n);
    for (int t = 0; t < trials; ++t) {
      for (int i = 0; i < n; ++i) z[i] = rng.gaussian();
      draws.row(t) = (root * z).transpose();
    }
    const double frac = membership_fraction(set, draws);
    const double se = std::sqrt(p * (1 - p) / trials);
    CHECK(frac >= 1.0 - p - 3.0 * se);
  }
}
