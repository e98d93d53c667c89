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

#include "smoothro/numerics.hpp"

#include <cmath>

#include "doctest.h"
#include "smoothro/rng.hpp"

using namespace smoothro;

namespace {

Eigen::MatrixXd kms(int n, double rho) {
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s(i, j) = std::pow(rho, std::abs(i - j));
  }
  return s;
}

Eigen::MatrixXd random_psd(int n, Rng* rng) {
  Eigen::MatrixXd r(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) r(i, j) = rng->gaussian();
  }
  return r * r.transpose() / n;
}

}  // namespace

TEST_CASE("normal quantile matches reference values") {
  // Reference values from a high-precision external implementation.
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_quantile(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-9));
  CHECK(normal_quantile(0.999) ==
        doctest::Approx(3.090232306167813).epsilon(1e-9));
  CHECK(normal_quantile(1.0 - 0.01 / 30.0) ==
        doctest::Approx(3.402932835385335).epsilon(1e-9));
  CHECK(normal_quantile(1e-9) ==
        doctest::Approx(-5.9978070150076865).epsilon(1e-8));
  CHECK(normal_quantile(0.1234) ==
        doctest::Approx(-1.1581569325527095).epsilon(1e-9));
  CHECK_THROWS_AS((void)normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS((void)normal_quantile(1.0), std::domain_error);
}

TEST_CASE("normal quantile inverts the cdf on a grid") {
  for (int k = 1; k < 1000; ++k) {
    const double p = k / 1000.0;
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
  }
  CHECK(normal_cdf(1.3) == doctest::Approx(0.9031995154143897).epsilon(1e-12));
  CHECK(normal_cdf(-2.4) ==
        doctest::Approx(0.008197535924596131).epsilon(1e-12));
}

TEST_CASE("regularized incomplete gamma reference values") {
  CHECK(gamma_p(2.5, 1.3) ==
        doctest::Approx(0.23863473215498604).epsilon(1e-10));
  CHECK(gamma_p(0.5, 0.2) ==
        doctest::Approx(0.47291074313446196).epsilon(1e-10));
  CHECK(gamma_p(3.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("chi-squared quantile") {
  SUBCASE("reference values") {
    CHECK(chi2_quantile(0.5, 2) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-8));
    CHECK(chi2_quantile(0.99, 5) ==
          doctest::Approx(15.08627246938899).epsilon(1e-8));
    CHECK(chi2_quantile(0.95, 3) ==
          doctest::Approx(7.814727903251179).epsilon(1e-8));
    CHECK(chi2_quantile(0.9, 8) ==
          doctest::Approx(13.36156613651173).epsilon(1e-8));
  }
  SUBCASE("dof = 1 is a squared normal quantile") {
    for (double q : {0.2, 0.5, 0.9, 0.99}) {
      const double z = normal_quantile((1.0 + q) / 2.0);
      CHECK(chi2_quantile(q, 1) == doctest::Approx(z * z).epsilon(1e-7));
    }
  }
  SUBCASE("strictly increasing in q") {
    for (int dof : {1, 2, 5, 17}) {
      double prev = 0.0;
      for (int k = 1; k <= 40; ++k) {
        const double cur = chi2_quantile(k / 41.0, dof);
        CHECK(cur > prev);
        prev = cur;
      }
    }
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS((void)chi2_quantile(0.0, 3), std::domain_error);
    CHECK_THROWS_AS((void)chi2_quantile(0.5, 0), std::domain_error);
  }
}

TEST_CASE("quad_form_diff") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(4, 4);
  CHECK(quad_form_diff(eye, 0, 2) == doctest::Approx(2.0));
  CHECK(quad_form_diff(eye, 3, 3) == doctest::Approx(1.0));
  CHECK(quad_form_diff(kms(5, 0.2), 0, 1) == doctest::Approx(1.6));
  CHECK_THROWS_AS((void)quad_form_diff(eye, 0, 4), std::out_of_range);

  SUBCASE("nonnegative on random psd matrices") {
    Rng rng(7);
    for (int t = 0; t < 1000; ++t) {
      const int n = 2 + static_cast<int>(t % 5);
      const Eigen::MatrixXd s = random_psd(n, &rng);
      const int i = rng.uniform_int(0, n - 1);
      const int j = rng.uniform_int(0, n - 1);
      CHECK(quad_form_diff(s, i, j) >= -1e-12);
    }
  }
}

TEST_CASE("cholesky") {
  SUBCASE("hand factor") {
    Eigen::MatrixXd s(2, 2);
    s << 4, 2, 2, 2;
    const Eigen::MatrixXd l = cholesky(s);
    CHECK(l(0, 0) == doctest::Approx(2.0));
    CHECK(l(1, 0) == doctest::Approx(1.0));
    CHECK(l(1, 1) == doctest::Approx(1.0));
    CHECK(l(0, 1) == doctest::Approx(0.0));
  }
  SUBCASE("identity and scaled identity") {
    CHECK(cholesky(Eigen::MatrixXd::Identity(3, 3))
              .isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-14));
    Eigen::MatrixXd nine = 9.0 * Eigen::MatrixXd::Identity(2, 2);
    CHECK(cholesky(nine)(1, 1) == doctest::Approx(3.0));
  }
  SUBCASE("round trip on random matrices") {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
      const int n = 2 + t % 7;
      Eigen::MatrixXd s =
          random_psd(n, &rng) + 0.1 * Eigen::MatrixXd::Identity(n, n);
      const Eigen::MatrixXd l = cholesky(s);
      const double scale = s.cwiseAbs().maxCoeff();
      CHECK((l * l.transpose() - s).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
  }
  SUBCASE("failure reports the pivot") {
    Eigen::MatrixXd s(2, 2);
    s << 1, 2, 2, 1;  // indefinite
    try {
      (void)cholesky(s);
      CHECK(false);
    } catch (const NotPositiveDefinite& e) {
      CHECK(e.pivot == 1);
    }
  }
}

TEST_CASE("symmetric eigensolver") {
  Rng rng(13);
  for (int t = 0; t < 25; ++t) {
    const int n = 2 + t % 6;
    Eigen::MatrixXd s = random_psd(n, &rng);
    const SymmetricEigen eig = eigen_sym(s);
    // Ascending values, orthonormal vectors, exact reconstruction.
    for (int i = 1; i < n; ++i) CHECK(eig.values[i] >= eig.values[i - 1]);
    CHECK((eig.vectors.transpose() * eig.vectors -
           Eigen::MatrixXd::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    const Eigen::MatrixXd back =
        eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
    CHECK((back - s).cwiseAbs().maxCoeff() <= 1e-9 * (1 + s.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("max eigenvalue") {
  CHECK(max_eigenvalue(Eigen::MatrixXd::Identity(5, 5)) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // Reference eigenvalues for the correlation matrices used throughout.
  CHECK(max_eigenvalue(kms(5, 0.2)) ==
        doctest::Approx(1.3987959615).epsilon(1e-8));
  CHECK(max_eigenvalue(kms(5, 0.8)) ==
        doctest::Approx(3.6355956322).epsilon(1e-8));

  SUBCASE("dominates rayleigh quotients") {
    Rng rng(17);
    const Eigen::MatrixXd s = random_psd(6, &rng);
    const double lam = max_eigenvalue(s);
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXd v(6);
      for (int i = 0; i < 6; ++i) v[i] = rng.gaussian();
      CHECK(lam + 1e-9 >= v.dot(s * v) / v.squaredNorm());
    }
  }
}

TEST_CASE("psd factor") {
  SUBCASE("identity keeps full rank") {
    const PsdFactor f = psd_factor(Eigen::MatrixXd::Identity(4, 4));
    CHECK(f.rank == 4);
    CHECK((f.root * f.root.transpose())
              .isApprox(Eigen::MatrixXd::Identity(4, 4), 1e-10));
  }
  SUBCASE("rank-1 matrix keeps one column") {
    Eigen::VectorXd v(3);
    v << 1, -2, 0.5;
    const PsdFactor f = psd_factor(v * v.transpose());
    CHECK(f.rank == 1);
    CHECK(f.root.cols() == 1);
    CHECK((f.root * f.root.transpose() - v * v.transpose())
              .cwiseAbs()
              .maxCoeff() <= 1e-8 * v.squaredNorm());
  }
  SUBCASE("low-rank product round trip") {
    Rng rng(19);
    Eigen::MatrixXd r(6, 3);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 3; ++j) r(i, j) = rng.u01();
    }
    const Eigen::MatrixXd s = r * r.transpose();
    const PsdFactor f = psd_factor(s);
    CHECK(f.rank == 3);
    CHECK((f.root * f.root.transpose() - s).cwiseAbs().maxCoeff() <=
          1e-8 * s.cwiseAbs().maxCoeff());
  }
  SUBCASE("indefinite rejected") {
    Eigen::MatrixXd s(2, 2);
    s << 1, 2, 2, 1;
    CHECK_THROWS_AS((void)psd_factor(s), std::domain_error);
  }
}

TEST_CASE("inverse square root") {
  Rng rng(23);
  const Eigen::MatrixXd s =
      random_psd(5, &rng) + 0.2 * Eigen::MatrixXd::Identity(5, 5);
  const Eigen::MatrixXd isq = inverse_sqrt(s);
  CHECK((isq * s * isq - Eigen::MatrixXd::Identity(5, 5))
            .cwiseAbs()
            .maxCoeff() <= 1e-9);
  CHECK((isq - isq.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
}
