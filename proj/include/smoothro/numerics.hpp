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

#ifndef SMOOTHRO_NUMERICS_HPP_
#define SMOOTHRO_NUMERICS_HPP_

#include <Eigen/Dense>
#include <stdexcept>

namespace smoothro {

// Thrown by cholesky() when a pivot fails; `pivot` is the 0-based row index.
struct NotPositiveDefinite : std::runtime_error {
  explicit NotPositiveDefinite(int pivot_index);
  int pivot;
};

/// Standard normal CDF, Phi(x) = P[N(0,1) <= x].
double normal_cdf(double x);

/// Inverse standard normal CDF. Rational approximation followed by one
/// Halley polish step against erfc; absolute error below 1e-9 for
/// p in [1e-12, 1 - 1e-12]. Throws std::domain_error unless 0 < p < 1.
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
/// Series expansion for x < a + 1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);

/// Inverse chi-squared CDF with `dof` degrees of freedom. Bracketed
/// bisection on gamma_p with a Newton polish; relative error below 1e-8.
/// Throws std::domain_error unless 0 < p < 1 and dof >= 1.
double chi2_quantile(double p, int dof);

/// sigma_ii + sigma_jj - 2 sigma_ij for i != j, sigma_ii for i == j.
/// Equals |Sigma^{1/2} (e_i - e_j)|^2 (resp. |Sigma^{1/2} e_i|^2).
/// Throws std::out_of_range on bad indices, std::invalid_argument if
/// `sigma` is not square or not symmetric within 1e-12 scaled.
double quad_form_diff(const Eigen::MatrixXd& sigma, int i, int j);

/// Lower-triangular L with L L^T = sigma. Throws NotPositiveDefinite with
/// the failing pivot index when a pivot drops below 1e-13 * max diagonal.
Eigen::MatrixXd cholesky(const Eigen::MatrixXd& sigma);

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.
/// Supports n <= 256. values are ascending; columns of `vectors` are the
/// matching unit eigenvectors.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};
SymmetricEigen eigen_sym(const Eigen::MatrixXd& a);

/// Largest eigenvalue of a symmetric matrix by shifted power iteration;
/// relative error below 1e-8.
double max_eigenvalue(const Eigen::MatrixXd& a);

/// Factor R (n x q) with R R^T ~= sigma where q is the number of
/// eigenvalues kept, dropping those below rank_tol * lambda_max. Throws
/// std::domain_error if some eigenvalue is below -rank_tol * lambda_max
/// (matrix meaningfully indefinite).
struct PsdFactor {
  Eigen::MatrixXd root;  // n x q
  int rank;
};
PsdFactor psd_factor(const Eigen::MatrixXd& sigma, double rank_tol = 1e-10);

/// Symmetric inverse square root via eigen_sym; eigenvalues below
/// rank_tol * lambda_max are treated as zero (pseudo-inverse branch).
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& sigma,
                             double rank_tol = 1e-12);

}  // namespace smoothro

#endif  // SMOOTHRO_NUMERICS_HPP_
