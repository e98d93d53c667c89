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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace smoothro {

namespace {

void check_symmetric_square(const Eigen::MatrixXd& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix is not square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
        throw std::invalid_argument(std::string(who) +
                                    ": matrix is not symmetric");
      }
    }
  }
}

}  // namespace

NotPositiveDefinite::NotPositiveDefinite(int pivot_index)
    : std::runtime_error("matrix not positive definite at pivot " +
                         std::to_string(pivot_index)),
      pivot(pivot_index) {}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: p must lie in (0,1)");
  }
  // Acklam's rational approximation, then one Halley step against erfc.
  static const double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) *
        q /
        (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  }
  // Halley polish; skipped far in the tails where exp(x^2/2) overflows.
  if (std::abs(x) < 37.0) {
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) *
                     std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) {
    throw std::domain_error("gamma_p: requires a > 0 and x >= 0");
  }
  if (x == 0.0) return 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  const double fpmin = std::numeric_limits<double>::min() / eps;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // Series representation.
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int k = 0; k < 1000; ++k) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * eps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Continued fraction for Q(a,x), modified Lentz.
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  const double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

double chi2_quantile(double p, int dof) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("chi2_quantile: p must lie in (0,1)");
  }
  if (dof < 1) {
    throw std::domain_error("chi2_quantile: dof must be >= 1");
  }
  const double a = 0.5 * dof;
  auto cdf = [&](double x) { return gamma_p(a, 0.5 * x); };
  double lo = 0.0;
  double hi = dof + 10.0 * std::sqrt(2.0 * dof) + 50.0;
  for (int k = 0; k < 200 && cdf(hi) < p; ++k) hi *= 2.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-13 * hi) break;
  }
  double x = 0.5 * (lo + hi);
  // Newton polish, clamped to the bracket. log-space pdf avoids overflow.
  for (int k = 0; k < 4; ++k) {
    const double logpdf = (a - 1.0) * std::log(x) - 0.5 * x -
                          a * std::numbers::ln2 - std::lgamma(a);
    const double step = (cdf(x) - p) / std::exp(logpdf);
    x = std::clamp(x - step, lo, hi);
  }
  return x;
}

double quad_form_diff(const Eigen::MatrixXd& sigma, int i, int j) {
  check_symmetric_square(sigma, "quad_form_diff");
  const int n = static_cast<int>(sigma.rows());
  if (i < 0 || i >= n || j < 0 || j >= n) {
    throw std::out_of_range("quad_form_diff: index out of range");
  }
  if (i == j) return sigma(i, i);
  return sigma(i, i) + sigma(j, j) - 2.0 * sigma(i, j);
}

Eigen::MatrixXd cholesky(const Eigen::MatrixXd& sigma) {
  check_symmetric_square(sigma, "cholesky");
  const int n = static_cast<int>(sigma.rows());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  const double floor = 1e-13 * std::max(1.0, sigma.diagonal().maxCoeff());
  for (int j = 0; j < n; ++j) {
    double d = sigma(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= floor) throw NotPositiveDefinite(j);
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = sigma(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

SymmetricEigen eigen_sym(const Eigen::MatrixXd& a_in) {
  check_symmetric_square(a_in, "eigen_sym");
  const int n = static_cast<int>(a_in.rows());
  if (n > 256) {
    throw std::invalid_argument("eigen_sym: supports n <= 256");
  }
  Eigen::MatrixXd a = 0.5 * (a_in + a_in.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double norm = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(2.0 * off) <= 1e-14 * norm) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return a(x, x) < a(y, y); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

double max_eigenvalue(const Eigen::MatrixXd& a) {
  check_symmetric_square(a, "max_eigenvalue");
  const int n = static_cast<int>(a.rows());
  if (n == 1) return a(0, 0);
  // Shift so the target eigenvalue is the dominant one in magnitude.
  const double shift = a.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i) v[i] += 1e-3 * (i + 1);  // break symmetry
  v.normalize();
  double lambda = v.dot(a * v);
  int stable = 0;
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXd w = a * v + shift * v;
    const double wn = w.norm();
    if (wn <= 1e-300) return 0.0;  // a == -shift I cannot occur; zero matrix
    v = w / wn;
    const double next = v.dot(a * v);
    if (std::abs(next - lambda) <= 1e-10 * (1.0 + std::abs(next))) {
      if (++stable >= 3) return next;
    } else {
      stable = 0;
    }
    lambda = next;
  }
  // Near-tied leading eigenvalues converge too slowly; fall back to the
  // full decomposition, which is exact for desk-scale matrices.
  const SymmetricEigen es = eigen_sym(a);
  return es.values[es.values.size() - 1];
}

PsdFactor psd_factor(const Eigen::MatrixXd& sigma, double rank_tol) {
  const SymmetricEigen es = eigen_sym(sigma);
  const int n = static_cast<int>(es.values.size());
  const double lmax = std::max(es.values[n - 1], 0.0);
  const double drop = rank_tol * lmax;
  const double neg_floor =
      std::max(drop, 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, sigma.norm()));
  if (es.values[0] < -neg_floor) {
    throw std::domain_error("psd_factor: matrix is indefinite");
  }
  std::vector<int> kept;
  for (int i = n - 1; i >= 0; --i) {
    if (es.values[i] > drop && es.values[i] > 0.0) kept.push_back(i);
  }
  PsdFactor out;
  out.rank = static_cast<int>(kept.size());
  out.root.resize(n, out.rank);
  for (int c = 0; c < out.rank; ++c) {
    out.root.col(c) = es.vectors.col(kept[c]) * std::sqrt(es.values[kept[c]]);
  }
  return out;
}

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& sigma, double rank_tol) {
  const SymmetricEigen es = eigen_sym(sigma);
  const int n = static_cast<int>(es.values.size());
  const double lmax = std::max(es.values[n - 1], 0.0);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (es.values[i] > rank_tol * lmax && es.values[i] > 0.0) {
      out += es.vectors.col(i) * es.vectors.col(i).transpose() /
             std::sqrt(es.values[i]);
    }
  }
  return out;
}

}  // namespace smoothro
