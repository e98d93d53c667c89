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

#include "smoothro/model.hpp"

#include <cmath>
#include <string>

namespace smoothro {

namespace {

void check_coeffs(const SparseVec& v, int limit, const char* what, int row,
                  std::vector<std::string>* issues) {
  for (const auto& [idx, val] : v) {
    if (idx < 0 || idx >= limit) {
      issues->push_back(std::string(what) + " index out of range in row " +
                        std::to_string(row));
      return;
    }
    if (!std::isfinite(val)) {
      issues->push_back(std::string(what) + " coefficient not finite in row " +
                        std::to_string(row));
      return;
    }
  }
}

void check_bounds(const std::vector<double>& lo, const std::vector<double>& hi,
                  size_t count, const char* what,
                  std::vector<std::string>* issues) {
  if (lo.size() != count || hi.size() != count) {
    issues->push_back(std::string(what) + " bound vectors have wrong length");
    return;
  }
  for (size_t i = 0; i < count; ++i) {
    if (std::isnan(lo[i]) || std::isnan(hi[i])) {
      issues->push_back(std::string(what) + " bound is NaN at index " +
                        std::to_string(i));
      return;
    }
    if (lo[i] > hi[i]) {
      issues->push_back(std::string(what) + " bounds cross at index " +
                        std::to_string(i));
      return;
    }
  }
}

}  // namespace

std::vector<std::string> RobustLP::validate() const {
  std::vector<std::string> issues;
  if (n_delta <= 0 || n_x <= 0 || n_y < 0) {
    issues.push_back("dimensions must be positive (n_y may be zero)");
    return issues;
  }
  if (static_cast<int>(f.size()) != n_x) issues.push_back("f has wrong length");
  if (static_cast<int>(g.size()) != n_y) issues.push_back("g has wrong length");
  for (const double v : f) {
    if (!std::isfinite(v)) {
      issues.push_back("f has a non-finite entry");
      break;
    }
  }
  for (const double v : g) {
    if (!std::isfinite(v)) {
      issues.push_back("g has a non-finite entry");
      break;
    }
  }
  check_bounds(x_lower, x_upper, n_x, "x", &issues);
  check_bounds(y_lower, y_upper, n_y, "y", &issues);
  if (!x_integer.empty() && static_cast<int>(x_integer.size()) != n_x) {
    issues.push_back("x_integer has wrong length");
  }
  if (!y_integer.empty() && static_cast<int>(y_integer.size()) != n_y) {
    issues.push_back("y_integer has wrong length");
  }
  int r = 0;
  for (const UncertainConstraint& con : uncertain) {
    if (static_cast<int>(con.c_rows.size()) != n_delta) {
      issues.push_back("uncertain row " + std::to_string(r) +
                       " has wrong c_rows length");
    } else {
      for (const SparseVec& row : con.c_rows) {
        check_coeffs(row, n_x, "uncertain x", r, &issues);
      }
    }
    check_coeffs(con.d, n_y, "uncertain y", r, &issues);
    if (!std::isfinite(con.rhs)) {
      issues.push_back("uncertain row " + std::to_string(r) +
                       " rhs is not finite");
    }
    ++r;
  }
  r = 0;
  for (const DetRow& row : deterministic) {
    check_coeffs(row.x_coeffs, n_x, "deterministic x", r, &issues);
    check_coeffs(row.y_coeffs, n_y, "deterministic y", r, &issues);
    if (!std::isfinite(row.rhs)) {
      issues.push_back("deterministic row " + std::to_string(r) +
                       " rhs is not finite");
    }
    ++r;
  }
  return issues;
}

std::vector<std::string> RobustLP::validate(const SmoothSet& set) const {
  std::vector<std::string> issues = validate();
  if (set.dim() != n_delta) {
    issues.push_back("uncertainty set dimension differs from n_delta");
  }
  return issues;
}

PatternInfo sign_pattern(const UncertainConstraint& con,
                         const RobustLP& model) {
  // A component is certified only over nonnegative variables: a negative
  // lower bound lets the product flip sign regardless of the coefficient.
  int nonneg = 0, nonpos = 0;
  std::vector<char> is_nonneg(con.c_rows.size()), is_nonpos(con.c_rows.size());
  for (size_t j = 0; j < con.c_rows.size(); ++j) {
    bool up = true, down = true;
    for (const auto& [var, coeff] : con.c_rows[j]) {
      if (coeff == 0.0) continue;
      if (model.x_lower[var] < 0.0) {
        up = down = false;
        break;
      }
      (coeff > 0.0 ? down : up) = false;
    }
    is_nonneg[j] = up;
    is_nonpos[j] = down;
    nonneg += up;
    nonpos += down;
  }

  const int n = static_cast<int>(con.c_rows.size());
  PatternInfo info;
  if (nonneg == n) {
    info.kind = SignPattern::kAllNonneg;
  } else if (nonpos == n) {
    info.kind = SignPattern::kAllNonpos;
  } else if (nonpos == n - 1) {
    // The one uncertified-down component must be certified up.
    for (int j = 0; j < n; ++j) {
      if (!is_nonpos[j]) {
        if (is_nonneg[j]) {
          info.kind = SignPattern::kSingletonPos;
          info.singleton = j;
        }
        break;
      }
    }
  } else if (nonneg == n - 1) {
    for (int j = 0; j < n; ++j) {
      if (!is_nonneg[j]) {
        if (is_nonpos[j]) {
          info.kind = SignPattern::kSingletonNeg;
          info.singleton = j;
        }
        break;
      }
    }
  }
  return info;
}

}  // namespace smoothro
