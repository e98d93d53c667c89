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

#ifndef SMOOTHRO_MODEL_HPP_
#define SMOOTHRO_MODEL_HPP_

#include <string>
#include <utility>
#include <vector>

#include "smoothro/sets.hpp"

namespace smoothro {

using SparseVec = std::vector<std::pair<int, double>>;

/// One robust row: delta' C x + d' y <= rhs must hold for every delta in
/// the uncertainty set. C is stored by delta-component: c_rows[j] holds the
/// x-coefficients multiplying delta_j.
struct UncertainConstraint {
  std::vector<SparseVec> c_rows;
  SparseVec d;
  double rhs = 0.0;
};

/// min f'x + g'y subject to the uncertain constraints, deterministic rows
/// F x + H y <= h, and variable bounds (lower defaults to 0; use -inf for
/// free variables, which excludes the variable from sign-pattern
/// certification).
struct RobustLP {
  int n_delta = 0;
  int n_x = 0;
  int n_y = 0;
  std::vector<double> f, g;
  std::vector<double> x_lower, x_upper;
  std::vector<double> y_lower, y_upper;
  // Integrality is representable but unsupported: every solve entry point
  // rejects models with any flag set. Empty means all-continuous.
  std::vector<bool> x_integer, y_integer;
  std::vector<UncertainConstraint> uncertain;

  struct DetRow {
    SparseVec x_coeffs;
    SparseVec y_coeffs;
    double rhs = 0.0;
  };
  std::vector<DetRow> deterministic;

  /// Structural issues as human-readable strings; empty means well formed.
  std::vector<std::string> validate() const;
  /// validate() plus dimension agreement with the set.
  std::vector<std::string> validate(const SmoothSet& set) const;
};

/// Certified sign of each (C x)_j over the feasible box. A component is
/// nonnegative when every coefficient is >= 0 and every referenced variable
/// has a nonnegative lower bound (mutatis mutandis nonpositive: coefficients
/// <= 0, still over nonnegative variables).
enum class SignPattern {
  kAllNonneg,     // every component certified >= 0
  kAllNonpos,     // every component certified <= 0
  kSingletonPos,  // exactly one component possibly positive, rest <= 0
  kSingletonNeg,  // exactly one component possibly negative, rest >= 0
  kMixed,
};

struct PatternInfo {
  SignPattern kind = SignPattern::kMixed;
  int singleton = -1;  // component index for the singleton kinds
};

PatternInfo sign_pattern(const UncertainConstraint& con, const RobustLP& model);

}  // namespace smoothro

#endif  // SMOOTHRO_MODEL_HPP_
