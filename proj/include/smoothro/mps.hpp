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

#ifndef SMOOTHRO_MPS_HPP_
#define SMOOTHRO_MPS_HPP_

#include <iosfwd>
#include <string>

#include "smoothro/lp.hpp"

namespace smoothro::lp {

/// Fixed-format MPS with generated names (Rxxxxxxx, Xxxxxxxx). Values carry
/// six significant digits, which is what the 12-character numeric field
/// holds; intended for cross-checks against external solvers, not as a
/// lossless archive (the JSON form is exact).
void write_mps(const LinearProgram& lp, std::ostream& out,
               const std::string& name = "SMOOTHRO");

/// Parses the subset written by write_mps: N/L/G/E rows, COLUMNS, RHS and
/// LO/UP/FX/FR/MI/PL bounds. Throws std::runtime_error on anything else.
LinearProgram read_mps(std::istream& in);

}  // namespace smoothro::lp

#endif  // SMOOTHRO_MPS_HPP_
