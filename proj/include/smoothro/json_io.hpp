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

#ifndef SMOOTHRO_JSON_IO_HPP_
#define SMOOTHRO_JSON_IO_HPP_

#include <Eigen/Dense>
#include <string>

#include "json.hpp"
#include "smoothro/lp.hpp"
#include "smoothro/model.hpp"
#include "smoothro/sets.hpp"
#include "smoothro/solver.hpp"

namespace smoothro {

using Json = nlohmann::json;

// All formats are versioned objects with a "format" tag. Infinite bounds are
// encoded as the strings "inf" / "-inf" (JSON numbers cannot carry them);
// everything else round-trips exactly.

Json graph_to_json(const UncertaintyGraph& g);
UncertaintyGraph graph_from_json(const Json& j);

Json robust_lp_to_json(const RobustLP& model);
RobustLP robust_lp_from_json(const Json& j);

Json lp_to_json(const lp::LinearProgram& prog);
lp::LinearProgram lp_from_json(const Json& j);

/// One-way: solver run summary for reports and the command line tool.
Json stats_to_json(const SolveStats& stats);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

/// Plain numeric CSV, no header. Throws std::runtime_error on ragged rows
/// or unparsable fields. Writing uses max_digits10 so values round-trip.
Eigen::MatrixXd read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m);

}  // namespace smoothro

#endif  // SMOOTHRO_JSON_IO_HPP_
