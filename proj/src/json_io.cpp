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

#include "smoothro/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace smoothro {

namespace {

Json bound_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
  return Json(v);
}

double bound_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::runtime_error("json: bad bound string '" + s + "'");
  }
  return j.get<double>();
}

Json bounds_to_json(const std::vector<double>& v) {
  Json arr = Json::array();
  for (double x : v) arr.push_back(bound_to_json(x));
  return arr;
}

std::vector<double> bounds_from_json(const Json& j) {
  std::vector<double> out;
  for (const Json& x : j) out.push_back(bound_from_json(x));
  return out;
}

Json sparse_to_json(const SparseVec& v) {
  Json arr = Json::array();
  for (const auto& [idx, val] : v) arr.push_back(Json::array({idx, val}));
  return arr;
}

SparseVec sparse_from_json(const Json& j) {
  SparseVec out;
  for (const Json& e : j) {
    out.emplace_back(e.at(0).get<int>(), e.at(1).get<double>());
  }
  return out;
}

void check_format(const Json& j, const std::string& tag, int version) {
  if (!j.is_object() || j.value("format", "") != tag) {
    throw std::runtime_error("json: expected format '" + tag + "'");
  }
  if (j.value("version", 0) != version) {
    throw std::runtime_error("json: unsupported version of '" + tag + "'");
  }
}

}  // namespace

Json graph_to_json(const UncertaintyGraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges) {
    edges.push_back(Json{{"i", e.i}, {"j", e.j}, {"gamma", e.gamma}});
  }
  return Json{{"n", g.n},
              {"nominal", g.nominal},
              {"node_radii", g.node_radii},
              {"edges", edges}};
}

UncertaintyGraph graph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n")) {
    throw std::runtime_error("json: expected an uncertainty-graph object");
  }
  UncertaintyGraph g;
  g.n = j.at("n").get<int>();
  g.nominal = j.at("nominal").get<std::vector<double>>();
  g.node_radii = j.at("node_radii").get<std::vector<double>>();
  for (const Json& e : j.at("edges")) {
    g.edges.push_back({e.at("i").get<int>(), e.at("j").get<int>(),
                       e.at("gamma").get<double>()});
  }
  g.validate_and_canonicalize();
  return g;
}

Json robust_lp_to_json(const RobustLP& model) {
  Json uncertain = Json::array();
  for (const UncertainConstraint& con : model.uncertain) {
    Json c_rows = Json::array();
    for (const SparseVec& row : con.c_rows) c_rows.push_back(sparse_to_json(row));
    uncertain.push_back(Json{{"c_rows", c_rows},
                             {"d", sparse_to_json(con.d)},
                             {"rhs", con.rhs}});
  }
  Json deterministic = Json::array();
  for (const RobustLP::DetRow& row : model.deterministic) {
    deterministic.push_back(Json{{"x", sparse_to_json(row.x_coeffs)},
                                 {"y", sparse_to_json(row.y_coeffs)},
                                 {"rhs", row.rhs}});
  }
  Json out{{"format", "robust-lp"},
           {"version", 1},
           {"n_delta", model.n_delta},
           {"n_x", model.n_x},
           {"n_y", model.n_y},
           {"f", model.f},
           {"g", model.g},
           {"x_lower", bounds_to_json(model.x_lower)},
           {"x_upper", bounds_to_json(model.x_upper)},
           {"y_lower", bounds_to_json(model.y_lower)},
           {"y_upper", bounds_to_json(model.y_upper)},
           {"uncertain", uncertain},
           {"deterministic", deterministic}};
  if (!model.x_integer.empty()) out["x_integer"] = model.x_integer;
  if (!model.y_integer.empty()) out["y_integer"] = model.y_integer;
  return out;
}

RobustLP robust_lp_from_json(const Json& j) {
  check_format(j, "robust-lp", 1);
  RobustLP model;
  model.n_delta = j.at("n_delta").get<int>();
  model.n_x = j.at("n_x").get<int>();
  model.n_y = j.at("n_y").get<int>();
  model.f = j.at("f").get<std::vector<double>>();
  model.g = j.at("g").get<std::vector<double>>();
  model.x_lower = bounds_from_json(j.at("x_lower"));
  model.x_upper = bounds_from_json(j.at("x_upper"));
  model.y_lower = bounds_from_json(j.at("y_lower"));
  model.y_upper = bounds_from_json(j.at("y_upper"));
  for (const Json& c : j.at("uncertain")) {
    UncertainConstraint con;
    for (const Json& row : c.at("c_rows")) {
      con.c_rows.push_back(sparse_from_json(row));
    }
    con.d = sparse_from_json(c.at("d"));
    con.rhs = c.at("rhs").get<double>();
    model.uncertain.push_back(std::move(con));
  }
  for (const Json& r : j.at("deterministic")) {
    RobustLP::DetRow row;
    row.x_coeffs = sparse_from_json(r.at("x"));
    row.y_coeffs = sparse_from_json(r.at("y"));
    row.rhs = r.at("rhs").get<double>();
    model.deterministic.push_back(std::move(row));
  }
  if (j.contains("x_integer")) {
    model.x_integer = j.at("x_integer").get<std::vector<bool>>();
  }
  if (j.contains("y_integer")) {
    model.y_integer = j.at("y_integer").get<std::vector<bool>>();
  }
  const std::vector<std::string> issues = model.validate();
  if (!issues.empty()) {
    throw std::runtime_error("json: malformed robust-lp: " + issues.front());
  }
  return model;
}

namespace {

const char* relation_tag(lp::Relation rel) {
  switch (rel) {
    case lp::Relation::kLessEqual: return "<=";
    case lp::Relation::kGreaterEqual: return ">=";
    case lp::Relation::kEqual: return "=";
  }
  throw std::logic_error("relation_tag: bad relation");
}

lp::Relation relation_from_tag(const std::string& tag) {
  if (tag == "<=") return lp::Relation::kLessEqual;
  if (tag == ">=") return lp::Relation::kGreaterEqual;
  if (tag == "=") return lp::Relation::kEqual;
  throw std::runtime_error("json: bad relation '" + tag + "'");
}

}  // namespace

Json lp_to_json(const lp::LinearProgram& prog) {
  Json rows = Json::array();
  for (const lp::Row& row : prog.rows) {
    rows.push_back(Json{{"coeffs", sparse_to_json(row.coeffs)},
                        {"rel", relation_tag(row.rel)},
                        {"rhs", row.rhs}});
  }
  return Json{{"format", "linear-program"},
              {"version", 1},
              {"objective", prog.objective},
              {"lower", bounds_to_json(prog.lower)},
              {"upper", bounds_to_json(prog.upper)},
              {"rows", rows}};
}

lp::LinearProgram lp_from_json(const Json& j) {
  check_format(j, "linear-program", 1);
  lp::LinearProgram prog;
  prog.objective = j.at("objective").get<std::vector<double>>();
  prog.lower = bounds_from_json(j.at("lower"));
  prog.upper = bounds_from_json(j.at("upper"));
  if (prog.lower.size() != prog.objective.size() ||
      prog.upper.size() != prog.objective.size()) {
    throw std::runtime_error("json: linear program bound lengths");
  }
  for (const Json& r : j.at("rows")) {
    lp::Row row;
    row.coeffs = sparse_from_json(r.at("coeffs"));
    row.rel = relation_from_tag(r.at("rel").get<std::string>());
    row.rhs = r.at("rhs").get<double>();
    for (const auto& [var, val] : row.coeffs) {
      (void)val;
      if (var < 0 || var >= prog.num_vars()) {
        throw std::runtime_error("json: row references unknown variable");
      }
    }
    prog.rows.push_back(std::move(row));
  }
  return prog;
}

Json stats_to_json(const SolveStats& stats) {
  return Json{{"method", stats.method},
              {"status", lp::to_string(stats.status)},
              {"objective", stats.objective},
              {"x", stats.x},
              {"y", stats.y},
              {"lp_iterations", stats.lp_iterations},
              {"rounds", stats.rounds},
              {"cuts_added", stats.cuts_added},
              {"vars_start", stats.vars_start},
              {"vars_generated", stats.vars_generated},
              {"vars_full", stats.vars_full},
              {"lp_rows", stats.lp_rows},
              {"lp_vars", stats.lp_vars},
              {"seconds", stats.seconds}};
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        size_t used = 0;
        row.push_back(std::stod(field, &used));
        while (used < field.size() &&
               (field[used] == ' ' || field[used] == '\r')) {
          ++used;
        }
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw std::runtime_error("csv: bad field '" + field + "' in " + path);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("csv: ragged rows in " + path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("csv: no data in " + path);
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(std::numeric_limits<double>::max_digits10);
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << m(r, c);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace smoothro
