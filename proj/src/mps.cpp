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

#include "smoothro/mps.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace smoothro::lp {

namespace {

std::string row_name(int r) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "R%07d", r);
  return buf;
}

std::string var_name(int j) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "X%07d", j);
  return buf;
}

std::string num(double v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void field_pair(std::ostream& out, const std::string& a, const std::string& b,
                const std::string& c, const std::string& d,
                const std::string& e) {
  // Classic fixed MPS field positions: 2-3, 5-12, 15-22, 25-36, 40-47, 50-61.
  char line[80];
  std::snprintf(line, sizeof(line), " %-2s %-8s  %-8s  %-12s   %-8s  %-12s",
                a.c_str(), b.c_str(), c.c_str(), d.c_str(), e.c_str(), "");
  std::string s(line);
  while (!s.empty() && s.back() == ' ') s.pop_back();
  out << s << "\n";
}

}  // namespace

void write_mps(const LinearProgram& lp, std::ostream& out,
               const std::string& name) {
  out << "NAME          " << name << "\n";
  out << "ROWS\n";
  out << " N  COST\n";
  for (int r = 0; r < lp.num_rows(); ++r) {
    char rel = 'L';
    if (lp.rows[r].rel == Relation::kGreaterEqual) rel = 'G';
    if (lp.rows[r].rel == Relation::kEqual) rel = 'E';
    out << " " << rel << "  " << row_name(r) << "\n";
  }

  // Column-major view of the rows.
  std::vector<std::vector<std::pair<int, double>>> cols(lp.num_vars());
  for (int r = 0; r < lp.num_rows(); ++r) {
    for (const auto& [j, v] : lp.rows[r].coeffs) cols[j].push_back({r, v});
  }
  out << "COLUMNS\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.objective[j] != 0.0) {
      field_pair(out, "", var_name(j), "COST", num(lp.objective[j]), "");
    }
    for (const auto& [r, v] : cols[j]) {
      field_pair(out, "", var_name(j), row_name(r), num(v), "");
    }
    if (lp.objective[j] == 0.0 && cols[j].empty()) {
      field_pair(out, "", var_name(j), "COST", "0.0", "");
    }
  }
  out << "RHS\n";
  for (int r = 0; r < lp.num_rows(); ++r) {
    if (lp.rows[r].rhs != 0.0) {
      field_pair(out, "", "RHS", row_name(r), num(lp.rows[r].rhs), "");
    }
  }
  out << "BOUNDS\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const double lb = lp.lower[j];
    const double ub = lp.upper[j];
    if (lb == 0.0 && ub == kInf) continue;  // MPS default
    if (lb == ub) {
      field_pair(out, "FX", "BND", var_name(j), num(lb), "");
      continue;
    }
    if (lb == -kInf && ub == kInf) {
      field_pair(out, "FR", "BND", var_name(j), "", "");
      continue;
    }
    if (lb == -kInf) {
      field_pair(out, "MI", "BND", var_name(j), "", "");
    } else if (lb != 0.0) {
      field_pair(out, "LO", "BND", var_name(j), num(lb), "");
    }
    if (ub < kInf) {
      field_pair(out, "UP", "BND", var_name(j), num(ub), "");
    }
  }
  out << "ENDATA\n";
}

LinearProgram read_mps(std::istream& in) {
  LinearProgram lp;
  std::map<std::string, int> row_of;
  std::map<std::string, int> var_of;
  std::string obj_row;
  enum Section { kNone, kRows, kColumns, kRhs, kBounds, kDone };
  Section section = kNone;

  auto var_index = [&](const std::string& name) {
    auto it = var_of.find(name);
    if (it != var_of.end()) return it->second;
    const int j = lp.add_var(0.0);
    var_of[name] = j;
    return j;
  };

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ss(line);
    if (line[0] != ' ') {
      std::string keyword;
      ss >> keyword;
      if (keyword == "NAME") continue;
      if (keyword == "ROWS") { section = kRows; continue; }
      if (keyword == "COLUMNS") { section = kColumns; continue; }
      if (keyword == "RHS") { section = kRhs; continue; }
      if (keyword == "RANGES") {
        throw std::runtime_error("mps: RANGES not supported");
      }
      if (keyword == "BOUNDS") { section = kBounds; continue; }
      if (keyword == "ENDATA") { section = kDone; break; }
      throw std::runtime_error("mps: unknown section " + keyword);
    }
    switch (section) {
      case kRows: {
        std::string type, name;
        ss >> type >> name;
        if (type == "N") {
          if (obj_row.empty()) obj_row = name;
          continue;
        }
        Relation rel;
        if (type == "L") rel = Relation::kLessEqual;
        else if (type == "G") rel = Relation::kGreaterEqual;
        else if (type == "E") rel = Relation::kEqual;
        else throw std::runtime_error("mps: unknown row type " + type);
        row_of[name] = lp.num_rows();
        lp.add_row(rel, 0.0, {});
        break;
      }
      case kColumns: {
        std::string col, rname;
        double value;
        ss >> col;
        const int j = var_index(col);
        while (ss >> rname >> value) {
          if (rname == obj_row) {
            lp.objective[j] = value;
          } else {
            auto it = row_of.find(rname);
            if (it == row_of.end()) {
              throw std::runtime_error("mps: unknown row " + rname);
            }
            lp.rows[it->second].coeffs.push_back({j, value});
          }
        }
        break;
      }
      case kRhs: {
        std::string setname, rname;
        double value;
        ss >> setname;
        while (ss >> rname >> value) {
          auto it = row_of.find(rname);
          if (it == row_of.end()) {
            throw std::runtime_error("mps: unknown row " + rname);
          }
          lp.rows[it->second].rhs = value;
        }
        break;
      }
      case kBounds: {
        std::string type, setname, vname;
        ss >> type >> setname >> vname;
        auto it = var_of.find(vname);
        if (it == var_of.end()) {
          throw std::runtime_error("mps: unknown variable " + vname);
        }
        const int j = it->second;
        double value = 0.0;
        if (type == "LO" || type == "UP" || type == "FX") ss >> value;
        if (type == "LO") lp.lower[j] = value;
        else if (type == "UP") lp.upper[j] = value;
        else if (type == "FX") { lp.lower[j] = value; lp.upper[j] = value; }
        else if (type == "FR") { lp.lower[j] = -kInf; lp.upper[j] = kInf; }
        else if (type == "MI") lp.lower[j] = -kInf;
        else if (type == "PL") lp.upper[j] = kInf;
        else throw std::runtime_error("mps: unknown bound type " + type);
        break;
      }
      default:
        throw std::runtime_error("mps: data line outside any section");
    }
  }
  for (auto& row : lp.rows) {
    std::sort(row.coeffs.begin(), row.coeffs.end());
  }
  return lp;
}

}  // namespace smoothro::lp
