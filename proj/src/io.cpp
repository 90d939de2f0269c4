// Copyright 2026 The qsymm Authors
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

#include "qsymm/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qsymm/applications.hpp"
#include "qsymm/errors.hpp"
#include "qsymm/random.hpp"

namespace qsymm::io {

namespace {

const Json& field(const Json& obj, const std::string& key,
                  const std::string& context) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError(context + ": missing key '" + key + "'");
  }
  return obj.at(key);
}

double as_double(const Json& j, const std::string& context) {
  if (!j.is_number()) throw ConfigError(context + ": expected a number");
  return j.get<double>();
}

long as_integer(const Json& j, const std::string& context) {
  if (!j.is_number_integer()) throw ConfigError(context + ": expected an integer");
  return j.get<long>();
}

std::vector<double> as_double_array(const Json& j, const std::string& context) {
  if (!j.is_array()) throw ConfigError(context + ": expected an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(as_double(v, context));
  return out;
}

std::vector<int> as_int_array(const Json& j, const std::string& context) {
  if (!j.is_array()) throw ConfigError(context + ": expected an array");
  std::vector<int> out;
  for (const auto& v : j) out.push_back(static_cast<int>(as_integer(v, context)));
  return out;
}

Complex as_complex(const Json& j, const std::string& context) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError(context + ": expected a number or [re, im]");
}

}  // namespace

void require_keys(const Json& obj, const std::vector<std::string>& allowed,
                  const std::string& context) {
  if (!obj.is_object()) throw ConfigError(context + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(context + ": unknown key '" + key + "'");
    }
  }
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      entries.push_back({m(i, j).real(), m(i, j).imag()});
    }
  }
  return Json{{"dim", m.rows()}, {"entries", entries}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  require_keys(j, {"dim", "entries"}, "matrix");
  const long d = as_integer(field(j, "dim", "matrix"), "matrix.dim");
  const Json& entries = field(j, "entries", "matrix");
  if (d < 1 || !entries.is_array() || static_cast<long>(entries.size()) != d * d) {
    throw ConfigError("matrix: entries must hold dim*dim values");
  }
  ComplexMatrix m(d, d);
  for (long k = 0; k < d * d; ++k) {
    m(k / d, k % d) = as_complex(entries[k], "matrix.entries");
  }
  return m;
}

ComplexVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("vector: expected a nonempty array");
  ComplexVector v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) v(k) = as_complex(j[k], "vector");
  return v;
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back({v(k).real(), v(k).imag()});
  return out;
}

Json permutation_to_json(const Permutation& p) { return Json(p.image()); }

Permutation permutation_from_json(const Json& j) {
  try {
    return Permutation(as_int_array(j, "perm"));
  } catch (const RangeError& e) {
    throw ConfigError(std::string("perm: ") + e.what());
  }
}

Json schedule_to_json(const WeightSchedule& s) {
  Json out{{"breakpoints", s.breakpoints()}, {"values", s.values()}};
  if (s.period() > 0.0) out["period"] = s.period();
  return out;
}

WeightSchedule schedule_from_json(const Json& j) {
  if (j.is_number()) return WeightSchedule::constant(as_double(j, "schedule"));
  require_keys(j, {"breakpoints", "values", "period"}, "schedule");
  std::vector<double> bps;
  if (j.contains("breakpoints")) bps = as_double_array(j["breakpoints"], "schedule.breakpoints");
  const auto values = as_double_array(field(j, "values", "schedule"), "schedule.values");
  const double period = j.contains("period") ? as_double(j["period"], "schedule.period") : 0.0;
  return WeightSchedule(std::move(bps), values, period);
}

Json layout_to_json(const NetworkLayout& layout) {
  return Json{{"m", layout.subsystems()},
              {"n", layout.local_dim()},
              {"neighborhoods", layout.neighborhoods()}};
}

NetworkLayout layout_from_json(const Json& j) {
  require_keys(j, {"m", "n", "neighborhoods", "graph"}, "layout");
  const int m = static_cast<int>(as_integer(field(j, "m", "layout"), "layout.m"));
  const int n = j.contains("n") ? static_cast<int>(as_integer(j["n"], "layout.n")) : 2;
  if (j.contains("graph") && j.contains("neighborhoods")) {
    throw ConfigError("layout: give either 'graph' or 'neighborhoods'");
  }
  try {
    if (j.contains("graph")) {
      if (!j["graph"].is_string()) throw ConfigError("layout.graph: expected a string");
      const std::string g = j["graph"];
      if (g == "path") return NetworkLayout::path(m, n);
      if (g == "complete") return NetworkLayout::complete(m, n);
      throw ConfigError("layout.graph: unknown graph '" + g + "'");
    }
    const Json& hoods = field(j, "neighborhoods", "layout");
    if (!hoods.is_array()) throw ConfigError("layout.neighborhoods: expected an array");
    std::vector<std::vector<int>> parsed;
    for (const auto& h : hoods) parsed.push_back(as_int_array(h, "layout.neighborhoods"));
    return NetworkLayout(m, n, std::move(parsed));
  } catch (const RangeError& e) {
    throw ConfigError(std::string("layout: ") + e.what());
  }
}

GeneratorHandle GeneratorConfig::build() const {
  if (!local) return GeneratorHandle(unitary);
  return build_combined_generator(unitary, build_local_stabilizer(local->target),
                                  local->j);
}

GeneratorConfig generator_from_json(const Json& j) {
  require_keys(j, {"layout", "terms", "auto_terms", "local"}, "generator");
  const NetworkLayout layout = layout_from_json(field(j, "layout", "generator"));
  GeneratorConfig cfg{UnitaryNoiseSpec{layout, {}}, std::nullopt};
  if (j.contains("auto_terms")) {
    const Json& a = j["auto_terms"];
    require_keys(a, {"rate", "pairwise_only"}, "generator.auto_terms");
    const double rate = a.contains("rate") ? as_double(a["rate"], "auto_terms.rate") : 1.0;
    bool pairwise = true;
    if (a.contains("pairwise_only")) {
      if (!a["pairwise_only"].is_boolean()) {
        throw ConfigError("auto_terms.pairwise_only: expected a boolean");
      }
      pairwise = a["pairwise_only"].get<bool>();
    }
    if (!(rate >= 0.0)) throw ConfigError("auto_terms.rate must be nonnegative");
    cfg.unitary = UnitaryNoiseSpec::from_layout(layout, rate, pairwise);
  }
  if (j.contains("terms")) {
    if (!j["terms"].is_array()) throw ConfigError("generator.terms: expected an array");
    for (const auto& t : j["terms"]) {
      require_keys(t, {"perm", "schedule", "neighborhood"}, "generator.terms[]");
      Permutation perm = permutation_from_json(field(t, "perm", "term"));
      if (perm.size() != layout.subsystems()) {
        throw ConfigError("term permutation size differs from layout.m");
      }
      WeightSchedule sched = t.contains("schedule") ? schedule_from_json(t["schedule"])
                                                    : WeightSchedule::constant(1.0);
      const int hood = static_cast<int>(
          as_integer(field(t, "neighborhood", "term"), "term.neighborhood"));
      if (hood < 0 || hood >= static_cast<int>(layout.neighborhoods().size())) {
        throw ConfigError("term.neighborhood index out of range");
      }
      cfg.unitary.terms.push_back({std::move(perm), std::move(sched), hood});
    }
  }
  if (j.contains("local")) {
    const Json& l = j["local"];
    require_keys(l, {"j", "target_state"}, "generator.local");
    GeneratorConfig::Local local;
    local.j = static_cast<int>(as_integer(field(l, "j", "local"), "local.j"));
    local.target = vector_from_json(field(l, "target_state", "local"));
    if (local.j < 1 || local.j > layout.subsystems()) {
      throw ConfigError("local.j out of range");
    }
    if (local.target.size() != layout.local_dim()) {
      throw ConfigError("local.target_state has the wrong dimension");
    }
    if (std::abs(local.target.norm() - 1.0) > 1e-12) {
      throw ConfigError("local.target_state is not normalized");
    }
    cfg.local = std::move(local);
  }
  return cfg;
}

Json generator_to_json(const GeneratorConfig& g) {
  Json terms = Json::array();
  for (const auto& t : g.unitary.terms) {
    terms.push_back({{"perm", permutation_to_json(t.perm)},
                     {"schedule", schedule_to_json(t.schedule)},
                     {"neighborhood", t.neighborhood}});
  }
  Json out{{"layout", layout_to_json(g.unitary.layout)}, {"terms", terms}};
  if (g.local) {
    out["local"] = {{"j", g.local->j}, {"target_state", vector_to_json(g.local->target)}};
  }
  return out;
}

DensityMatrix initial_state_from_json(const Json& j, const NetworkLayout& layout) {
  if (j.is_string()) {
    if (j.get<std::string>() == "maximally_mixed") {
      return DensityMatrix::maximally_mixed(layout);
    }
    throw ConfigError("initial_state: unknown preset '" + j.get<std::string>() + "'");
  }
  require_keys(j, {"basis", "product", "random", "matrix"}, "initial_state");
  if (j.size() != 1) throw ConfigError("initial_state: give exactly one form");
  try {
    if (j.contains("basis")) {
      return DensityMatrix::basis_state(layout, as_int_array(j["basis"], "initial_state.basis"));
    }
    if (j.contains("product")) {
      const ComplexVector psi = vector_from_json(j["product"]);
      return DensityMatrix::product_pure(layout, psi);
    }
    if (j.contains("random")) {
      Rng rng(static_cast<std::uint64_t>(as_integer(j["random"], "initial_state.random")));
      return DensityMatrix::from(random_density_matrix(layout.dim(), rng));
    }
    const ComplexMatrix m = matrix_from_json(j["matrix"]);
    if (m.rows() != layout.dim()) throw ConfigError("initial_state.matrix has the wrong dimension");
    return DensityMatrix::from(m);
  } catch (const RangeError& e) {
    throw ConfigError(std::string("initial_state: ") + e.what());
  } catch (const DimensionMismatch& e) {
    throw ConfigError(std::string("initial_state: ") + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,trace_dev,min_eig,V,dVdt,dist_to_symm\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& d = traj.diagnostics[i];
    os << format_double(traj.times[i]) << ',' << format_double(d.trace_dev) << ','
       << format_double(d.min_eig) << ',' << format_double(d.V) << ','
       << format_double(d.dVdt) << ',' << format_double(d.dist_to_symm) << '\n';
  }
}

void write_lifted_csv(std::ostream& os, const LiftedTrajectory& traj) {
  os << "t,D,min_p,max_p\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    os << format_double(traj.times[i]) << ',' << format_double(traj.divergence[i])
       << ',' << format_double(traj.min_p[i]) << ',' << format_double(traj.max_p[i])
       << '\n';
  }
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ConfigError("csv: missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("csv: empty input");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ConfigError("csv line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (row.size() != table.header.size()) {
      throw ConfigError("csv line " + std::to_string(lineno) + ": wrong column count");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace qsymm::io
