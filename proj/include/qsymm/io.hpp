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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsymm/dynamics.hpp"
#include "qsymm/generator.hpp"
#include "qsymm/lifted.hpp"
#include "qsymm/operators.hpp"
#include "qsymm/permutation.hpp"
#include "qsymm/schedule.hpp"

namespace qsymm::io {

using Json = nlohmann::json;

/// Throws ConfigError naming the first key of `obj` not in `allowed`, or
/// when `obj` is not an object.
void require_keys(const Json& obj, const std::vector<std::string>& allowed,
                  const std::string& context);

// Matrices: {"dim": d, "entries": [[re, im], ...]} in row-major order.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// Accepts [re, ...] or [[re, im], ...].
ComplexVector vector_from_json(const Json& j);
Json vector_to_json(const ComplexVector& v);

// Permutations: 1-based images, e.g. [2, 1, 3].
Json permutation_to_json(const Permutation& p);
Permutation permutation_from_json(const Json& j);

Json schedule_to_json(const WeightSchedule& s);
WeightSchedule schedule_from_json(const Json& j);

Json layout_to_json(const NetworkLayout& layout);
NetworkLayout layout_from_json(const Json& j);

/// Parsed generator description:
///   {layout, terms: [{perm, schedule, neighborhood}], auto_terms?, local?}
/// `neighborhood` is a 0-based index into layout.neighborhoods;
/// `auto_terms` {rate, pairwise_only} adds one constant term per local
/// permutation; `local` {j, target_state} adds a stubborn subsystem.
struct GeneratorConfig {
  UnitaryNoiseSpec unitary;
  struct Local {
    int j = 1;
    ComplexVector target;
  };
  std::optional<Local> local;

  GeneratorHandle build() const;
};

GeneratorConfig generator_from_json(const Json& j);
Json generator_to_json(const GeneratorConfig& g);

/// Named presets or explicit matrices for initial states:
///   "maximally_mixed" | {"basis": [digits]} | {"product": [amplitudes]}
///   | {"random": seed} | {"matrix": {dim, entries}}
DensityMatrix initial_state_from_json(const Json& j, const NetworkLayout& layout);

/// Header t,trace_dev,min_eig,V,dVdt,dist_to_symm.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
/// Header t,D,min_p,max_p.
void write_lifted_csv(std::ostream& os, const LiftedTrajectory& traj);

/// Fixed 17-significant-digit formatting used by every CSV writer.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  /// Index of a column by name, or throws ConfigError.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(std::istream& is);

}  // namespace qsymm::io
