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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsymm/operators.hpp"
#include "qsymm/permutation.hpp"
#include "qsymm/schedule.hpp"

namespace qsymm {

/// One unitary noise channel: rate alpha_k(t) times (U X U^dagger - X).
struct UnitaryTerm {
  Permutation perm;
  WeightSchedule schedule;
  /// 0-based index into layout.neighborhoods() that licenses this term.
  int neighborhood = 0;
};

/// Generator built from weighted subsystem permutations,
///   L_U(X) = sum_k alpha_k(t) (U_k X U_k^dagger - X).
struct UnitaryNoiseSpec {
  NetworkLayout layout;
  std::vector<UnitaryTerm> terms;

  /// One constant-rate term per local permutation of the layout.
  static UnitaryNoiseSpec from_layout(const NetworkLayout& layout,
                                      double rate, bool pairwise_only = true);

  std::vector<Permutation> permutations() const;
  /// Permutations of the terms whose schedule is positive somewhere.
  std::vector<Permutation> active_permutations() const;
};

/// Generator in the general Lindblad form
///   -i[H, rho] + sum_k (L_k rho L_k^dagger - 1/2 {L_k^dagger L_k, rho}).
/// An empty Hamiltonian (0x0) means H = 0.
struct GeneralLindbladSpec {
  ComplexMatrix hamiltonian;
  std::vector<ComplexMatrix> noise_ops;
  /// Optional locality tags (1-based subsystem sets).
  std::optional<std::vector<int>> hamiltonian_sites;
  std::vector<std::optional<std::vector<int>>> noise_sites;

  /// Dimension of the operators, or 0 when the spec is empty.
  long dim() const;
};

ComplexMatrix apply_unitary_generator(const UnitaryNoiseSpec& spec,
                                      const ComplexMatrix& x, double t);

ComplexMatrix apply_general_generator(const GeneralLindbladSpec& spec,
                                      const ComplexMatrix& rho);

struct LocalityEntry {
  std::string label;
  bool pass = false;
  /// ||W T W^dagger - T||_F for a random unitary W outside the declared
  /// neighborhood.
  double residual = 0.0;
};

struct LocalityReport {
  std::vector<LocalityEntry> entries;
  bool all_pass() const;
};

/// Each term must commute with a random unitary supported on the complement
/// of its declared neighborhood.
LocalityReport validate_quasi_local(const UnitaryNoiseSpec& spec,
                                    std::uint64_t seed = 0x51a7e,
                                    double tol = default_tolerances().locality);
LocalityReport validate_quasi_local(const GeneralLindbladSpec& spec,
                                    const NetworkLayout& layout,
                                    std::uint64_t seed = 0x51a7e,
                                    double tol = default_tolerances().locality);

/// max_k ||X U_k - U_k X||_F over the terms of spec.
double commutant_residual(const UnitaryNoiseSpec& spec, const ComplexMatrix& x);

/// Immutable evaluator for L(rho, t) = L_U(rho, t) + L_D(rho), where L_D is
/// a general Lindblad part on the full network space. Permutation index maps
/// and L_k^dagger L_k are precomputed once.
class GeneratorHandle {
 public:
  static GeneratorHandle zero(const NetworkLayout& layout);
  explicit GeneratorHandle(UnitaryNoiseSpec unitary);
  /// `general` must act on the full network space.
  GeneratorHandle(UnitaryNoiseSpec unitary, GeneralLindbladSpec general);

  const NetworkLayout& layout() const { return unitary_.layout; }
  const UnitaryNoiseSpec& unitary_spec() const { return unitary_; }
  const GeneralLindbladSpec& general_spec() const { return general_; }
  bool has_general_part() const;

  std::vector<double> rates_at(double t) const;
  ComplexMatrix apply(const ComplexMatrix& rho, double t) const;
  /// Evaluates with explicit per-term rates (one per unitary term).
  ComplexMatrix apply_with_rates(const ComplexMatrix& rho,
                                 const std::vector<double>& rates) const;
  /// Only the unitary-noise part at the given rates.
  ComplexMatrix apply_unitary_part(const ComplexMatrix& rho,
                                   const std::vector<double>& rates) const;

  const std::vector<PermutationUnitary>& unitaries() const {
    return unitaries_;
  }

  /// Lambda = 2 sum_k sup alpha_k + 2 ||H|| + sum_k ||L_k||^2.
  double stability_bound() const;
  /// Union of schedule change times inside [t0, t1].
  std::vector<double> change_times(double t0, double t1) const;

 private:
  UnitaryNoiseSpec unitary_;
  GeneralLindbladSpec general_;
  std::vector<PermutationUnitary> unitaries_;
  std::vector<ComplexMatrix> noise_adjoints_;
  ComplexMatrix damping_;  // 1/2 sum_k L_k^dagger L_k + i H
};

/// L_tot = L_U + L^(j) (x) I, with the local operators of `local` (acting on
/// one subsystem) embedded at subsystem j.
GeneratorHandle build_combined_generator(const UnitaryNoiseSpec& u_spec,
                                         const GeneralLindbladSpec& local,
                                         int j);

/// Matrix S with vec(L(X)) = S vec(X) (column-stacking vec), at time t.
/// Intended for small networks only.
ComplexMatrix materialize_superoperator(const GeneratorHandle& gen,
                                        double t = 0.0);

}  // namespace qsymm
