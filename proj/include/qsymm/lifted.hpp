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

#include <vector>

#include "qsymm/generator.hpp"
#include "qsymm/operators.hpp"
#include "qsymm/permutation.hpp"

namespace qsymm {

/// Probability vector over the m! permutations, indexed by lexicographic
/// rank. Nonnegative and summing to one.
class LiftedWeights {
 public:
  /// Throws RangeError when the size is not m!, an entry is below -1e-12,
  /// or the entries do not sum to one within `sum_tol`.
  LiftedWeights(int m, std::vector<double> p, double sum_tol = 1e-12);

  /// Point mass on the identity permutation.
  static LiftedWeights delta_identity(int m);
  static LiftedWeights uniform(int m);

  int subsystems() const { return m_; }
  const std::vector<double>& values() const { return p_; }
  double operator[](long rank) const { return p_[rank]; }

 private:
  int m_;
  std::vector<double> p_;
};

struct LiftedTrajectory {
  std::vector<double> times;
  std::vector<LiftedWeights> weights;
  std::vector<double> divergence;  // D(p)
  std::vector<double> min_p;
  std::vector<double> max_p;
};

/// For each term k, the rank map pi -> k^-1 pi feeding
///   d/dt p_pi = sum_k alpha_k (p_{k^-1 pi} - p_pi).
/// The product is taken in the order under which pi -> U_pi is a
/// homomorphism, which with compose() reads k^-1 pi = pi o k^-1.
std::vector<std::vector<long>> lifted_index_maps(const UnitaryNoiseSpec& spec);

/// Right-hand side of the lifted rate equation at time t.
std::vector<double> lifted_rate(const UnitaryNoiseSpec& spec,
                                const std::vector<std::vector<long>>& maps,
                                const std::vector<double>& p, double t);

/// RK4 integration of the lifted dynamics on [0, T] with the same grid
/// rules as evolve(). Throws StepTooLarge when dt > 0.1 / (2 sum sup alpha)
/// and NormDrift when the weights stop summing to one within 1e-9.
LiftedTrajectory evolve_lifted(const UnitaryNoiseSpec& spec,
                               const LiftedWeights& p0, double T, double dt,
                               int snapshot_stride = 1);

/// Kullback-Leibler divergence to the uniform vector; 0 log 0 = 0.
double kl_to_uniform(const LiftedWeights& p);

/// -sum_k alpha_k K(p || p o k), the closed-form rate of kl_to_uniform along
/// the lifted dynamics. Returns -infinity when some relative entropy is
/// infinite (disjoint supports).
double kl_rate(const UnitaryNoiseSpec& spec, const LiftedWeights& p,
               double t = 0.0);

/// sum_pi p_pi U_pi rho0 U_pi^dagger.
ComplexMatrix reconstruct_state(const LiftedWeights& p,
                                const ComplexMatrix& rho0,
                                const Symmetrizer& sym);
ComplexMatrix reconstruct_state(const LiftedWeights& p,
                                const ComplexMatrix& rho0,
                                const NetworkLayout& layout);

}  // namespace qsymm
