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

#include <optional>
#include <vector>

#include "qsymm/generator.hpp"
#include "qsymm/operators.hpp"
#include "qsymm/permutation.hpp"

namespace qsymm {

/// Per-snapshot health and convergence measures.
struct Diagnostics {
  double trace_dev = 0.0;     // |Tr rho - 1|
  double min_eig = 0.0;       // smallest eigenvalue of the Hermitian part
  double V = 0.0;             // Hilbert-Schmidt distance to consensus
  double dVdt = 0.0;          // analytic rate of V
  double dist_to_symm = 0.0;  // ||rho - Ebar(rho0)||_F
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  std::vector<Diagnostics> diagnostics;
  /// First of two consecutive snapshots within the convergence threshold.
  std::optional<double> converged_at;

  bool converged() const { return converged_at.has_value(); }
  const ComplexMatrix& final_state() const { return states.back(); }
};

struct EvolveOptions {
  /// Snapshot every `snapshot_stride` steps; the final step is always kept.
  int snapshot_stride = 1;
  Tolerances tol = default_tolerances();
};

/// Largest step allowed by the stability rule dt <= 0.1 / Lambda.
double max_stable_step(const GeneratorHandle& gen);

/// Fixed-step classical RK4 for d rho/dt = L(rho, t) on [0, T].
///
/// T must be a whole number of steps and every schedule change time must
/// fall on the step grid (ConfigError otherwise). Rates are frozen over each
/// step. Throws StepTooLarge when dt violates the stability rule and
/// InvariantBreach when the trace or positivity drifts beyond the breach
/// tolerances.
Trajectory evolve(const GeneratorHandle& gen, const DensityMatrix& rho0,
                  double T, double dt, const EvolveOptions& options = {});

/// V(rho) = 1/2 Tr((rho - Ebar(rho))^2).
double lyapunov_V(const ComplexMatrix& rho, const Symmetrizer& sym);
double lyapunov_V(const ComplexMatrix& rho, const NetworkLayout& layout);

/// Closed-form dV/dt along L_U:
///   -sum_k alpha_k(t) Tr((rho - U_k rho U_k^dagger)^2) / 2.
double lyapunov_V_rate(const UnitaryNoiseSpec& spec, const ComplexMatrix& rho,
                       double t);

/// dV/dt = Tr((rho - Ebar rho)(L rho - Ebar L rho)) for an arbitrary
/// generator; used when a general Lindblad part is present.
double lyapunov_V_rate_general(const GeneratorHandle& gen,
                               const ComplexMatrix& rho, double t,
                               const Symmetrizer& sym);

struct ConnectivityReport {
  bool pass = true;
  int windows_checked = 0;
  /// Start of the first window whose active-edge graph is disconnected.
  std::optional<double> failing_window;
  /// Connected components (1-based labels) of that window's graph.
  std::vector<std::vector<int>> components;
};

/// Persistent-connectivity condition for time-varying pairwise swaps: for
/// every window [t, t + window] starting at 0 or at a schedule change time
/// with t + window <= horizon, the edges whose rate integral over the window
/// exceeds `threshold` must connect all subsystems. Throws ConfigError when
/// a term is not a transposition.
ConnectivityReport check_persistent_connectivity(const UnitaryNoiseSpec& spec,
                                                 double window,
                                                 double threshold,
                                                 double horizon);

}  // namespace qsymm
