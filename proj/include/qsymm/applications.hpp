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

#include "qsymm/dynamics.hpp"
#include "qsymm/generator.hpp"
#include "qsymm/operators.hpp"

namespace qsymm {

// ---------------------------------------------------------------------------
// Pure-state preparation with a stubborn subsystem.
// ---------------------------------------------------------------------------

/// Local generator with |psi><psi| as its unique invariant state: H = 0 and
/// L_k = |psi><e_k| for an orthonormal basis {e_k} of psi's complement.
/// Throws RangeError when psi is not a unit vector (1e-12).
GeneralLindbladSpec build_local_stabilizer(const ComplexVector& psi);

struct PreparationResult {
  Trajectory trajectory;
  /// <psi|^m rho(t) |psi>^m at each snapshot.
  std::vector<double> fidelity;
  bool generates_full_group = false;
  std::vector<std::string> warnings;
};

/// Evolves L_U + L^(j) (x) I from rho0, where L^(j) stabilizes psi on the
/// stubborn subsystem j.
PreparationResult prepare_network_state(const UnitaryNoiseSpec& u_spec,
                                        const ComplexVector& psi, int j,
                                        const DensityMatrix& rho0, double T,
                                        double dt,
                                        const EvolveOptions& options = {});

/// <phi| rho |phi>.
double pure_state_fidelity(const ComplexMatrix& rho, const ComplexVector& phi);

/// psi (x) ... (x) psi (m factors).
ComplexVector product_vector(const ComplexVector& psi, int m);

// ---------------------------------------------------------------------------
// Network-size estimation.
// ---------------------------------------------------------------------------

/// P(K = k) = C(p, k) C(m - p, p - k) / C(m, p). Throws RangeError unless
/// 0 <= k <= p <= m.
double hypergeometric_pmf(long m, long p, long k);
/// The whole pmf over k = 0..p.
std::vector<double> hypergeometric_distribution(long m, long p);

enum class EstimationMode { ExactQuantum, HypergeometricMc };
std::string to_string(EstimationMode mode);
EstimationMode estimation_mode_from_string(const std::string& s);

struct EstimationOutcome {
  long k_hat = 0;
  long probes = 0;
  /// p^2 / k_hat; +infinity when k_hat = 0.
  double m_hat = 0.0;
  bool defined = false;
  std::uint64_t seed = 0;
  EstimationMode mode = EstimationMode::HypergeometricMc;
};

/// m_hat = p^2 / k_hat, with the undefined (infinite) sentinel at k_hat = 0.
/// Throws RangeError unless 0 <= k_hat <= p and p >= 1.
EstimationOutcome estimate_size(long k_hat, long probes);

/// (m - p)^2 / (p^2 (m - 1)), the variance of the relative error of 1/m_hat.
double relative_error_variance(long m, long p);
/// The same quantity from the hypergeometric pmf by direct summation.
double relative_error_variance_exact(long m, long p);

/// Probability of the undefined estimate, C(m - p, p) / C(m, p).
double zero_count_probability(long m, long p);

/// Distribution of the number of |0> outcomes when the first `probes`
/// subsystems are read out in the computational basis. Built from the
/// expectations Tr(rho P_s) of the commuting local projectors.
std::vector<double> marker_count_distribution(const ComplexMatrix& rho,
                                              const NetworkLayout& layout,
                                              int probes);

/// Replaces the state of subsystem i by |0><0| (channel with Kraus
/// operators |0><b| on subsystem i).
ComplexMatrix reset_subsystem(const ComplexMatrix& rho, int i,
                              const NetworkLayout& layout);

struct EstimationOptions {
  EstimationMode mode = EstimationMode::HypergeometricMc;
  long trials = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Exact mode: also evolve L_U (path swaps, unit rates) to this time and
  /// report the readout deviation from the pmf. Zero disables.
  double evolve_T = 0.0;
  /// Exact mode: run Step 1 with the stubborn-subsystem protocol from the
  /// maximally mixed state for this long instead of preparing directly.
  double prepare_T = 0.0;
};

struct EstimationReport {
  long m = 0;
  long probes = 0;
  EstimationMode mode = EstimationMode::HypergeometricMc;
  std::vector<EstimationOutcome> outcomes;
  std::vector<long> k_histogram;
  std::vector<double> pmf;
  /// Exact mode only: readout distribution of the symmetrized state.
  std::vector<double> readout;
  double pmf_max_abs_dev = 0.0;
  /// Mean of m_hat over trials with k_hat > 0.
  double mhat_mean = 0.0;
  long undefined_count = 0;
  double undefined_probability = 0.0;
  double mhat_inv_relerr_mean = 0.0;
  /// Sample variance (1/N normalization) of (1/m_hat - 1/m) / (1/m).
  double mhat_inv_relerr_var = 0.0;
  double closed_form_variance = 0.0;
  /// Exact mode with evolve_T > 0: deviation of the readout at finite time.
  std::optional<double> finite_time_deviation;
  /// Exact mode with prepare_T > 0: fidelity of Step 1's preparation.
  std::optional<double> preparation_fidelity;
};

/// Runs the four-step protocol (preparation, perturbation of the first p
/// probes to the marker |0>, symmetrization, readout). Exact mode requires
/// m <= 6 (BudgetExceeded otherwise) and uses n = 2 with fill state |1>.
/// Per-trial random streams depend only on (seed, trial index).
EstimationReport run_estimation_protocol(long m, long probes,
                                         const EstimationOptions& options);

/// Deterministic per-trial uniform in [0, 1).
double trial_uniform(std::uint64_t seed, std::uint64_t trial);

}  // namespace qsymm
