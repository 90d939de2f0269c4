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

#include "qsymm/applications.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "qsymm/errors.hpp"
#include "qsymm/permutation.hpp"

namespace qsymm {

namespace {

constexpr long kMaxExactSubsystems = 6;

long double binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0.0L;
  k = std::min(k, n - k);
  long double acc = 1.0L;
  for (long i = 1; i <= k; ++i) {
    acc = acc * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  }
  return acc;
}

double log_binomial(long n, long k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

long sample_index(const std::vector<double>& dist, double u) {
  double cdf = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    cdf += dist[k];
    if (u < cdf) return static_cast<long>(k);
  }
  // u lands above a cdf that rounds to just under one.
  for (std::size_t k = dist.size(); k-- > 0;) {
    if (dist[k] > 0.0) return static_cast<long>(k);
  }
  return 0;
}

}  // namespace

GeneralLindbladSpec build_local_stabilizer(const ComplexVector& psi) {
  const long n = psi.size();
  if (n < 2) throw RangeError("local state needs dimension >= 2");
  if (std::abs(psi.norm() - 1.0) > 1e-12) {
    throw RangeError("target local state is not normalized");
  }
  const ComplexMatrix column = psi;
  Eigen::HouseholderQR<ComplexMatrix> qr(column);
  const ComplexMatrix q = qr.householderQ();
  GeneralLindbladSpec spec;
  for (long k = 1; k < n; ++k) {
    ComplexVector e = q.col(k);
    // Fix the phase: the largest-magnitude entry becomes real positive.
    Eigen::Index pivot = 0;
    e.cwiseAbs().maxCoeff(&pivot);
    e *= std::conj(e(pivot)) / std::abs(e(pivot));
    spec.noise_ops.push_back(psi * e.adjoint());
    spec.noise_sites.emplace_back();
  }
  return spec;
}

double pure_state_fidelity(const ComplexMatrix& rho, const ComplexVector& phi) {
  return (phi.adjoint() * rho * phi)(0, 0).real();
}

ComplexVector product_vector(const ComplexVector& psi, int m) {
  ComplexMatrix acc = psi;
  for (int k = 1; k < m; ++k) acc = kron(acc, ComplexMatrix(psi));
  return acc.col(0);
}

PreparationResult prepare_network_state(const UnitaryNoiseSpec& u_spec,
                                        const ComplexVector& psi, int j,
                                        const DensityMatrix& rho0, double T,
                                        double dt,
                                        const EvolveOptions& options) {
  const auto& layout = u_spec.layout;
  if (psi.size() != layout.local_dim()) {
    throw DimensionMismatch("target state does not match the local dimension");
  }
  PreparationResult result;
  result.generates_full_group =
      generates_full_group(u_spec.active_permutations(), layout.subsystems()).generates;
  if (!result.generates_full_group) {
    result.warnings.push_back(
        "unitary terms do not generate the full permutation group; "
        "convergence to the target product state is not guaranteed");
  }
  const GeneratorHandle gen =
      build_combined_generator(u_spec, build_local_stabilizer(psi), j);
  result.trajectory = evolve(gen, rho0, T, dt, options);
  const ComplexVector target = product_vector(psi, layout.subsystems());
  for (const auto& rho : result.trajectory.states) {
    result.fidelity.push_back(pure_state_fidelity(rho, target));
  }
  return result;
}

double hypergeometric_pmf(long m, long p, long k) {
  if (!(0 <= k && k <= p && p <= m) || m < 1) {
    throw RangeError("hypergeometric arguments need 0 <= k <= p <= m");
  }
  if (p - k > m - p) return 0.0;
  const long double num = binomial(p, k) * binomial(m - p, p - k);
  const long double den = binomial(m, p);
  if (std::isfinite(static_cast<double>(den)) && std::isfinite(static_cast<double>(num))) {
    return static_cast<double>(num / den);
  }
  return std::exp(log_binomial(p, k) + log_binomial(m - p, p - k) -
                  log_binomial(m, p));
}

std::vector<double> hypergeometric_distribution(long m, long p) {
  std::vector<double> out(p + 1);
  for (long k = 0; k <= p; ++k) out[k] = hypergeometric_pmf(m, p, k);
  return out;
}

std::string to_string(EstimationMode mode) {
  return mode == EstimationMode::ExactQuantum ? "exact-quantum"
                                              : "hypergeometric-mc";
}

EstimationMode estimation_mode_from_string(const std::string& s) {
  if (s == "exact-quantum") return EstimationMode::ExactQuantum;
  if (s == "hypergeometric-mc") return EstimationMode::HypergeometricMc;
  throw ConfigError("unknown estimation mode '" + s + "'");
}

EstimationOutcome estimate_size(long k_hat, long probes) {
  if (probes < 1 || k_hat < 0 || k_hat > probes) {
    throw RangeError("estimate_size needs 0 <= k <= p and p >= 1");
  }
  EstimationOutcome out;
  out.k_hat = k_hat;
  out.probes = probes;
  out.defined = k_hat > 0;
  out.m_hat = out.defined ? static_cast<double>(probes) * probes / k_hat
                          : INFINITY;
  return out;
}

double relative_error_variance(long m, long p) {
  if (p < 1 || m < 2 || p > m) {
    throw RangeError("relative_error_variance needs 1 <= p <= m, m >= 2");
  }
  const double diff = static_cast<double>(m - p);
  return diff * diff / (static_cast<double>(p) * p * (m - 1));
}

double relative_error_variance_exact(long m, long p) {
  const auto pmf = hypergeometric_distribution(m, p);
  double mean = 0.0;
  for (long k = 0; k <= p; ++k) mean += k * pmf[k];
  double var = 0.0;
  for (long k = 0; k <= p; ++k) {
    const double rel = k / mean - 1.0;
    var += pmf[k] * rel * rel;
  }
  return var;
}

double zero_count_probability(long m, long p) { return hypergeometric_pmf(m, p, 0); }

std::vector<double> marker_count_distribution(const ComplexMatrix& rho,
                                              const NetworkLayout& layout,
                                              int probes) {
  if (probes < 1 || probes > layout.subsystems()) {
    throw RangeError("probe count out of range");
  }
  if (rho.rows() != layout.dim()) throw DimensionMismatch("state does not match layout");
  // Outcome strings s over the probes: Tr(rho (P_s (x) I)) sums the diagonal
  // entries whose leading digits equal s.
  const int n = layout.local_dim();
  long outcomes = 1;
  for (int i = 0; i < probes; ++i) outcomes *= n;
  const long rest = layout.dim() / outcomes;
  std::vector<double> dist(probes + 1, 0.0);
  for (long s = 0; s < outcomes; ++s) {
    double prob = 0.0;
    for (long r = 0; r < rest; ++r) prob += rho(s * rest + r, s * rest + r).real();
    int markers = 0;
    for (long v = s, i = 0; i < probes; ++i, v /= n) markers += (v % n == 0);
    dist[markers] += prob;
  }
  return dist;
}

ComplexMatrix reset_subsystem(const ComplexMatrix& rho, int i,
                              const NetworkLayout& layout) {
  const int n = layout.local_dim();
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (int b = 0; b < n; ++b) {
    ComplexMatrix k = ComplexMatrix::Zero(n, n);
    k(0, b) = 1.0;
    const ComplexMatrix kk = embed_local(k, i, layout);
    out += kk * rho * kk.adjoint();
  }
  return out;
}

double trial_uniform(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

EstimationReport run_estimation_protocol(long m, long probes,
                                         const EstimationOptions& options) {
  if (m < 2 || probes < 1 || probes > m) {
    throw RangeError("estimation needs m >= 2 and 1 <= p <= m");
  }
  if (options.trials < 0) throw RangeError("trial count must be nonnegative");
  EstimationReport report;
  report.m = m;
  report.probes = probes;
  report.mode = options.mode;
  report.pmf = hypergeometric_distribution(m, probes);
  report.closed_form_variance = relative_error_variance(m, probes);
  report.undefined_probability = zero_count_probability(m, probes);

  std::vector<double> sampling = report.pmf;
  if (options.mode == EstimationMode::ExactQuantum) {
    if (m > kMaxExactSubsystems) {
      throw BudgetExceeded("exact-quantum mode supports m <= 6");
    }
    const int mi = static_cast<int>(m);
    const int pi = static_cast<int>(probes);
    const NetworkLayout layout = NetworkLayout::path(mi, 2);
    ComplexMatrix rho;
    if (options.prepare_T > 0.0) {
      // Step 1 through the stubborn-subsystem protocol, pinning |1> on
      // subsystem 1.
      const auto u = UnitaryNoiseSpec::from_layout(layout, 1.0);
      const ComplexVector fill = basis_vector(2, 1);
      const GeneratorHandle gen =
          build_combined_generator(u, build_local_stabilizer(fill), 1);
      const double dt = std::min(0.01, max_stable_step(gen));
      const double steps = std::ceil(options.prepare_T / dt);
      EvolveOptions eo;
      eo.snapshot_stride = static_cast<int>(steps);
      auto traj = evolve(gen, DensityMatrix::maximally_mixed(layout),
                         steps * dt, dt, eo);
      rho = traj.final_state();
      report.preparation_fidelity =
          pure_state_fidelity(rho, product_vector(fill, mi));
      for (int i = 1; i <= pi; ++i) rho = reset_subsystem(rho, i, layout);
    } else {
      std::vector<int> digits(mi, 1);
      for (int i = 0; i < pi; ++i) digits[i] = 0;
      rho = DensityMatrix::basis_state(layout, digits).matrix();
    }
    report.readout = marker_count_distribution(symmetrize(rho, layout), layout, pi);
    for (long k = 0; k <= probes; ++k) {
      report.pmf_max_abs_dev =
          std::max(report.pmf_max_abs_dev, std::abs(report.readout[k] - report.pmf[k]));
    }
    if (options.evolve_T > 0.0) {
      const GeneratorHandle gen(UnitaryNoiseSpec::from_layout(layout, 1.0));
      const double dt = std::min(0.01, max_stable_step(gen));
      const double steps = std::ceil(options.evolve_T / dt);
      EvolveOptions eo;
      eo.snapshot_stride = static_cast<int>(steps);
      auto traj = evolve(gen, DensityMatrix::from(rho), steps * dt, dt, eo);
      const auto finite = marker_count_distribution(traj.final_state(), layout, pi);
      double dev = 0.0;
      for (long k = 0; k <= probes; ++k) {
        dev = std::max(dev, std::abs(finite[k] - report.pmf[k]));
      }
      report.finite_time_deviation = dev;
    }
    sampling = report.readout;
  }

  report.outcomes.resize(options.trials);
  const int threads = std::max(1, options.threads);
  auto work = [&](int worker) {
    for (long t = worker; t < options.trials; t += threads) {
      const long k = sample_index(sampling, trial_uniform(options.seed, t));
      EstimationOutcome out = estimate_size(k, probes);
      out.seed = options.seed;
      out.mode = options.mode;
      report.outcomes[t] = out;
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  report.k_histogram.assign(probes + 1, 0);
  double mhat_sum = 0.0;
  double rel_sum = 0.0, rel_sq = 0.0;
  const double p2 = static_cast<double>(probes) * probes;
  for (const auto& o : report.outcomes) {
    ++report.k_histogram[o.k_hat];
    if (o.defined) {
      mhat_sum += o.m_hat;
    } else {
      ++report.undefined_count;
    }
    const double rel = o.k_hat * static_cast<double>(m) / p2 - 1.0;
    rel_sum += rel;
    rel_sq += rel * rel;
  }
  const long defined = options.trials - report.undefined_count;
  report.mhat_mean = defined > 0 ? mhat_sum / defined : NAN;
  if (options.trials > 0) {
    const double n = static_cast<double>(options.trials);
    report.mhat_inv_relerr_mean = rel_sum / n;
    report.mhat_inv_relerr_var = rel_sq / n - (rel_sum / n) * (rel_sum / n);
  }
  return report;
}

}  // namespace qsymm
