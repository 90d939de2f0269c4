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

#include "qsymm/lifted.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qsymm/errors.hpp"

namespace qsymm {

LiftedWeights::LiftedWeights(int m, std::vector<double> p, double sum_tol)
    : m_(m), p_(std::move(p)) {
  if (static_cast<long>(p_.size()) != factorial_checked(m)) {
    throw RangeError("lifted weights need m! entries");
  }
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= -1e-12)) throw RangeError("lifted weights must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > sum_tol) {
    throw RangeError("lifted weights must sum to one");
  }
}

LiftedWeights LiftedWeights::delta_identity(int m) {
  std::vector<double> p(factorial_checked(m), 0.0);
  p[0] = 1.0;  // the identity has rank 0
  return LiftedWeights(m, std::move(p));
}

LiftedWeights LiftedWeights::uniform(int m) {
  const long total = factorial_checked(m);
  return LiftedWeights(m, std::vector<double>(total, 1.0 / total));
}

std::vector<std::vector<long>> lifted_index_maps(const UnitaryNoiseSpec& spec) {
  const int m = spec.layout.subsystems();
  const auto perms = all_permutations(m);
  std::vector<std::vector<long>> maps;
  for (const auto& term : spec.terms) {
    const Permutation k_inv = term.perm.inverse();
    std::vector<long> map(perms.size());
    for (std::size_t r = 0; r < perms.size(); ++r) {
      map[r] = permutation_rank(compose(perms[r], k_inv));
    }
    maps.push_back(std::move(map));
  }
  return maps;
}

std::vector<double> lifted_rate(const UnitaryNoiseSpec& spec,
                                const std::vector<std::vector<long>>& maps,
                                const std::vector<double>& p, double t) {
  std::vector<double> dp(p.size(), 0.0);
  for (std::size_t k = 0; k < spec.terms.size(); ++k) {
    const double alpha = spec.terms[k].schedule.value_at(t);
    if (alpha == 0.0) continue;
    const auto& map = maps[k];
    for (std::size_t r = 0; r < p.size(); ++r) {
      dp[r] += alpha * (p[map[r]] - p[r]);
    }
  }
  return dp;
}

LiftedTrajectory evolve_lifted(const UnitaryNoiseSpec& spec,
                               const LiftedWeights& p0, double T, double dt,
                               int snapshot_stride) {
  const int m = spec.layout.subsystems();
  if (p0.subsystems() != m) throw DimensionMismatch("weights do not match layout");
  if (snapshot_stride < 1) throw ConfigError("snapshot stride must be >= 1");
  double rate_sum = 0.0;
  for (const auto& term : spec.terms) rate_sum += term.schedule.sup();
  const double max_dt = rate_sum > 0.0 ? 0.1 / (2.0 * rate_sum) : INFINITY;
  if (dt > max_dt) throw StepTooLarge(dt, max_dt);
  if (!(T > 0.0) || !(dt > 0.0)) throw ConfigError("T and dt must be positive");
  const double grid_tol = default_tolerances().grid_alignment;
  const long steps = std::lround(T / dt);
  if (steps < 1 || std::abs(steps * dt - T) > grid_tol * std::max(1.0, T)) {
    throw ConfigError("duration is not a whole number of steps");
  }
  for (const auto& term : spec.terms) {
    for (double t : term.schedule.change_times(0.0, T)) {
      if (std::abs(std::round(t / dt) * dt - t) > grid_tol * std::max(1.0, t)) {
        throw ConfigError("schedule change is not on the step grid");
      }
    }
  }

  const auto maps = lifted_index_maps(spec);
  const double drift_tol = default_tolerances().norm_drift;
  LiftedTrajectory traj;
  auto record = [&](double t, const std::vector<double>& p) {
    LiftedWeights w(m, p, drift_tol);
    traj.times.push_back(t);
    traj.divergence.push_back(kl_to_uniform(w));
    traj.min_p.push_back(*std::min_element(p.begin(), p.end()));
    traj.max_p.push_back(*std::max_element(p.begin(), p.end()));
    traj.weights.push_back(std::move(w));
  };

  std::vector<double> p = p0.values();
  const std::size_t size = p.size();
  std::vector<double> stage(size);
  record(0.0, p);
  for (long step = 0; step < steps; ++step) {
    const double t_mid = (step + 0.5) * dt;
    const auto k1 = lifted_rate(spec, maps, p, t_mid);
    for (std::size_t i = 0; i < size; ++i) stage[i] = p[i] + 0.5 * dt * k1[i];
    const auto k2 = lifted_rate(spec, maps, stage, t_mid);
    for (std::size_t i = 0; i < size; ++i) stage[i] = p[i] + 0.5 * dt * k2[i];
    const auto k3 = lifted_rate(spec, maps, stage, t_mid);
    for (std::size_t i = 0; i < size; ++i) stage[i] = p[i] + dt * k3[i];
    const auto k4 = lifted_rate(spec, maps, stage, t_mid);
    for (std::size_t i = 0; i < size; ++i) {
      p[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    const double t_next = (step + 1) * dt;
    const double drift = std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0);
    if (drift > drift_tol) throw NormDrift(t_next, drift);
    if ((step + 1) % snapshot_stride == 0 || step + 1 == steps) record(t_next, p);
  }
  return traj;
}

double kl_to_uniform(const LiftedWeights& p) {
  const double log_uniform = -std::log(static_cast<double>(p.values().size()));
  double d = 0.0;
  for (double v : p.values()) {
    if (v > 0.0) d += v * (std::log(v) - log_uniform);
  }
  return d;
}

double kl_rate(const UnitaryNoiseSpec& spec, const LiftedWeights& p, double t) {
  const auto& values = p.values();
  const int m = spec.layout.subsystems();
  if (p.subsystems() != m) throw DimensionMismatch("weights do not match layout");
  const auto perms = all_permutations(m);
  double rate = 0.0;
  for (const auto& term : spec.terms) {
    const double alpha = term.schedule.value_at(t);
    if (alpha == 0.0) continue;
    // Relative entropy against the weights shifted by pi -> pi o k.
    double rel = 0.0;
    for (std::size_t r = 0; r < perms.size(); ++r) {
      const double a = values[r];
      if (a <= 0.0) continue;
      const double b = values[permutation_rank(compose(perms[r], term.perm))];
      if (b <= 0.0) return -INFINITY;
      rel += a * (std::log(a) - std::log(b));
    }
    rate -= alpha * rel;
  }
  return rate;
}

ComplexMatrix reconstruct_state(const LiftedWeights& p,
                                const ComplexMatrix& rho0,
                                const Symmetrizer& sym) {
  const auto& us = sym.unitaries();
  if (p.values().size() != us.size()) {
    throw DimensionMismatch("weights do not match the symmetrizer");
  }
  if (rho0.rows() != sym.dim() || rho0.cols() != sym.dim()) {
    throw DimensionMismatch("state does not match the layout");
  }
  ComplexMatrix out = ComplexMatrix::Zero(rho0.rows(), rho0.cols());
  for (std::size_t r = 0; r < us.size(); ++r) {
    if (p[r] != 0.0) us[r].add_conjugate(rho0, p[r], out);
  }
  return out;
}

ComplexMatrix reconstruct_state(const LiftedWeights& p,
                                const ComplexMatrix& rho0,
                                const NetworkLayout& layout) {
  return reconstruct_state(p, rho0, Symmetrizer(layout));
}

}  // namespace qsymm
