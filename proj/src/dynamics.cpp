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

#include "qsymm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "qsymm/errors.hpp"

namespace qsymm {

namespace {

long whole_steps(double T, double dt, double rel_tol) {
  if (!(T > 0.0)) throw ConfigError("duration must be positive");
  if (!(dt > 0.0)) throw ConfigError("step must be positive");
  const long steps = std::lround(T / dt);
  if (steps < 1 || std::abs(steps * dt - T) > rel_tol * std::max(1.0, T)) {
    throw ConfigError("duration is not a whole number of steps");
  }
  return steps;
}

void require_grid_alignment(const GeneratorHandle& gen, double T, double dt,
                            double rel_tol) {
  for (double t : gen.change_times(0.0, T)) {
    const double k = std::round(t / dt);
    if (std::abs(k * dt - t) > rel_tol * std::max(1.0, t)) {
      throw ConfigError("schedule change at t=" + std::to_string(t) +
                        " is not on the step grid");
    }
  }
}

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

}  // namespace

double max_stable_step(const GeneratorHandle& gen) {
  const double lambda = gen.stability_bound();
  return lambda > 0.0 ? 0.1 / lambda : INFINITY;
}

double lyapunov_V(const ComplexMatrix& rho, const Symmetrizer& sym) {
  const ComplexMatrix diff = rho - sym.apply(rho);
  return 0.5 * (diff * diff).trace().real();
}

double lyapunov_V(const ComplexMatrix& rho, const NetworkLayout& layout) {
  return lyapunov_V(rho, Symmetrizer(layout));
}

double lyapunov_V_rate(const UnitaryNoiseSpec& spec, const ComplexMatrix& rho,
                       double t) {
  double rate = 0.0;
  for (const auto& term : spec.terms) {
    const double alpha = term.schedule.value_at(t);
    if (alpha == 0.0) continue;
    const ComplexMatrix diff =
        rho - PermutationUnitary(term.perm, spec.layout).conjugate(rho);
    rate -= alpha * 0.5 * (diff * diff).trace().real();
  }
  return rate;
}

double lyapunov_V_rate_general(const GeneratorHandle& gen,
                               const ComplexMatrix& rho, double t,
                               const Symmetrizer& sym) {
  const ComplexMatrix drho = gen.apply(rho, t);
  const ComplexMatrix a = rho - sym.apply(rho);
  const ComplexMatrix b = drho - sym.apply(drho);
  return (a * b).trace().real();
}

Trajectory evolve(const GeneratorHandle& gen, const DensityMatrix& rho0,
                  double T, double dt, const EvolveOptions& options) {
  const auto& layout = gen.layout();
  if (rho0.dim() != layout.dim()) {
    throw DimensionMismatch("initial state does not match the generator");
  }
  if (options.snapshot_stride < 1) throw ConfigError("snapshot stride must be >= 1");
  const double max_dt = max_stable_step(gen);
  if (dt > max_dt) throw StepTooLarge(dt, max_dt);
  const Tolerances& tol = options.tol;
  const long steps = whole_steps(T, dt, tol.grid_alignment);
  require_grid_alignment(gen, T, dt, tol.grid_alignment);

  std::unique_ptr<Symmetrizer> sym;
  if (layout.subsystems() <= kMaxEnumerationSubsystems) {
    sym = std::make_unique<Symmetrizer>(layout);
  }
  const ComplexMatrix target =
      sym ? sym->apply(rho0.matrix()) : ComplexMatrix();

  Trajectory traj;
  int below_threshold = 0;
  auto record = [&](double t, const ComplexMatrix& rho) {
    Diagnostics diag;
    diag.trace_dev = std::abs(rho.trace() - Complex(1.0, 0.0));
    diag.min_eig = min_hermitian_eigenvalue(rho);
    if (diag.trace_dev > tol.trace_breach) {
      throw InvariantBreach("trace deviation", t, diag.trace_dev);
    }
    if (diag.min_eig < -tol.negativity_breach) {
      throw InvariantBreach("negative eigenvalue", t, -diag.min_eig);
    }
    if (sym) {
      diag.V = lyapunov_V(rho, *sym);
      diag.dVdt = gen.has_general_part()
                      ? lyapunov_V_rate_general(gen, rho, t, *sym)
                      : lyapunov_V_rate(gen.unitary_spec(), rho, t);
      diag.dist_to_symm = (rho - target).norm();
      if (diag.dist_to_symm < tol.convergence) {
        if (++below_threshold == 2 && !traj.converged_at) {
          traj.converged_at = traj.times.back();
        }
      } else {
        below_threshold = 0;
      }
    } else {
      diag.V = diag.dVdt = diag.dist_to_symm = NAN;
    }
    traj.times.push_back(t);
    traj.states.push_back(rho);
    traj.diagnostics.push_back(diag);
  };

  ComplexMatrix rho = rho0.matrix();
  record(0.0, rho);
  ComplexMatrix k1, k2, k3, k4;
  for (long step = 0; step < steps; ++step) {
    const double t = step * dt;
    // Rates are constant on each step because change times sit on the grid.
    const auto rates = gen.rates_at(t + 0.5 * dt);
    k1 = gen.apply_with_rates(rho, rates);
    k2 = gen.apply_with_rates(rho + (0.5 * dt) * k1, rates);
    k3 = gen.apply_with_rates(rho + (0.5 * dt) * k2, rates);
    k4 = gen.apply_with_rates(rho + dt * k3, rates);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t_next = (step + 1) * dt;
    const double trace_dev = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (trace_dev > tol.trace_breach) {
      throw InvariantBreach("trace deviation", t_next, trace_dev);
    }
    if ((step + 1) % options.snapshot_stride == 0 || step + 1 == steps) {
      record(t_next, rho);
    }
  }
  return traj;
}

ConnectivityReport check_persistent_connectivity(const UnitaryNoiseSpec& spec,
                                                 double window,
                                                 double threshold,
                                                 double horizon) {
  if (!(window > 0.0)) throw ConfigError("connectivity window must be positive");
  if (horizon < window) throw ConfigError("horizon shorter than the window");
  const int m = spec.layout.subsystems();
  std::vector<std::pair<int, int>> edges;
  for (const auto& term : spec.terms) {
    if (!term.perm.is_transposition()) {
      throw ConfigError("connectivity check requires pairwise swaps only");
    }
    const auto s = term.perm.support();
    edges.emplace_back(s[0], s[1]);
  }

  std::vector<double> starts{0.0};
  for (const auto& term : spec.terms) {
    for (double t : term.schedule.change_times(0.0, horizon - window)) {
      starts.push_back(t);
    }
  }
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

  ConnectivityReport report;
  for (double t0 : starts) {
    if (t0 + window > horizon + 1e-12) break;
    ++report.windows_checked;
    DisjointSets sets(m);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (spec.terms[k].schedule.integral(t0, t0 + window) > threshold) {
        sets.unite(edges[k].first - 1, edges[k].second - 1);
      }
    }
    std::vector<std::vector<int>> groups(m);
    for (int i = 0; i < m; ++i) groups[sets.find(i)].push_back(i + 1);
    std::erase_if(groups, [](const auto& g) { return g.empty(); });
    if (groups.size() > 1) {
      report.pass = false;
      report.failing_window = t0;
      report.components = std::move(groups);
      return report;
    }
  }
  return report;
}

}  // namespace qsymm
