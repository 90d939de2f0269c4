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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every random input comes from a fixed seed.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qsymm/applications.hpp"
#include "qsymm/dynamics.hpp"
#include "qsymm/errors.hpp"
#include "qsymm/io.hpp"
#include "qsymm/lifted.hpp"
#include "qsymm/random.hpp"

using namespace qsymm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct SymmRun {
  int m;
  ComplexMatrix rho0;
  Trajectory traj;
};

// Criterion 1 trajectories are reused by criteria 2, 3 and 11.
std::vector<SymmRun> g_symm_runs;
double g_symm_seconds = 0.0;
std::vector<Trajectory> g_anchor_runs;
std::vector<Trajectory> g_prep_runs;

double physical_worst_trace(const std::vector<const Trajectory*>& ts, double& worst_eig) {
  double worst_trace = 0.0;
  worst_eig = INFINITY;
  for (const auto* t : ts) {
    for (const auto& d : t->diagnostics) {
      worst_trace = std::max(worst_trace, d.trace_dev);
      worst_eig = std::min(worst_eig, d.min_eig);
    }
  }
  return worst_trace;
}

void criterion_1(Outcome& o) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int failures = 0, total = 0;
  for (int m : {2, 3, 4}) {
    const GeneratorHandle gen(UnitaryNoiseSpec::from_layout(NetworkLayout::path(m, 2), 1.0));
    const Symmetrizer sym(gen.layout());
    Rng rng(static_cast<std::uint64_t>(m));
    for (int k = 0; k < 10; ++k) {
      const ComplexMatrix rho0 = random_density_matrix(gen.layout().dim(), rng);
      EvolveOptions opt;
      opt.snapshot_stride = 10;
      auto traj = evolve(gen, DensityMatrix::from(rho0), 20.0, 0.01, opt);
      const double dist = (traj.final_state() - sym.apply(rho0)).norm();
      worst = std::max(worst, dist);
      ++total;
      if (!(dist < 1e-6)) {
        ++failures;
        o.detail << " [m=" << m << " state " << k << " dist " << dist << "]";
      }
      g_symm_runs.push_back({m, rho0, std::move(traj)});
    }
  }
  g_symm_seconds = seconds_since(t0);
  o.detail << " max ||rho(20)-Ebar(rho0)||_F=" << worst << " (" << total - failures << "/"
           << total << " below 1e-6), runtime " << g_symm_seconds << " s";
  o.require(failures == 0, "distance below 1e-6 for every state");
  o.require(g_symm_seconds < 30.0, "runtime < 30 s");
}

void criterion_2(Outcome& o) {
  // Monotonicity of V along criterion-1 trajectories.
  double worst_v_rise = -INFINITY;
  for (const auto& run : g_symm_runs) {
    const auto& d = run.traj.diagnostics;
    for (std::size_t s = 1; s < d.size(); ++s) {
      worst_v_rise = std::max(worst_v_rise, d[s].V - d[s - 1].V);
    }
  }
  o.require(worst_v_rise <= 1e-9, "V non-increasing to 1e-9");

  // Monotonicity of D along lifted trajectories.
  Rng rng(202);
  double worst_d_rise = -INFINITY;
  for (int m : {2, 3, 4}) {
    const auto spec = UnitaryNoiseSpec::from_layout(NetworkLayout::path(m, 2), 1.0);
    const auto lt = evolve_lifted(spec, LiftedWeights::delta_identity(m), 20.0, 0.01, 10);
    for (std::size_t s = 1; s < lt.divergence.size(); ++s) {
      worst_d_rise = std::max(worst_d_rise, lt.divergence[s] - lt.divergence[s - 1]);
    }
  }
  o.require(worst_d_rise <= 1e-9, "D non-increasing to 1e-9");

  // Analytic rates against centered finite differences at dt = 1e-3.
  const double dt = 1e-3;
  double worst_v_rel = 0.0, worst_d_rel = 0.0;
  for (int m : {2, 3, 4}) {
    const auto spec = UnitaryNoiseSpec::from_layout(NetworkLayout::path(m, 2), 1.0);
    const GeneratorHandle gen(spec);
    const Symmetrizer sym(spec.layout);
    const auto rho0 = DensityMatrix::from(random_density_matrix(spec.layout.dim(), rng));
    const auto traj = evolve(gen, rho0, 1.0, dt);
    for (std::size_t s = 100; s + 1 < traj.states.size(); s += 100) {
      const double fd =
          (lyapunov_V(traj.states[s + 1], sym) - lyapunov_V(traj.states[s - 1], sym)) / (2 * dt);
      const double an = lyapunov_V_rate(spec, traj.states[s], traj.times[s]);
      worst_v_rel = std::max(worst_v_rel, std::abs(an - fd) / std::abs(fd));
    }
    std::vector<double> p(factorial_checked(m));
    double sum = 0;
    for (auto& v : p) sum += (v = std::uniform_real_distribution<double>(0.05, 1.0)(rng));
    for (auto& v : p) v /= sum;
    const auto lt = evolve_lifted(spec, LiftedWeights(m, p), 1.0, dt);
    for (std::size_t s = 100; s + 1 < lt.times.size(); s += 100) {
      const double fd = (lt.divergence[s + 1] - lt.divergence[s - 1]) / (2 * dt);
      const double an = kl_rate(spec, lt.weights[s], lt.times[s]);
      worst_d_rel = std::max(worst_d_rel, std::abs(an - fd) / std::abs(fd));
    }
  }
  o.detail << " max V rise " << worst_v_rise << ", max D rise " << worst_d_rise
           << ", dV/dt rel err " << worst_v_rel << ", dD/dt rel err " << worst_d_rel;
  o.require(worst_v_rel < 1e-4, "dV/dt relative error < 1e-4");
  o.require(worst_d_rel < 1e-4, "dD/dt relative error < 1e-4");
}

void criterion_3(Outcome& o) {
  double worst = 0.0;
  std::size_t snapshots = 0;
  for (const auto& run : g_symm_runs) {
    const NetworkLayout l = NetworkLayout::path(run.m, 2);
    const Symmetrizer sym(l);
    const ComplexMatrix target = sym.apply(run.rho0);
    for (const auto& s : run.traj.states) {
      worst = std::max(worst, (sym.apply(s) - target).norm());
      ++snapshots;
    }
  }
  o.detail << " max ||Ebar(rho(t))-Ebar(rho0)||_F=" << worst << " over " << snapshots
           << " snapshots";
  o.require(worst < 1e-8, "conserved to 1e-8");
}

UnitaryNoiseSpec random_swap_spec(int m, Rng& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.5);
  UnitaryNoiseSpec spec{NetworkLayout::complete(m, 2), {}};
  for (int i = 1; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      if (j == i + 1 || u(rng) > 0.9) {
        spec.terms.push_back({Permutation::transposition(m, i, j), WeightSchedule::constant(u(rng)), 0});
      }
    }
  }
  return spec;
}

void criterion_4(Outcome& o) {
  Rng rng(404);
  double worst = 0.0, worst_min_drop = -INFINITY;
  for (int m : {2, 3, 4}) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto spec = random_swap_spec(m, rng);
      const Symmetrizer sym(spec.layout);
      const auto rho0 = DensityMatrix::from(random_density_matrix(spec.layout.dim(), rng));
      const double dt = 0.005;
      // Ten sample times: t = 0.5, 1.0, ..., 5.0.
      EvolveOptions opt;
      opt.snapshot_stride = 100;
      const auto q = evolve(GeneratorHandle(spec), rho0, 5.0, dt, opt);
      const auto c = evolve_lifted(spec, LiftedWeights::delta_identity(m), 5.0, dt, 100);
      for (std::size_t s = 1; s < q.times.size(); ++s) {
        worst = std::max(worst, (reconstruct_state(c.weights[s], rho0.matrix(), sym) -
                                 q.states[s]).norm());
      }
      const auto fine = evolve_lifted(spec, LiftedWeights::delta_identity(m), 5.0, dt, 1);
      for (std::size_t s = 1; s < fine.min_p.size(); ++s) {
        worst_min_drop = std::max(worst_min_drop, fine.min_p[s - 1] - fine.min_p[s]);
      }
    }
  }
  o.detail << " max reconstruction error " << worst << ", max min-weight drop "
           << worst_min_drop;
  o.require(worst < 1e-6, "reconstruction within 1e-6");
  o.require(worst_min_drop <= 1e-9, "minimal weight non-decreasing");
}

void criterion_5(Outcome& o) {
  Rng rng(505);
  int agreements = 0, total = 0, sym_pass = 0, sym_total = 0;
  for (int m : {2, 3}) {
    const auto spec = UnitaryNoiseSpec::from_layout(NetworkLayout::path(m, 2), 1.0);
    const long d = spec.layout.dim();
    for (int k = 0; k < 50; ++k) {
      const ComplexMatrix h = random_hermitian(d, rng);
      for (const ComplexMatrix& x : {h, symmetrize(h, spec.layout)}) {
        const bool commutes = commutant_residual(spec, x) <= 1e-10;
        const bool fixed = apply_unitary_generator(spec, x, 0.0).norm() <= 1e-9;
        agreements += commutes == fixed;
        ++total;
      }
      const ComplexMatrix s = symmetrize(h, spec.layout);
      sym_pass += commutant_residual(spec, s) <= 1e-10 &&
                  apply_unitary_generator(spec, s, 0.0).norm() <= 1e-9;
      ++sym_total;
    }
  }
  o.detail << " equivalence held on " << agreements << "/" << total
           << " operators; symmetrized operators passing " << sym_pass << "/" << sym_total;
  o.require(agreements == total, "equivalence on every sample");
  o.require(sym_pass == sym_total, "every symmetrized operator is a fixed point");
}

void criterion_6(Outcome& o) {
  for (int m = 2; m <= 6; ++m) {
    std::vector<Permutation> gens;
    for (int i = 1; i < m; ++i) gens.push_back(Permutation::transposition(m, i, i + 1));
    const auto r = generates_full_group(gens, m);
    o.detail << " m=" << m << ":" << r.closure_size;
    o.require(r.generates && r.closure_size == factorial_checked(m),
              "closure of adjacent transpositions is S_m");
  }
  struct Case {
    NetworkLayout layout;
    std::vector<int> witness;
  };
  const std::vector<Case> cases{
      {NetworkLayout(4, 2, {{1, 2}, {3, 4}}), {0, 0, 1, 1}},
      {NetworkLayout(3, 2, {{1, 2}, {3}}), {0, 0, 1}},
      {NetworkLayout(5, 2, {{1, 2}, {2, 3}, {4, 5}}), {0, 0, 0, 1, 1}},
  };
  for (const auto& c : cases) {
    const auto spec = UnitaryNoiseSpec::from_layout(c.layout, 1.0);
    const auto r = generates_full_group(spec.permutations(), c.layout.subsystems());
    o.require(!r.generates, "disconnected set rejected");
    EvolveOptions opt;
    opt.snapshot_stride = 1000;
    const auto traj = evolve(GeneratorHandle(spec), DensityMatrix::basis_state(c.layout, c.witness),
                             40.0, 0.01, opt);
    const double resid = traj.diagnostics.back().dist_to_symm;
    o.detail << " | m=" << c.layout.subsystems() << " closure " << r.closure_size
             << " witness residual " << resid;
    o.require(resid > 0.1, "witness residual > 0.1");
  }
}

void criterion_7(Outcome& o) {
  const GeneratorHandle gen(UnitaryNoiseSpec::from_layout(NetworkLayout::path(2, 2), 1.0));
  const auto traj = evolve(gen, DensityMatrix::basis_state(gen.layout(), {0, 1}), 2.0, 0.01);
  double worst = 0.0;
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    const double t = traj.times[s];
    if (std::abs(t - 0.5) > 1e-9 && std::abs(t - 1.0) > 1e-9 && std::abs(t - 2.0) > 1e-9) continue;
    const double a = 0.5 * (1 + std::exp(-2 * t)), b = 0.5 * (1 - std::exp(-2 * t));
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(1, 1) = a;
    expected(2, 2) = b;
    worst = std::max(worst, (traj.states[s] - expected).cwiseAbs().maxCoeff());
  }
  o.detail << " max deviation from 1/2(1+-exp(-2t)) at t in {0.5,1,2}: " << worst;
  o.require(worst < 1e-8, "analytic populations to 1e-8");
  g_anchor_runs.push_back(traj);
}

void criterion_8(Outcome& o) {
  const auto t0 = Clock::now();
  ComplexVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  ComplexVector minus(2);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  const std::vector<std::pair<ComplexVector, ComplexVector>> targets{
      {basis_vector(2, 0), basis_vector(2, 1)}, {plus, minus}};
  double worst_fid = 1.0, worst_fixed = 0.0;
  for (int m : {2, 3}) {
    const auto l = NetworkLayout::path(m, 2);
    const auto spec = UnitaryNoiseSpec::from_layout(l, 1.0);
    for (const auto& [psi, orth] : targets) {
      const auto gen = build_combined_generator(spec, build_local_stabilizer(psi), 1);
      worst_fixed = std::max(worst_fixed, gen.apply(projector(product_vector(psi, m)), 0.0).norm());
      for (const auto& rho0 : {DensityMatrix::maximally_mixed(l), DensityMatrix::product_pure(l, orth)}) {
        EvolveOptions opt;
        opt.snapshot_stride = 100;
        auto r = prepare_network_state(spec, psi, 1, rho0, 100.0, 0.02, opt);
        worst_fid = std::min(worst_fid, r.fidelity.back());
        g_prep_runs.push_back(std::move(r.trajectory));
      }
    }
  }
  const double secs = seconds_since(t0);
  o.detail << " min final fidelity " << worst_fid << ", max ||L_tot(target)||_F " << worst_fixed
           << ", runtime " << secs << " s";
  o.require(worst_fid > 0.999, "fidelity > 0.999");
  o.require(worst_fixed < 1e-12, "target is a fixed point to 1e-12");
  o.require(secs < 60.0, "runtime < 60 s");
}

void criterion_9(Outcome& o) {
  double worst = 0.0;
  int cases = 0;
  for (long m = 2; m <= 6; ++m) {
    for (long p = 1; p <= m; ++p) {
      EstimationOptions opt;
      opt.mode = EstimationMode::ExactQuantum;
      opt.trials = 0;
      const auto rep = run_estimation_protocol(m, p, opt);
      for (long k = 0; k <= p; ++k) {
        worst = std::max(worst, std::abs(rep.readout[k] - hypergeometric_pmf(m, p, k)));
      }
      ++cases;
    }
  }
  o.detail << " " << cases << " (m,p) pairs, max |readout - pmf| " << worst;
  o.require(worst <= 1e-10, "readout equals pmf to 1e-10");
}

void criterion_10(Outcome& o) {
  const auto t0 = Clock::now();
  double worst_mean = 0.0, worst_inv = 0.0, worst_var = 0.0;
  for (long m = 2; m <= 20; ++m) {
    for (long p = 2; p <= m; ++p) {
      double mean = 0.0, inv = 0.0, var = 0.0;
      const double ek = double(p) * p / m;
      for (long k = 0; k <= p; ++k) {
        const double w = hypergeometric_pmf(m, p, k);
        mean += k * w;
        inv += w * k / (double(p) * p);
        var += w * std::pow(k / ek - 1.0, 2);
      }
      worst_mean = std::max(worst_mean, std::abs(mean - ek));
      worst_inv = std::max(worst_inv, std::abs(inv - 1.0 / m));
      worst_var = std::max(worst_var, std::abs(var - relative_error_variance(m, p)));
    }
  }
  o.require(worst_mean <= 1e-12, "E[K] = p^2/m");
  o.require(worst_inv <= 1e-12, "unbiased inverse estimator");
  o.require(worst_var <= 1e-12, "variance closed form");

  EstimationOptions opt;
  opt.trials = 100000;
  opt.seed = 7;
  opt.threads = 1;
  const auto rep = run_estimation_protocol(100, 10, opt);
  double mean_k = 0.0, var_k = 0.0;
  for (const auto& out : rep.outcomes) mean_k += out.k_hat;
  mean_k /= opt.trials;
  for (const auto& out : rep.outcomes) var_k += std::pow(out.k_hat - mean_k, 2);
  var_k /= opt.trials - 1;
  const double se = std::sqrt(var_k / opt.trials);
  const double target = relative_error_variance(100, 10);
  const double rel = std::abs(rep.mhat_inv_relerr_var - target) / target;
  const double secs = seconds_since(t0);
  o.detail << " closed-form errors (mean " << worst_mean << ", inverse " << worst_inv
           << ", variance " << worst_var << "); MC mean K " << mean_k << " (3 SE = " << 3 * se
           << "), relerr variance " << rep.mhat_inv_relerr_var << " vs " << target << " ("
           << 100 * rel << "%), runtime " << secs << " s";
  o.require(std::abs(mean_k - 1.0) <= 3 * se, "MC mean within 3 SE");
  o.require(rel <= 0.05, "MC variance within 5%");
  o.require(secs < 60.0, "runtime < 60 s");
}

void criterion_11(Outcome& o) {
  std::vector<const Trajectory*> all;
  for (const auto& r : g_symm_runs) all.push_back(&r.traj);
  for (const auto& t : g_anchor_runs) all.push_back(&t);
  for (const auto& t : g_prep_runs) all.push_back(&t);
  double worst_eig = 0.0;
  const double worst_trace = physical_worst_trace(all, worst_eig);
  o.detail << " " << all.size() << " trajectories, max trace deviation " << worst_trace
           << ", min eigenvalue " << worst_eig;
  o.require(!all.empty(), "trajectories available");
  o.require(worst_trace < 1e-9, "trace deviation < 1e-9");
  o.require(worst_eig > -1e-8, "min eigenvalue > -1e-8");
}

io::Json load_preset(const std::string& name) {
  std::ifstream is(std::string(QSYMM_ACCEPTANCE_PRESET_DIR) + "/" + name + ".json");
  if (!is) throw ConfigError("missing preset " + name);
  return io::Json::parse(is);
}

void criterion_12(Outcome& o) {
  for (const char* name : {"alternating3", "broken-connectivity3"}) {
    const io::Json cfg = load_preset(name);
    const auto spec = io::generator_from_json(cfg["generator"]).unitary;
    const auto& c = cfg["connectivity"];
    const auto conn = check_persistent_connectivity(spec, c["window"].get<double>(),
                                                    c["threshold"].get<double>(),
                                                    c["horizon"].get<double>());
    DensityMatrix rho0 = DensityMatrix::maximally_mixed(spec.layout);
    if (cfg["initial_state"].is_string() && cfg["initial_state"] == "random") {
      Rng rng(cfg["seed"].get<std::uint64_t>());
      rho0 = DensityMatrix::from(random_density_matrix(spec.layout.dim(), rng));
    } else {
      rho0 = io::initial_state_from_json(cfg["initial_state"], spec.layout);
    }
    EvolveOptions opt;
    opt.snapshot_stride = cfg["snapshot_stride"].get<int>();
    const auto traj = evolve(GeneratorHandle(spec), rho0, cfg["T"].get<double>(),
                             cfg["dt"].get<double>(), opt);
    const double dist = traj.diagnostics.back().dist_to_symm;
    const bool good = std::string(name) == "alternating3";
    o.detail << " " << name << ": connectivity " << (conn.pass ? "pass" : "fail")
             << ", residual " << dist << ";";
    if (good) {
      o.require(conn.pass, "alternating preset connected");
      o.require(dist < 1e-6, "alternating preset converges");
    } else {
      o.require(!conn.pass, "broken preset flagged");
      o.require(dist > 0.1, "broken preset residual > 0.1");
    }
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"symmetrization task", criterion_1},
      {"Lyapunov suite", criterion_2},
      {"conserved quantity", criterion_3},
      {"lift equivalence", criterion_4},
      {"fixed-point characterization", criterion_5},
      {"group-generation gate", criterion_6},
      {"analytic anchor", criterion_7},
      {"state preparation", criterion_8},
      {"exact-mode estimation", criterion_9},
      {"estimation statistics", criterion_10},
      {"physicality", criterion_11},
      {"time-varying schedules", criterion_12},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failed += !o.pass;
    std::printf("criterion %2zu %-30s %s:%s\n", i + 1, criteria[i].first.c_str(),
                o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
