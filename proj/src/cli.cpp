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

#include "qsymm/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qsymm/applications.hpp"
#include "qsymm/dynamics.hpp"
#include "qsymm/errors.hpp"
#include "qsymm/generator.hpp"
#include "qsymm/io.hpp"
#include "qsymm/lifted.hpp"
#include "qsymm/permutation.hpp"
#include "qsymm/random.hpp"

#ifndef QSYMM_PRESET_DIR
#define QSYMM_PRESET_DIR "presets"
#endif

namespace qsymm::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

struct Flags {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::optional<double> dt;
  std::optional<double> T;
};

/// Files are buffered and only written once the whole experiment succeeded.
class Outputs {
 public:
  void add(std::string name, std::string content) {
    files_.emplace_back(std::move(name), std::move(content));
  }
  void add_json(std::string name, const Json& j) { add(std::move(name), j.dump(2) + "\n"); }
  void write(const fs::path& dir) const {
    fs::create_directories(dir);
    for (const auto& [name, content] : files_) {
      std::ofstream os(dir / name, std::ios::binary);
      if (!os) throw ConfigError("cannot write " + (dir / name).string());
      os << content;
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

const std::vector<std::string> kGlobalKeys = {
    "name", "description", "seed", "dt", "T", "snapshot_stride",
    "state_stride", "output_dir", "tolerances"};

std::vector<std::string> with_globals(std::vector<std::string> keys) {
  keys.insert(keys.end(), kGlobalKeys.begin(), kGlobalKeys.end());
  return keys;
}

Json load_config(const Flags& flags) {
  fs::path path;
  if (!flags.config.empty() && !flags.preset.empty()) {
    throw ConfigError("give either --config or --preset");
  }
  if (!flags.config.empty()) {
    path = flags.config;
  } else if (!flags.preset.empty()) {
    const char* env = std::getenv("QSYMM_PRESETS");
    path = fs::path(env ? env : QSYMM_PRESET_DIR) / (flags.preset + ".json");
  } else {
    throw ConfigError("missing --config or --preset");
  }
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  try {
    return Json::parse(is);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

double number(const Json& cfg, const std::string& key, std::optional<double> flag,
              std::optional<double> fallback = std::nullopt) {
  if (flag) return *flag;
  if (cfg.contains(key)) {
    if (!cfg[key].is_number()) throw ConfigError(key + ": expected a number");
    return cfg[key].get<double>();
  }
  if (fallback) return *fallback;
  throw ConfigError("missing key '" + key + "'");
}

long count(const Json& cfg, const std::string& key, long fallback) {
  if (!cfg.contains(key)) return fallback;
  const Json& v = cfg[key];
  if (!v.is_number()) throw ConfigError(key + ": expected a count");
  const double d = v.get<double>();
  if (d < 0 || d != std::floor(d) || d > 1e15) {
    throw ConfigError(key + ": expected a nonnegative integer");
  }
  return static_cast<long>(d);
}

std::uint64_t seed_of(const Json& cfg, const Flags& flags) {
  if (flags.seed) return *flags.seed;
  return static_cast<std::uint64_t>(count(cfg, "seed", 0));
}

Tolerances tolerances_of(const Json& cfg) {
  Tolerances tol;
  if (!cfg.contains("tolerances")) return tol;
  const Json& t = cfg["tolerances"];
  io::require_keys(t, {"convergence", "trace_breach", "negativity_breach", "hermiticity",
                       "trace", "negativity", "locality", "commutant"},
                   "tolerances");
  auto get = [&](const char* key, double& slot) {
    if (t.contains(key)) slot = number(t, key, std::nullopt);
  };
  get("convergence", tol.convergence);
  get("trace_breach", tol.trace_breach);
  get("negativity_breach", tol.negativity_breach);
  get("hermiticity", tol.hermiticity);
  get("trace", tol.trace);
  get("negativity", tol.negativity);
  get("locality", tol.locality);
  get("commutant", tol.commutant);
  return tol;
}

fs::path output_dir(const Json& cfg, const Flags& flags) {
  if (const char* env = std::getenv("QSYMM_OUT"); env && *env) return env;
  if (!flags.out.empty()) return flags.out;
  if (cfg.contains("output_dir")) {
    if (!cfg["output_dir"].is_string()) throw ConfigError("output_dir: expected a string");
    return cfg["output_dir"].get<std::string>();
  }
  return "qsymm_out";
}

DensityMatrix initial_state(const Json& cfg, const NetworkLayout& layout,
                            std::uint64_t seed) {
  if (!cfg.contains("initial_state")) throw ConfigError("missing key 'initial_state'");
  const Json& s = cfg["initial_state"];
  if (s.is_string() && s.get<std::string>() == "random") {
    Rng rng(seed);
    return DensityMatrix::from(random_density_matrix(layout.dim(), rng));
  }
  return io::initial_state_from_json(s, layout);
}

io::GeneratorConfig generator(const Json& cfg) {
  if (!cfg.contains("generator")) throw ConfigError("missing key 'generator'");
  return io::generator_from_json(cfg["generator"]);
}

Json states_json(const Trajectory& traj, long stride) {
  Json out{{"times", Json::array()}, {"states", Json::array()}};
  for (std::size_t i = 0; i < traj.states.size(); i += stride) {
    out["times"].push_back(traj.times[i]);
    out["states"].push_back(io::matrix_to_json(traj.states[i]));
  }
  return out;
}

Json optional_number(std::optional<double> v) { return v ? Json(*v) : Json(nullptr); }

int cmd_symmetrize(const Flags& flags, std::ostream& out) {
  const Json cfg = load_config(flags);
  io::require_keys(cfg, with_globals({"generator", "initial_state"}), "config");
  const auto gcfg = generator(cfg);
  const auto& layout = gcfg.unitary.layout;
  const std::uint64_t seed = seed_of(cfg, flags);
  const DensityMatrix rho0 = initial_state(cfg, layout, seed);
  const double T = number(cfg, "T", flags.T);
  const double dt = number(cfg, "dt", flags.dt);
  EvolveOptions options;
  options.snapshot_stride = static_cast<int>(count(cfg, "snapshot_stride", 1));
  options.tol = tolerances_of(cfg);
  const long state_stride = count(cfg, "state_stride", 0);

  const auto closure = generates_full_group(gcfg.unitary.active_permutations(), layout.subsystems());
  const auto locality = validate_quasi_local(gcfg.unitary, seed, options.tol.locality);
  const GeneratorHandle gen = gcfg.build();
  const Trajectory traj = evolve(gen, rho0, T, dt, options);

  std::vector<std::string> warnings;
  if (!closure.generates) {
    warnings.push_back("unitary terms generate a proper subgroup of size " +
                       std::to_string(closure.closure_size) +
                       "; convergence to the symmetrized state is not expected");
  }
  if (!traj.converged()) warnings.push_back("did not converge within T");
  if (!locality.all_pass()) warnings.push_back("some terms are not quasi-local");

  const auto& last = traj.diagnostics.back();
  Json summary{{"command", "symmetrize"},
               {"converged", traj.converged()},
               {"time_to_eps", optional_number(traj.converged_at)},
               {"final_V", last.V},
               {"final_dist_to_symm", last.dist_to_symm},
               {"generates_full_group", closure.generates},
               {"closure_size", closure.closure_size},
               {"locality_pass", locality.all_pass()},
               {"warnings", warnings}};

  Outputs files;
  std::ostringstream csv;
  io::write_trajectory_csv(csv, traj);
  files.add("trajectory.csv", csv.str());
  files.add_json("final_state.json", io::matrix_to_json(traj.final_state()));
  if (state_stride > 0) files.add_json("states.json", states_json(traj, state_stride));
  files.add_json("summary.json", summary);
  files.write(output_dir(cfg, flags));

  out << "symmetrize: converged=" << (traj.converged() ? "yes" : "no")
      << " final_V=" << last.V << " final_dist=" << last.dist_to_symm
      << " generates_full_group=" << (closure.generates ? "true" : "false") << "\n";
  for (const auto& w : warnings) out << "warning: " << w << "\n";
  return kOk;
}

LiftedWeights initial_weights(const Json& cfg, int m) {
  if (!cfg.contains("p0")) return LiftedWeights::delta_identity(m);
  const Json& p = cfg["p0"];
  if (p.is_string()) {
    if (p == "identity") return LiftedWeights::delta_identity(m);
    if (p == "uniform") return LiftedWeights::uniform(m);
    throw ConfigError("p0: unknown preset");
  }
  if (!p.is_array()) throw ConfigError("p0: expected a preset name or an array");
  std::vector<double> values;
  for (const auto& v : p) {
    if (!v.is_number()) throw ConfigError("p0: expected numbers");
    values.push_back(v.get<double>());
  }
  try {
    return LiftedWeights(m, std::move(values));
  } catch (const RangeError& e) {
    throw ConfigError(std::string("p0: ") + e.what());
  }
}

int cmd_lift(const Flags& flags, std::ostream& out) {
  const Json cfg = load_config(flags);
  io::require_keys(cfg, with_globals({"generator", "p0", "initial_state", "weights_stride"}),
                   "config");
  const auto gcfg = generator(cfg);
  if (gcfg.local) throw ConfigError("lift: generator must not have a local part");
  const auto& spec = gcfg.unitary;
  const int m = spec.layout.subsystems();
  const LiftedWeights p0 = initial_weights(cfg, m);
  const double T = number(cfg, "T", flags.T);
  const double dt = number(cfg, "dt", flags.dt);
  const int stride = static_cast<int>(count(cfg, "snapshot_stride", 1));
  if (stride < 1) throw ConfigError("snapshot_stride must be >= 1");
  const long weights_stride = count(cfg, "weights_stride", 0);

  const LiftedTrajectory traj = evolve_lifted(spec, p0, T, dt, stride);
  bool d_monotone = true, min_monotone = true;
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    d_monotone &= traj.divergence[i] <= traj.divergence[i - 1] + 1e-9;
    min_monotone &= traj.min_p[i] >= traj.min_p[i - 1] - 1e-9;
  }
  const auto& final_p = traj.weights.back().values();
  double dev_uniform = 0.0;
  for (double v : final_p) dev_uniform = std::max(dev_uniform, std::abs(v - 1.0 / final_p.size()));
  const auto closure = generates_full_group(spec.active_permutations(), m);

  Json summary{{"command", "lift"},
               {"final_D", traj.divergence.back()},
               {"final_min_p", traj.min_p.back()},
               {"final_max_p", traj.max_p.back()},
               {"max_dev_from_uniform", dev_uniform},
               {"D_monotone", d_monotone},
               {"min_p_monotone", min_monotone},
               {"generates_full_group", closure.generates},
               {"closure_size", closure.closure_size}};

  if (cfg.contains("initial_state")) {
    const DensityMatrix rho0 = initial_state(cfg, spec.layout, seed_of(cfg, flags));
    EvolveOptions options;
    options.snapshot_stride = stride;
    options.tol = tolerances_of(cfg);
    const Trajectory quantum = evolve(GeneratorHandle(spec), rho0, T, dt, options);
    const Symmetrizer sym(spec.layout);
    double err = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      err = std::max(err, (reconstruct_state(traj.weights[i], rho0.matrix(), sym) -
                           quantum.states[i]).norm());
    }
    summary["equivalence_max_error"] = err;
  }

  Outputs files;
  std::ostringstream csv;
  io::write_lifted_csv(csv, traj);
  files.add("lifted.csv", csv.str());
  if (weights_stride > 0) {
    Json w{{"times", Json::array()}, {"weights", Json::array()}};
    for (std::size_t i = 0; i < traj.times.size(); i += weights_stride) {
      w["times"].push_back(traj.times[i]);
      w["weights"].push_back(traj.weights[i].values());
    }
    files.add_json("weights.json", w);
  }
  files.add_json("summary.json", summary);
  files.write(output_dir(cfg, flags));

  out << "lift: final_D=" << traj.divergence.back() << " D_monotone="
      << (d_monotone ? "true" : "false") << " max_dev_from_uniform=" << dev_uniform << "\n";
  return kOk;
}

int cmd_prepare(const Flags& flags, std::ostream& out) {
  const Json cfg = load_config(flags);
  io::require_keys(cfg, with_globals({"generator", "initial_state"}), "config");
  const auto gcfg = generator(cfg);
  if (!gcfg.local) throw ConfigError("prepare: generator needs a 'local' stubborn subsystem");
  const auto& layout = gcfg.unitary.layout;
  const DensityMatrix rho0 = initial_state(cfg, layout, seed_of(cfg, flags));
  const double T = number(cfg, "T", flags.T);
  const double dt = number(cfg, "dt", flags.dt);
  EvolveOptions options;
  options.snapshot_stride = static_cast<int>(count(cfg, "snapshot_stride", 1));
  options.tol = tolerances_of(cfg);

  const auto result = prepare_network_state(gcfg.unitary, gcfg.local->target, gcfg.local->j,
                                            rho0, T, dt, options);
  const GeneratorHandle gen = gcfg.build();
  const double fixed_point_residual =
      gen.apply(DensityMatrix::product_pure(layout, gcfg.local->target).matrix(), 0.0).norm();
  std::optional<double> reached;
  for (std::size_t i = 0; i < result.fidelity.size(); ++i) {
    if (result.fidelity[i] > 0.999) {
      reached = result.trajectory.times[i];
      break;
    }
  }

  Json summary{{"command", "prepare"},
               {"final_fidelity", result.fidelity.back()},
               {"time_fidelity_above_0.999", optional_number(reached)},
               {"generates_full_group", result.generates_full_group},
               {"fixed_point_residual", fixed_point_residual},
               {"warnings", result.warnings}};

  Outputs files;
  std::ostringstream csv, fid;
  io::write_trajectory_csv(csv, result.trajectory);
  fid << "t,fidelity\n";
  for (std::size_t i = 0; i < result.fidelity.size(); ++i) {
    fid << io::format_double(result.trajectory.times[i]) << ','
        << io::format_double(result.fidelity[i]) << '\n';
  }
  files.add("trajectory.csv", csv.str());
  files.add("fidelity.csv", fid.str());
  files.add_json("final_state.json", io::matrix_to_json(result.trajectory.final_state()));
  files.add_json("summary.json", summary);
  files.write(output_dir(cfg, flags));

  out << "prepare: final_fidelity=" << result.fidelity.back()
      << " fixed_point_residual=" << fixed_point_residual << "\n";
  for (const auto& w : result.warnings) out << "warning: " << w << "\n";
  return kOk;
}

int cmd_estimate(const Flags& flags, std::ostream& out) {
  const Json cfg = load_config(flags);
  io::require_keys(cfg, with_globals({"m", "p", "mode", "trials", "threads", "evolve_T",
                                      "prepare_T"}),
                   "config");
  const long m = count(cfg, "m", -1);
  const long p = count(cfg, "p", -1);
  if (m < 0 || p < 0) throw ConfigError("estimate needs 'm' and 'p'");
  EstimationOptions options;
  if (cfg.contains("mode")) {
    if (!cfg["mode"].is_string()) throw ConfigError("mode: expected a string");
    options.mode = estimation_mode_from_string(cfg["mode"].get<std::string>());
  }
  options.trials = count(cfg, "trials", 1);
  options.seed = seed_of(cfg, flags);
  options.threads = flags.threads > 1 ? flags.threads
                                      : static_cast<int>(count(cfg, "threads", 1));
  options.evolve_T = number(cfg, "evolve_T", std::nullopt, 0.0);
  options.prepare_T = number(cfg, "prepare_T", std::nullopt, 0.0);
  EstimationReport report;
  try {
    report = run_estimation_protocol(m, p, options);
  } catch (const RangeError& e) {
    throw ConfigError(e.what());
  }

  Json report_json{{"m", m},
                   {"p", p},
                   {"mode", to_string(options.mode)},
                   {"trials", options.trials},
                   {"seed", options.seed},
                   {"K_histogram", report.k_histogram},
                   {"pmf", report.pmf},
                   {"mhat_mean", std::isfinite(report.mhat_mean) ? Json(report.mhat_mean)
                                                                  : Json(nullptr)},
                   {"mhat_inv_relerr_mean", report.mhat_inv_relerr_mean},
                   {"mhat_inv_relerr_var", report.mhat_inv_relerr_var},
                   {"paper_variance", report.closed_form_variance},
                   {"undefined_count", report.undefined_count},
                   {"undefined_probability", report.undefined_probability},
                   {"pmf_max_abs_dev", report.pmf_max_abs_dev}};
  if (options.mode == EstimationMode::ExactQuantum) {
    report_json["readout_distribution"] = report.readout;
  }
  if (report.finite_time_deviation) {
    report_json["evolve_T"] = options.evolve_T;
    report_json["finite_time_deviation"] = *report.finite_time_deviation;
  }
  if (report.preparation_fidelity) {
    report_json["prepare_T"] = options.prepare_T;
    report_json["preparation_fidelity"] = *report.preparation_fidelity;
  }

  std::ostringstream trials;
  trials << "trial,k_hat,m_hat\n";
  for (std::size_t t = 0; t < report.outcomes.size(); ++t) {
    const auto& o = report.outcomes[t];
    trials << t << ',' << o.k_hat << ',' << (o.defined ? io::format_double(o.m_hat) : "inf")
           << '\n';
  }
  Outputs files;
  files.add_json("report.json", report_json);
  files.add("trials.csv", trials.str());
  files.write(output_dir(cfg, flags));

  out << "estimate: mode=" << to_string(options.mode) << " m=" << m << " p=" << p
      << " trials=" << options.trials << " relerr_var=" << report.mhat_inv_relerr_var
      << " expected=" << report.closed_form_variance << " pmf_max_abs_dev=" << report.pmf_max_abs_dev
      << "\n";
  return kOk;
}

Json fixed_point_battery(const UnitaryNoiseSpec& spec, long samples, std::uint64_t seed,
                    const Tolerances& tol) {
  Rng rng(seed);
  const Symmetrizer sym(spec.layout);
  double rate_sum = 0.0;
  for (const auto& t : spec.terms) rate_sum += t.schedule.sup();
  long agreements = 0;
  bool symmetrized_pass = true;
  for (long s = 0; s < samples; ++s) {
    ComplexMatrix x = random_hermitian(spec.layout.dim(), rng);
    const bool symmetric = s % 2 == 1;
    if (symmetric) x = sym.apply(x);
    const double residual = commutant_residual(spec, x);
    const double gen_norm = apply_unitary_generator(spec, x, 0.0).norm();
    const bool in_commutant = residual <= tol.commutant;
    const bool fixed = gen_norm <= tol.commutant * std::max(1.0, rate_sum);
    agreements += in_commutant == fixed;
    if (symmetric) symmetrized_pass &= in_commutant && fixed;
  }
  return {{"samples", samples},
          {"agreements", agreements},
          {"all_agree", agreements == samples},
          {"symmetrized_pass", symmetrized_pass}};
}

int cmd_check(const Flags& flags, std::ostream& out) {
  const Json cfg = load_config(flags);
  io::require_keys(cfg, with_globals({"generator", "connectivity", "fixed_points", "initial_state"}),
                   "config");
  const auto gcfg = generator(cfg);
  const auto& spec = gcfg.unitary;
  const std::uint64_t seed = seed_of(cfg, flags);
  const Tolerances tol = tolerances_of(cfg);
  const auto closure = generates_full_group(spec.active_permutations(), spec.layout.subsystems());

  Json report{{"command", "check"},
              {"group", {{"generates_full_group", closure.generates},
                         {"closure_size", closure.closure_size}}}};
  Json locality = Json::array();
  auto add_locality = [&](const LocalityReport& r) {
    for (const auto& e : r.entries) {
      locality.push_back({{"term", e.label}, {"pass", e.pass}, {"residual", e.residual}});
    }
  };
  add_locality(validate_quasi_local(spec, seed, tol.locality));
  if (gcfg.local) {
    add_locality(validate_quasi_local(gcfg.build().general_spec(), spec.layout, seed,
                                      tol.locality));
  }
  report["locality"] = locality;

  if (cfg.contains("connectivity")) {
    const Json& c = cfg["connectivity"];
    io::require_keys(c, {"window", "threshold", "horizon"}, "connectivity");
    const auto conn = check_persistent_connectivity(spec, number(c, "window", std::nullopt),
                                                    number(c, "threshold", std::nullopt),
                                                    number(c, "horizon", std::nullopt));
    report["connectivity"] = {{"pass", conn.pass},
                              {"windows_checked", conn.windows_checked},
                              {"failing_window", optional_number(conn.failing_window)},
                              {"components", conn.components}};
  }
  if (cfg.contains("fixed_points")) {
    const Json& l = cfg["fixed_points"];
    io::require_keys(l, {"samples", "seed"}, "fixed_points");
    report["fixed_points"] = fixed_point_battery(spec, count(l, "samples", 50),
                                      static_cast<std::uint64_t>(count(l, "seed", seed)), tol);
  }
  if (cfg.contains("initial_state")) {
    const DensityMatrix rho0 = initial_state(cfg, spec.layout, seed);
    EvolveOptions options;
    options.tol = tol;
    options.snapshot_stride = static_cast<int>(count(cfg, "snapshot_stride", 1));
    const Trajectory traj =
        evolve(gcfg.build(), rho0, number(cfg, "T", flags.T), number(cfg, "dt", flags.dt),
               options);
    report["evolution"] = {{"final_dist_to_symm", traj.diagnostics.back().dist_to_symm},
                           {"converged", traj.converged()},
                           {"time_to_eps", optional_number(traj.converged_at)}};
  }

  Outputs files;
  files.add_json("check.json", report);
  files.write(output_dir(cfg, flags));

  out << "check: generates_full_group=" << (closure.generates ? "true" : "false");
  if (report.contains("connectivity")) {
    out << " connectivity=" << (report["connectivity"]["pass"].get<bool>() ? "pass" : "fail");
  }
  if (report.contains("fixed_points")) {
    out << " fixed_points_all_agree=" << (report["fixed_points"]["all_agree"].get<bool>() ? "true" : "false");
  }
  out << "\n";
  return kOk;
}

bool validate_file(const fs::path& path, bool monotone_v, std::ostream& out) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path.string());
  std::vector<std::string> failures;
  if (path.extension() == ".json") {
    Json j;
    try {
      j = Json::parse(is);
    } catch (const Json::parse_error& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
    auto checked = validate_state(io::matrix_from_json(j));
    if (auto* v = std::get_if<StateViolation>(&checked)) failures.push_back(v->describe());
  } else {
    const io::CsvTable table = io::read_csv(is);
    const auto& h = table.header;
    auto col = [&](const char* name) { return table.column(name); };
    auto has = [&](const char* name) { return std::find(h.begin(), h.end(), name) != h.end(); };
    const std::size_t t = col("t");
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
      if (!(table.rows[i][t] > table.rows[i - 1][t])) {
        failures.push_back("times not strictly increasing at row " + std::to_string(i));
        break;
      }
    }
    if (has("trace_dev")) {
      const std::size_t tr = col("trace_dev"), me = col("min_eig"), v = col("V");
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        if (!(r[tr] < 1e-9)) failures.push_back("trace deviation at t=" + io::format_double(r[t]));
        if (!(r[me] > -1e-8)) failures.push_back("negative eigenvalue at t=" + io::format_double(r[t]));
        if (monotone_v && i > 0 && r[v] > table.rows[i - 1][v] + 1e-9) {
          failures.push_back("V increased at t=" + io::format_double(r[t]));
        }
      }
    } else if (has("D")) {
      const std::size_t d = col("D"), lo = col("min_p"), hi = col("max_p");
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        if (!(r[lo] >= -1e-12 && r[lo] <= r[hi] && r[hi] <= 1.0 + 1e-12)) {
          failures.push_back("weights out of range at t=" + io::format_double(r[t]));
        }
        if (i > 0 && r[d] > table.rows[i - 1][d] + 1e-9) {
          failures.push_back("D increased at t=" + io::format_double(r[t]));
        }
        if (i > 0 && r[lo] < table.rows[i - 1][lo] - 1e-9) {
          failures.push_back("min_p decreased at t=" + io::format_double(r[t]));
        }
      }
    } else if (has("fidelity")) {
      const std::size_t f = col("fidelity");
      for (const auto& r : table.rows) {
        if (!(r[f] >= -1e-9 && r[f] <= 1.0 + 1e-9)) {
          failures.push_back("fidelity out of [0,1] at t=" + io::format_double(r[t]));
        }
      }
    } else {
      throw ConfigError(path.string() + ": unrecognized CSV columns");
    }
  }
  out << path.string() << ": " << (failures.empty() ? "ok" : "FAILED") << "\n";
  for (const auto& f : failures) out << "  " << f << "\n";
  return failures.empty();
}

int cmd_validate(const std::vector<std::string>& inputs, bool monotone_v, std::ostream& out) {
  bool all_ok = true;
  for (const auto& in : inputs) all_ok &= validate_file(in, monotone_v, out);
  return all_ok ? kOk : kInvariantBreach;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qsymm: dissipative symmetrization of quantum networks", "qsymm"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::string> inputs;
  bool monotone_v = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "Experiment config (JSON)");
    sub->add_option("--preset", flags.preset, "Name of a shipped preset config");
    sub->add_option("--out", flags.out, "Output directory (QSYMM_OUT overrides)");
    sub->add_option("--seed", flags.seed, "Master seed");
    sub->add_option("--threads", flags.threads, "Worker threads for Monte Carlo trials")
        ->check(CLI::PositiveNumber);
    sub->add_option("--dt", flags.dt, "Integration step");
    sub->add_option("--T", flags.T, "Integration horizon");
  };
  auto* symmetrize_cmd = app.add_subcommand("symmetrize", "Evolve toward the symmetrized state");
  auto* lift_cmd = app.add_subcommand("lift", "Integrate the lifted weight dynamics");
  auto* prepare_cmd = app.add_subcommand("prepare", "Stubborn-subsystem state preparation");
  auto* estimate_cmd = app.add_subcommand("estimate", "Network-size estimation protocol");
  auto* check_cmd = app.add_subcommand("check", "Group, locality, connectivity, fixed points");
  for (auto* sub : {symmetrize_cmd, lift_cmd, prepare_cmd, estimate_cmd, check_cmd}) {
    add_common(sub);
  }
  auto* validate_cmd = app.add_subcommand("validate", "Re-check emitted CSV/JSON outputs");
  validate_cmd->add_option("--input", inputs, "Files to validate")->required();
  validate_cmd->add_flag("--monotone-V", monotone_v, "Require V to be non-increasing");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (symmetrize_cmd->parsed()) return cmd_symmetrize(flags, out);
    if (lift_cmd->parsed()) return cmd_lift(flags, out);
    if (prepare_cmd->parsed()) return cmd_prepare(flags, out);
    if (estimate_cmd->parsed()) return cmd_estimate(flags, out);
    if (check_cmd->parsed()) return cmd_check(flags, out);
    if (validate_cmd->parsed()) return cmd_validate(inputs, monotone_v, out);
  } catch (const InvariantBreach& e) {
    err << "invariant breach: " << e.what() << "\n";
    return kInvariantBreach;
  } catch (const NormDrift& e) {
    err << "invariant breach: " << e.what() << "\n";
    return kInvariantBreach;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace qsymm::cli
