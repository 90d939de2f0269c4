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

#include "qsymm/generator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsymm/errors.hpp"
#include "qsymm/random.hpp"

namespace qsymm {

namespace {

void require_square(const ComplexMatrix& x, long d, const char* what) {
  if (x.rows() != d || x.cols() != d) {
    std::ostringstream os;
    os << what << " is " << x.rows() << "x" << x.cols() << ", expected " << d
       << "x" << d;
    throw DimensionMismatch(os.str());
  }
}

std::string perm_label(const Permutation& p) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < p.size(); ++i) os << (i ? "," : "") << p.image()[i];
  os << "]";
  return os.str();
}

std::vector<int> complement(const std::vector<int>& sites, int m) {
  std::vector<int> out;
  for (int i = 1; i <= m; ++i) {
    if (std::find(sites.begin(), sites.end(), i) == sites.end()) out.push_back(i);
  }
  return out;
}

LocalityEntry check_term(const ComplexMatrix& term, const std::vector<int>& sites,
                         const NetworkLayout& layout, Rng& rng, double tol,
                         std::string label) {
  LocalityEntry entry{std::move(label), true, 0.0};
  const auto outside = complement(sites, layout.subsystems());
  if (outside.empty()) return entry;
  long d_out = 1;
  for (std::size_t k = 0; k < outside.size(); ++k) d_out *= layout.local_dim();
  const ComplexMatrix w =
      embed_on_sites(random_unitary(d_out, rng), outside, layout);
  entry.residual = (w * term * w.adjoint() - term).norm();
  entry.pass = entry.residual <= tol * std::max(1.0, term.norm());
  return entry;
}

}  // namespace

UnitaryNoiseSpec UnitaryNoiseSpec::from_layout(const NetworkLayout& layout,
                                               double rate, bool pairwise_only) {
  UnitaryNoiseSpec spec{layout, {}};
  for (auto& lp : local_permutations(layout, pairwise_only)) {
    spec.terms.push_back(
        {std::move(lp.perm), WeightSchedule::constant(rate), lp.neighborhoods.front()});
  }
  return spec;
}

std::vector<Permutation> UnitaryNoiseSpec::permutations() const {
  std::vector<Permutation> out;
  for (const auto& t : terms) out.push_back(t.perm);
  return out;
}

std::vector<Permutation> UnitaryNoiseSpec::active_permutations() const {
  std::vector<Permutation> out;
  for (const auto& t : terms) {
    if (t.schedule.sup() > 0.0) out.push_back(t.perm);
  }
  return out;
}

long GeneralLindbladSpec::dim() const {
  if (hamiltonian.size() > 0) return hamiltonian.rows();
  if (!noise_ops.empty()) return noise_ops.front().rows();
  return 0;
}

ComplexMatrix apply_unitary_generator(const UnitaryNoiseSpec& spec,
                                      const ComplexMatrix& x, double t) {
  require_square(x, spec.layout.dim(), "operator");
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  double total = 0.0;
  for (const auto& term : spec.terms) {
    const double alpha = term.schedule.value_at(t);
    if (alpha == 0.0) continue;
    PermutationUnitary(term.perm, spec.layout).add_conjugate(x, alpha, out);
    total += alpha;
  }
  out -= total * x;
  return out;
}

ComplexMatrix apply_general_generator(const GeneralLindbladSpec& spec,
                                      const ComplexMatrix& rho) {
  const long d = rho.rows();
  require_square(rho, d, "state");
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  if (spec.hamiltonian.size() > 0) {
    require_square(spec.hamiltonian, d, "Hamiltonian");
    const Complex i(0.0, 1.0);
    out += -i * (spec.hamiltonian * rho - rho * spec.hamiltonian);
  }
  for (const auto& l : spec.noise_ops) {
    require_square(l, d, "noise operator");
    const ComplexMatrix ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

bool LocalityReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const LocalityEntry& e) { return e.pass; });
}

LocalityReport validate_quasi_local(const UnitaryNoiseSpec& spec,
                                    std::uint64_t seed, double tol) {
  Rng rng(seed);
  LocalityReport report;
  const auto& hoods = spec.layout.neighborhoods();
  for (const auto& term : spec.terms) {
    std::string label = "perm" + perm_label(term.perm) + "@N" +
                        std::to_string(term.neighborhood);
    if (term.neighborhood < 0 ||
        term.neighborhood >= static_cast<int>(hoods.size())) {
      report.entries.push_back({std::move(label), false, INFINITY});
      continue;
    }
    const ComplexMatrix u = PermutationUnitary(term.perm, spec.layout).matrix();
    report.entries.push_back(check_term(u, hoods[term.neighborhood], spec.layout,
                                        rng, tol, std::move(label)));
  }
  return report;
}

LocalityReport validate_quasi_local(const GeneralLindbladSpec& spec,
                                    const NetworkLayout& layout,
                                    std::uint64_t seed, double tol) {
  Rng rng(seed);
  LocalityReport report;
  auto sites_or_all = [&](const std::optional<std::vector<int>>& tag) {
    if (tag) return *tag;
    std::vector<int> all(layout.subsystems());
    for (int i = 0; i < layout.subsystems(); ++i) all[i] = i + 1;
    return all;
  };
  if (spec.hamiltonian.size() > 0) {
    require_square(spec.hamiltonian, layout.dim(), "Hamiltonian");
    report.entries.push_back(check_term(spec.hamiltonian,
                                        sites_or_all(spec.hamiltonian_sites),
                                        layout, rng, tol, "H"));
  }
  for (std::size_t k = 0; k < spec.noise_ops.size(); ++k) {
    require_square(spec.noise_ops[k], layout.dim(), "noise operator");
    const auto tag =
        k < spec.noise_sites.size() ? spec.noise_sites[k] : std::nullopt;
    report.entries.push_back(check_term(spec.noise_ops[k], sites_or_all(tag),
                                        layout, rng, tol,
                                        "L" + std::to_string(k)));
  }
  return report;
}

double commutant_residual(const UnitaryNoiseSpec& spec, const ComplexMatrix& x) {
  require_square(x, spec.layout.dim(), "operator");
  double worst = 0.0;
  for (const auto& term : spec.terms) {
    const ComplexMatrix u = PermutationUnitary(term.perm, spec.layout).matrix();
    worst = std::max(worst, (x * u - u * x).norm());
  }
  return worst;
}

GeneratorHandle GeneratorHandle::zero(const NetworkLayout& layout) {
  return GeneratorHandle(UnitaryNoiseSpec{layout, {}});
}

GeneratorHandle::GeneratorHandle(UnitaryNoiseSpec unitary)
    : GeneratorHandle(std::move(unitary), GeneralLindbladSpec{}) {}

GeneratorHandle::GeneratorHandle(UnitaryNoiseSpec unitary,
                                 GeneralLindbladSpec general)
    : unitary_(std::move(unitary)), general_(std::move(general)) {
  const long d = unitary_.layout.dim();
  for (const auto& term : unitary_.terms) {
    unitaries_.emplace_back(term.perm, unitary_.layout);
  }
  damping_ = ComplexMatrix::Zero(d, d);
  if (general_.hamiltonian.size() > 0) {
    require_square(general_.hamiltonian, d, "Hamiltonian");
    if (hermiticity_deviation(general_.hamiltonian) > default_tolerances().hermiticity) {
      throw ConfigError("Hamiltonian is not Hermitian");
    }
    damping_ += Complex(0.0, 1.0) * general_.hamiltonian;
  }
  for (const auto& l : general_.noise_ops) {
    require_square(l, d, "noise operator");
    noise_adjoints_.push_back(l.adjoint());
    damping_ += 0.5 * noise_adjoints_.back() * l;
  }
}

bool GeneratorHandle::has_general_part() const {
  return general_.hamiltonian.size() > 0 || !general_.noise_ops.empty();
}

std::vector<double> GeneratorHandle::rates_at(double t) const {
  std::vector<double> rates;
  rates.reserve(unitary_.terms.size());
  for (const auto& term : unitary_.terms) rates.push_back(term.schedule.value_at(t));
  return rates;
}

ComplexMatrix GeneratorHandle::apply_unitary_part(
    const ComplexMatrix& rho, const std::vector<double>& rates) const {
  require_square(rho, layout().dim(), "state");
  if (rates.size() != unitaries_.size()) {
    throw DimensionMismatch("one rate per unitary term required");
  }
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  double total = 0.0;
  for (std::size_t k = 0; k < unitaries_.size(); ++k) {
    if (rates[k] == 0.0) continue;
    unitaries_[k].add_conjugate(rho, rates[k], out);
    total += rates[k];
  }
  out -= total * rho;
  return out;
}

ComplexMatrix GeneratorHandle::apply_with_rates(
    const ComplexMatrix& rho, const std::vector<double>& rates) const {
  ComplexMatrix out = apply_unitary_part(rho, rates);
  if (!has_general_part()) return out;
  for (std::size_t k = 0; k < general_.noise_ops.size(); ++k) {
    out.noalias() += general_.noise_ops[k] * rho * noise_adjoints_[k];
  }
  out.noalias() -= damping_ * rho;
  out.noalias() -= rho * damping_.adjoint();
  return out;
}

ComplexMatrix GeneratorHandle::apply(const ComplexMatrix& rho, double t) const {
  return apply_with_rates(rho, rates_at(t));
}

double GeneratorHandle::stability_bound() const {
  double bound = 0.0;
  for (const auto& term : unitary_.terms) bound += 2.0 * term.schedule.sup();
  if (general_.hamiltonian.size() > 0) {
    bound += 2.0 * spectral_norm(general_.hamiltonian);
  }
  for (const auto& l : general_.noise_ops) {
    const double s = spectral_norm(l);
    bound += s * s;
  }
  return bound;
}

std::vector<double> GeneratorHandle::change_times(double t0, double t1) const {
  std::vector<double> out;
  for (const auto& term : unitary_.terms) {
    auto ts = term.schedule.change_times(t0, t1);
    out.insert(out.end(), ts.begin(), ts.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

GeneratorHandle build_combined_generator(const UnitaryNoiseSpec& u_spec,
                                         const GeneralLindbladSpec& local,
                                         int j) {
  const auto& layout = u_spec.layout;
  const int n = layout.local_dim();
  if (j < 1 || j > layout.subsystems()) {
    throw RangeError("stubborn subsystem index out of range");
  }
  GeneralLindbladSpec full;
  if (local.hamiltonian.size() > 0) {
    require_square(local.hamiltonian, n, "local Hamiltonian");
    full.hamiltonian = embed_local(local.hamiltonian, j, layout);
    full.hamiltonian_sites = std::vector<int>{j};
  }
  for (const auto& l : local.noise_ops) {
    require_square(l, n, "local noise operator");
    full.noise_ops.push_back(embed_local(l, j, layout));
    full.noise_sites.push_back(std::vector<int>{j});
  }
  return GeneratorHandle(u_spec, std::move(full));
}

ComplexMatrix materialize_superoperator(const GeneratorHandle& gen, double t) {
  const long d = gen.layout().dim();
  const long d2 = d * d;
  ComplexMatrix s(d2, d2);
  ComplexMatrix unit = ComplexMatrix::Zero(d, d);
  for (long col = 0; col < d2; ++col) {
    const long i = col % d, j = col / d;
    unit(i, j) = 1.0;
    const ComplexMatrix image = gen.apply(unit, t);
    unit(i, j) = 0.0;
    s.col(col) = Eigen::Map<const ComplexVector>(image.data(), d2);
  }
  return s;
}

}  // namespace qsymm
