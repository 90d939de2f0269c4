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

#include "qsymm/operators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "qsymm/errors.hpp"

namespace qsymm {

NetworkLayout::NetworkLayout(int m, int n,
                             std::vector<std::vector<int>> neighborhoods)
    : m_(m), n_(n), dim_(1), neighborhoods_(std::move(neighborhoods)) {
  if (m < 2) throw RangeError("layout needs at least 2 subsystems");
  if (n < 2) throw RangeError("local dimension must be at least 2");
  for (int k = 0; k < m; ++k) {
    dim_ *= n;
    if (dim_ > kMaxNetworkDimension) {
      throw BudgetExceeded("network dimension " + std::to_string(n) + "^" +
                           std::to_string(m) + " exceeds dense cap " +
                           std::to_string(kMaxNetworkDimension));
    }
  }
  for (auto& hood : neighborhoods_) {
    if (hood.empty()) throw RangeError("empty neighborhood");
    std::sort(hood.begin(), hood.end());
    hood.erase(std::unique(hood.begin(), hood.end()), hood.end());
    if (hood.front() < 1 || hood.back() > m) {
      throw RangeError("neighborhood index outside 1.." + std::to_string(m));
    }
  }
}

NetworkLayout NetworkLayout::path(int m, int n) {
  std::vector<std::vector<int>> hoods;
  for (int i = 1; i < m; ++i) hoods.push_back({i, i + 1});
  return NetworkLayout(m, n, std::move(hoods));
}

NetworkLayout NetworkLayout::complete(int m, int n) {
  std::vector<int> all(m);
  for (int i = 0; i < m; ++i) all[i] = i + 1;
  return NetworkLayout(m, n, {all});
}

std::vector<int> NetworkLayout::digits(long index) const {
  std::vector<int> out(m_);
  for (int k = m_ - 1; k >= 0; --k) {
    out[k] = static_cast<int>(index % n_);
    index /= n_;
  }
  return out;
}

long NetworkLayout::index(const std::vector<int>& digits) const {
  long idx = 0;
  for (int d : digits) idx = idx * n_ + d;
  return idx;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols();
  const Eigen::Index br = b.rows(), bc = b.cols();
  ComplexMatrix out(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i) {
    for (Eigen::Index j = 0; j < ac; ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix embed_local(const ComplexMatrix& x, int i,
                          const NetworkLayout& layout) {
  const int n = layout.local_dim();
  if (x.rows() != n || x.cols() != n) {
    throw DimensionMismatch("local operator must be " + std::to_string(n) +
                            "x" + std::to_string(n));
  }
  if (i < 1 || i > layout.subsystems()) {
    throw RangeError("subsystem index " + std::to_string(i) +
                     " out of range");
  }
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  ComplexMatrix out = (i == 1) ? x : id;
  for (int k = 2; k <= layout.subsystems(); ++k) {
    out = kron(out, k == i ? x : id);
  }
  return out;
}

ComplexMatrix embed_on_sites(const ComplexMatrix& op,
                             const std::vector<int>& sites,
                             const NetworkLayout& layout) {
  const int n = layout.local_dim();
  long local = 1;
  for (std::size_t k = 0; k < sites.size(); ++k) local *= n;
  if (op.rows() != local || op.cols() != local) {
    throw DimensionMismatch("operator does not match the number of sites");
  }
  if (!std::is_sorted(sites.begin(), sites.end()) ||
      std::adjacent_find(sites.begin(), sites.end()) != sites.end()) {
    throw RangeError("sites must be strictly ascending");
  }
  for (int s : sites) {
    if (s < 1 || s > layout.subsystems()) {
      throw RangeError("site " + std::to_string(s) + " out of range");
    }
  }
  std::vector<bool> inside(layout.subsystems(), false);
  for (int s : sites) inside[s - 1] = true;

  const long d = layout.dim();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (long a = 0; a < d; ++a) {
    const auto da = layout.digits(a);
    for (long b = 0; b < d; ++b) {
      const auto db = layout.digits(b);
      long ia = 0, ib = 0;
      bool same_outside = true;
      for (int k = 0; k < layout.subsystems(); ++k) {
        if (inside[k]) {
          ia = ia * n + da[k];
          ib = ib * n + db[k];
        } else if (da[k] != db[k]) {
          same_outside = false;
          break;
        }
      }
      if (same_outside) out(a, b) = op(ia, ib);
    }
  }
  return out;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("hs_inner operands differ in shape");
  }
  Complex acc = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      acc += std::conj(a(i, j)) * b(i, j);
    }
  }
  return acc;
}

double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

double hermiticity_deviation(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double min_hermitian_eigenvalue(const ComplexMatrix& a) {
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

ComplexVector basis_vector(long d, long k) {
  ComplexVector v = ComplexVector::Zero(d);
  v(k) = 1.0;
  return v;
}

std::string StateViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case StateViolationKind::Shape:
      os << "ShapeViolation";
      break;
    case StateViolationKind::Hermiticity:
      os << "HermiticityViolation";
      break;
    case StateViolationKind::Trace:
      os << "TraceViolation";
      break;
    case StateViolationKind::Negativity:
      os << "NegativityViolation";
      break;
  }
  os << " (magnitude " << magnitude << ")";
  return os.str();
}

std::variant<DensityMatrix, StateViolation> validate_state(
    const ComplexMatrix& rho, const Tolerances& tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    return StateViolation{StateViolationKind::Shape,
                          static_cast<double>(rho.rows() - rho.cols())};
  }
  const double herm = hermiticity_deviation(rho);
  if (herm > tol.hermiticity) {
    return StateViolation{StateViolationKind::Hermiticity, herm};
  }
  const double trace_dev = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (trace_dev > tol.trace) {
    return StateViolation{StateViolationKind::Trace, trace_dev};
  }
  const double min_eig = min_hermitian_eigenvalue(rho);
  if (min_eig < -tol.negativity) {
    return StateViolation{StateViolationKind::Negativity, -min_eig};
  }
  return DensityMatrix(rho);
}

std::variant<DensityMatrix, StateViolation> validate_state(
    const ComplexMatrix& rho, const NetworkLayout& layout,
    const Tolerances& tol) {
  if (rho.rows() != layout.dim() || rho.cols() != layout.dim()) {
    return StateViolation{StateViolationKind::Shape,
                          static_cast<double>(rho.rows() - layout.dim())};
  }
  return validate_state(rho, tol);
}

DensityMatrix DensityMatrix::from(const ComplexMatrix& rho,
                                  const Tolerances& tol) {
  auto result = validate_state(rho, tol);
  if (auto* v = std::get_if<StateViolation>(&result)) {
    throw ConfigError("invalid density matrix: " + v->describe());
  }
  return std::get<DensityMatrix>(std::move(result));
}

DensityMatrix DensityMatrix::maximally_mixed(const NetworkLayout& layout) {
  const long d = layout.dim();
  return DensityMatrix(ComplexMatrix::Identity(d, d) /
                       static_cast<double>(d));
}

DensityMatrix DensityMatrix::basis_state(const NetworkLayout& layout,
                                         const std::vector<int>& digits) {
  if (static_cast<int>(digits.size()) != layout.subsystems()) {
    throw DimensionMismatch("basis state needs one digit per subsystem");
  }
  for (int d : digits) {
    if (d < 0 || d >= layout.local_dim()) {
      throw RangeError("basis digit out of range");
    }
  }
  return DensityMatrix(
      projector(basis_vector(layout.dim(), layout.index(digits))));
}

DensityMatrix DensityMatrix::product_pure(const NetworkLayout& layout,
                                          const ComplexVector& psi) {
  if (psi.size() != layout.local_dim()) {
    throw DimensionMismatch("local state has the wrong dimension");
  }
  if (std::abs(psi.norm() - 1.0) > 1e-12) {
    throw RangeError("local state is not normalized");
  }
  ComplexMatrix local = projector(psi);
  ComplexMatrix out = local;
  for (int k = 1; k < layout.subsystems(); ++k) out = kron(out, local);
  return DensityMatrix(std::move(out));
}

}  // namespace qsymm
