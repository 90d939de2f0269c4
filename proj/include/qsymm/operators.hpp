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

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qsymm/tolerances.hpp"

namespace qsymm {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// m identical n-level subsystems plus the neighborhoods that bound the
/// support of every generator term. Subsystems are labelled 1..m.
///
/// Basis ordering: subsystem 1 is the most significant base-n digit of a
/// basis index, so an operator A_1 (x) ... (x) A_m is the plain Kronecker
/// chain.
class NetworkLayout {
 public:
  /// Throws RangeError on m < 2, n < 2, or a neighborhood that is empty or
  /// leaves 1..m; BudgetExceeded when n^m is beyond the dense cap.
  NetworkLayout(int m, int n, std::vector<std::vector<int>> neighborhoods);

  /// Path graph: neighborhoods {1,2}, {2,3}, ..., {m-1,m}.
  static NetworkLayout path(int m, int n);
  /// A single neighborhood holding every subsystem.
  static NetworkLayout complete(int m, int n);

  int subsystems() const { return m_; }
  int local_dim() const { return n_; }
  long dim() const { return dim_; }
  const std::vector<std::vector<int>>& neighborhoods() const {
    return neighborhoods_;
  }

  /// Base-n digits of a basis index; digits[0] belongs to subsystem 1.
  std::vector<int> digits(long index) const;
  long index(const std::vector<int>& digits) const;

  bool operator==(const NetworkLayout&) const = default;

 private:
  int m_;
  int n_;
  long dim_;
  std::vector<std::vector<int>> neighborhoods_;
};

/// Kronecker product. Entry order is fixed, so results are bitwise
/// reproducible.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// I^(i-1) (x) x (x) I^(m-i), with 1-based i.
ComplexMatrix embed_local(const ComplexMatrix& x, int i,
                          const NetworkLayout& layout);

/// Embeds an operator acting on the (ascending, 1-based) subsystems `sites`
/// as op (x) identity on the remaining ones.
ComplexMatrix embed_on_sites(const ComplexMatrix& op,
                             const std::vector<int>& sites,
                             const NetworkLayout& layout);

/// Hilbert-Schmidt inner product Tr(a^dagger b).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

double frobenius_norm(const ComplexMatrix& a);
/// Largest singular value.
double spectral_norm(const ComplexMatrix& a);
/// Largest |a_ij - conj(a_ji)|.
double hermiticity_deviation(const ComplexMatrix& a);
/// Smallest eigenvalue of the Hermitian part (a + a^dagger)/2.
double min_hermitian_eigenvalue(const ComplexMatrix& a);

/// Projector |v><v| for a (not necessarily normalized) vector.
ComplexMatrix projector(const ComplexVector& v);
/// Computational basis vector |k> in dimension d.
ComplexVector basis_vector(long d, long k);

enum class StateViolationKind { Shape, Hermiticity, Trace, Negativity };

/// Names the first violated density-matrix invariant and by how much.
struct StateViolation {
  StateViolationKind kind;
  double magnitude;
  std::string describe() const;
};

/// A matrix that passed validate_state. Immutable.
class DensityMatrix {
 public:
  const ComplexMatrix& matrix() const { return rho_; }
  long dim() const { return rho_.rows(); }

  /// Validates and throws ConfigError describing the violation on failure.
  static DensityMatrix from(const ComplexMatrix& rho,
                            const Tolerances& tol = default_tolerances());

  static DensityMatrix maximally_mixed(const NetworkLayout& layout);
  /// Computational basis product state with the given per-subsystem digits.
  static DensityMatrix basis_state(const NetworkLayout& layout,
                                   const std::vector<int>& digits);
  /// (|psi><psi|)^(x)m for a local unit vector psi.
  static DensityMatrix product_pure(const NetworkLayout& layout,
                                    const ComplexVector& psi);

 private:
  explicit DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {}
  friend std::variant<DensityMatrix, StateViolation> validate_state(
      const ComplexMatrix&, const Tolerances&);

  ComplexMatrix rho_;
};

/// Checks Hermiticity, unit trace and positivity (in that order).
std::variant<DensityMatrix, StateViolation> validate_state(
    const ComplexMatrix& rho, const Tolerances& tol = default_tolerances());

/// As above, and additionally requires dim(rho) = n^m.
std::variant<DensityMatrix, StateViolation> validate_state(
    const ComplexMatrix& rho, const NetworkLayout& layout,
    const Tolerances& tol = default_tolerances());

}  // namespace qsymm
