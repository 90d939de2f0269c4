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

#include <compare>
#include <vector>

#include "qsymm/operators.hpp"

namespace qsymm {

/// Element of the symmetric group on m labels, in 1-based one-line
/// notation: image()[i-1] = pi(i).
class Permutation {
 public:
  /// Throws RangeError unless `image` is a bijection of 1..m.
  explicit Permutation(std::vector<int> image);

  static Permutation identity(int m);
  /// The transposition (i j), 1-based.
  static Permutation transposition(int m, int i, int j);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int i) const { return image_[i - 1]; }
  const std::vector<int>& image() const { return image_; }

  Permutation inverse() const;
  bool is_identity() const;
  bool is_transposition() const;
  /// Labels with pi(i) != i, ascending.
  std::vector<int> support() const;

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> image_;
};

/// Composition with the global convention (a o b)(i) = a(b(i)).
Permutation compose(const Permutation& a, const Permutation& b);

/// m!, throwing BudgetExceeded when m exceeds the enumeration cap.
long factorial_checked(int m);

/// Lexicographic rank of the one-line notation (Lehmer code), in [0, m!).
long permutation_rank(const Permutation& p);
Permutation permutation_unrank(long rank, int m);

/// All m! permutations in rank order.
std::vector<Permutation> all_permutations(int m);

/// A non-identity permutation together with every neighborhood (0-based
/// index into the layout) whose labels contain its support.
struct LocalPermutation {
  Permutation perm;
  std::vector<int> neighborhoods;
};

/// Non-identity permutations that move only labels inside a single
/// neighborhood, each listed once, ordered by rank. With pairwise_only only
/// transpositions are returned.
std::vector<LocalPermutation> local_permutations(const NetworkLayout& layout,
                                                 bool pairwise_only = false);

struct ClosureResult {
  bool generates = false;
  long closure_size = 0;
};

/// Breadth-first closure of `gens` under composition.
std::vector<Permutation> group_closure(const std::vector<Permutation>& gens,
                                       int m);
ClosureResult generates_full_group(const std::vector<Permutation>& gens,
                                   int m);

/// The unitary U_pi with U_pi (X_1 (x) ... (x) X_m) U_pi^dagger =
/// X_pi(1) (x) ... (x) X_pi(m). Stored as a basis index map, so
/// conjugation is a pure relabelling of matrix entries.
///
/// Under compose() this representation reverses products:
/// U_a U_b = U_{b o a}.
class PermutationUnitary {
 public:
  PermutationUnitary(Permutation perm, const NetworkLayout& layout);

  const Permutation& permutation() const { return perm_; }
  /// U|b> = |target(b)>.
  long target(long b) const { return target_[b]; }
  const std::vector<long>& index_map() const { return target_; }
  long dim() const { return static_cast<long>(target_.size()); }

  /// Dense 0/1 matrix.
  ComplexMatrix matrix() const;
  /// U x U^dagger.
  ComplexMatrix conjugate(const ComplexMatrix& x) const;
  /// Accumulates weight * U x U^dagger into out.
  void add_conjugate(const ComplexMatrix& x, Complex weight,
                     ComplexMatrix& out) const;

 private:
  Permutation perm_;
  std::vector<long> target_;
};

PermutationUnitary permutation_unitary(const Permutation& perm,
                                       const NetworkLayout& layout);

/// Holds the index maps of all m! permutation unitaries so the projection
/// can be applied repeatedly.
class Symmetrizer {
 public:
  /// Throws BudgetExceeded for m > 8.
  explicit Symmetrizer(const NetworkLayout& layout);

  /// (1/m!) sum_pi U_pi q U_pi^dagger.
  ComplexMatrix apply(const ComplexMatrix& q) const;
  const std::vector<PermutationUnitary>& unitaries() const {
    return unitaries_;
  }
  long dim() const { return dim_; }

 private:
  long dim_;
  std::vector<PermutationUnitary> unitaries_;
};

/// One-shot symmetrizing projection.
ComplexMatrix symmetrize(const ComplexMatrix& q, const NetworkLayout& layout);

}  // namespace qsymm
