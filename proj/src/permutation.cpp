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

#include "qsymm/permutation.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>

#include "qsymm/errors.hpp"

namespace qsymm {

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  const int m = size();
  if (m < 1) throw RangeError("empty permutation");
  std::vector<bool> seen(m, false);
  for (int v : image_) {
    if (v < 1 || v > m || seen[v - 1]) {
      throw RangeError("permutation image is not a bijection of 1.." +
                       std::to_string(m));
    }
    seen[v - 1] = true;
  }
}

Permutation Permutation::identity(int m) {
  std::vector<int> img(m);
  for (int i = 0; i < m; ++i) img[i] = i + 1;
  return Permutation(std::move(img));
}

Permutation Permutation::transposition(int m, int i, int j) {
  if (i < 1 || j < 1 || i > m || j > m || i == j) {
    throw RangeError("invalid transposition");
  }
  auto img = identity(m).image_;
  std::swap(img[i - 1], img[j - 1]);
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(image_.size());
  for (int i = 1; i <= size(); ++i) inv[image_[i - 1] - 1] = i;
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const { return support().empty(); }

bool Permutation::is_transposition() const { return support().size() == 2; }

std::vector<int> Permutation::support() const {
  std::vector<int> out;
  for (int i = 1; i <= size(); ++i) {
    if (image_[i - 1] != i) out.push_back(i);
  }
  return out;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("composing permutations of different sizes");
  }
  std::vector<int> img(a.size());
  for (int i = 1; i <= a.size(); ++i) img[i - 1] = a(b(i));
  return Permutation(std::move(img));
}

long factorial_checked(int m) {
  if (m < 0) throw RangeError("negative factorial");
  if (m > kMaxEnumerationSubsystems) {
    throw BudgetExceeded(std::to_string(m) + "! exceeds the enumeration cap (m <= " +
                         std::to_string(kMaxEnumerationSubsystems) + ")");
  }
  long f = 1;
  for (int k = 2; k <= m; ++k) f *= k;
  return f;
}

long permutation_rank(const Permutation& p) {
  const int m = p.size();
  long rank = 0;
  for (int i = 0; i < m; ++i) {
    int smaller_after = 0;
    for (int j = i + 1; j < m; ++j) {
      if (p.image()[j] < p.image()[i]) ++smaller_after;
    }
    rank = rank * (m - i) + smaller_after;
  }
  return rank;
}

Permutation permutation_unrank(long rank, int m) {
  const long total = factorial_checked(m);
  if (rank < 0 || rank >= total) throw RangeError("permutation rank out of range");
  std::vector<int> lehmer(m);
  for (int i = m - 1; i >= 0; --i) {
    const int base = m - i;
    lehmer[i] = static_cast<int>(rank % base);
    rank /= base;
  }
  std::vector<int> pool(m);
  for (int i = 0; i < m; ++i) pool[i] = i + 1;
  std::vector<int> img(m);
  for (int i = 0; i < m; ++i) {
    img[i] = pool[lehmer[i]];
    pool.erase(pool.begin() + lehmer[i]);
  }
  return Permutation(std::move(img));
}

std::vector<Permutation> all_permutations(int m) {
  factorial_checked(m);
  std::vector<Permutation> out;
  std::vector<int> img = Permutation::identity(m).image();
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

std::vector<LocalPermutation> local_permutations(const NetworkLayout& layout,
                                                 bool pairwise_only) {
  const int m = layout.subsystems();
  std::vector<LocalPermutation> out;
  const auto& hoods = layout.neighborhoods();
  for (int h = 0; h < static_cast<int>(hoods.size()); ++h) {
    const auto& hood = hoods[h];
    std::vector<int> arrangement = hood;
    do {
      std::vector<int> img = Permutation::identity(m).image();
      for (std::size_t k = 0; k < hood.size(); ++k) {
        img[hood[k] - 1] = arrangement[k];
      }
      Permutation p(std::move(img));
      if (p.is_identity()) continue;
      if (pairwise_only && !p.is_transposition()) continue;
      auto it = std::find_if(out.begin(), out.end(),
                             [&](const LocalPermutation& lp) { return lp.perm == p; });
      if (it == out.end()) {
        out.push_back({std::move(p), {h}});
      } else if (it->neighborhoods.back() != h) {
        it->neighborhoods.push_back(h);
      }
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return permutation_rank(a.perm) < permutation_rank(b.perm);
  });
  return out;
}

std::vector<Permutation> group_closure(const std::vector<Permutation>& gens,
                                       int m) {
  factorial_checked(m);
  for (const auto& g : gens) {
    if (g.size() != m) throw DimensionMismatch("generator size differs from m");
  }
  std::set<Permutation> seen;
  std::deque<Permutation> frontier;
  auto e = Permutation::identity(m);
  seen.insert(e);
  frontier.push_back(e);
  while (!frontier.empty()) {
    Permutation cur = frontier.front();
    frontier.pop_front();
    for (const auto& g : gens) {
      Permutation next = compose(g, cur);
      if (seen.insert(next).second) frontier.push_back(std::move(next));
    }
  }
  return {seen.begin(), seen.end()};
}

ClosureResult generates_full_group(const std::vector<Permutation>& gens,
                                   int m) {
  const long size = static_cast<long>(group_closure(gens, m).size());
  return {size == factorial_checked(m), size};
}

PermutationUnitary::PermutationUnitary(Permutation perm,
                                       const NetworkLayout& layout)
    : perm_(std::move(perm)) {
  const int m = layout.subsystems();
  if (perm_.size() != m) {
    throw DimensionMismatch("permutation size differs from the layout");
  }
  const long d = layout.dim();
  target_.resize(d);
  std::vector<int> out_digits(m);
  for (long b = 0; b < d; ++b) {
    const auto in = layout.digits(b);
    // Subsystem i of the image carries the digit of subsystem pi(i); this is
    // the choice that reproduces the defining conjugation relation.
    for (int i = 1; i <= m; ++i) out_digits[i - 1] = in[perm_(i) - 1];
    target_[b] = layout.index(out_digits);
  }
}

ComplexMatrix PermutationUnitary::matrix() const {
  const long d = dim();
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  for (long b = 0; b < d; ++b) u(target_[b], b) = 1.0;
  return u;
}

ComplexMatrix PermutationUnitary::conjugate(const ComplexMatrix& x) const {
  if (x.rows() != dim() || x.cols() != dim()) {
    throw DimensionMismatch("operator does not match the permutation unitary");
  }
  const long d = dim();
  ComplexMatrix out(d, d);
  for (long b = 0; b < d; ++b) {
    const long tb = target_[b];
    for (long a = 0; a < d; ++a) out(target_[a], tb) = x(a, b);
  }
  return out;
}

void PermutationUnitary::add_conjugate(const ComplexMatrix& x, Complex weight,
                                       ComplexMatrix& out) const {
  const long d = dim();
  for (long b = 0; b < d; ++b) {
    const long tb = target_[b];
    for (long a = 0; a < d; ++a) out(target_[a], tb) += weight * x(a, b);
  }
}

PermutationUnitary permutation_unitary(const Permutation& perm,
                                       const NetworkLayout& layout) {
  return PermutationUnitary(perm, layout);
}

Symmetrizer::Symmetrizer(const NetworkLayout& layout) : dim_(layout.dim()) {
  for (auto& p : all_permutations(layout.subsystems())) {
    unitaries_.emplace_back(std::move(p), layout);
  }
}

ComplexMatrix Symmetrizer::apply(const ComplexMatrix& q) const {
  if (q.rows() != dim_ || q.cols() != dim_) {
    throw DimensionMismatch("operator does not match the layout dimension");
  }
  ComplexMatrix acc = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& u : unitaries_) u.add_conjugate(q, 1.0, acc);
  return acc / static_cast<double>(unitaries_.size());
}

ComplexMatrix symmetrize(const ComplexMatrix& q, const NetworkLayout& layout) {
  return Symmetrizer(layout).apply(q);
}

}  // namespace qsymm
