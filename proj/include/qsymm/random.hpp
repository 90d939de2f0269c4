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

#include <cstdint>
#include <random>

#include "qsymm/operators.hpp"

namespace qsymm {

using Rng = std::mt19937_64;

/// Matrix of i.i.d. standard complex Gaussian entries.
ComplexMatrix random_ginibre(long rows, long cols, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
ComplexMatrix random_unitary(long d, Rng& rng);
/// Random Hermitian matrix (G + G^dagger)/2.
ComplexMatrix random_hermitian(long d, Rng& rng);
/// Hilbert-Schmidt random mixed state G G^dagger / Tr(G G^dagger).
ComplexMatrix random_density_matrix(long d, Rng& rng);
/// Haar-random unit vector.
ComplexVector random_pure_vector(long d, Rng& rng);

}  // namespace qsymm
