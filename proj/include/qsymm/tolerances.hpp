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

namespace qsymm {

/// Numerical tolerances shared by the whole library. One record so that the
/// CLI can override them per experiment.
struct Tolerances {
  // State validity.
  double hermiticity = 1e-10;
  double trace = 1e-10;
  double negativity = 1e-9;

  // Aborts during integration.
  double trace_breach = 1e-7;
  double negativity_breach = 1e-6;

  // Lifted weights must keep unit sum.
  double norm_drift = 1e-9;

  // ||rho(t) - Ebar(rho0)||_F threshold, two consecutive snapshots.
  double convergence = 1e-6;

  // Quasi-locality and commutant checks.
  double locality = 1e-10;
  double commutant = 1e-10;

  // Relative slack when snapping schedule breakpoints to the step grid.
  double grid_alignment = 1e-9;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

/// Largest m for which m! enumerations are allowed (8! = 40320).
inline constexpr int kMaxEnumerationSubsystems = 8;

/// Largest dense network dimension n^m.
inline constexpr long kMaxNetworkDimension = 1024;

}  // namespace qsymm
