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

#include <vector>

namespace qsymm {

/// Piecewise-constant, right-continuous, nonnegative rate alpha(t) for t >= 0.
///
/// With interior change times t_1 < ... < t_r the schedule takes values[0] on
/// [0, t_1), values[i] on [t_i, t_{i+1}) and values[r] on [t_r, inf). A
/// positive period repeats the pattern on [0, period); change times must then
/// lie in (0, period).
class WeightSchedule {
 public:
  WeightSchedule() : WeightSchedule(std::vector<double>{}, {1.0}) {}
  /// Throws ConfigError on unsorted breakpoints, negative values or a size
  /// mismatch (values.size() must be breakpoints.size() + 1).
  WeightSchedule(std::vector<double> breakpoints, std::vector<double> values,
                 double period = 0.0);

  static WeightSchedule constant(double rate);

  double value_at(double t) const;
  double sup() const;
  /// Exact integral over [t0, t1].
  double integral(double t0, double t1) const;
  /// Times in [t0, t1] where the value may change (including repeats).
  std::vector<double> change_times(double t0, double t1) const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  double period() const { return period_; }
  bool is_constant() const { return breakpoints_.empty(); }

 private:
  double integral_from_zero(double t) const;

  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double period_;
};

}  // namespace qsymm
