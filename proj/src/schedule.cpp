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

#include "qsymm/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "qsymm/errors.hpp"

namespace qsymm {

WeightSchedule::WeightSchedule(std::vector<double> breakpoints,
                               std::vector<double> values, double period)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      period_(period) {
  if (values_.size() != breakpoints_.size() + 1) {
    throw ConfigError("schedule needs exactly one more value than breakpoints");
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError("schedule values must be finite and nonnegative");
    }
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > 0.0) || !std::isfinite(breakpoints_[i])) {
      throw ConfigError("schedule breakpoints must be positive");
    }
    if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1])) {
      throw ConfigError("schedule breakpoints must be strictly ascending");
    }
  }
  if (period_ < 0.0 || !std::isfinite(period_)) {
    throw ConfigError("schedule period must be nonnegative");
  }
  if (period_ > 0.0 && !breakpoints_.empty() &&
      !(breakpoints_.back() < period_)) {
    throw ConfigError("periodic schedule breakpoints must lie inside the period");
  }
}

WeightSchedule WeightSchedule::constant(double rate) {
  return WeightSchedule({}, {rate});
}

double WeightSchedule::value_at(double t) const {
  if (period_ > 0.0) t = t - period_ * std::floor(t / period_);
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double WeightSchedule::sup() const {
  return *std::max_element(values_.begin(), values_.end());
}

double WeightSchedule::integral_from_zero(double t) const {
  auto within = [this](double s) {
    // Integral over [0, s] for s inside one pass of the pattern.
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
      if (s <= breakpoints_[i]) return acc + values_[i] * (s - prev);
      acc += values_[i] * (breakpoints_[i] - prev);
      prev = breakpoints_[i];
    }
    return acc + values_.back() * (s - prev);
  };
  if (period_ > 0.0) {
    const double cycles = std::floor(t / period_);
    return cycles * within(period_) + within(t - cycles * period_);
  }
  return within(t);
}

double WeightSchedule::integral(double t0, double t1) const {
  if (t1 < t0) throw RangeError("integral bounds reversed");
  return integral_from_zero(t1) - integral_from_zero(t0);
}

std::vector<double> WeightSchedule::change_times(double t0, double t1) const {
  std::vector<double> out;
  if (breakpoints_.empty()) return out;
  if (period_ > 0.0) {
    const double first_cycle = std::floor(t0 / period_);
    for (double c = first_cycle; c * period_ <= t1; c += 1.0) {
      const double base = c * period_;
      if (base >= t0 && base > 0.0) out.push_back(base);
      for (double b : breakpoints_) {
        const double t = base + b;
        if (t >= t0 && t <= t1) out.push_back(t);
      }
    }
  } else {
    for (double b : breakpoints_) {
      if (b >= t0 && b <= t1) out.push_back(b);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace qsymm
