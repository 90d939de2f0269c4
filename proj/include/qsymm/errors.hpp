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

#include <stdexcept>
#include <string>

namespace qsymm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions do not agree.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside its documented domain (indices, counts, ranges).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A factorial-size enumeration or dense exact computation exceeds its cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The requested integration step violates the stability bound.
class StepTooLarge : public Error {
 public:
  StepTooLarge(double dt, double max_dt)
      : Error("step " + std::to_string(dt) + " exceeds stability bound " +
              std::to_string(max_dt)),
        dt_(dt),
        max_dt_(max_dt) {}
  double dt() const { return dt_; }
  double max_dt() const { return max_dt_; }

 private:
  double dt_;
  double max_dt_;
};

/// A physical invariant (trace, positivity) broke during integration.
class InvariantBreach : public Error {
 public:
  InvariantBreach(const std::string& what, double time, double magnitude)
      : Error(what + " at t=" + std::to_string(time) +
              " (magnitude " + std::to_string(magnitude) + ")"),
        time_(time),
        magnitude_(magnitude) {}
  double time() const { return time_; }
  double magnitude() const { return magnitude_; }

 private:
  double time_;
  double magnitude_;
};

/// Lifted weights stopped summing to one.
class NormDrift : public Error {
 public:
  NormDrift(double time, double drift)
      : Error("lifted weights drifted from unit sum by " +
              std::to_string(drift) + " at t=" + std::to_string(time)),
        time_(time),
        drift_(drift) {}
  double time() const { return time_; }
  double drift() const { return drift_; }

 private:
  double time_;
  double drift_;
};

/// Malformed configuration or schedule/grid misalignment.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qsymm
