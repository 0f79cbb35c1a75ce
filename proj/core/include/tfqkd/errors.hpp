// Copyright 2026 The tfqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace tfqkd {

/// Argument outside the mathematical domain of an operation (negative
/// intensity, transmittance above one, entropy argument outside [0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// QBER requested for a configuration whose gain is exactly zero.
class UndefinedQberError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Photon number above the supported cap of the yield formula.
class UnsupportedPhotonNumberError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Coherent amplitude far outside the protocol regime.
class UnsupportedAmplitudeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// The X-basis gain vanished, so there is nothing to distil a key from.
class NoKeyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decoy observations that no yield assignment can explain.
class InfeasibleLpError : public std::runtime_error {
 public:
  InfeasibleLpError(const std::string& what, int intensity_a, int intensity_b)
      : std::runtime_error(what), intensity_a_(intensity_a), intensity_b_(intensity_b) {}

  /// Index of Alice's / Bob's intensity in the violated constraint pair.
  int intensity_a() const noexcept { return intensity_a_; }
  int intensity_b() const noexcept { return intensity_b_; }

 private:
  int intensity_a_;
  int intensity_b_;
};

/// Invalid experiment configuration; `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace tfqkd
