// Copyright 2026 The uavnoma Authors.
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

namespace uavnoma {

/// A caller passed an argument outside the documented domain (unknown cell
/// id, K < J, zero distance, ...). Maps to CLI exit code 2.
struct InputDomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A configuration value is unusable (bad key, altitude outside the aerial
/// channel model's validity range, ...). Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal invariant was violated; the message names the invariant.
/// Maps to CLI exit code 3.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace uavnoma
