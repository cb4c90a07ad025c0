// Copyright 2026 The qcoop Authors
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

namespace qcoop {

/// Bad model id, malformed document, inconsistent dimensions or parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A density-matrix invariant (trace, Hermiticity, positivity, finiteness)
/// was violated beyond tolerance during propagation.
class PropagationDiverged : public std::runtime_error {
 public:
  PropagationDiverged(long step, const std::string& what)
      : std::runtime_error("propagation diverged at step " +
                           std::to_string(step) + ": " + what),
        step_(step) {}

  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// The selected rung carries no coherent coupling, so its amplitude cannot
/// be tuned against the target.
class NoControlAuthority : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcoop
