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

#include <Eigen/Dense>

namespace qcoop {

/// exp(t A) v without forming exp(t A): the interval is split into s
/// substeps with |t| ||A||_1 / s <= 1, and each substep is a Taylor series
/// truncated once two consecutive terms fall below `tol` relative to the
/// partial sum.
Eigen::VectorXcd expm_action(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& v,
                             double t, double tol = 1e-16);

/// Dense exp(t A) (scaling and squaring with Pade approximants).
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a, double t = 1.0);

}  // namespace qcoop
