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

#include "qcoop/expm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "qcoop/error.hpp"

namespace qcoop {

Eigen::VectorXcd expm_action(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& v,
                             double t, double tol) {
  if (a.rows() != a.cols() || a.cols() != v.size())
    throw ConfigError("expm_action: dimension mismatch");
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff() * std::abs(t);
  const long s = std::max(1L, static_cast<long>(std::ceil(norm)));
  const double h = t / static_cast<double>(s);
  constexpr int kMaxTerms = 80;

  Eigen::VectorXcd b = v;
  Eigen::VectorXcd term(v.size());
  for (long step = 0; step < s; ++step) {
    Eigen::VectorXcd f = b;
    term = b;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kMaxTerms; ++k) {
      term = (h / static_cast<double>(k)) * (a * term);
      f += term;
      const double cur = term.cwiseAbs().maxCoeff();
      const double scale = f.cwiseAbs().maxCoeff();
      if (cur <= tol * scale && prev <= tol * scale) break;
      prev = cur;
    }
    b = f;
  }
  return b;
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a, double t) {
  const Eigen::MatrixXcd scaled = a * t;
  return scaled.exp();
}

}  // namespace qcoop
