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

#include "qcoop/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qcoop/error.hpp"

namespace qcoop {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

ControlField ControlField::on_carriers(const std::vector<double>& carriers,
                                       double center_time, double width,
                                       double horizon) {
  ControlField f;
  f.center_time = center_time;
  f.width = width;
  f.horizon = horizon;
  for (double w : carriers) f.components.push_back({0.0, 0.0, w});
  return f;
}

double ControlField::envelope(double t) const {
  const double x = (t - center_time) / width;
  return std::exp(-0.5 * x * x);
}

double ControlField::evaluate(double t) const {
  double sum = 0.0;
  for (const auto& c : components) {
    sum += c.amplitude * std::cos(c.carrier * t + c.phase);
  }
  return envelope(t) * sum;
}

void ControlField::validate() const {
  if (!(width > 0.0) || !std::isfinite(width))
    throw ConfigError("field width must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ConfigError("field horizon must be positive");
  if (!std::isfinite(center_time))
    throw ConfigError("field center_time must be finite");
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    const std::string where = "field component " + std::to_string(i);
    if (!(c.amplitude >= 0.0) || !std::isfinite(c.amplitude))
      throw ConfigError(where + ": amplitude must be finite and >= 0");
    if (!(c.carrier > 0.0) || !std::isfinite(c.carrier))
      throw ConfigError(where + ": carrier must be positive");
    if (!std::isfinite(c.phase))
      throw ConfigError(where + ": phase must be finite");
  }
}

double fluence(const ControlField& field) {
  double f = 0.0;
  for (const auto& c : field.components) f += c.amplitude * c.amplitude;
  return f;
}

double effective_duration(double center_time, double width, double horizon) {
  const double k = width * std::numbers::sqrt2;
  return width * std::sqrt(std::numbers::pi / 2.0) *
         (std::erf((horizon - center_time) / k) + std::erf(center_time / k));
}

double effective_duration(const ControlField& field) {
  return effective_duration(field.center_time, field.width, field.horizon);
}

std::complex<double> envelope_transform(double omega, double center_time,
                                        double width) {
  const double mag = width * std::sqrt(kTwoPi) *
                     std::exp(-0.5 * width * width * omega * omega);
  return std::polar(mag, -omega * center_time);
}

std::complex<double> analytic_spectrum(const ControlField& field,
                                       double omega) {
  std::complex<double> e = 0.0;
  for (const auto& c : field.components) {
    if (c.amplitude == 0.0) continue;
    e += c.amplitude *
         (envelope_transform(omega - c.carrier, field.center_time, field.width) *
              std::polar(1.0, c.phase) +
          envelope_transform(omega + c.carrier, field.center_time, field.width) *
              std::polar(1.0, -c.phase));
  }
  return e;
}

double Spectrum::max_power() const {
  double m = 0.0;
  for (std::size_t i = 0; i < value.size(); ++i) m = std::max(m, power(i));
  return m;
}

double Spectrum::power_near(double w) const {
  if (omega.empty()) return 0.0;
  std::size_t best = 0;
  for (std::size_t i = 1; i < omega.size(); ++i) {
    if (std::abs(omega[i] - w) < std::abs(omega[best] - w)) best = i;
  }
  return power(best);
}

Spectrum analytic_spectrum(const ControlField& field,
                           std::span<const double> omega_grid) {
  Spectrum s;
  s.omega.assign(omega_grid.begin(), omega_grid.end());
  s.value.reserve(s.omega.size());
  for (double w : s.omega) {
    if (!std::isfinite(w)) throw ConfigError("spectrum grid must be finite");
    s.value.push_back(analytic_spectrum(field, w));
  }
  return s;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points < 2) throw ConfigError("grid needs at least two points");
  std::vector<double> g(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = lo + step * static_cast<double>(i);
  return g;
}

long step_count(double horizon, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const double steps = horizon / dt;
  const long n = std::lround(steps);
  if (n < 1 || std::abs(steps - static_cast<double>(n)) > 1e-9 * steps)
    throw ConfigError("horizon must be an integer multiple of dt");
  return n;
}

std::vector<double> sample_half_steps(const ControlField& field, double dt) {
  const long n = step_count(field.horizon, dt);
  std::vector<double> e(static_cast<std::size_t>(2 * n + 1));
  for (long k = 0; k <= 2 * n; ++k) {
    e[static_cast<std::size_t>(k)] = field.evaluate(0.5 * dt * static_cast<double>(k));
  }
  return e;
}

CarrierBasis::CarrierBasis(std::vector<double> carriers, double center_time,
                           double width, double horizon, double dt)
    : carriers_(std::move(carriers)) {
  const long n = step_count(horizon, dt);
  n_samples_ = static_cast<std::size_t>(2 * n + 1);
  cos_.resize(carriers_.size() * n_samples_);
  sin_.resize(carriers_.size() * n_samples_);
  ControlField env;
  env.center_time = center_time;
  env.width = width;
  for (std::size_t l = 0; l < carriers_.size(); ++l) {
    for (std::size_t k = 0; k < n_samples_; ++k) {
      const double t = 0.5 * dt * static_cast<double>(k);
      const double s = env.envelope(t);
      cos_[l * n_samples_ + k] = s * std::cos(carriers_[l] * t);
      sin_[l * n_samples_ + k] = s * std::sin(carriers_[l] * t);
    }
  }
}

void CarrierBasis::sample(std::span<const double> amplitudes,
                          std::span<const double> phases,
                          std::vector<double>& out) const {
  if (amplitudes.size() != carriers_.size() || phases.size() != carriers_.size())
    throw ConfigError("carrier basis: parameter count mismatch");
  out.assign(n_samples_, 0.0);
  for (std::size_t l = 0; l < carriers_.size(); ++l) {
    if (amplitudes[l] == 0.0) continue;
    // A cos(wt + th) = A cos(th) cos(wt) - A sin(th) sin(wt)
    const double a = amplitudes[l] * std::cos(phases[l]);
    const double b = -amplitudes[l] * std::sin(phases[l]);
    const double* c = cos_.data() + l * n_samples_;
    const double* s = sin_.data() + l * n_samples_;
    for (std::size_t k = 0; k < n_samples_; ++k) out[k] += a * c[k] + b * s[k];
  }
}

double wrap_phase(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

}  // namespace qcoop
