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

#include <complex>
#include <span>
#include <vector>

namespace qcoop {

struct FieldComponent {
  double amplitude = 0.0;  ///< A_l >= 0
  double phase = 0.0;      ///< theta_l in [0, 2pi)
  double carrier = 0.0;    ///< omega_l in rad/fs, a resonant transition
};

/// Gaussian-envelope multi-carrier pulse
///   E(t) = s(t) sum_l A_l cos(omega_l t + theta_l),
///   s(t) = exp(-(t - t_c)^2 / 2 sigma^2).
struct ControlField {
  std::vector<FieldComponent> components;
  double center_time = 100.0;  ///< t_c = T/2, fs
  double width = 30.0;         ///< sigma, fs
  double horizon = 200.0;      ///< T_f, fs

  /// Zero-amplitude field with one component per carrier.
  static ControlField on_carriers(const std::vector<double>& carriers,
                                  double center_time = 100.0,
                                  double width = 30.0, double horizon = 200.0);

  double envelope(double t) const;
  double evaluate(double t) const;

  /// Throws ConfigError on negative amplitudes, non-positive carriers or
  /// width, or non-finite values.
  void validate() const;
};

/// Sum of squared amplitudes.
double fluence(const ControlField& field);

/// T_e = int_0^{T_f} s(t) dt, closed form via erf.
double effective_duration(const ControlField& field);
double effective_duration(double center_time, double width, double horizon);

/// Fourier transform of the envelope about its center,
///   g(w) = sigma sqrt(2 pi) exp(-sigma^2 w^2 / 2) exp(-i w t_c).
std::complex<double> envelope_transform(double omega, double center_time,
                                        double width);

/// Pulse spectrum in the two-sided carrier normalization
///   eps(w) = sum_l A_l [g(w - w_l) e^{i theta_l} + g(w + w_l) e^{-i theta_l}],
/// i.e. each cosine is expanded as e^{i phi} + e^{-i phi} with unit weights.
/// This equals 2 * int E(t) e^{-i w t} dt over the whole real line, and is
/// the normalization under which a lone resonant carrier gives
/// |eps(w_l)| = A_l sigma sqrt(2 pi) and the RWA coupling is mu_l A_l s(t).
std::complex<double> analytic_spectrum(const ControlField& field, double omega);

struct Spectrum {
  std::vector<double> omega;
  std::vector<std::complex<double>> value;

  double power(std::size_t i) const { return std::norm(value[i]); }
  double max_power() const;
  /// Power at the grid point nearest to w.
  double power_near(double w) const;
};

Spectrum analytic_spectrum(const ControlField& field,
                           std::span<const double> omega_grid);

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

/// Field values at the half-step grid t_k = k dt / 2, k = 0..2n, n = T_f/dt,
/// as consumed by the RK4 propagator.
std::vector<double> sample_half_steps(const ControlField& field, double dt);

/// Number of RK4 steps covering the field horizon; throws ConfigError if the
/// horizon is not an integer multiple of dt (to 1e-9 relative).
long step_count(double horizon, double dt);

/// Envelope-weighted carrier tables on the half-step grid, shared by every
/// field that differs only in amplitudes and phases. Sampling a field is then
/// 2 * n_carriers multiply-adds per grid point.
class CarrierBasis {
 public:
  CarrierBasis(std::vector<double> carriers, double center_time, double width,
               double horizon, double dt);

  std::size_t n_carriers() const { return carriers_.size(); }
  std::size_t n_samples() const { return n_samples_; }
  const std::vector<double>& carriers() const { return carriers_; }

  /// Fills `out` (resized to n_samples) for the given amplitudes/phases.
  void sample(std::span<const double> amplitudes, std::span<const double> phases,
              std::vector<double>& out) const;

 private:
  std::vector<double> carriers_;
  std::size_t n_samples_ = 0;
  std::vector<double> cos_;  // [carrier][sample] s(t) cos(w t)
  std::vector<double> sin_;  // [carrier][sample] s(t) sin(w t)
};

double wrap_phase(double theta);

}  // namespace qcoop
