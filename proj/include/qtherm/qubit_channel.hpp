// Copyright 2026 The qtherm Authors
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

/**
 * @file
 * Thermalizing qubit channel: a probe with H = (omega/2) sigma_z coupled to a
 * bosonic bath, decay rate gamma (1 + n_th) and excitation rate gamma n_th.
 * |0> is the excited level. Solved in closed form.
 */

#include <Eigen/Dense>

#include "qtherm/qstate.hpp"

namespace qtherm {

/// Bose occupation 1 / (e^{omega/T} - 1).
double thermal_occupation(double omega, double temperature);
/// d n_th / dT = (omega / T^2) e^{omega/T} n_th^2.
double thermal_occupation_derivative(double omega, double temperature);
/// Inverse of thermal_occupation: T = omega / ln(1 + 1/n).
double temperature_from_occupation(double omega, double n_th);

class BlochVector {
 public:
  BlochVector() = default;
  /// Requires |r| <= 1 + 1e-10.
  explicit BlochVector(const Eigen::Vector3d& r);
  BlochVector(double x, double y, double z) : BlochVector(Eigen::Vector3d(x, y, z)) {}
  /// Pure state at polar angle theta, azimuth phi.
  static BlochVector polar(double theta, double phi = 0.0);

  const Eigen::Vector3d& r() const { return r_; }
  DensityMatrix state() const { return DensityMatrix::from_bloch(r_.x(), r_.y(), r_.z()); }

 private:
  Eigen::Vector3d r_ = Eigen::Vector3d::Zero();
};

class ThermalQubitChannel {
 public:
  ThermalQubitChannel(double omega, double gamma, double n_th);
  static ThermalQubitChannel at_temperature(double omega, double gamma, double temperature);

  double omega() const { return omega_; }
  double gamma() const { return gamma_; }
  double n_th() const { return n_th_; }
  double gamma_plus() const { return gamma_ * (1.0 + n_th_); }
  double gamma_minus() const { return gamma_ * n_th_; }
  /// Population relaxation rate gamma (2 n_th + 1); coherences decay at half of it.
  double relaxation_rate() const { return gamma_ * (2.0 * n_th_ + 1.0); }
  /// Equilibrium z component -1 / (2 n_th + 1).
  double r_inf() const { return -1.0 / (2.0 * n_th_ + 1.0); }

  /// Throws InvalidArgument for t < 0.
  BlochVector apply(const BlochVector& r0, double t) const;
  /// The same map on an arbitrary 2x2 operator (linear, trace preserving).
  Matrix apply(const Matrix& x, double t) const;
  /// d/dn_th of apply(x, t) at fixed x.
  Matrix apply_dn(const Matrix& x, double t) const;
  /// Choi matrix sum_ij E(|i><j|) (x) |i><j| (unnormalized, trace 2).
  Matrix choi(double t) const;

 private:
  double omega_;
  double gamma_;
  double n_th_;
};

BlochVector channel_apply(const ThermalQubitChannel& ch, const BlochVector& r0, double t);

struct ProbeBath {
  double omega = 1.0;
  double gamma = 1.0;
};

/// |r_h(t) - r_c(t)| / |r_h(inf) - r_c(inf)| for one probe input.
/// Requires T_h > T_c > 0 with (T_h - T_c) / T_c >= 1e-6.
double discrimination_distance(double t_hot, double t_cold, const BlochVector& r0, double t, const ProbeBath& bath);

/// Trace distance of the two Choi states (channel (x) identity on |Phi+>),
/// divided by its equilibrium value.
double discrimination_with_ancilla(double t_hot, double t_cold, double t, const ProbeBath& bath);

struct DiscriminationOptimum {
  double t = 0.0;
  double theta = 0.0;
  double value = 0.0;
};

/// Grid search over 181 polar angles (azimuth is irrelevant: the channel is
/// phase covariant) times the t grid, then golden-section refinement in t.
DiscriminationOptimum optimize_discrimination(double t_hot, double t_cold, const ProbeBath& bath,
                                              const std::vector<double>& t_grid);

}  // namespace qtherm
