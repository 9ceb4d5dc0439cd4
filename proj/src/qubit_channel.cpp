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

#include "qtherm/qubit_channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "qtherm/errors.hpp"

namespace qtherm {

double thermal_occupation(double omega, double temperature) {
  if (!(temperature > 0.0)) throw InvalidArgument("thermal_occupation: T must be positive");
  return 1.0 / std::expm1(omega / temperature);
}

double thermal_occupation_derivative(double omega, double temperature) {
  const double n = thermal_occupation(omega, temperature);
  const double x = omega / temperature;
  // e^x n^2 = n (1 + n).
  return x / temperature * n * (1.0 + n);
}

double temperature_from_occupation(double omega, double n_th) {
  if (!(n_th > 0.0)) throw InvalidArgument("temperature_from_occupation: n_th must be positive");
  return omega / std::log1p(1.0 / n_th);
}

BlochVector::BlochVector(const Eigen::Vector3d& r) : r_(r) {
  if (!r.allFinite() || r.norm() > 1.0 + 1e-10) {
    std::ostringstream os;
    os << "BlochVector: |r| = " << r.norm() << " exceeds 1";
    throw InvalidArgument(os.str());
  }
}

BlochVector BlochVector::polar(double theta, double phi) {
  return BlochVector(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
}

ThermalQubitChannel::ThermalQubitChannel(double omega, double gamma, double n_th)
    : omega_(omega), gamma_(gamma), n_th_(n_th) {
  if (!std::isfinite(omega) || !(gamma > 0.0) || !std::isfinite(gamma) || !(n_th >= 0.0) || !std::isfinite(n_th))
    throw InvalidArgument("ThermalQubitChannel: need finite omega, gamma > 0 and n_th >= 0");
}

ThermalQubitChannel ThermalQubitChannel::at_temperature(double omega, double gamma, double temperature) {
  if (!(omega > 0.0)) throw InvalidArgument("ThermalQubitChannel: omega must be positive");
  return ThermalQubitChannel(omega, gamma, thermal_occupation(omega, temperature));
}

namespace {

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("channel: t must be finite and >= 0");
}

}  // namespace

Matrix ThermalQubitChannel::apply(const Matrix& x, double t) const {
  require_time(t);
  if (x.rows() != 2 || x.cols() != 2) throw DimensionMismatch("channel: expected a 2x2 operator");
  const double rate = relaxation_rate();
  const double decay = std::exp(-rate * t);
  const Complex tr = x(0, 0) + x(1, 1);
  const Complex z = x(0, 0) - x(1, 1);
  const Complex zt = tr * r_inf() + (z - tr * r_inf()) * decay;
  const Complex coherence = std::exp(Complex(-0.5 * rate * t, -omega_ * t));
  Matrix out(2, 2);
  out(0, 0) = 0.5 * (tr + zt);
  out(1, 1) = 0.5 * (tr - zt);
  out(0, 1) = x(0, 1) * coherence;
  out(1, 0) = x(1, 0) * std::conj(coherence);
  return out;
}

Matrix ThermalQubitChannel::apply_dn(const Matrix& x, double t) const {
  require_time(t);
  if (x.rows() != 2 || x.cols() != 2) throw DimensionMismatch("channel: expected a 2x2 operator");
  const double rate = relaxation_rate();
  const double rate_dn = 2.0 * gamma_;
  const double decay = std::exp(-rate * t);
  const double k = 2.0 * n_th_ + 1.0;
  const double r_inf_dn = 2.0 / (k * k);
  const Complex tr = x(0, 0) + x(1, 1);
  const Complex z = x(0, 0) - x(1, 1);
  const Complex dz = tr * r_inf_dn * (1.0 - decay) - (z - tr * r_inf()) * (t * rate_dn * decay);
  const Complex coherence = std::exp(Complex(-0.5 * rate * t, -omega_ * t));
  const double coherence_dn = -0.5 * rate_dn * t;
  Matrix out(2, 2);
  out(0, 0) = 0.5 * dz;
  out(1, 1) = -0.5 * dz;
  out(0, 1) = x(0, 1) * coherence * coherence_dn;
  out(1, 0) = x(1, 0) * std::conj(coherence) * coherence_dn;
  return out;
}

BlochVector ThermalQubitChannel::apply(const BlochVector& r0, double t) const {
  const Matrix out = apply(r0.state().matrix(), t);
  const double rz = (out(0, 0) - out(1, 1)).real();
  return BlochVector(2.0 * out(0, 1).real(), -2.0 * out(0, 1).imag(), rz);
}

Matrix ThermalQubitChannel::choi(double t) const {
  Matrix c = Matrix::Zero(4, 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) {
      Matrix e = Matrix::Zero(2, 2);
      e(i, j) = 1.0;
      const Matrix img = apply(e, t);
      // System factor first: index (s, a) -> 2 s + a.
      for (Index s = 0; s < 2; ++s)
        for (Index sp = 0; sp < 2; ++sp) c(2 * s + i, 2 * sp + j) += img(s, sp);
    }
  return c;
}

BlochVector channel_apply(const ThermalQubitChannel& ch, const BlochVector& r0, double t) { return ch.apply(r0, t); }

namespace {

void require_pair(double t_hot, double t_cold) {
  if (!(t_cold > 0.0) || !(t_hot > t_cold))
    throw InvalidArgument("discrimination: need T_h > T_c > 0");
  if ((t_hot - t_cold) / t_cold < 1e-6)
    throw InvalidArgument("discrimination: T_h and T_c are too close to discriminate (relative gap < 1e-6)");
}

}  // namespace

double discrimination_distance(double t_hot, double t_cold, const BlochVector& r0, double t, const ProbeBath& bath) {
  require_pair(t_hot, t_cold);
  const auto hot = ThermalQubitChannel::at_temperature(bath.omega, bath.gamma, t_hot);
  const auto cold = ThermalQubitChannel::at_temperature(bath.omega, bath.gamma, t_cold);
  const double eq = std::abs(hot.r_inf() - cold.r_inf());
  if (!(eq > 0.0)) throw InvalidArgument("discrimination: equilibrium states coincide");
  return (hot.apply(r0, t).r() - cold.apply(r0, t).r()).norm() / eq;
}

double discrimination_with_ancilla(double t_hot, double t_cold, double t, const ProbeBath& bath) {
  require_pair(t_hot, t_cold);
  const auto hot = ThermalQubitChannel::at_temperature(bath.omega, bath.gamma, t_hot);
  const auto cold = ThermalQubitChannel::at_temperature(bath.omega, bath.gamma, t_cold);
  const double eq = 0.5 * std::abs(hot.r_inf() - cold.r_inf());
  if (!(eq > 0.0)) throw InvalidArgument("discrimination: equilibrium states coincide");
  const Matrix diff = 0.5 * (hot.choi(t) - cold.choi(t));
  const Spectrum s = hermitian_eig(Matrix(0.5 * (diff + diff.adjoint())));
  return 0.5 * s.values.cwiseAbs().sum() / eq;
}

DiscriminationOptimum optimize_discrimination(double t_hot, double t_cold, const ProbeBath& bath,
                                              const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw InvalidArgument("optimize_discrimination: empty time grid");
  require_pair(t_hot, t_cold);
  constexpr int kAngles = 181;
  DiscriminationOptimum best{t_grid.front(), 0.0, -1.0};
  std::size_t best_t = 0;
  for (std::size_t it = 0; it < t_grid.size(); ++it)
    for (int k = 0; k < kAngles; ++k) {
      const double theta = std::numbers::pi * k / (kAngles - 1);
      const double v = discrimination_distance(t_hot, t_cold, BlochVector::polar(theta), t_grid[it], bath);
      if (v > best.value) {
        best = {t_grid[it], theta, v};
        best_t = it;
      }
    }
  const double lo = t_grid[best_t == 0 ? 0 : best_t - 1];
  const double hi = t_grid[std::min(best_t + 1, t_grid.size() - 1)];
  if (hi > lo) {
    const BlochVector r0 = BlochVector::polar(best.theta);
    auto neg = [&](double t) { return -discrimination_distance(t_hot, t_cold, r0, t, bath); };
    const auto [t_star, f_star] = boost::math::tools::brent_find_minima(neg, lo, hi, 40);
    if (-f_star > best.value) {
      best.t = t_star;
      best.value = -f_star;
    }
  }
  return best;
}

}  // namespace qtherm
