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

#include "qtherm/sequential.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "qtherm/errors.hpp"
#include "qtherm/rng.hpp"

namespace qtherm {

MeasurementModel::MeasurementModel(std::vector<Matrix> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw InvalidArgument("MeasurementModel: no outcomes");
  const Index d = kraus_.front().rows();
  Matrix total = Matrix::Zero(d, d);
  for (const auto& k : kraus_) {
    if (k.rows() != d || k.cols() != d) throw DimensionMismatch("MeasurementModel: Kraus operators differ in shape");
    effects_.push_back(k.adjoint() * k);
    total += effects_.back();
  }
  if (max_abs(total - Matrix::Identity(d, d)) > 1e-10)
    throw InvalidArgument("MeasurementModel: effects do not sum to the identity");
}

MeasurementModel MeasurementModel::projective_z() {
  Matrix plus = Matrix::Zero(2, 2), minus = Matrix::Zero(2, 2);
  plus(0, 0) = 1.0;
  minus(1, 1) = 1.0;
  return MeasurementModel({plus, minus});
}

ThermalizationStep::ThermalizationStep(const ProbeBath& bath, double temperature, double tau)
    : channel_(ThermalQubitChannel::at_temperature(bath.omega, bath.gamma, temperature)),
      tau_(tau),
      dn_dT_(thermal_occupation_derivative(bath.omega, temperature)) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("ThermalizationStep: tau must be positive");
}

std::uint64_t branch_count(std::size_t outcomes, int n) {
  std::uint64_t c = 1;
  for (int i = 0; i < n; ++i) {
    if (c > std::numeric_limits<std::uint64_t>::max() / outcomes) return std::numeric_limits<std::uint64_t>::max();
    c *= outcomes;
  }
  return c;
}

namespace {

void require_rounds(int n) {
  if (n < 1) throw InvalidArgument("Fisher protocols: N must be >= 1");
}

void require_dims(const DensityMatrix& rho0, const MeasurementModel& povm) {
  if (rho0.dim() != povm.kraus().front().rows()) throw DimensionMismatch("probe state and POVM dimensions differ");
}

// Depth-first walk; visit(prefix, X, dX) at every node of the given depth.
void walk(const Matrix& x, const Matrix& dx, const TemperatureMap& step, const MeasurementModel& povm, int depth,
          std::vector<int>& prefix, const std::function<void(const std::vector<int>&, const Matrix&, const Matrix&)>& visit) {
  if (static_cast<int>(prefix.size()) == depth) {
    visit(prefix, x, dx);
    return;
  }
  const Matrix ex = step.apply(x);
  const Matrix dex = step.apply_dT(x) + step.apply(dx);
  for (std::size_t k = 0; k < povm.size(); ++k) {
    const Matrix& m = povm.kraus()[k];
    prefix.push_back(static_cast<int>(k));
    walk(m * ex * m.adjoint(), m * dex * m.adjoint(), step, povm, depth, prefix, visit);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<BranchNode> enumerate_branches(const DensityMatrix& rho0, const TemperatureMap& step,
                                           const MeasurementModel& povm, int depth) {
  require_dims(rho0, povm);
  if (depth < 0) throw InvalidArgument("enumerate_branches: negative depth");
  if (branch_count(povm.size(), depth) > kMaxBranches) throw ResourceGuard("enumerate_branches: too many branches");
  std::vector<BranchNode> out;
  std::vector<int> prefix;
  const Matrix zero = Matrix::Zero(rho0.dim(), rho0.dim());
  walk(rho0.matrix(), zero, step, povm, depth, prefix, [&](const std::vector<int>& p, const Matrix& x, const Matrix& dx) {
    BranchNode node;
    node.prefix = p;
    node.prob = x.trace().real();
    node.dprob = dx.trace().real();
    node.state = node.prob > 0.0 ? Matrix(x / node.prob)
                                 : Matrix(Matrix::Identity(x.rows(), x.cols()) / static_cast<double>(x.rows()));
    node.dstate = dx;
    out.push_back(std::move(node));
  });
  return out;
}

FisherResult fisher_iid(const DensityMatrix& rho0, const TemperatureMap& step, const MeasurementModel& povm, int n) {
  require_rounds(n);
  require_dims(rho0, povm);
  const Matrix ex = step.apply(rho0.matrix());
  const Matrix dex = step.apply_dT(rho0.matrix());
  RealVector p(static_cast<Index>(povm.size())), dp(static_cast<Index>(povm.size()));
  for (std::size_t k = 0; k < povm.size(); ++k) {
    p(static_cast<Index>(k)) = (povm.effects()[k] * ex).trace().real();
    dp(static_cast<Index>(k)) = (povm.effects()[k] * dex).trace().real();
  }
  FisherResult r = classical_fisher(OutcomeDistribution(p, dp), Parameter::Temperature, 1);
  r.value *= n;
  r.skipped_derivative *= n;
  return r;
}

FisherResult fisher_iid(const DensityMatrix& rho0, const ProbeBath& bath, double tau, const MeasurementModel& povm,
                        int n, double temperature) {
  return fisher_iid(rho0, ThermalizationStep(bath, temperature, tau), povm, n);
}

FisherResult fisher_sequential(const DensityMatrix& rho0, const TemperatureMap& step, const MeasurementModel& povm,
                               int n) {
  require_rounds(n);
  require_dims(rho0, povm);
  const std::uint64_t leaves = branch_count(povm.size(), n);
  if (leaves > kMaxBranches) {
    std::ostringstream os;
    os << "fisher_sequential: N = " << n << " needs " << povm.size() << "^" << n << " branches, above the guard of "
       << kMaxBranches << " (N <= 20 for a binary POVM)";
    throw ResourceGuard(os.str());
  }
  FisherResult r;
  r.parameter = Parameter::Temperature;
  std::vector<int> prefix;
  const Matrix zero = Matrix::Zero(rho0.dim(), rho0.dim());
  walk(rho0.matrix(), zero, step, povm, n, prefix, [&](const std::vector<int>&, const Matrix& x, const Matrix& dx) {
    const double p = x.trace().real();
    const double dp = dx.trace().real();
    if (p < kProbabilityCutoff) {
      r.skipped_derivative += std::abs(dp);
      return;
    }
    r.value += dp * dp / p;
  });
  return r;
}

FisherResult fisher_sequential(const DensityMatrix& rho0, const ProbeBath& bath, double tau,
                               const MeasurementModel& povm, int n, double temperature) {
  return fisher_sequential(rho0, ThermalizationStep(bath, temperature, tau), povm, n);
}

std::string to_string(Protocol p) { return p == Protocol::IID ? "iid" : "sequential"; }

InputMeasure parse_input_measure(const std::string& name) {
  if (name == "haar") return InputMeasure::HaarPure;
  if (name == "ball") return InputMeasure::BlochBall;
  throw InvalidArgument("unknown input measure '" + name + "' (expected haar or ball)");
}

InputExtremes fisher_input_extremes(Protocol protocol, const ProbeBath& bath, double tau,
                                    const MeasurementModel& povm, int n, double temperature,
                                    const InputSampling& sampling) {
  if (sampling.n_angles < 2) throw InvalidArgument("fisher_input_extremes: need at least 2 polar angles");
  if (sampling.n_samples < 1) throw InvalidArgument("fisher_input_extremes: need at least 1 sample");
  if (povm.kraus().front().rows() != 2) throw DimensionMismatch("fisher_input_extremes: qubit POVM expected");
  const ThermalizationStep step(bath, temperature, tau);
  auto fisher = [&](const BlochVector& r) {
    const DensityMatrix rho0 = r.state();
    return protocol == Protocol::IID ? fisher_iid(rho0, step, povm, n).value
                                     : fisher_sequential(rho0, step, povm, n).value;
  };
  auto at_theta = [&](double theta) { return fisher(BlochVector::polar(theta)); };

  const int na = sampling.n_angles;
  std::vector<double> theta(static_cast<std::size_t>(na)), f(static_cast<std::size_t>(na));
  for (int k = 0; k < na; ++k) {
    theta[static_cast<std::size_t>(k)] = std::numbers::pi * k / (na - 1);
    f[static_cast<std::size_t>(k)] = at_theta(theta[static_cast<std::size_t>(k)]);
  }
  InputExtremes out;
  out.excited = f.front();
  out.ground = f.back();

  auto refine = [&](bool maximize, double& value, double& where) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < f.size(); ++k)
      if (maximize ? f[k] > f[best] : f[k] < f[best]) best = k;
    value = f[best];
    where = theta[best];
    const double lo = theta[best == 0 ? 0 : best - 1];
    const double hi = theta[std::min(best + 1, f.size() - 1)];
    const double sign = maximize ? -1.0 : 1.0;
    const auto [x, fx] = boost::math::tools::brent_find_minima([&](double t) { return sign * at_theta(t); }, lo, hi, 40);
    if (sign * fx < sign * value) {
      value = sign * fx;
      where = x;
    }
  };
  refine(true, out.max, out.theta_max);
  refine(false, out.min, out.theta_min);

  double sum = 0.0;
  for (int j = 0; j < sampling.n_samples; ++j) {
    SplitMix64 g(stream_seed(sampling.seed, 0x1a2b3c, static_cast<std::uint64_t>(j)));
    const double cos_theta = 1.0 - 2.0 * uniform01(g);
    const double phi = 2.0 * std::numbers::pi * uniform01(g);
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    const double radius = sampling.measure == InputMeasure::BlochBall ? std::cbrt(uniform01(g)) : 1.0;
    sum += fisher(BlochVector(radius * sin_theta * std::cos(phi), radius * sin_theta * std::sin(phi), radius * cos_theta));
  }
  out.mean = sum / sampling.n_samples;
  return out;
}

std::vector<double> occupation_grid(double omega, double n_lo, double n_hi, int points) {
  if (points < 2 || !(n_lo > 0.0) || !(n_hi > n_lo)) throw InvalidArgument("occupation_grid: need 0 < n_lo < n_hi, >= 2 points");
  std::vector<double> t;
  for (int j = 0; j < points; ++j) {
    const double n = n_lo * std::pow(n_hi / n_lo, static_cast<double>(j) / (points - 1));
    t.push_back(temperature_from_occupation(omega, n));
  }
  return t;
}

}  // namespace qtherm
