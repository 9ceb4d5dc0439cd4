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

#include "qtherm/estimation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qtherm/errors.hpp"

namespace qtherm {

std::string to_string(Parameter p) {
  switch (p) {
    case Parameter::Temperature:
      return "T";
    case Parameter::Beta:
      return "beta";
    case Parameter::Lambda:
      return "lambda";
  }
  return "?";
}

OutcomeDistribution::OutcomeDistribution(RealVector probabilities, RealVector derivative)
    : p_(std::move(probabilities)), dp_(std::move(derivative)) {
  if (p_.size() == 0 || p_.size() != dp_.size())
    throw InvalidArgument("OutcomeDistribution: probabilities and derivative must be non-empty and equally long");
  if (std::abs(p_.sum() - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "OutcomeDistribution: probabilities sum to " << p_.sum();
    throw InvalidArgument(os.str());
  }
  if (std::abs(dp_.sum()) > 1e-8) {
    std::ostringstream os;
    os << "OutcomeDistribution: derivative sums to " << dp_.sum();
    throw InvalidArgument(os.str());
  }
  if (p_.minCoeff() < -kProbabilityCutoff) throw InvalidArgument("OutcomeDistribution: negative probability");
}

OutcomeDistribution OutcomeDistribution::merged(Index i, Index j) const {
  if (i == j || i < 0 || j < 0 || i >= size() || j >= size())
    throw InvalidArgument("OutcomeDistribution::merged: need two distinct valid outcomes");
  RealVector p(size() - 1), dp(size() - 1);
  Index k = 0;
  for (Index m = 0; m < size(); ++m) {
    if (m == j) continue;
    p(k) = p_(m) + (m == i ? p_(j) : 0.0);
    dp(k) = dp_(m) + (m == i ? dp_(j) : 0.0);
    ++k;
  }
  return OutcomeDistribution(std::move(p), std::move(dp));
}

FisherResult classical_fisher(const OutcomeDistribution& dist, Parameter parameter, int n_measurements) {
  FisherResult r;
  r.parameter = parameter;
  r.n_measurements = n_measurements;
  const RealVector& p = dist.probabilities();
  const RealVector& dp = dist.derivative();
  for (Index k = 0; k < p.size(); ++k) {
    if (p(k) < kProbabilityCutoff) {
      r.skipped_derivative += std::abs(dp(k));
      continue;
    }
    r.value += dp(k) * dp(k) / p(k);
  }
  return r;
}

OutcomeDistribution projective_distribution(const DensityMatrix& rho, const HermitianOperator& drho,
                                            const Matrix& basis) {
  if (basis.rows() != rho.dim() || basis.cols() != rho.dim() || drho.dim() != rho.dim())
    throw DimensionMismatch("projective_distribution: basis, rho and drho must share one dimension");
  RealVector p(rho.dim()), dp(rho.dim());
  for (Index k = 0; k < rho.dim(); ++k) {
    const auto v = basis.col(k);
    p(k) = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    dp(k) = (v.adjoint() * drho.matrix() * v)(0, 0).real();
  }
  return OutcomeDistribution(std::move(p), std::move(dp));
}

SldResult sld_qfi(const DensityMatrix& rho, const HermitianOperator& drho) {
  if (drho.dim() != rho.dim()) throw DimensionMismatch("sld_qfi: rho and drho dimensions differ");
  if (std::abs(drho.matrix().trace()) > 1e-8) throw InvalidArgument("sld_qfi: drho must be traceless");
  const Spectrum s = hermitian_eig(rho.matrix());
  const Matrix d = s.vectors.adjoint() * drho.matrix() * s.vectors;
  const double cutoff = kRankCutoff * rho.matrix().trace().real();
  const Index n = rho.dim();
  Matrix l = Matrix::Zero(n, n);
  SldResult r;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double sum = s.values(i) + s.values(j);
      if (sum > cutoff) {
        l(i, j) = 2.0 * d(i, j) / sum;
        r.qfi += 2.0 * std::norm(d(i, j)) / sum;
      } else {
        r.kernel_weight = std::max(r.kernel_weight, std::abs(d(i, j)));
      }
    }
  r.kernel_dropped = r.kernel_weight > 1e-10 * std::max(1.0, drho.max_norm());
  r.sld = HermitianOperator(s.vectors * l * s.vectors.adjoint());
  return r;
}

double qfi_fidelity_limit(const std::function<Matrix(double)>& state_at, double beta, double delta) {
  if (!std::isfinite(beta)) throw InvalidArgument("qfi_fidelity_limit: beta must be finite");
  if (delta <= 0.0) delta = 1e-3 * std::max(beta, 1.0);
  auto central = [&](double d) {
    const double infidelity = infidelity_extended(state_at(beta - 0.5 * d), state_at(beta + 0.5 * d));
    return 8.0 * infidelity / (d * d);
  };
  const double coarse = central(delta);
  const double fine = central(0.5 * delta);
  const double q = (4.0 * fine - coarse) / 3.0;
  if (!std::isfinite(q)) throw NumericalFailure("qfi_fidelity_limit: non-finite fidelity quotient");
  return q;
}

UnitaryFamily::UnitaryFamily(HermitianOperator generator, DensityMatrix base_state)
    : generator_(std::move(generator)), base_(std::move(base_state)) {
  if (generator_.dim() != base_.dim()) throw DimensionMismatch("UnitaryFamily: generator and state dimensions differ");
}

DensityMatrix UnitaryFamily::at(double lambda) const {
  const Spectrum s = hermitian_eig(generator_);
  Vector phases(s.values.size());
  for (Index k = 0; k < s.values.size(); ++k) phases(k) = std::exp(Complex(0.0, -lambda * s.values(k)));
  const Matrix u = s.vectors * phases.asDiagonal() * s.vectors.adjoint();
  return DensityMatrix::from_spectral(u * base_.matrix() * u.adjoint());
}

double qfi_unitary(const UnitaryFamily& family) {
  const DensityMatrix& rho = family.base_state();
  const Spectrum s = hermitian_eig(rho.matrix());
  const Matrix h = s.vectors.adjoint() * family.generator().matrix() * s.vectors;
  const double cutoff = kRankCutoff * rho.matrix().trace().real();
  double q = 0.0;
  for (Index i = 0; i < rho.dim(); ++i)
    for (Index j = i + 1; j < rho.dim(); ++j) {
      const double sum = s.values(i) + s.values(j);
      if (sum <= cutoff) continue;
      const double diff = s.values(i) - s.values(j);
      q += 4.0 * diff * diff / sum * std::norm(h(i, j));
    }
  return q;
}

namespace {

Bound infinite_bound() { return {std::numeric_limits<double>::infinity(), true}; }

}  // namespace

Bound cramer_rao(const FisherResult& fisher) {
  if (fisher.n_measurements < 1) throw InvalidArgument("cramer_rao: n_measurements must be >= 1");
  if (!(fisher.value > 0.0)) return infinite_bound();
  return {1.0 / std::sqrt(fisher.n_measurements * fisher.value), false};
}

Bound heisenberg_bound(int n_probes, int n_measurements, double qfi) {
  if (n_probes < 1 || n_measurements < 1) throw InvalidArgument("heisenberg_bound: N and n must be >= 1");
  if (!(qfi > 0.0)) return infinite_bound();
  return {1.0 / (n_probes * std::sqrt(n_measurements * qfi)), false};
}

double thermal_qfi(const GibbsEnsemble& ensemble) {
  const double b2 = ensemble.beta() * ensemble.beta();
  return ensemble.energy_variance() * b2 * b2;
}

double thermal_qfi(const HermitianOperator& h, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw InvalidArgument("thermal_qfi: temperature must be positive and finite");
  return thermal_qfi(GibbsEnsemble(h, 1.0 / temperature));
}

ShotNoiseResult extensive_shot_noise(const HermitianOperator& h_single, int n_copies, double beta) {
  if (n_copies < 1) throw InvalidArgument("extensive_shot_noise: N must be >= 1");
  const GibbsEnsemble g = gibbs_state(h_single, beta);
  ShotNoiseResult r;
  r.mean_energy = g.mean_energy();
  // d<E>/dbeta = -Var(H) for a Gibbs state.
  r.mean_energy_slope = g.energy_variance();
  const double scale = std::max(1.0, h_single.max_norm());
  if (r.mean_energy_slope <= 1e-24 * scale * scale) {
    r.infinite = true;
    r.delta_beta = std::numeric_limits<double>::infinity();
    return r;
  }
  r.delta_beta = 1.0 / std::sqrt(n_copies * r.mean_energy_slope);
  return r;
}

}  // namespace qtherm
