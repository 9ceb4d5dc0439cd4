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
 * Classical and quantum Fisher information, Cramer-Rao bounds and thermal
 * susceptibilities. QFI values are computed in the beta parametrization; the
 * temperature versions carry the exact chain-rule factor (dbeta/dT)^2 = 1/T^4.
 */

#include <functional>
#include <string>

#include "qtherm/qstate.hpp"

namespace qtherm {

/// Probabilities below this are left out of Fisher sums.
inline constexpr double kProbabilityCutoff = 1e-12;
/// Relative spectral support cutoff (times the trace of the state).
inline constexpr double kRankCutoff = 1e-12;

enum class Parameter { Temperature, Beta, Lambda };

std::string to_string(Parameter p);

/// p(theta | lambda) and its derivative in lambda.
class OutcomeDistribution {
 public:
  /// Requires equal lengths, sum p = 1 (1e-10), sum dp = 0 (1e-8), p >= -1e-12.
  OutcomeDistribution(RealVector probabilities, RealVector derivative);

  const RealVector& probabilities() const { return p_; }
  const RealVector& derivative() const { return dp_; }
  Index size() const { return p_.size(); }

  /// Merge outcomes i and j into one (coarse-graining).
  OutcomeDistribution merged(Index i, Index j) const;

 private:
  RealVector p_;
  RealVector dp_;
};

struct FisherResult {
  double value = 0.0;
  Parameter parameter = Parameter::Lambda;
  int n_measurements = 1;
  /// Sum of |dp| over outcomes skipped by the probability cutoff.
  double skipped_derivative = 0.0;
};

/// sum (dp)^2 / p over outcomes with p >= kProbabilityCutoff.
FisherResult classical_fisher(const OutcomeDistribution& dist, Parameter parameter = Parameter::Lambda,
                              int n_measurements = 1);

/// Distribution of a projective measurement in the orthonormal columns of
/// `basis`, with derivative taken from drho.
OutcomeDistribution projective_distribution(const DensityMatrix& rho, const HermitianOperator& drho,
                                            const Matrix& basis);

struct SldResult {
  double qfi = 0.0;
  HermitianOperator sld = HermitianOperator::zero(1);
  /// Set when drho has weight on the kernel of rho; that information is dropped.
  bool kernel_dropped = false;
  /// max |<i|drho|j>| over pairs with phi_i + phi_j below the rank cutoff.
  double kernel_weight = 0.0;
};

/// QFI and symmetric logarithmic derivative of rho in the direction drho.
SldResult sld_qfi(const DensityMatrix& rho, const HermitianOperator& drho);

/// Richardson-extrapolated 8 (1 - F(rho_{b - d/2}, rho_{b + d/2})) / d^2 with
/// steps d and d/2. The infidelity is evaluated in extended precision.
/// delta <= 0 selects the default 1e-3 * max(beta, 1).
double qfi_fidelity_limit(const std::function<Matrix(double)>& state_at, double beta, double delta = 0.0);

/// rho_lambda = e^{-i lambda H} rho_0 e^{i lambda H}.
class UnitaryFamily {
 public:
  UnitaryFamily(HermitianOperator generator, DensityMatrix base_state);
  const HermitianOperator& generator() const { return generator_; }
  const DensityMatrix& base_state() const { return base_; }
  /// The member of the family at lambda.
  DensityMatrix at(double lambda) const;

 private:
  HermitianOperator generator_;
  DensityMatrix base_;
};

/// 4 sum_{i<j} (phi_i - phi_j)^2/(phi_i + phi_j) |<i|H|j>|^2; independent of lambda.
double qfi_unitary(const UnitaryFamily& family);

/// An RMSE bound. Zero information is reported as infinite = true, value = +inf.
struct Bound {
  double value = 0.0;
  bool infinite = false;
};

/// 1 / sqrt(n F).
Bound cramer_rao(const FisherResult& fisher);
/// 1 / (N sqrt(n Q)).
Bound heisenberg_bound(int n_probes, int n_measurements, double qfi);

/// Var_beta(H) / T^4.
double thermal_qfi(const HermitianOperator& h, double temperature);
double thermal_qfi(const GibbsEnsemble& ensemble);

struct ShotNoiseResult {
  double delta_beta = 0.0;
  /// Mean energy per particle and |d/dbeta| of it (the per-particle variance).
  double mean_energy = 0.0;
  double mean_energy_slope = 0.0;
  bool infinite = false;
};

/// beta uncertainty 1 / sqrt(N eps') of N non-interacting copies of h_single.
ShotNoiseResult extensive_shot_noise(const HermitianOperator& h_single, int n_copies, double beta);

}  // namespace qtherm
