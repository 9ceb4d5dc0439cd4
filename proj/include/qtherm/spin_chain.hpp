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
 * Periodic Ising and XXZ chains and their local quantum thermal
 * susceptibility (LQTS): the beta-QFI of the reduced thermal state of a block A.
 *
 * s_A = Var(H) - s_a, where s_a is the beta-QFI of the complementary part of
 * a purification of rho_beta. s_A / T^4 is the temperature QFI available to
 * measurements on A alone.
 */

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qtherm/pauli.hpp"
#include "qtherm/qstate.hpp"

namespace qtherm {

/// Largest chain handled by dense diagonalization.
inline constexpr int kMaxDenseSites = 12;
/// Largest chain for which a 2^(2L) purification vector is formed.
inline constexpr int kMaxPurificationSites = 10;

enum class ChainKind {
  Ising,      ///< -sum [x_i x_{i+1} + h z_i]
  XXZ,        ///< sum [x_i x_{i+1} + y_i y_{i+1} + Delta z_i z_{i+1}]
  Decoupled,  ///< -h sum z_i, no bonds
};

std::string to_string(ChainKind kind);
ChainKind parse_chain_kind(const std::string& name);

/// Bonds (i, i+1 mod L) for i = 0..L-1. For L = 2 the single bond is counted twice.
PauliSum ising_terms(int n_sites, double h);
PauliSum xxz_terms(int n_sites, double delta);
PauliSum decoupled_terms(int n_sites, double h);

HermitianOperator build_ising(int n_sites, double h);
HermitianOperator build_xxz(int n_sites, double delta);

struct ChainModel {
  ChainKind kind = ChainKind::Ising;
  int n_sites = 2;
  /// h for Ising and Decoupled, Delta for XXZ.
  double param = 0.0;

  ChainModel() = default;
  ChainModel(ChainKind kind, int n_sites, double param);

  PauliSum terms() const;
  HermitianOperator hamiltonian() const { return terms().to_operator(); }
};

struct LqtsResult {
  double s_A = 0.0;
  double variance_H = 0.0;
  double s_a = 0.0;
  int n_A = 0;
  double beta = 0.0;
  /// Total weight of reduced-state eigenvalues below the rank cutoff.
  double dropped = 0.0;
};

enum class LqtsRoute {
  Automatic,  ///< Schmidt up to kMaxPurificationSites qubits, Reduced above.
  Schmidt,    ///< Schmidt vectors of the thermal purification, H' applied matrix-free.
  Reduced,    ///< The same matrix elements from Tr_B[rho H] and Tr_B[rho H^2].
};

/// Closed-form LQTS for many blocks at one (H, beta); diagonalizes H once.
class LqtsEvaluator {
 public:
  LqtsEvaluator(HermitianOperator h, double beta, std::optional<PauliSum> terms = std::nullopt);
  LqtsEvaluator(const ChainModel& model, double beta);

  const GibbsEnsemble& ensemble() const { return ensemble_; }

  LqtsResult evaluate(const BipartitionSpec& partition, LqtsRoute route = LqtsRoute::Automatic) const;

 private:
  LqtsResult schmidt(const BipartitionSpec& partition) const;
  LqtsResult reduced(const BipartitionSpec& partition) const;
  void check(const BipartitionSpec& partition) const;

  struct PurificationCache;

  GibbsEnsemble ensemble_;
  std::optional<PauliSum> terms_;
  bool real_ = false;
  std::shared_ptr<PurificationCache> cache_;
};

LqtsResult lqts_closed_form(const HermitianOperator& h, double beta, const BipartitionSpec& partition,
                            LqtsRoute route = LqtsRoute::Automatic);

/// 8 (1 - F(rho^A_{b-d/2}, rho^A_{b+d/2})) / d^2 with one Richardson halving,
/// from partial traces of Gibbs states only, assembled in binary128.
/// delta_beta <= 0 selects 1e-3 * max(beta, 1).
double lqts_fidelity_oracle(const HermitianOperator& h, double beta, const BipartitionSpec& partition,
                            double delta_beta = 0.0);

/// Q_A(T) = s_A / T^4. Requires T = 1 / result.beta (relative 1e-12).
double local_qfi_temperature(const LqtsResult& result, double temperature);

struct SweepRow {
  ChainModel model;
  double beta = 0.0;
  LqtsResult result;
  /// s_A / Var(H) = Q_A(T) / Q(T).
  double q_A_over_q = 0.0;
};

/// Every model at one beta, for every n_A (block [0, n_A)). Rows ordered by
/// model index, then n_A as given. Throws ResourceGuard for L > kMaxDenseSites.
std::vector<SweepRow> lqts_sweep(const std::vector<ChainModel>& models, double beta, const std::vector<int>& n_A,
                                 int threads = 1);

enum class PeakMode {
  Maximum,  ///< largest s_A on the parameter grid
  Minimum,  ///< smallest s_A on the parameter grid
  Fixed,    ///< s_A at the single parameter `target`
};

struct ScalingOptions {
  ChainKind kind = ChainKind::Ising;
  std::vector<int> sizes{6, 8, 10};
  /// beta = beta_per_site * L.
  double beta_per_site = 0.75;
  PeakMode mode = PeakMode::Maximum;
  double target = 1.0;
  /// Parameter grid [lo, hi] with `step`, used by Maximum and Minimum.
  double lo = 0.5;
  double hi = 1.7;
  double step = 0.02;
  /// Blocks 1..floor(L/2) enter the fit. Points with s_A <= floor * Var(H) are skipped.
  double floor = 1e-9;
  int threads = 1;
};

struct ScalingPoint {
  int n_sites = 0;
  int n_A = 0;
  double beta = 0.0;
  double param = 0.0;
  double s_A = 0.0;
  double variance_H = 0.0;
  bool used_in_fit = false;
};

struct ScalingResult {
  /// Common log-log slope of s_A against n_A / L, one intercept per L.
  double slope = 0.0;
  double slope_stderr = 0.0;
  std::vector<ScalingPoint> points;
};

ScalingResult lqts_scaling(const ScalingOptions& options);

/// Least-squares slope shared by groups with separate intercepts. Needs at
/// least 3 points in total and one more point than groups.
double common_slope(const std::vector<double>& x, const std::vector<double>& y, const std::vector<int>& group,
                    double* stderr_out = nullptr);

}  // namespace qtherm
