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
 * Temperature Fisher information of repeated measurements on a qubit probe:
 * re-prepared each round (i.i.d.) or measured sequentially without reset, in
 * which case the outcome record is correlated and every branch of the
 * outcome tree is tracked with its exact temperature derivative.
 */

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qtherm/estimation.hpp"
#include "qtherm/qubit_channel.hpp"

namespace qtherm {

/// Kraus operators M_k with effects M_k^dag M_k summing to the identity.
class MeasurementModel {
 public:
  explicit MeasurementModel(std::vector<Matrix> kraus);
  /// Pi_+ = (I + sigma_z)/2, Pi_- = (I - sigma_z)/2, outcome 0 is "+".
  static MeasurementModel projective_z();

  const std::vector<Matrix>& kraus() const { return kraus_; }
  const std::vector<Matrix>& effects() const { return effects_; }
  std::size_t size() const { return kraus_.size(); }

 private:
  std::vector<Matrix> kraus_;
  std::vector<Matrix> effects_;
};

/// A temperature-dependent map between measurements, with its T-derivative.
class TemperatureMap {
 public:
  virtual ~TemperatureMap() = default;
  virtual Matrix apply(const Matrix& x) const = 0;
  /// (d/dT E)(x) at fixed x.
  virtual Matrix apply_dT(const Matrix& x) const = 0;
};

/// Thermalization for time tau at temperature T.
class ThermalizationStep final : public TemperatureMap {
 public:
  ThermalizationStep(const ProbeBath& bath, double temperature, double tau);
  Matrix apply(const Matrix& x) const override { return channel_.apply(x, tau_); }
  Matrix apply_dT(const Matrix& x) const override { return channel_.apply_dn(x, tau_) * dn_dT_; }
  const ThermalQubitChannel& channel() const { return channel_; }

 private:
  ThermalQubitChannel channel_;
  double tau_;
  double dn_dT_;
};

/// One node of the outcome tree after `prefix.size()` measurements.
struct BranchNode {
  std::vector<int> prefix;
  /// Conditional state (unit trace). Maximally mixed when prob == 0.
  Matrix state;
  /// d/dT of the unnormalized branch operator.
  Matrix dstate;
  double prob = 0.0;
  double dprob = 0.0;
};

/// Maximum number of leaves enumerated by fisher_sequential.
inline constexpr std::uint64_t kMaxBranches = std::uint64_t{1} << 20;

/// All nodes at the given depth, in lexicographic prefix order.
std::vector<BranchNode> enumerate_branches(const DensityMatrix& rho0, const TemperatureMap& step,
                                           const MeasurementModel& povm, int depth);

/// N x Fisher information of one thermalize-then-measure round.
FisherResult fisher_iid(const DensityMatrix& rho0, const TemperatureMap& step, const MeasurementModel& povm, int n);
FisherResult fisher_iid(const DensityMatrix& rho0, const ProbeBath& bath, double tau, const MeasurementModel& povm,
                        int n, double temperature);

/// Fisher information of the joint distribution of N sequential outcomes.
/// Throws ResourceGuard when |outcomes|^N exceeds kMaxBranches.
FisherResult fisher_sequential(const DensityMatrix& rho0, const TemperatureMap& step, const MeasurementModel& povm,
                               int n);
FisherResult fisher_sequential(const DensityMatrix& rho0, const ProbeBath& bath, double tau,
                               const MeasurementModel& povm, int n, double temperature);

/// Number of leaves |outcomes|^N, saturating at UINT64_MAX.
std::uint64_t branch_count(std::size_t outcomes, int n);

enum class Protocol { IID, Sequential };
std::string to_string(Protocol p);

struct InputExtremes {
  double max = 0.0;
  double min = 0.0;
  double mean = 0.0;
  double theta_max = 0.0;
  double theta_min = 0.0;
  double ground = 0.0;
  double excited = 0.0;
};

/// Measure for the averaged input: uniform pure states on the Bloch sphere,
/// or uniform over the Bloch ball (mixed inputs included).
enum class InputMeasure { HaarPure, BlochBall };

InputMeasure parse_input_measure(const std::string& name);

struct InputSampling {
  int n_samples = 200;
  InputMeasure measure = InputMeasure::HaarPure;
  std::uint64_t seed = 0;
  int n_angles = 181;
};

/// Extremes over pure inputs on a polar-angle grid with golden-section
/// refinement, and the mean over inputs drawn from `sampling.measure`.
InputExtremes fisher_input_extremes(Protocol protocol, const ProbeBath& bath, double tau,
                                    const MeasurementModel& povm, int n, double temperature,
                                    const InputSampling& sampling = {});

/// Temperatures with n_th log-spaced over [n_lo, n_hi].
std::vector<double> occupation_grid(double omega, double n_lo = 0.05, double n_hi = 2.0, int points = 40);

}  // namespace qtherm
