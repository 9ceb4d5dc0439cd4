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
 * M-level probe spectra that maximize the Gibbs energy variance, i.e. the
 * thermal QFI at a given temperature, and the Heisenberg-limited counting
 * toy model in which N probe atoms pick up a phase from M bath atoms.
 */

#include <cstdint>
#include <string>
#include <vector>

namespace qtherm {

struct ProbeSpectrum {
  /// Ascending, energies.front() == 0.
  std::vector<double> energies;
  double variance = 0.0;
  /// Mean of the excited levels minus the ground level.
  double gap = 0.0;
  /// max - min of the excited levels.
  double degeneracy_spread = 0.0;
};

/// Gibbs variance of a spectrum at temperature T.
double gibbs_energy_variance(const std::vector<double>& energies, double temperature);

/// Maximizes the Gibbs variance over E_2..E_M in [0, e_max] with E_1 = 0
/// (BFGS with analytic gradient, multi-start). e_max <= 0 selects 40 T.
/// Throws NumericalFailure if the result is not a two-level structure with an
/// (M-1)-fold degenerate excited level.
ProbeSpectrum optimal_probe_spectrum(int m_levels, double temperature, double e_max = 0.0, std::uint64_t seed = 1);

enum class ToyMode { Product, Noon };
std::string to_string(ToyMode m);
ToyMode parse_toy_mode(const std::string& name);

struct HeisenbergToyConfig {
  int bath_atoms = 10;       ///< M
  int probe_atoms = 4;       ///< N
  double temperature = 1.0;  ///< T
  double epsilon = 1.0;      ///< bath level splitting
  double alpha = 0.05;       ///< dispersive coupling
  double tau = 1.0;          ///< interaction time
  int shots = 10000;         ///< n, per trial
  int trials = 200;          ///< independent repetitions for the RMSE
  ToyMode mode = ToyMode::Product;
  bool bath_sampling = false;  ///< draw m ~ Binomial(M, p) every shot
  std::uint64_t seed = 1;
};

struct HeisenbergToyResult {
  double phase_rmse = 0.0;
  double temperature_rmse = 0.0;
  bool infinite = false;
  /// Reference phase alpha <m> tau and excited fraction p of the bath.
  double phase = 0.0;
  double excited_fraction = 0.0;
  /// 1/sqrt(N n) (product) or 1/(N sqrt(n)) (NOON).
  double phase_bound = 0.0;
};

/// Validates and runs. Throws InvalidArgument when N alpha m_max tau >= pi
/// (phase wrapping), with m_max = M under bath sampling and <m> otherwise.
HeisenbergToyResult heisenberg_toy(const HeisenbergToyConfig& config);

/// Throws on invalid parameters without running anything.
void validate(const HeisenbergToyConfig& config);

}  // namespace qtherm
