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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/probe.hpp"

using namespace qtherm;

namespace {

// Gap maximizing eps^2 p (1 - p) for a ground level and a d-fold degenerate
// excited level, p = d e^{-eps/T} / (1 + d e^{-eps/T}).
double gap_oracle(int degeneracy, double temperature) {
  auto var = [&](double eps) {
    const double w = degeneracy * std::exp(-eps / temperature);
    const double p = w / (1.0 + w);
    return eps * eps * p * (1.0 - p);
  };
  return oracle::golden_max(var, 1e-6, 40.0 * temperature);
}

double log_slope(const std::vector<int>& n, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < n.size(); ++k) {
    lx.push_back(std::log(n[k]));
    ly.push_back(std::log(y[k]));
  }
  return oracle::least_squares_slope(lx, ly);
}

}  // namespace

TEST_CASE("gibbs_energy_variance: two-level closed form and shift invariance") {
  for (double t : {0.3, 1.0, 4.0}) {
    const double p = 1.0 / (1.0 + std::exp(1.5 / t));
    CHECK(gibbs_energy_variance({0.0, 1.5}, t) == doctest::Approx(2.25 * p * (1 - p)).epsilon(1e-14));
    CHECK(gibbs_energy_variance({10.0, 11.5}, t) == doctest::Approx(2.25 * p * (1 - p)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gibbs_energy_variance({}, 1.0), InvalidArgument);
  CHECK_THROWS_AS(gibbs_energy_variance({0.0, 1.0}, 0.0), InvalidArgument);
}

TEST_CASE("optimal_probe_spectrum: M = 2 against a one-dimensional search") {
  const ProbeSpectrum s = optimal_probe_spectrum(2, 1.0);
  REQUIRE(s.energies.size() == 2);
  CHECK(s.energies.front() == 0.0);
  CHECK(oracle::rel(s.gap, gap_oracle(1, 1.0)) < 1e-6);
  CHECK(s.degeneracy_spread == 0.0);
}

TEST_CASE("optimal_probe_spectrum: degenerate excited level for M = 2..5") {
  double previous = 0.0;
  for (int m = 2; m <= 5; ++m) {
    const ProbeSpectrum s = optimal_probe_spectrum(m, 1.0);
    REQUIRE(static_cast<int>(s.energies.size()) == m);
    CHECK(s.degeneracy_spread <= 1e-6 * s.gap);
    CHECK(oracle::rel(s.gap, gap_oracle(m - 1, 1.0)) < 1e-6);
    CHECK(s.variance == doctest::Approx(gibbs_energy_variance(s.energies, 1.0)).epsilon(1e-12));
    CHECK(s.variance > previous);
    previous = s.variance;
  }
}

TEST_CASE("optimal_probe_spectrum: the gap scales linearly with temperature") {
  for (int m : {2, 3}) {
    const double g1 = optimal_probe_spectrum(m, 1.0).gap;
    CHECK(optimal_probe_spectrum(m, 2.0).gap == doctest::Approx(2.0 * g1).epsilon(1e-6));
  }
  CHECK_THROWS_AS(optimal_probe_spectrum(1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(optimal_probe_spectrum(3, -1.0), InvalidArgument);
}

TEST_CASE("toy modes parse and print") {
  CHECK(parse_toy_mode("product") == ToyMode::Product);
  CHECK(parse_toy_mode("noon") == ToyMode::Noon);
  CHECK(to_string(ToyMode::Noon) == "noon");
  CHECK_THROWS_AS(parse_toy_mode("ghz"), InvalidArgument);
}

TEST_CASE("heisenberg_toy: validation") {
  HeisenbergToyConfig c;
  c.probe_atoms = 0;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c = {};
  c.shots = 10;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c = {};
  c.alpha = 0.5;
  c.probe_atoms = 16;
  try {
    validate(c);
    FAIL("expected a wrap error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("phase wrapping") != std::string::npos);
  }
  // Bath sampling bounds m by M rather than <m>.
  c = {};
  c.probe_atoms = 16;
  c.alpha = 0.05;
  CHECK_NOTHROW(validate(c));
  c.bath_sampling = true;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
}

TEST_CASE("heisenberg_toy: zero coupling carries no information") {
  HeisenbergToyConfig c;
  c.alpha = 0.0;
  const auto r = heisenberg_toy(c);
  CHECK(r.infinite);
  CHECK(std::isinf(r.phase_rmse));
  CHECK(std::isinf(r.temperature_rmse));
}

TEST_CASE("heisenberg_toy: RMSE exponents and the bound") {
  const std::vector<int> sizes{2, 4, 8, 16};
  for (ToyMode mode : {ToyMode::Product, ToyMode::Noon}) {
    std::vector<double> rmse;
    for (int n : sizes) {
      HeisenbergToyConfig c;
      c.probe_atoms = n;
      c.mode = mode;
      c.shots = 2000;
      c.trials = 100;
      c.seed = 5;
      const auto r = heisenberg_toy(c);
      CHECK_FALSE(r.infinite);
      // The estimator saturates the per-shot bound up to sampling error.
      CHECK(r.phase_rmse / r.phase_bound == doctest::Approx(1.0).epsilon(0.3));
      CHECK(r.temperature_rmse > 0.0);
      rmse.push_back(r.phase_rmse);
    }
    const double expected = mode == ToyMode::Product ? -0.5 : -1.0;
    CHECK(std::abs(log_slope(sizes, rmse) - expected) <= 0.15);
  }
}

TEST_CASE("heisenberg_toy: deterministic for a fixed seed") {
  HeisenbergToyConfig c;
  c.shots = 500;
  c.trials = 20;
  c.seed = 11;
  const auto a = heisenberg_toy(c);
  CHECK(a.phase_rmse == heisenberg_toy(c).phase_rmse);
  c.seed = 12;
  CHECK(a.phase_rmse != heisenberg_toy(c).phase_rmse);
}

TEST_CASE("heisenberg_toy: bath fluctuations add a floor") {
  HeisenbergToyConfig c;
  c.probe_atoms = 4;
  c.mode = ToyMode::Noon;
  c.shots = 2000;
  c.trials = 100;
  c.seed = 3;
  const auto fixed = heisenberg_toy(c);
  c.bath_sampling = true;
  const auto sampled = heisenberg_toy(c);
  CHECK(sampled.phase_rmse > fixed.phase_rmse);
  CHECK(sampled.excited_fraction == fixed.excited_fraction);
}
