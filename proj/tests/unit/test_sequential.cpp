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
#include <random>

#include "oracles.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/sequential.hpp"

using namespace qtherm;

namespace {

const ProbeBath kBath{1.0, 1.0};
const MeasurementModel kPovm = MeasurementModel::projective_z();

DensityMatrix ground() { return DensityMatrix::from_bloch(0, 0, -1); }
DensityMatrix excited() { return DensityMatrix::from_bloch(0, 0, 1); }

// Resets the probe to the thermalized reference state every round.
class ResetMap final : public TemperatureMap {
 public:
  ResetMap(double temperature, double tau) : step_(kBath, temperature, tau), ref_(DensityMatrix::from_bloch(0.3, 0.1, 0.4).matrix()) {}
  Matrix apply(const Matrix& x) const override { return x.trace() * step_.apply(ref_); }
  Matrix apply_dT(const Matrix& x) const override { return x.trace() * step_.apply_dT(ref_); }

 private:
  ThermalizationStep step_;
  Matrix ref_;
};

}  // namespace

TEST_CASE("projective_z: outcome 0 is the excited level") {
  const auto& e = kPovm.effects();
  CHECK(e[0](0, 0).real() == 1.0);
  CHECK(e[1](1, 1).real() == 1.0);
  Matrix bad = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(MeasurementModel({bad, bad}), InvalidArgument);
}

TEST_CASE("fisher_iid: N = 1 ground input against a finite difference of the analytic p_+") {
  for (double tau : {0.5, 4.0})
    for (double temp : {0.4, 1.0, 3.0}) {
      auto p_plus = [&](double t) {
        const auto ch = ThermalQubitChannel::at_temperature(1.0, 1.0, t);
        const double rz = ch.r_inf() + (-1.0 - ch.r_inf()) * std::exp(-ch.relaxation_rate() * tau);
        return 0.5 * (1.0 + rz);
      };
      const double p = p_plus(temp);
      const double dp = oracle::derivative(p_plus, temp, 1e-3 * temp);
      const double expected = dp * dp / (p * (1 - p));
      CHECK(oracle::rel(fisher_iid(ground(), kBath, tau, kPovm, 1, temp).value, expected) < 1e-6);
    }
}

TEST_CASE("fisher_iid is exactly N times the single-round value") {
  const double one = fisher_iid(ground(), kBath, 2.0, kPovm, 1, 0.8).value;
  for (int n : {2, 5, 13}) CHECK(fisher_iid(ground(), kBath, 2.0, kPovm, n, 0.8).value == doctest::Approx(n * one).epsilon(1e-15));
}

TEST_CASE("fisher_iid: full thermalization forgets the input") {
  // The memory of the input decays as e^{-Gamma tau}; tau = 40 leaves ~1e-17.
  std::mt19937_64 g(127);
  for (double temp : {0.5, 2.0}) {
    const double ref = fisher_iid(ground(), kBath, 40.0, kPovm, 1, temp).value;
    for (int trial = 0; trial < 5; ++trial) {
      const DensityMatrix rho(oracle::random_density(2, g));
      CHECK(oracle::rel(fisher_iid(rho, kBath, 40.0, kPovm, 1, temp).value, ref) < 1e-8);
    }
  }
}

TEST_CASE("fisher_sequential: N = 1 equals fisher_iid") {
  std::mt19937_64 g(131);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho(oracle::random_density(2, g));
    CHECK(fisher_sequential(rho, kBath, 3.0, kPovm, 1, 0.9).value ==
          doctest::Approx(fisher_iid(rho, kBath, 3.0, kPovm, 1, 0.9).value).epsilon(1e-14));
  }
}

TEST_CASE("fisher_sequential: collapse to N F after full thermalization") {
  for (int n : {3, 7})
    for (double temp : occupation_grid(1.0, 0.05, 2.0, 8)) {
      const double seq = fisher_sequential(ground(), kBath, 12.0, kPovm, n, temp).value;
      const double iid = fisher_iid(ground(), kBath, 12.0, kPovm, n, temp).value;
      CHECK(std::abs(seq - iid) / iid <= 1e-3);
    }
}

TEST_CASE("fisher_sequential beats i.i.d. for the excited input at tau = 4") {
  for (double temp : occupation_grid(1.0, 0.05, 2.0, 40))
    CHECK(fisher_sequential(excited(), kBath, 4.0, kPovm, 7, temp).value >
          fisher_iid(excited(), kBath, 4.0, kPovm, 7, temp).value);
}

TEST_CASE("fisher_sequential with a resetting map reproduces fisher_iid") {
  for (int n : {1, 2, 4, 6}) {
    const ResetMap reset(0.7, 1.5);
    const DensityMatrix rho = DensityMatrix::from_bloch(0.2, -0.5, 0.1);
    CHECK(oracle::rel(fisher_sequential(rho, reset, kPovm, n).value, fisher_iid(rho, reset, kPovm, n).value) < 1e-12);
  }
}

TEST_CASE("branch bookkeeping: probabilities sum to 1 and derivatives to 0") {
  const ThermalizationStep step(kBath, 0.6, 1.3);
  const DensityMatrix rho = DensityMatrix::from_bloch(0.4, 0.2, -0.3);
  for (int depth = 0; depth <= 6; ++depth) {
    const auto nodes = enumerate_branches(rho, step, kPovm, depth);
    CHECK(nodes.size() == (std::size_t{1} << depth));
    double p = 0.0, dp = 0.0;
    for (const auto& b : nodes) {
      p += b.prob;
      dp += b.dprob;
      CHECK(b.prob >= 0.0);
      CHECK(b.prob <= 1.0);
      CHECK(std::abs(b.state.trace().real() - 1.0) < 1e-12);
    }
    CHECK(std::abs(p - 1.0) < 1e-9);
    CHECK(std::abs(dp) < 1e-8);
  }
  // Children partition their parent.
  const auto parents = enumerate_branches(rho, step, kPovm, 3);
  const auto children = enumerate_branches(rho, step, kPovm, 4);
  for (std::size_t k = 0; k < parents.size(); ++k)
    CHECK(std::abs(children[2 * k].prob + children[2 * k + 1].prob - parents[k].prob) < 1e-10);
}

TEST_CASE("analytic branch derivatives match a finite difference in T") {
  const DensityMatrix rho = DensityMatrix::from_bloch(0.1, 0.3, 0.6);
  for (int n = 1; n <= 5; ++n)
    for (double temp : {0.5, 1.5}) {
      const double h = 1e-3 * temp;
      const auto at = [&](double t) { return enumerate_branches(rho, ThermalizationStep(kBath, t, 2.0), kPovm, n); };
      const auto mid = at(temp), p1 = at(temp + h), m1 = at(temp - h), p2 = at(temp + 2 * h), m2 = at(temp - 2 * h);
      for (std::size_t k = 0; k < mid.size(); ++k) {
        const double fd = (-p2[k].prob + 8 * p1[k].prob - 8 * m1[k].prob + m2[k].prob) / (12 * h);
        if (std::abs(mid[k].dprob) > 1e-8) CHECK(oracle::rel(mid[k].dprob, fd) < 1e-6);
      }
    }
}

TEST_CASE("fisher_sequential: branch guard") {
  CHECK(branch_count(2, 20) == kMaxBranches);
  try {
    fisher_sequential(ground(), kBath, 1.0, kPovm, 25, 1.0);
    FAIL("expected a ResourceGuard");
  } catch (const ResourceGuard& e) {
    CHECK(std::string(e.what()).find("2^25") != std::string::npos);
  }
  CHECK_THROWS_AS(fisher_iid(ground(), kBath, 1.0, kPovm, 0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(fisher_iid(ground(), kBath, 0.0, kPovm, 1, 1.0), InvalidArgument);
}

TEST_CASE("Fisher information is azimuthally symmetric in the input") {
  for (Protocol p : {Protocol::IID, Protocol::Sequential})
    for (double theta : {0.4, 1.9}) {
      auto fi = [&](double phi) {
        const DensityMatrix rho = BlochVector::polar(theta, phi).state();
        return p == Protocol::IID ? fisher_iid(rho, kBath, 1.0, kPovm, 3, 0.8).value
                                  : fisher_sequential(rho, kBath, 1.0, kPovm, 3, 0.8).value;
      };
      for (double phi : {1.0, 3.0}) CHECK(oracle::rel(fi(phi), fi(0.0)) < 1e-12);
    }
}

TEST_CASE("fisher_input_extremes: ordering and the i.i.d. optimum at the ground state") {
  InputSampling s;
  s.n_samples = 50;
  s.seed = 9;
  for (double tau : {1.0, 4.0, 12.0})
    for (double temp : occupation_grid(1.0, 0.05, 2.0, 5)) {
      const InputExtremes iid = fisher_input_extremes(Protocol::IID, kBath, tau, kPovm, 2, temp, s);
      const double eps = 1e-12 * iid.max;
      CHECK(iid.max >= iid.mean - eps);
      CHECK(iid.mean >= iid.min - eps);
      CHECK(iid.max == doctest::Approx(iid.ground).epsilon(1e-9));
      const InputExtremes seq = fisher_input_extremes(Protocol::Sequential, kBath, tau, kPovm, 3, temp, s);
      CHECK(seq.max >= seq.mean - 1e-12 * seq.max);
      CHECK(seq.mean >= seq.min - 1e-12 * seq.max);
    }
}

TEST_CASE("fisher_input_extremes: seeded sampling is reproducible") {
  InputSampling s;
  s.n_samples = 20;
  s.seed = 77;
  const auto a = fisher_input_extremes(Protocol::Sequential, kBath, 4.0, kPovm, 3, 0.9, s);
  const auto b = fisher_input_extremes(Protocol::Sequential, kBath, 4.0, kPovm, 3, 0.9, s);
  CHECK(a.mean == b.mean);
  s.seed = 78;
  CHECK(fisher_input_extremes(Protocol::Sequential, kBath, 4.0, kPovm, 3, 0.9, s).mean != a.mean);
}

TEST_CASE("fisher_input_extremes: Bloch-ball sampling") {
  CHECK(parse_input_measure("haar") == InputMeasure::HaarPure);
  CHECK(parse_input_measure("ball") == InputMeasure::BlochBall);
  CHECK_THROWS_AS(parse_input_measure("sphere"), InvalidArgument);

  InputSampling s;
  s.n_samples = 30;
  s.n_angles = 21;
  s.seed = 5;
  const auto pure = fisher_input_extremes(Protocol::Sequential, kBath, 4.0, kPovm, 3, 0.9, s);
  s.measure = InputMeasure::BlochBall;
  const auto ball = fisher_input_extremes(Protocol::Sequential, kBath, 4.0, kPovm, 3, 0.9, s);
  CHECK(ball.mean != pure.mean);
  CHECK(ball.max == pure.max);
  CHECK(ball.mean > 0.0);

  // a fully thermalized probe forgets its input, mixed or not
  const auto a = fisher_input_extremes(Protocol::Sequential, kBath, 40.0, kPovm, 3, 0.9, s);
  CHECK(a.mean == doctest::Approx(a.ground).epsilon(1e-8));
}

TEST_CASE("gap ratio is below one and shrinks with N at tau = 4") {
  InputSampling s;
  s.n_samples = 1;
  for (double temp : occupation_grid(1.0, 0.05, 2.0, 6)) {
    double previous = 1.0;
    for (int n = 2; n <= 7; ++n) {
      const auto iid = fisher_input_extremes(Protocol::IID, kBath, 4.0, kPovm, n, temp, s);
      const auto seq = fisher_input_extremes(Protocol::Sequential, kBath, 4.0, kPovm, n, temp, s);
      const double ratio = (seq.max - seq.min) / (iid.max - iid.min);
      CHECK(ratio < previous);
      previous = ratio;
    }
  }
}

TEST_CASE("occupation_grid spans the requested occupations") {
  const auto t = occupation_grid(1.0, 0.05, 2.0, 40);
  REQUIRE(t.size() == 40);
  CHECK(thermal_occupation(1.0, t.front()) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(thermal_occupation(1.0, t.back()) == doctest::Approx(2.0).epsilon(1e-12));
  for (std::size_t k = 1; k < t.size(); ++k) CHECK(t[k] > t[k - 1]);
}
