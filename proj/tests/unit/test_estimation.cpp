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
#include <random>

#include "oracles.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/estimation.hpp"

using namespace qtherm;

namespace {

RealVector vec(std::initializer_list<double> v) {
  RealVector out(static_cast<Index>(v.size()));
  Index k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

// d rho / d beta of a Gibbs state: -(H - <H>) rho (they commute).
HermitianOperator gibbs_dbeta(const GibbsEnsemble& e) {
  const Matrix& h = e.hamiltonian().matrix();
  const Matrix rho = e.state().matrix();
  const Matrix centred = h - e.mean_energy() * Matrix::Identity(h.rows(), h.cols());
  return HermitianOperator(-0.5 * (centred * rho + rho * centred));
}

double two_level_variance(double omega, double beta) {
  const double c = std::cosh(beta * omega / 2.0);
  return omega * omega / 4.0 / (c * c);
}

}  // namespace

TEST_CASE("classical_fisher: biased coin") {
  for (double p : {0.1, 0.5, 0.8}) {
    const FisherResult r = classical_fisher(OutcomeDistribution(vec({p, 1 - p}), vec({1, -1})));
    CHECK(r.value == doctest::Approx(1.0 / (p * (1 - p))).epsilon(1e-14));
  }
  CHECK(classical_fisher(OutcomeDistribution(vec({0.5, 0.5}), vec({1, -1}))).value == doctest::Approx(4.0));
}

TEST_CASE("classical_fisher: uniform distribution with zero derivative") {
  CHECK(classical_fisher(OutcomeDistribution(vec({0.25, 0.25, 0.25, 0.25}), vec({0, 0, 0, 0}))).value == 0.0);
}

TEST_CASE("classical_fisher: qubit energy measurement in T against a finite difference") {
  auto pe = [](double t) { return 1.0 / (1.0 + std::exp(1.0 / t)); };
  for (double t : {0.3, 1.0, 3.0}) {
    const double dp_analytic = std::exp(1.0 / t) / (t * t) * pe(t) * pe(t);
    const FisherResult r = classical_fisher(OutcomeDistribution(vec({pe(t), 1 - pe(t)}), vec({dp_analytic, -dp_analytic})),
                                            Parameter::Temperature);
    const double dp_fd = oracle::derivative(pe, t, 1e-3 * t);
    CHECK(oracle::rel(r.value, dp_fd * dp_fd / (pe(t) * (1 - pe(t)))) < 1e-8);
  }
}

TEST_CASE("classical_fisher: validation and the probability cutoff") {
  CHECK_THROWS_AS(OutcomeDistribution(vec({0.6, 0.6}), vec({0, 0})), InvalidArgument);
  CHECK_THROWS_AS(OutcomeDistribution(vec({1.1, -0.1}), vec({0, 0})), InvalidArgument);
  CHECK_THROWS_AS(OutcomeDistribution(vec({0.5, 0.5}), vec({1, 0})), InvalidArgument);
  const FisherResult r = classical_fisher(OutcomeDistribution(vec({1.0, 0.0}), vec({1e-9, -1e-9})));
  CHECK(r.value == doctest::Approx(1e-18));
  CHECK(r.skipped_derivative == doctest::Approx(1e-9));
}

TEST_CASE("classical_fisher: coarse graining never increases information") {
  std::mt19937_64 g(41);
  std::uniform_real_distribution<double> u(0.01, 1.0), s(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 3 + trial % 4;
    RealVector p(n), dp(n);
    for (Index k = 0; k < n; ++k) {
      p(k) = u(g);
      dp(k) = s(g);
    }
    p /= p.sum();
    dp.array() -= dp.mean();
    const OutcomeDistribution d(p, dp);
    const double full = classical_fisher(d).value;
    const Index i = trial % n, j = (trial / n + 1 + i) % n;
    if (i == j) continue;
    CHECK(classical_fisher(d.merged(i, j)).value <= full * (1 + 1e-12));
  }
}

TEST_CASE("sld_qfi: zero derivative") {
  std::mt19937_64 g(43);
  const SldResult r = sld_qfi(DensityMatrix(oracle::random_density(3, g)), HermitianOperator::zero(3));
  CHECK(r.qfi == 0.0);
  CHECK(max_abs(r.sld.matrix()) == 0.0);
}

TEST_CASE("sld_qfi: thermal qubit in T equals Var(H) / T^4") {
  for (double omega : {0.5, 1.0, 2.0})
    for (double t : {0.2, 1.0, 4.0}) {
      const GibbsEnsemble e = gibbs_state(HermitianOperator(0.5 * omega * pauli_z()), 1.0 / t);
      // d/dT = -(1/T^2) d/dbeta
      const HermitianOperator drho_dt(-gibbs_dbeta(e).matrix() / (t * t));
      const double expected = two_level_variance(omega, 1.0 / t) / std::pow(t, 4);
      CHECK(oracle::rel(sld_qfi(e.state(), drho_dt).qfi, expected) < 1e-12);
    }
}

TEST_CASE("sld_qfi: the SLD solves the Lyapunov equation and its eigenbasis saturates the QFI") {
  std::mt19937_64 g(47);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 5;
    const DensityMatrix rho(oracle::random_density(d, g));
    Matrix x = oracle::random_hermitian(d, g);
    x -= x.trace() / static_cast<double>(d) * Matrix::Identity(d, d);
    const HermitianOperator drho(x);
    const SldResult r = sld_qfi(rho, drho);
    const Matrix& l = r.sld.matrix();
    CHECK(max_abs(0.5 * (l * rho.matrix() + rho.matrix() * l) - x) < 1e-8);
    CHECK(oracle::rel(r.qfi, (rho.matrix() * l * l).trace().real()) < 1e-9);
    const Spectrum basis = hermitian_eig(r.sld);
    const double fi = classical_fisher(projective_distribution(rho, drho, basis.vectors)).value;
    CHECK(oracle::rel(fi, r.qfi) < 1e-6);
  }
}

TEST_CASE("sld_qfi: derivative weight in the kernel is flagged") {
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  Matrix x = Matrix::Zero(2, 2);
  x(0, 0) = 0.5;
  x(1, 1) = -0.5;
  const SldResult r = sld_qfi(DensityMatrix(rho), HermitianOperator(x));
  CHECK(r.kernel_dropped);
  CHECK(r.kernel_weight > 0.0);
}

TEST_CASE("qfi_fidelity_limit: constant family and thermal qubit in beta") {
  std::mt19937_64 g(53);
  const Matrix fixed = oracle::random_density(3, g);
  CHECK(std::abs(qfi_fidelity_limit([&](double) { return fixed; }, 1.0)) < 1e-9);

  for (double beta : {0.5, 1.0, 3.0}) {
    const HermitianOperator h(0.5 * pauli_z());
    const double q = qfi_fidelity_limit([&](double b) { return gibbs_state(h, b).state().matrix(); }, beta);
    CHECK(oracle::rel(q, two_level_variance(1.0, beta)) < 1e-6);
  }
}

TEST_CASE("qfi_fidelity_limit agrees with sld_qfi on 50 random Hamiltonians") {
  std::mt19937_64 g(59);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 5;
    const HermitianOperator h(oracle::random_hermitian(d, g));
    for (double beta : {0.5, 1.0, 3.0}) {
      const GibbsEnsemble e = gibbs_state(h, beta);
      const double sld = sld_qfi(e.state(), gibbs_dbeta(e)).qfi;
      const double fid = qfi_fidelity_limit([&](double b) { return e.at_beta(b).state().matrix(); }, beta);
      CHECK(oracle::rel(fid, sld) <= 1e-5);
      CHECK(oracle::rel(sld, e.energy_variance()) < 1e-9);
    }
  }
}

TEST_CASE("qfi_unitary: maximally mixed, extremal superposition and pure qubit") {
  std::mt19937_64 g(61);
  const HermitianOperator h(oracle::random_hermitian(4, g));
  CHECK(qfi_unitary(UnitaryFamily(h, DensityMatrix::maximally_mixed(4))) < 1e-12);

  const Spectrum s = hermitian_eig(h);
  const Vector sup = (s.vectors.col(0) + s.vectors.col(3)) / std::sqrt(2.0);
  const double spread = s.values(3) - s.values(0);
  CHECK(std::abs(qfi_unitary(UnitaryFamily(h, DensityMatrix::from_pure(PureState(sup)))) - spread * spread) < 1e-9);

  for (int trial = 0; trial < 10; ++trial) {
    const Vector psi = oracle::random_pure(2, g);
    const Matrix z = pauli_z();
    const double mean = (psi.adjoint() * z * psi)(0).real();
    const double var = 1.0 - mean * mean;
    CHECK(std::abs(qfi_unitary(UnitaryFamily(HermitianOperator(z), DensityMatrix::from_pure(PureState(psi)))) -
                   4.0 * var) < 1e-12);
  }
}

TEST_CASE("qfi_unitary is independent of lambda") {
  std::mt19937_64 g(67);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + trial % 4;
    const UnitaryFamily f(HermitianOperator(oracle::random_hermitian(d, g)), DensityMatrix(oracle::random_density(d, g)));
    const double q0 = qfi_unitary(f);
    const UnitaryFamily moved(f.generator(), f.at(0.7));
    CHECK(oracle::rel(qfi_unitary(moved), q0) <= 1e-9);
  }
}

TEST_CASE("cramer_rao and heisenberg_bound arithmetic") {
  FisherResult f;
  f.value = 4.0;
  CHECK(cramer_rao(f).value == doctest::Approx(0.5));
  f.value = 1.0;
  f.n_measurements = 100;
  CHECK(cramer_rao(f).value == doctest::Approx(0.1));
  f.value = 0.0;
  const Bound inf = cramer_rao(f);
  CHECK(inf.infinite);
  CHECK(std::isinf(inf.value));
  const double hb = heisenberg_bound(10, 1, 1.0).value;
  CHECK(hb == doctest::Approx(0.1));
  CHECK(hb / (1.0 / std::sqrt(10.0)) == doctest::Approx(1.0 / std::sqrt(10.0)));
}

TEST_CASE("thermal_qfi: limits, two-level formula and fidelity oracle") {
  const HermitianOperator q(0.5 * pauli_z());
  CHECK(std::abs(thermal_qfi(q, 1e6)) < 1e-12);
  CHECK(oracle::rel(thermal_qfi(q, 1.0), two_level_variance(1.0, 1.0)) < 1e-14);

  std::mt19937_64 g(71);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianOperator h(oracle::random_hermitian(2 + trial % 4, g));
    for (double t : {0.5, 2.0}) {
      const double oracle_beta =
          qfi_fidelity_limit([&](double b) { return gibbs_state(h, b).state().matrix(); }, 1.0 / t);
      CHECK(oracle::rel(thermal_qfi(h, t), oracle_beta / std::pow(t, 4)) < 1e-5);
      const GibbsEnsemble e = gibbs_state(h, 1.0 / t);
      const double cv = e.energy_variance() / (t * t);
      CHECK(oracle::rel(thermal_qfi(h, t), cv / (t * t)) < 1e-12);
    }
  }
}

TEST_CASE("thermal_qfi is additive over uncoupled copies") {
  std::mt19937_64 g(73);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 2 + trial % 3;
    const Matrix h = oracle::random_hermitian(d, g);
    const Matrix id = Matrix::Identity(d, d);
    const HermitianOperator pair(oracle::kron(h, id) + oracle::kron(id, h));
    for (double t : {0.4, 1.5}) CHECK(oracle::rel(thermal_qfi(pair, t), 2.0 * thermal_qfi(HermitianOperator(h), t)) <= 1e-9);
  }
}

TEST_CASE("extensive_shot_noise: examples") {
  const HermitianOperator q(0.5 * pauli_z());
  const ShotNoiseResult one = extensive_shot_noise(q, 1, 1.0);
  CHECK(one.delta_beta == doctest::Approx(2.0 * std::cosh(0.5)).epsilon(1e-13));
  CHECK(one.mean_energy_slope == doctest::Approx(two_level_variance(1.0, 1.0)).epsilon(1e-13));
  const ShotNoiseResult hundred = extensive_shot_noise(q, 100, 1.0);
  CHECK(hundred.delta_beta / one.delta_beta == doctest::Approx(0.1).epsilon(1e-13));

  std::mt19937_64 g(79);
  const HermitianOperator h(oracle::random_hermitian(3, g));
  CHECK(extensive_shot_noise(h, 1, 0.7).delta_beta ==
        doctest::Approx(1.0 / std::sqrt(gibbs_state(h, 0.7).energy_variance())).epsilon(1e-12));
  CHECK(extensive_shot_noise(HermitianOperator::identity(3), 5, 1.0).infinite);
}
