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

#include "qtherm/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <Eigen/Dense>

#include "qtherm/errors.hpp"
#include "qtherm/rng.hpp"

namespace qtherm {

double gibbs_energy_variance(const std::vector<double>& energies, double temperature) {
  if (energies.empty() || !(temperature > 0.0)) throw InvalidArgument("gibbs_energy_variance: need levels and T > 0");
  const double e0 = *std::min_element(energies.begin(), energies.end());
  double z = 0.0, m1 = 0.0;
  for (double e : energies) {
    const double w = std::exp(-(e - e0) / temperature);
    z += w;
    m1 += w * e;
  }
  m1 /= z;
  double var = 0.0;
  for (double e : energies) var += std::exp(-(e - e0) / temperature) * (e - m1) * (e - m1);
  return var / z;
}

namespace {

using Index = Eigen::Index;

struct ProbeProblem {
  int excited;  // M - 1
  double temperature;
  double e_max;
};

// Energies from the unconstrained variables: E_m = e_max sin^2(u_m).
void levels(const gsl_vector* u, const ProbeProblem& p, std::vector<double>& e) {
  e.assign(static_cast<std::size_t>(p.excited) + 1, 0.0);
  for (int m = 0; m < p.excited; ++m) {
    const double s = std::sin(gsl_vector_get(u, static_cast<std::size_t>(m)));
    e[static_cast<std::size_t>(m) + 1] = p.e_max * s * s;
  }
}

// dVar/dE_m for the excited levels m = 1..M-1 (E_0 = 0 fixed).
Eigen::VectorXd variance_gradient(const std::vector<double>& e, double t) {
  std::vector<double> w(e.size());
  const double e0 = *std::min_element(e.begin(), e.end());
  double z = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) z += (w[k] = std::exp(-(e[k] - e0) / t));
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    w[k] /= z;
    m1 += w[k] * e[k];
    m2 += w[k] * e[k] * e[k];
  }
  Eigen::VectorXd g(static_cast<Index>(e.size()) - 1);
  for (std::size_t k = 1; k < e.size(); ++k)
    g(static_cast<Index>(k) - 1) =
        w[k] * (2.0 * e[k] - (e[k] * e[k] - m2) / t) - 2.0 * m1 * w[k] * (1.0 - (e[k] - m1) / t);
  return g;
}

// -Var / T^2 and its gradient in u.
void objective(const gsl_vector* u, void* params, double* f, gsl_vector* g) {
  const auto& p = *static_cast<const ProbeProblem*>(params);
  std::vector<double> e;
  levels(u, p, e);
  const double t = p.temperature;
  if (f) *f = -gibbs_energy_variance(e, t) / (t * t);
  if (g) {
    const Eigen::VectorXd d_var = variance_gradient(e, t);
    for (int m = 0; m < p.excited; ++m) {
      const double de_du = p.e_max * std::sin(2.0 * gsl_vector_get(u, static_cast<std::size_t>(m)));
      gsl_vector_set(g, static_cast<std::size_t>(m), -d_var(m) * de_du / (t * t));
    }
  }
}

double objective_f(const gsl_vector* u, void* params) {
  double f = 0.0;
  objective(u, params, &f, nullptr);
  return f;
}

void objective_df(const gsl_vector* u, void* params, gsl_vector* g) { objective(u, params, nullptr, g); }

void objective_fdf(const gsl_vector* u, void* params, double* f, gsl_vector* g) { objective(u, params, f, g); }

std::vector<double> bfgs_from(const std::vector<double>& start, ProbeProblem& problem) {
  const auto n = static_cast<std::size_t>(problem.excited);
  gsl_multimin_function_fdf fn{&objective_f, &objective_df, &objective_fdf, n, &problem};
  gsl_vector* x = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x, i, start[i]);
  gsl_multimin_fdfminimizer* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
  gsl_multimin_fdfminimizer_set(s, &fn, x, 0.01, 0.1);
  for (int iter = 0; iter < 2000; ++iter) {
    // A non-success status means no further progress at double precision.
    if (gsl_multimin_fdfminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_gradient(s->gradient, 1e-13) == GSL_SUCCESS) break;
  }
  std::vector<double> e;
  levels(s->x, problem, e);
  gsl_multimin_fdfminimizer_free(s);
  gsl_vector_free(x);
  return e;
}

// Newton steps in the energies with a finite-difference Hessian of the
// analytic gradient. Returns the final gradient norm.
double newton_polish(std::vector<double>& e, const ProbeProblem& p) {
  const double t = p.temperature;
  const Index n = p.excited;
  const double h = 1e-5 * t;
  Eigen::VectorXd g = variance_gradient(e, t);
  for (int iter = 0; iter < 8 && g.norm() > 1e-14 * t; ++iter) {
    Eigen::MatrixXd hess(n, n);
    for (Index j = 0; j < n; ++j) {
      std::vector<double> ep = e, em = e;
      ep[static_cast<std::size_t>(j) + 1] += h;
      em[static_cast<std::size_t>(j) + 1] -= h;
      hess.col(j) = (variance_gradient(ep, t) - variance_gradient(em, t)) / (2.0 * h);
    }
    hess = 0.5 * (hess + hess.transpose()).eval();
    const Eigen::VectorXd step = hess.ldlt().solve(-g);
    if (!step.allFinite()) break;
    std::vector<double> trial = e;
    for (Index j = 0; j < n; ++j)
      trial[static_cast<std::size_t>(j) + 1] = std::clamp(e[static_cast<std::size_t>(j) + 1] + step(j), 0.0, p.e_max);
    const Eigen::VectorXd gt = variance_gradient(trial, t);
    if (gt.norm() >= g.norm()) break;
    e = std::move(trial);
    g = gt;
  }
  return g.norm();
}

}  // namespace

ProbeSpectrum optimal_probe_spectrum(int m_levels, double temperature, double e_max, std::uint64_t seed) {
  if (m_levels < 2) throw InvalidArgument("optimal_probe_spectrum: M must be >= 2");
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw InvalidArgument("optimal_probe_spectrum: T must be positive and finite");
  if (e_max <= 0.0) e_max = 40.0 * temperature;
  ProbeProblem problem{m_levels - 1, temperature, e_max};
  const auto n = static_cast<std::size_t>(problem.excited);

  std::vector<std::vector<double>> starts;
  for (double x : {1.0, 2.4, 4.0}) {
    const double ratio = std::min(0.99, x * temperature / e_max);
    starts.emplace_back(n, std::asin(std::sqrt(ratio)));
  }
  SplitMix64 g(stream_seed(seed, static_cast<std::uint64_t>(m_levels)));
  for (int k = 0; k < 8; ++k) {
    std::vector<double> s(n);
    for (auto& v : s) v = 0.05 + 1.4 * uniform01(g);  // inside (0, pi/2)
    starts.push_back(std::move(s));
  }

  std::vector<double> best;
  double best_var = -1.0;
  for (const auto& s : starts) {
    std::vector<double> e = bfgs_from(s, problem);
    const double grad = newton_polish(e, problem);
    // Stationary in every level that is not pinned at the budget.
    bool stationary = grad <= 1e-9 * std::max(1.0, temperature);
    if (!stationary) {
      const Eigen::VectorXd g = variance_gradient(e, temperature);
      stationary = true;
      for (Index j = 0; j < g.size(); ++j)
        if (std::abs(g(j)) > 1e-9 * std::max(1.0, temperature) && !(e[static_cast<std::size_t>(j) + 1] >= e_max && g(j) > 0.0))
          stationary = false;
    }
    const double v = gibbs_energy_variance(e, temperature);
    if (stationary && v > best_var) {
      best_var = v;
      best = std::move(e);
    }
  }
  if (best.empty()) {
    std::ostringstream os;
    os << "optimal_probe_spectrum: no start converged for M = " << m_levels << ", T = " << temperature;
    throw NumericalFailure(os.str());
  }
  std::sort(best.begin(), best.end());
  ProbeSpectrum out;
  out.energies = best;
  out.variance = best_var;
  const auto excited = std::vector<double>(out.energies.begin() + 1, out.energies.end());
  const auto [lo, hi] = std::minmax_element(excited.begin(), excited.end());
  double mean = 0.0;
  for (double e : excited) mean += e;
  out.gap = mean / static_cast<double>(excited.size()) - out.energies.front();
  out.degeneracy_spread = *hi - *lo;
  if (out.degeneracy_spread > 1e-6 * out.gap) {
    std::ostringstream os;
    os << "optimal_probe_spectrum: best spectrum (variance " << out.variance << ") is not (M-1)-fold degenerate, spread "
       << out.degeneracy_spread;
    throw NumericalFailure(os.str());
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(ToyMode m) { return m == ToyMode::Product ? "product" : "noon"; }

ToyMode parse_toy_mode(const std::string& name) {
  if (name == "product") return ToyMode::Product;
  if (name == "noon") return ToyMode::Noon;
  throw InvalidArgument("unknown toy mode '" + name + "' (expected product or noon)");
}

namespace {

double excited_fraction(const HeisenbergToyConfig& c) { return 1.0 / (1.0 + std::exp(c.epsilon / c.temperature)); }

}  // namespace

void validate(const HeisenbergToyConfig& c) {
  if (c.bath_atoms < 1) throw InvalidArgument("heisenberg_toy: bath_atoms must be >= 1");
  if (c.probe_atoms < 1) throw InvalidArgument("heisenberg_toy: probe_atoms must be >= 1");
  if (!(c.temperature > 0.0) || !std::isfinite(c.temperature)) throw InvalidArgument("heisenberg_toy: T must be > 0");
  if (!(c.epsilon > 0.0) || !std::isfinite(c.epsilon)) throw InvalidArgument("heisenberg_toy: epsilon must be > 0");
  if (!(c.alpha >= 0.0) || !std::isfinite(c.alpha)) throw InvalidArgument("heisenberg_toy: alpha must be >= 0");
  if (!(c.tau > 0.0) || !std::isfinite(c.tau)) throw InvalidArgument("heisenberg_toy: tau must be > 0");
  if (c.shots < 100) throw InvalidArgument("heisenberg_toy: shots must be >= 100");
  if (c.trials < 2) throw InvalidArgument("heisenberg_toy: trials must be >= 2");
  const double m_max = c.bath_sampling ? c.bath_atoms : c.bath_atoms * excited_fraction(c);
  const double wrap = c.probe_atoms * c.alpha * m_max * c.tau;
  if (wrap >= std::numbers::pi) {
    std::ostringstream os;
    os << "heisenberg_toy: phase wrapping, N alpha m_max tau = " << wrap << " >= pi (m_max = " << m_max << ")";
    throw InvalidArgument(os.str());
  }
}

HeisenbergToyResult heisenberg_toy(const HeisenbergToyConfig& c) {
  validate(c);
  HeisenbergToyResult out;
  const double p = excited_fraction(c);
  const double mean_m = c.bath_atoms * p;
  out.excited_fraction = p;
  out.phase = c.alpha * mean_m * c.tau;
  const double n_probe = c.probe_atoms;
  out.phase_bound = c.mode == ToyMode::Product ? 1.0 / std::sqrt(n_probe * c.shots) : 1.0 / (n_probe * std::sqrt(c.shots));
  if (c.alpha == 0.0) {
    out.infinite = true;
    out.phase_rmse = std::numeric_limits<double>::infinity();
    out.temperature_rmse = std::numeric_limits<double>::infinity();
    return out;
  }
  const double mult = c.mode == ToyMode::Product ? 1.0 : n_probe;
  // Largest count estimate that still maps to a finite positive temperature.
  const double m_hi = 0.5 * c.bath_atoms * (1.0 - 1e-12);
  const double m_lo = 1e-300;
  double se_phase = 0.0, se_temp = 0.0;
  for (int trial = 0; trial < c.trials; ++trial) {
    double hits = 0.0;
    for (int shot = 0; shot < c.shots; ++shot) {
      SplitMix64 g(stream_seed(c.seed, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(shot)));
      double m = mean_m;
      if (c.bath_sampling) m = std::binomial_distribution<int>(c.bath_atoms, p)(g);
      const double phi = c.alpha * m * c.tau;
      if (c.mode == ToyMode::Product) {
        hits += std::binomial_distribution<int>(c.probe_atoms, 0.5 * (1.0 - std::cos(phi)))(g);
      } else {
        hits += uniform01(g) < 0.5 * (1.0 - std::cos(n_probe * phi)) ? 1.0 : 0.0;
      }
    }
    const double f = hits / (c.shots * (c.mode == ToyMode::Product ? n_probe : 1.0));
    const double phi_hat = std::acos(std::clamp(1.0 - 2.0 * f, -1.0, 1.0)) / mult;
    const double m_hat = std::clamp(phi_hat / (c.alpha * c.tau), m_lo, m_hi);
    const double t_hat = c.epsilon / std::log(c.bath_atoms / m_hat - 1.0);
    se_phase += (phi_hat - out.phase) * (phi_hat - out.phase);
    se_temp += (t_hat - c.temperature) * (t_hat - c.temperature);
  }
  out.phase_rmse = std::sqrt(se_phase / c.trials);
  out.temperature_rmse = std::sqrt(se_temp / c.trials);
  return out;
}

}  // namespace qtherm
