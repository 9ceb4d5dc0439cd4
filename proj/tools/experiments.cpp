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

#include "qtherm/cli/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "qtherm/parallel.hpp"
#include "qtherm/probe.hpp"
#include "qtherm/qubit_channel.hpp"
#include "qtherm/rng.hpp"
#include "qtherm/sequential.hpp"
#include "qtherm/spin_chain.hpp"

#ifndef QTHERM_VERSION
#define QTHERM_VERSION "0.0.0"
#endif

namespace qtherm::cli {

namespace {

using json = nlohmann::ordered_json;

// Collects violations; a key only reports its first problem.
class Checker {
 public:
  explicit Checker(ValidationReport& r) : r_(r) {}

  bool ok(const std::string& key) const {
    return std::none_of(r_.violations.begin(), r_.violations.end(), [&](const Violation& v) { return v.key == key; });
  }
  void fail(const std::string& key, const std::string& msg, bool guard = false) {
    if (ok(key)) r_.violations.push_back({key, msg, guard});
  }
  void positive(const ExperimentConfig& c, const std::string& key) {
    if (!(c.real(key) > 0.0)) fail(key, "must be > 0");
  }
  void at_least(const ExperimentConfig& c, const std::string& key, long long lo) {
    if (c.integer(key) < lo) fail(key, "must be >= " + std::to_string(lo));
  }
  void estimate(const std::string& name, double v) { r_.estimates.emplace_back(name, v); }

 private:
  ValidationReport& r_;
};

std::string dense_guard_message(const char* who, long long l) {
  std::ostringstream os;
  os << who << ": L = " << l << " exceeds the dense-diagonalization guard L <= " << kMaxDenseSites;
  return os.str();
}

std::string branch_guard_message(long long n) {
  std::ostringstream os;
  os << "fisher_sequential: N = " << n << " needs 2^" << n << " branches, above the guard of " << kMaxBranches
     << " (N <= 20 for a binary POVM)";
  return os.str();
}

bool check_model(Checker& ck, const ExperimentConfig& c) {
  try {
    parse_chain_kind(c.text("model"));
    return true;
  } catch (const Error& e) {
    ck.fail("model", e.what());
    return false;
  }
}

void chain_estimates(Checker& ck, long long l) {
  const double dim = std::ldexp(1.0, static_cast<int>(l));
  ck.estimate("hilbert_dim", dim);
  ck.estimate("dense_matrix_bytes", 16.0 * dim * dim);
  if (l <= kMaxPurificationSites) {
    ck.estimate("purification_dim", dim * dim);
    ck.estimate("purification_bytes", 16.0 * dim * dim);
  }
}

void validate_sweep(Checker& ck, const ExperimentConfig& c) {
  check_model(ck, c);
  const long long l = c.integer("L");
  if (l < 2)
    ck.fail("L", "must be >= 2");
  else if (l > kMaxDenseSites)
    ck.fail("L", dense_guard_message("lqts_sweep", l), true);
  if (!(c.real("beta") > 0.0)) ck.fail("beta", "must be > 0");
  ck.at_least(c, "param_points", 1);
  if (c.integer("param_points") > 1 && !(c.real("param_max") > c.real("param_min")))
    ck.fail("param_max", "must exceed param_min when param_points > 1");
  if (!c.is_auto("n_A")) {
    std::set<long long> seen;
    for (long long n : c.integers("n_A")) {
      if (n < 1 || n > l) ck.fail("n_A", "block size " + std::to_string(n) + " is outside 1..L");
      if (!seen.insert(n).second) ck.fail("n_A", "block size " + std::to_string(n) + " repeated");
    }
  }
  if (ck.ok("L")) {
    chain_estimates(ck, l);
    ck.estimate("diagonalizations", static_cast<double>(std::max<long long>(c.integer("param_points"), 0)));
  }
}

struct ScalingDefaults {
  PeakMode mode;
  double lo, hi, target;
  std::vector<int> sizes;
};

ScalingDefaults scaling_defaults(ChainKind kind) {
  switch (kind) {
    case ChainKind::Ising:
      return {PeakMode::Maximum, 0.5, 1.7, 1.0, {6, 8, 10}};
    case ChainKind::XXZ:
      return {PeakMode::Minimum, -1.2, -0.8, -1.0, {6, 8}};
    case ChainKind::Decoupled:
      break;
  }
  return {PeakMode::Fixed, 0.5, 1.5, 1.0, {6, 8, 10}};
}

PeakMode parse_peak_mode(const std::string& s) {
  if (s == "max") return PeakMode::Maximum;
  if (s == "min") return PeakMode::Minimum;
  if (s == "fixed") return PeakMode::Fixed;
  throw ConfigError("mode", "'" + s + "' is not one of max, min, fixed, auto");
}

std::string to_string(PeakMode m) {
  return m == PeakMode::Maximum ? "max" : m == PeakMode::Minimum ? "min" : "fixed";
}

ScalingOptions scaling_options(const ExperimentConfig& c, int threads) {
  ScalingOptions o;
  o.kind = parse_chain_kind(c.text("model"));
  const ScalingDefaults d = scaling_defaults(o.kind);
  o.sizes.clear();
  if (c.is_auto("sizes"))
    o.sizes = d.sizes;
  else
    for (long long l : c.integers("sizes")) o.sizes.push_back(static_cast<int>(l));
  o.beta_per_site = c.real("beta_per_site");
  o.mode = c.is_auto("mode") ? d.mode : parse_peak_mode(c.text("mode"));
  o.lo = c.is_auto("param_lo") ? d.lo : c.real("param_lo");
  o.hi = c.is_auto("param_hi") ? d.hi : c.real("param_hi");
  o.step = c.real("param_step");
  o.target = c.is_auto("target") ? d.target : c.real("target");
  o.threads = threads;
  return o;
}

void validate_scaling(Checker& ck, const ExperimentConfig& c) {
  if (!check_model(ck, c)) return;
  if (!c.is_auto("mode")) {
    try {
      parse_peak_mode(c.text("mode"));
    } catch (const ConfigError& e) {
      ck.fail("mode", e.message());
      return;
    }
  }
  const ScalingOptions o = scaling_options(c, 1);
  long long points = 0, largest = 0;
  std::set<int> seen;
  for (int l : o.sizes) {
    if (l < 2)
      ck.fail("sizes", "chain length " + std::to_string(l) + " must be >= 2");
    else if (l > kMaxDenseSites)
      ck.fail("sizes", dense_guard_message("lqts_scaling", l), true);
    if (!seen.insert(l).second) ck.fail("sizes", "chain length " + std::to_string(l) + " repeated");
    points += l / 2;
    largest = std::max<long long>(largest, l);
  }
  if (ck.ok("sizes") && (points < 3 || points < static_cast<long long>(o.sizes.size()) + 1))
    ck.fail("sizes", "too few blocks for the common-slope fit");
  ck.positive(c, "beta_per_site");
  long long grid = 1;
  if (o.mode != PeakMode::Fixed) {
    if (!(o.step > 0.0)) ck.fail("param_step", "must be > 0");
    if (!(o.hi > o.lo)) ck.fail("param_hi", "must exceed param_lo");
    if (ck.ok("param_step") && ck.ok("param_hi")) {
      grid = static_cast<long long>(std::floor((o.hi - o.lo) / o.step + 1e-9)) + 1;
      if (grid > 100000) ck.fail("param_step", "grid of " + std::to_string(grid) + " points is above 100000");
    }
  }
  if (ck.ok("sizes") && largest > 0) {
    chain_estimates(ck, largest);
    ck.estimate("diagonalizations", static_cast<double>(grid * static_cast<long long>(o.sizes.size())));
  }
}

void validate_discriminate(Checker& ck, const ExperimentConfig& c) {
  const double th = c.real("T_hot"), tc = c.real("T_cold");
  if (!(tc > 0.0)) ck.fail("T_cold", "must be > 0");
  if (!(th > tc))
    ck.fail("T_hot", "must exceed T_cold");
  else if (tc > 0.0 && (th - tc) / tc < 1e-6)
    ck.fail("T_hot", "T_hot and T_cold are too close to discriminate (relative gap < 1e-6)");
  ck.positive(c, "omega");
  ck.positive(c, "gamma");
  ck.positive(c, "t_max");
  ck.at_least(c, "t_points", 2);
  if (c.integer("t_points") > 1000000) ck.fail("t_points", "must be <= 1000000");
  ck.estimate("time_points", static_cast<double>(c.integer("t_points")));
  ck.estimate("channel_evaluations", 185.0 * static_cast<double>(std::max<long long>(c.integer("t_points"), 0)));
}

void validate_fisher(Checker& ck, const ExperimentConfig& c) {
  long long largest = 0;
  std::set<long long> seen;
  for (long long n : c.integers("N")) {
    if (n < 1)
      ck.fail("N", "must be >= 1");
    else if (static_cast<std::uint64_t>(n) >= 64 || branch_count(2, static_cast<int>(n)) > kMaxBranches)
      ck.fail("N", branch_guard_message(n), true);
    if (!seen.insert(n).second) ck.fail("N", "N = " + std::to_string(n) + " repeated");
    largest = std::max(largest, n);
  }
  ck.positive(c, "tau_gamma");
  ck.positive(c, "omega");
  ck.positive(c, "gamma");
  if (!(c.real("n_th_min") > 0.0)) ck.fail("n_th_min", "must be > 0");
  if (!(c.real("n_th_max") > c.real("n_th_min"))) ck.fail("n_th_max", "must exceed n_th_min");
  ck.at_least(c, "temperatures", 2);
  ck.at_least(c, "samples", 1);
  try {
    parse_input_measure(c.text("input_measure"));
  } catch (const InvalidArgument& e) {
    ck.fail("input_measure", e.what());
  }
  ck.at_least(c, "angles", 2);
  if (largest > 0 && largest < 64) {
    const double branches = std::ldexp(1.0, static_cast<int>(largest));
    ck.estimate("branches_per_evaluation", branches);
    ck.estimate("evaluations", 2.0 * static_cast<double>(seen.size()) * static_cast<double>(c.integer("temperatures")) *
                                   static_cast<double>(c.integer("angles") + c.integer("samples") + 80));
  }
}

void validate_probe(Checker& ck, const ExperimentConfig& c) {
  for (long long m : c.integers("M"))
    if (m < 2 || m > 64) ck.fail("M", "level count " + std::to_string(m) + " is outside 2..64");
  ck.positive(c, "T");
  if (!c.is_auto("e_max") && !(c.real("e_max") > 0.0)) ck.fail("e_max", "must be > 0 or auto");
  ck.estimate("optimizer_starts", 11.0 * static_cast<double>(c.integers("M").size()));
}

HeisenbergToyConfig toy_config(const ExperimentConfig& c, long long n, ToyMode mode, std::size_t task) {
  HeisenbergToyConfig t;
  t.bath_atoms = static_cast<int>(c.integer("M"));
  t.probe_atoms = static_cast<int>(n);
  t.temperature = c.real("T");
  t.epsilon = c.real("epsilon");
  t.alpha = c.real("alpha");
  t.tau = c.real("tau");
  t.shots = static_cast<int>(c.integer("shots"));
  t.trials = static_cast<int>(c.integer("trials"));
  t.mode = mode;
  t.bath_sampling = c.flag("bath_sampling");
  t.seed = stream_seed(c.seed, 0x70e, task);
  return t;
}

void validate_toy(Checker& ck, const ExperimentConfig& c) {
  for (long long n : c.integers("N"))
    if (n < 1 || n > 1000000) ck.fail("N", "probe atom count " + std::to_string(n) + " is outside 1..1000000");
  std::vector<ToyMode> modes;
  for (const auto& m : c.texts("modes")) {
    try {
      modes.push_back(parse_toy_mode(m));
    } catch (const Error& e) {
      ck.fail("modes", e.what());
    }
  }
  const long long m = c.integer("M");
  if (m < 1 || m > 1000000000) ck.fail("M", "must be in 1..1e9");
  ck.positive(c, "T");
  ck.positive(c, "epsilon");
  if (!(c.real("alpha") >= 0.0)) ck.fail("alpha", "must be >= 0");
  ck.positive(c, "tau");
  ck.at_least(c, "shots", 100);
  ck.at_least(c, "trials", 2);
  const double work = static_cast<double>(c.integer("shots")) * static_cast<double>(c.integer("trials"));
  if (work > 1e10) ck.fail("shots", "shots * trials above 1e10");
  ck.estimate("samples_per_point", work);
  if (!ck.ok("N") || !ck.ok("modes") || !ck.ok("M") || !ck.ok("T") || !ck.ok("epsilon") || !ck.ok("alpha") ||
      !ck.ok("tau") || !ck.ok("shots") || !ck.ok("trials"))
    return;
  // Remaining failures are the phase-wrap guard.
  for (long long n : c.integers("N"))
    for (ToyMode mode : modes) {
      try {
        qtherm::validate(toy_config(c, n, mode, 0));
      } catch (const Error& e) {
        ck.fail("alpha", e.what());
      }
    }
}

json estimates_json(const ValidationReport& r) {
  json e = json::object();
  for (const auto& [k, v] : r.estimates) e[k] = v;
  return e;
}

// Tables -------------------------------------------------------------------

std::vector<NamedTable> sweep_tables(const ExperimentConfig& c, int threads) {
  const ChainKind kind = parse_chain_kind(c.text("model"));
  const int l = static_cast<int>(c.integer("L"));
  const double beta = c.real("beta");
  const long long points = c.integer("param_points");
  const double lo = c.real("param_min"), hi = c.real("param_max");
  std::vector<ChainModel> models;
  for (long long k = 0; k < points; ++k)
    models.emplace_back(kind, l, points == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (points - 1));
  std::vector<int> blocks;
  if (c.is_auto("n_A"))
    for (int n = 1; n <= l; ++n) blocks.push_back(n);
  else
    for (long long n : c.integers("n_A")) blocks.push_back(static_cast<int>(n));

  Table t{&schema("lqts-sweep"), {}};
  for (const SweepRow& r : lqts_sweep(models, beta, blocks, threads))
    t.rows.push_back({to_string(r.model.kind), static_cast<long long>(r.model.n_sites), r.model.param, r.beta,
                      static_cast<long long>(r.result.n_A), r.result.s_A, r.result.variance_H, r.result.s_a,
                      r.q_A_over_q});
  return {{"lqts-sweep.csv", std::move(t)}};
}

std::vector<NamedTable> scaling_tables(const ExperimentConfig& c, int threads) {
  const ScalingOptions o = scaling_options(c, threads);
  const ScalingResult r = lqts_scaling(o);
  Table pts{&schema("lqts-scaling"), {}};
  long long used = 0;
  for (const ScalingPoint& p : r.points) {
    pts.rows.push_back({to_string(o.kind), static_cast<long long>(p.n_sites), static_cast<long long>(p.n_A),
                        static_cast<double>(p.n_A) / p.n_sites, p.beta, p.param, p.s_A, p.variance_H,
                        static_cast<long long>(p.used_in_fit)});
    used += p.used_in_fit;
  }
  Table fit{&schema("lqts-scaling-fit"), {}};
  fit.rows.push_back({to_string(o.kind), to_string(o.mode), r.slope, r.slope_stderr, used});
  return {{"lqts-scaling.csv", std::move(pts)}, {"lqts-scaling-fit.csv", std::move(fit)}};
}

std::vector<NamedTable> discrimination_tables(const ExperimentConfig& c, int threads) {
  const double th = c.real("T_hot"), tc = c.real("T_cold");
  const ProbeBath bath{c.real("omega"), c.real("gamma")};
  const long long np = c.integer("t_points");
  const double t_max = c.real("t_max");
  std::vector<double> t_gamma(static_cast<std::size_t>(np)), t_phys(t_gamma.size());
  for (long long k = 0; k < np; ++k) {
    t_gamma[static_cast<std::size_t>(k)] = t_max * static_cast<double>(k) / (np - 1);
    t_phys[static_cast<std::size_t>(k)] = t_gamma[static_cast<std::size_t>(k)] / bath.gamma;
  }
  const double rate_h = ThermalQubitChannel::at_temperature(bath.omega, bath.gamma, th).relaxation_rate();
  const double rate_c = ThermalQubitChannel::at_temperature(bath.omega, bath.gamma, tc).relaxation_rate();

  struct Point {
    double ground, excited, best, ancilla;
  };
  const auto pts = parallel_map(t_phys.size(), threads, [&](std::size_t k) {
    const double t = t_phys[k];
    Point p{};
    p.ground = discrimination_distance(th, tc, BlochVector(0, 0, -1), t, bath);
    p.excited = discrimination_distance(th, tc, BlochVector(0, 0, 1), t, bath);
    p.best = std::max(p.ground, p.excited);
    for (int a = 1; a < 180; ++a)
      p.best = std::max(p.best, discrimination_distance(th, tc, BlochVector::polar(std::numbers::pi * a / 180.0), t, bath));
    p.ancilla = discrimination_with_ancilla(th, tc, t, bath);
    return p;
  });

  Table t{&schema("discrimination"), {}};
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double tg = t_gamma[k], xh = t_phys[k] * rate_h, xc = t_phys[k] * rate_c;
    t.rows.push_back({tg, std::string("ground"), pts[k].ground, xh, xc});
    t.rows.push_back({tg, std::string("excited"), pts[k].excited, xh, xc});
    t.rows.push_back({tg, std::string("optimal"), pts[k].best, xh, xc});
    t.rows.push_back({tg, std::string("ancilla"), pts[k].ancilla, xh, xc});
  }
  const DiscriminationOptimum opt = optimize_discrimination(th, tc, bath, t_phys);
  Table o{&schema("discrimination-optimum"), {}};
  o.rows.push_back({opt.t * bath.gamma, opt.theta, opt.value});
  return {{"discrimination.csv", std::move(t)}, {"discrimination-optimum.csv", std::move(o)}};
}

std::vector<NamedTable> fisher_tables(const ExperimentConfig& c, int threads) {
  const ProbeBath bath{c.real("omega"), c.real("gamma")};
  const double tau = c.real("tau_gamma") / bath.gamma;
  const auto temps = occupation_grid(bath.omega, c.real("n_th_min"), c.real("n_th_max"),
                                     static_cast<int>(c.integer("temperatures")));
  const auto ns = c.integers("N");
  const auto povm = MeasurementModel::projective_z();

  struct Task {
    InputExtremes iid, seq;
  };
  const std::size_t nt = temps.size();
  const auto tasks = parallel_map(ns.size() * nt, threads, [&](std::size_t i) {
    const long long n = ns[i / nt];
    const std::size_t j = i % nt;
    InputSampling s;
    s.n_samples = static_cast<int>(c.integer("samples"));
    s.n_angles = static_cast<int>(c.integer("angles"));
    s.measure = parse_input_measure(c.text("input_measure"));
    s.seed = stream_seed(c.seed, static_cast<std::uint64_t>(n), j);
    return Task{fisher_input_extremes(Protocol::IID, bath, tau, povm, static_cast<int>(n), temps[j], s),
                fisher_input_extremes(Protocol::Sequential, bath, tau, povm, static_cast<int>(n), temps[j], s)};
  });

  Table f{&schema("fisher-compare"), {}};
  Table g{&schema("fisher-gap"), {}};
  const double tg = c.real("tau_gamma");
  for (Protocol p : {Protocol::IID, Protocol::Sequential})
    for (std::size_t a = 0; a < ns.size(); ++a)
      for (std::size_t j = 0; j < nt; ++j) {
        const InputExtremes& e = p == Protocol::IID ? tasks[a * nt + j].iid : tasks[a * nt + j].seq;
        const double n_th = thermal_occupation(bath.omega, temps[j]);
        for (const auto& [cls, v] : {std::pair<const char*, double>{"optimal", e.max}, {"worst", e.min}, {"average", e.mean}})
          f.rows.push_back({to_string(p), ns[a], tg, temps[j], n_th, v, std::string(cls)});
      }
  for (std::size_t a = 0; a < ns.size(); ++a)
    for (std::size_t j = 0; j < nt; ++j) {
      const Task& k = tasks[a * nt + j];
      const double gi = k.iid.max - k.iid.min, gs = k.seq.max - k.seq.min;
      g.rows.push_back({ns[a], tg, temps[j], thermal_occupation(bath.omega, temps[j]), gi, gs, gs / gi});
    }
  return {{"fisher-compare.csv", std::move(f)}, {"fisher-gap.csv", std::move(g)}};
}

std::vector<NamedTable> probe_tables(const ExperimentConfig& c, int threads) {
  const auto ms = c.integers("M");
  const double temp = c.real("T");
  const double e_max = c.is_auto("e_max") ? 0.0 : c.real("e_max");
  const auto spectra = parallel_map(ms.size(), threads, [&](std::size_t i) {
    return optimal_probe_spectrum(static_cast<int>(ms[i]), temp, e_max, stream_seed(c.seed, 0x9b0be, i));
  });
  Table t{&schema("optimal-probe"), {}};
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t k = 0; k < spectra[i].energies.size(); ++k)
      t.rows.push_back({ms[i], temp, static_cast<long long>(k), spectra[i].energies[k], spectra[i].variance,
                        spectra[i].gap, spectra[i].degeneracy_spread});
  return {{"optimal-probe.csv", std::move(t)}};
}

std::vector<NamedTable> toy_tables(const ExperimentConfig& c, int threads) {
  const auto ns = c.integers("N");
  std::vector<ToyMode> modes;
  for (const auto& m : c.texts("modes")) modes.push_back(parse_toy_mode(m));
  const auto results = parallel_map(ns.size() * modes.size(), threads, [&](std::size_t i) {
    return heisenberg_toy(toy_config(c, ns[i % ns.size()], modes[i / ns.size()], i));
  });
  Table t{&schema("heisenberg-toy"), {}};
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    t.rows.push_back({ns[i % ns.size()], to_string(modes[i / ns.size()]), r.phase_rmse, r.temperature_rmse,
                      r.phase_bound});
  }
  return {{"heisenberg-toy.csv", std::move(t)}};
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

std::string ValidationReport::to_json() const {
  json j;
  j["experiment"] = experiment;
  j["valid"] = valid();
  json v = json::array();
  for (const auto& x : violations)
    v.push_back({{"key", x.key}, {"message", x.message}, {"resource_guard", x.resource_guard}});
  j["violations"] = v;
  j["estimates"] = estimates_json(*this);
  return j.dump(2) + "\n";
}

ValidationReport validate_config(const ExperimentConfig& config) {
  ValidationReport r;
  r.experiment = config.experiment;
  Checker ck(r);
  try {
    const std::string& e = config.experiment;
    if (e == "lqts-sweep")
      validate_sweep(ck, config);
    else if (e == "lqts-scaling")
      validate_scaling(ck, config);
    else if (e == "discriminate")
      validate_discriminate(ck, config);
    else if (e == "fisher-compare")
      validate_fisher(ck, config);
    else if (e == "optimal-probe")
      validate_probe(ck, config);
    else if (e == "heisenberg-toy")
      validate_toy(ck, config);
    else
      ck.fail("experiment", "unknown experiment '" + e + "'");
  } catch (const ConfigError& e) {
    ck.fail(e.key(), e.message());
  }
  return r;
}

std::vector<NamedTable> compute_tables(const ExperimentConfig& config, int threads) {
  const ValidationReport report = validate_config(config);
  for (const Violation& v : report.violations)
    if (v.resource_guard) throw ResourceGuard(v.message);
  if (!report.valid()) throw ConfigError(report.violations.front().key, report.violations.front().message);
  threads = std::max(threads, 1);
  const std::string& e = config.experiment;
  if (e == "lqts-sweep") return sweep_tables(config, threads);
  if (e == "lqts-scaling") return scaling_tables(config, threads);
  if (e == "discriminate") return discrimination_tables(config, threads);
  if (e == "fisher-compare") return fisher_tables(config, threads);
  if (e == "optimal-probe") return probe_tables(config, threads);
  return toy_tables(config, threads);
}

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  const auto tables = compute_tables(config, options.threads);

  RunResult result;
  result.output_dir = options.output_dir.empty() ? std::filesystem::path(config.output_path) : options.output_dir;
  std::filesystem::create_directories(result.output_dir);
  for (const NamedTable& nt : tables) {
    const std::string text = format_csv(nt.table);
    write_atomic(result.output_dir / nt.file, text);
    result.artifacts.push_back({nt.file, nt.table.schema->name, nt.table.rows.size(), text.size(), sha256_hex(text)});
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json m;
  m["tool"] = "qtherm";
  m["version"] = toolkit_version();
  m["experiment"] = config.experiment;
  json cfg = json::object();
  for (const auto& [k, v] : config.entries) cfg[k] = v;
  if (!options.output_dir.empty()) cfg["output_path"] = result.output_dir.string();
  m["config"] = cfg;
  m["threads"] = std::max(options.threads, 1);
  m["started_utc"] = started;
  m["duration_seconds"] = result.seconds;
  json outs = json::array();
  for (const Artifact& a : result.artifacts)
    outs.push_back({{"file", a.file}, {"schema", a.schema}, {"rows", a.rows}, {"bytes", a.bytes}, {"sha256", a.sha256}});
  m["outputs"] = outs;
  result.manifest = result.output_dir / kManifestName;
  write_atomic(result.manifest, m.dump(2) + "\n");
  return result;
}

bool verify_manifest(const std::filesystem::path& manifest, std::string* why) {
  auto bad = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  json m;
  try {
    m = json::parse(read_file(manifest));
  } catch (const std::exception& e) {
    return bad(std::string("manifest unreadable: ") + e.what());
  }
  if (!m.contains("outputs") || !m["outputs"].is_array() || m["outputs"].empty()) return bad("manifest lists no outputs");
  const auto dir = manifest.parent_path();
  for (const auto& o : m["outputs"]) {
    const std::string file = o.value("file", "");
    const auto path = dir / file;
    if (file.empty() || !std::filesystem::exists(path)) return bad("missing artifact " + path.string());
    if (sha256_hex(read_file(path)) != o.value("sha256", "")) return bad("checksum mismatch for " + path.string());
  }
  return true;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

const char* toolkit_version() { return QTHERM_VERSION; }

}  // namespace qtherm::cli
