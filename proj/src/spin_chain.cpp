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

#include "qtherm/spin_chain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <type_traits>

#include "qtherm/errors.hpp"
#include "qtherm/estimation.hpp"
#include "qtherm/parallel.hpp"

namespace qtherm {

std::string to_string(ChainKind kind) {
  switch (kind) {
    case ChainKind::Ising:
      return "ising";
    case ChainKind::XXZ:
      return "xxz";
    case ChainKind::Decoupled:
      return "decoupled";
  }
  return "?";
}

ChainKind parse_chain_kind(const std::string& name) {
  if (name == "ising") return ChainKind::Ising;
  if (name == "xxz") return ChainKind::XXZ;
  if (name == "decoupled") return ChainKind::Decoupled;
  throw InvalidArgument("unknown chain model '" + name + "' (expected ising, xxz or decoupled)");
}

namespace {

void require_chain(int n_sites) {
  if (n_sites < 2) throw InvalidArgument("chain: need L >= 2");
}

}  // namespace

PauliSum ising_terms(int n_sites, double h) {
  require_chain(n_sites);
  PauliSum s(n_sites);
  for (int i = 0; i < n_sites; ++i) {
    s.add(-1.0, {i, (i + 1) % n_sites}, "XX");
  }
  for (int i = 0; i < n_sites; ++i) s.add(-h, {i}, "Z");
  return s;
}

PauliSum xxz_terms(int n_sites, double delta) {
  require_chain(n_sites);
  PauliSum s(n_sites);
  for (int i = 0; i < n_sites; ++i) {
    const int j = (i + 1) % n_sites;
    s.add(1.0, {i, j}, "XX");
    s.add(1.0, {i, j}, "YY");
    s.add(delta, {i, j}, "ZZ");
  }
  return s;
}

PauliSum decoupled_terms(int n_sites, double h) {
  require_chain(n_sites);
  PauliSum s(n_sites);
  for (int i = 0; i < n_sites; ++i) s.add(-h, {i}, "Z");
  return s;
}

HermitianOperator build_ising(int n_sites, double h) { return ising_terms(n_sites, h).to_operator(); }

HermitianOperator build_xxz(int n_sites, double delta) { return xxz_terms(n_sites, delta).to_operator(); }

ChainModel::ChainModel(ChainKind k, int l, double p) : kind(k), n_sites(l), param(p) {
  require_chain(l);
  if (!std::isfinite(p)) throw InvalidArgument("chain: coupling parameter must be finite");
}

PauliSum ChainModel::terms() const {
  switch (kind) {
    case ChainKind::Ising:
      return ising_terms(n_sites, param);
    case ChainKind::XXZ:
      return xxz_terms(n_sites, param);
    case ChainKind::Decoupled:
      return decoupled_terms(n_sites, param);
  }
  throw InvalidArgument("chain: unknown kind");
}

// ---------------------------------------------------------------------------

struct LqtsEvaluator::PurificationCache {
  std::once_flag once;
  // Psi(s, s') = sum_i sqrt(p_i) V(s, i) V(s', i): the purification amplitudes.
  Eigen::MatrixXd real;
  Matrix complex;
};

namespace {

void guard_dim(Index dim, int max_sites, const char* what) {
  if (dim > (Index{1} << max_sites)) {
    std::ostringstream os;
    os << what << ": Hilbert-space dimension " << dim << " exceeds the guard 2^" << max_sites << " (L <= "
       << max_sites << ")";
    throw ResourceGuard(os.str());
  }
}

// Rows of `v` reordered so that row (b * na + a) holds full index map[a * nb + b].
template <class M>
M permute_rows(const M& v, const BipartitionSpec& part) {
  const std::vector<Index> map = part.index_map();
  const Index na = part.kept_dim();
  const Index nb = part.traced_dim();
  M out(v.rows(), v.cols());
  for (Index a = 0; a < na; ++a)
    for (Index b = 0; b < nb; ++b) out.row(b * na + a) = v.row(map[static_cast<std::size_t>(a * nb + b)]);
  return out;
}

struct SupportSums {
  double s_a = 0.0;
  double dropped = 0.0;
};

// s_a from the A-spectrum e, the Gram matrix G_ij = <u_i|y_j> and N_i = |y_i|^2,
// where u_k are the unnormalized Schmidt vectors and y_k = H~' u_k. Pairs
// involving ancilla directions outside span{u_k} enter through N_i.
template <class GramMatrix>
SupportSums ancilla_qfi(const RealVector& e, const std::vector<Index>& support, const GramMatrix& g,
                        const RealVector& n) {
  SupportSums out;
  const std::size_t k = support.size();
  for (std::size_t x = 0; x < k; ++x) {
    const double ei = e(support[x]);
    double inside = 0.0;
    for (std::size_t y = 0; y < k; ++y) {
      const double ej = e(support[y]);
      const double g2 = std::norm(g(static_cast<Index>(x), static_cast<Index>(y)));
      inside += g2 / ej;
      if (y > x) {
        const double diff = ei - ej;
        out.s_a += diff * diff / (ei + ej) * g2 / (ei * ej);
      }
    }
    out.s_a += n(static_cast<Index>(x)) - inside;
  }
  return out;
}

std::vector<Index> support_of(const RealVector& e, double cutoff, double* dropped) {
  std::vector<Index> s;
  *dropped = 0.0;
  for (Index k = 0; k < e.size(); ++k) {
    if (e(k) > cutoff)
      s.push_back(k);
    else
      *dropped += std::max(0.0, e(k));
  }
  return s;
}

template <class Scalar>
using DynMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
SupportSums schmidt_route(const DynMatrix<Scalar>& psi, const BipartitionSpec& part, const std::optional<PauliSum>& terms,
                          const HermitianOperator& h, double mean_energy) {
  const Index na = part.kept_dim();
  const Index nb = part.traced_dim();
  const Index d = psi.rows();
  const DynMatrix<Scalar> psi_p = permute_rows(psi, part);
  const Eigen::Map<const DynMatrix<Scalar>> m(psi_p.data(), na, nb * d);

  const DynMatrix<Scalar> rho_a = m * m.adjoint();
  Eigen::SelfAdjointEigenSolver<DynMatrix<Scalar>> es(rho_a);
  if (es.info() != Eigen::Success) throw NumericalFailure("lqts: reduced-state eigen-solver failed");
  const RealVector e = es.eigenvalues();
  double dropped = 0.0;
  const std::vector<Index> support = support_of(e, kRankCutoff, &dropped);

  // Column k holds u_k = (<phi_k| (x) I) |psi>, laid out as an (nb x d) block.
  const DynMatrix<Scalar> u_all = m.transpose() * es.eigenvectors().conjugate();
  const Index k = static_cast<Index>(support.size());
  DynMatrix<Scalar> u(nb * d, k), y(nb * d, k);
  DynMatrix<Scalar> block_out;
  DynMatrix<Scalar> h_t;
  if (!terms) {
    if constexpr (std::is_same_v<Scalar, double>)
      h_t = h.matrix().transpose().real();
    else
      h_t = h.matrix().transpose();
  }
  for (Index c = 0; c < k; ++c) {
    u.col(c) = u_all.col(support[static_cast<std::size_t>(c)]);
    const Eigen::Map<const DynMatrix<Scalar>> ub(u.col(c).data(), nb, d);
    if (terms) {
      terms->apply_to_rows(DynMatrix<Scalar>(ub), block_out);
    } else {
      block_out = ub * h_t;
    }
    block_out -= mean_energy * ub;
    y.col(c) = Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>(block_out.data(), nb * d);
  }
  const DynMatrix<Scalar> g = u.adjoint() * y;
  const RealVector n = y.colwise().squaredNorm().transpose();
  SupportSums out = ancilla_qfi(e, support, g, n);
  out.dropped = dropped;
  return out;
}

}  // namespace

LqtsEvaluator::LqtsEvaluator(HermitianOperator h, double beta, std::optional<PauliSum> terms)
    : ensemble_([&] {
        guard_dim(h.dim(), kMaxDenseSites, "lqts");
        return gibbs_state(h, beta);
      }()),
      terms_(std::move(terms)),
      cache_(std::make_shared<PurificationCache>()) {
  if (terms_ && terms_->dim() != ensemble_.hamiltonian().dim())
    throw DimensionMismatch("LqtsEvaluator: Pauli terms and Hamiltonian act on different registers");
  real_ = is_real(ensemble_.hamiltonian().matrix()) && (!terms_ || terms_->is_real());
}

LqtsEvaluator::LqtsEvaluator(const ChainModel& model, double beta) : LqtsEvaluator(model.hamiltonian(), beta, model.terms()) {}

void LqtsEvaluator::check(const BipartitionSpec& partition) const {
  if (partition.total_dim() != ensemble_.hamiltonian().dim()) {
    std::ostringstream os;
    os << "lqts: partition describes dim " << partition.total_dim() << " but H has dim "
       << ensemble_.hamiltonian().dim();
    throw DimensionMismatch(os.str());
  }
}

LqtsResult LqtsEvaluator::evaluate(const BipartitionSpec& partition, LqtsRoute route) const {
  check(partition);
  if (route == LqtsRoute::Automatic)
    route = ensemble_.hamiltonian().dim() <= (Index{1} << kMaxPurificationSites) ? LqtsRoute::Schmidt
                                                                                : LqtsRoute::Reduced;
  return route == LqtsRoute::Schmidt ? schmidt(partition) : reduced(partition);
}

namespace {

LqtsResult finish(SupportSums sums, const GibbsEnsemble& ens, const BipartitionSpec& part) {
  LqtsResult r;
  r.beta = ens.beta();
  r.n_A = static_cast<int>(part.keep_sites().size());
  r.variance_H = ens.energy_variance();
  r.s_a = std::clamp(sums.s_a, 0.0, r.variance_H);
  r.s_A = r.variance_H - r.s_a;
  r.dropped = sums.dropped;
  return r;
}

}  // namespace

LqtsResult LqtsEvaluator::schmidt(const BipartitionSpec& partition) const {
  guard_dim(ensemble_.hamiltonian().dim(), kMaxPurificationSites, "lqts purification");
  const double mean = ensemble_.mean_energy();
  std::call_once(cache_->once, [&] {
    const RealVector root = ensemble_.populations().cwiseSqrt();
    if (real_) {
      const Eigen::MatrixXd v = ensemble_.eigenvectors().real();
      cache_->real = v * root.asDiagonal() * v.transpose();
    } else {
      const Matrix& v = ensemble_.eigenvectors();
      cache_->complex = v * root.cast<Complex>().asDiagonal() * v.transpose();
    }
  });
  const SupportSums sums = real_ ? schmidt_route<double>(cache_->real, partition, terms_, ensemble_.hamiltonian(), mean)
                                 : schmidt_route<Complex>(cache_->complex, partition, terms_, ensemble_.hamiltonian(), mean);
  return finish(sums, ensemble_, partition);
}

LqtsResult LqtsEvaluator::reduced(const BipartitionSpec& partition) const {
  const Index na = partition.kept_dim();
  const Index nb = partition.traced_dim();
  const RealVector& p = ensemble_.populations();
  const RealVector centred = ensemble_.energies().array() - ensemble_.mean_energy();
  const RealVector w1 = p.cwiseProduct(centred);
  const RealVector w2 = w1.cwiseProduct(centred);
  const Matrix vp = permute_rows(ensemble_.eigenvectors(), partition);

  Matrix r0 = Matrix::Zero(na, na), r1 = Matrix::Zero(na, na), r2 = Matrix::Zero(na, na);
  for (Index b = 0; b < nb; ++b) {
    const auto vb = vp.middleRows(b * na, na);
    r0.noalias() += vb * p.cast<Complex>().asDiagonal() * vb.adjoint();
    r1.noalias() += vb * w1.cast<Complex>().asDiagonal() * vb.adjoint();
    r2.noalias() += vb * w2.cast<Complex>().asDiagonal() * vb.adjoint();
  }
  const Spectrum s = hermitian_eig(Matrix(0.5 * (r0 + r0.adjoint())));
  double dropped = 0.0;
  const std::vector<Index> support = support_of(s.values, kRankCutoff, &dropped);
  const Index k = static_cast<Index>(support.size());
  Matrix phi(na, k);
  for (Index c = 0; c < k; ++c) phi.col(c) = s.vectors.col(support[static_cast<std::size_t>(c)]);
  // <u_i|y_j> = <phi_j| Tr_B[rho H~] |phi_i>; |y_i|^2 = <phi_i| Tr_B[rho H~^2] |phi_i>.
  const Matrix g = (phi.adjoint() * r1 * phi).transpose();
  const RealVector n = (phi.adjoint() * r2 * phi).diagonal().real();
  SupportSums sums = ancilla_qfi(s.values, support, g, n);
  sums.dropped = dropped;
  return finish(sums, ensemble_, partition);
}

LqtsResult lqts_closed_form(const HermitianOperator& h, double beta, const BipartitionSpec& partition, LqtsRoute route) {
  return LqtsEvaluator(h, beta).evaluate(partition, route);
}

double lqts_fidelity_oracle(const HermitianOperator& h, double beta, const BipartitionSpec& partition,
                            double delta_beta) {
  if (partition.total_dim() != h.dim()) throw DimensionMismatch("lqts_fidelity_oracle: partition does not match H");
  guard_dim(h.dim(), kMaxDenseSites, "lqts_fidelity_oracle");
  const Spectrum s = hermitian_eig(h);
  if (delta_beta <= 0.0) delta_beta = 1e-3 * std::max(beta, 1.0);
  // Same Richardson step as qfi_fidelity_limit, with the reduced states kept
  // in extended precision end to end.
  auto central = [&](double d) {
    return 8.0 * reduced_gibbs_infidelity_extended(s.values, s.vectors, beta - 0.5 * d, beta + 0.5 * d, partition) /
           (d * d);
  };
  const double q = (4.0 * central(0.5 * delta_beta) - central(delta_beta)) / 3.0;
  if (!std::isfinite(q)) throw NumericalFailure("lqts_fidelity_oracle: non-finite fidelity quotient");
  return q;
}

double local_qfi_temperature(const LqtsResult& result, double temperature) {
  if (!(temperature > 0.0) || std::abs(temperature * result.beta - 1.0) > 1e-12)
    throw InvalidArgument("local_qfi_temperature: T must equal 1/beta of the result");
  const double t2 = temperature * temperature;
  return result.s_A / (t2 * t2);
}

// ---------------------------------------------------------------------------

std::vector<SweepRow> lqts_sweep(const std::vector<ChainModel>& models, double beta, const std::vector<int>& n_A,
                                 int threads) {
  if (models.empty() || n_A.empty()) throw InvalidArgument("lqts_sweep: empty model or n_A list");
  for (const auto& m : models) {
    if (m.n_sites > kMaxDenseSites) {
      std::ostringstream os;
      os << "lqts_sweep: L = " << m.n_sites << " exceeds the dense-diagonalization guard L <= " << kMaxDenseSites;
      throw ResourceGuard(os.str());
    }
    for (int k : n_A)
      if (k < 1 || k > m.n_sites) {
        std::ostringstream os;
        os << "lqts_sweep: n_A = " << k << " outside [1, L = " << m.n_sites << "]";
        throw InvalidArgument(os.str());
      }
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("lqts_sweep: beta must be finite and >= 0");

  auto per_model = parallel_map(models.size(), threads, [&](std::size_t i) {
    const ChainModel& m = models[i];
    const LqtsEvaluator ev(m, beta);
    std::vector<SweepRow> rows;
    for (int k : n_A) {
      SweepRow row;
      row.model = m;
      row.beta = beta;
      row.result = ev.evaluate(BipartitionSpec::qubit_block(m.n_sites, k));
      row.q_A_over_q = row.result.variance_H > 0.0 ? row.result.s_A / row.result.variance_H : 0.0;
      rows.push_back(row);
    }
    return rows;
  });
  std::vector<SweepRow> out;
  for (auto& rows : per_model) out.insert(out.end(), rows.begin(), rows.end());
  return out;
}

double common_slope(const std::vector<double>& x, const std::vector<double>& y, const std::vector<int>& group,
                    double* stderr_out) {
  if (x.size() != y.size() || x.size() != group.size())
    throw InvalidArgument("common_slope: x, y and group must have equal lengths");
  std::map<int, std::pair<double, double>> sums;
  std::map<int, int> counts;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sums[group[i]].first += x[i];
    sums[group[i]].second += y[i];
    ++counts[group[i]];
  }
  const std::size_t n = x.size();
  if (n < 3 || n <= sums.size()) {
    std::ostringstream os;
    os << "common_slope: " << n << " points in " << sums.size() << " groups is too few for a fit (need >= 3)";
    throw InvalidArgument(os.str());
  }
  double sxx = 0.0, sxy = 0.0;
  std::vector<double> dx(n), dy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [sx, sy] = sums[group[i]];
    const double c = counts[group[i]];
    dx[i] = x[i] - sx / c;
    dy[i] = y[i] - sy / c;
    sxx += dx[i] * dx[i];
    sxy += dx[i] * dy[i];
  }
  if (!(sxx > 0.0)) throw InvalidArgument("common_slope: x does not vary within any group");
  const double slope = sxy / sxx;
  if (stderr_out) {
    const double dof = static_cast<double>(n) - static_cast<double>(sums.size()) - 1.0;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) rss += std::pow(dy[i] - slope * dx[i], 2);
    *stderr_out = dof > 0.0 ? std::sqrt(rss / dof / sxx) : 0.0;
  }
  return slope;
}

namespace {

// s_A for blocks 1..kmax at one parameter value, plus Var(H).
struct GridValue {
  std::vector<double> s_A;
  double variance = 0.0;
};

GridValue grid_value(ChainKind kind, int l, double param, double beta, int kmax) {
  const LqtsEvaluator ev(ChainModel(kind, l, param), beta);
  GridValue g;
  g.variance = ev.ensemble().energy_variance();
  for (int k = 1; k <= kmax; ++k) g.s_A.push_back(ev.evaluate(BipartitionSpec::qubit_block(l, k)).s_A);
  return g;
}

}  // namespace

ScalingResult lqts_scaling(const ScalingOptions& o) {
  if (o.sizes.empty()) throw InvalidArgument("lqts_scaling: no chain sizes");
  for (int l : o.sizes)
    if (l > kMaxDenseSites) {
      std::ostringstream os;
      os << "lqts_scaling: L = " << l << " exceeds the dense-diagonalization guard L <= " << kMaxDenseSites;
      throw ResourceGuard(os.str());
    } else if (l < 2) {
      throw InvalidArgument("lqts_scaling: L must be >= 2");
    }
  std::vector<double> grid;
  if (o.mode == PeakMode::Fixed) {
    grid.push_back(o.target);
  } else {
    if (!(o.step > 0.0) || !(o.hi >= o.lo)) throw InvalidArgument("lqts_scaling: need step > 0 and hi >= lo");
    const auto n = static_cast<int>(std::llround((o.hi - o.lo) / o.step));
    for (int i = 0; i <= n; ++i) grid.push_back(o.lo + i * o.step);
  }
  const bool maximize = o.mode != PeakMode::Minimum;

  ScalingResult result;
  std::vector<double> fx, fy;
  std::vector<int> fg;
  for (int l : o.sizes) {
    const double beta = o.beta_per_site * l;
    const int kmax = l / 2;
    const std::vector<GridValue> values =
        parallel_map(grid.size(), o.threads, [&](std::size_t i) { return grid_value(o.kind, l, grid[i], beta, kmax); });
    for (int k = 1; k <= kmax; ++k) {
      auto at = [&](std::size_t i) { return values[i].s_A[static_cast<std::size_t>(k - 1)]; };
      std::size_t best = 0;
      for (std::size_t i = 1; i < grid.size(); ++i)
        if (maximize ? at(i) > at(best) : at(i) < at(best)) best = i;
      ScalingPoint pt;
      pt.n_sites = l;
      pt.n_A = k;
      pt.beta = beta;
      pt.param = grid[best];
      pt.s_A = at(best);
      pt.variance_H = values[best].variance;
      if (best > 0 && best + 1 < grid.size()) {
        // Parabola through the three grid points around the extremum.
        const double fm = at(best - 1), f0 = at(best), fp = at(best + 1);
        const double curv = fp - 2.0 * f0 + fm;
        if (maximize ? curv < 0.0 : curv > 0.0) {
          const double shift = -0.5 * o.step * (fp - fm) / curv;
          if (std::abs(shift) < o.step) {
            const double x = grid[best] + shift;
            const LqtsEvaluator ev(ChainModel(o.kind, l, x), beta);
            const double v = ev.evaluate(BipartitionSpec::qubit_block(l, k)).s_A;
            if (maximize ? v > pt.s_A : v < pt.s_A) {
              pt.param = x;
              pt.s_A = v;
              pt.variance_H = ev.ensemble().energy_variance();
            }
          }
        }
      }
      pt.used_in_fit = pt.s_A > o.floor * pt.variance_H;
      if (pt.used_in_fit) {
        fx.push_back(std::log(static_cast<double>(k) / l));
        fy.push_back(std::log(pt.s_A));
        fg.push_back(l);
      }
      result.points.push_back(pt);
    }
  }
  result.slope = common_slope(fx, fy, fg, &result.slope_stderr);
  return result;
}

}  // namespace qtherm
