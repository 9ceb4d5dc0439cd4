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

#include "qtherm/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qtherm/errors.hpp"

namespace qtherm {

namespace {

constexpr double kHermitianRelTol = 1e-8;
constexpr double kTraceTol = 1e-10;
constexpr double kPositivityTol = 1e-10;
constexpr double kPureNormTol = 1e-12;

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

void require_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw InvalidArgument(os.str());
  }
}

}  // namespace

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_real(const Matrix& m) { return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0; }

HermitianOperator::HermitianOperator(Matrix entries) {
  require_square(entries, "HermitianOperator");
  asymmetry_ = max_abs(entries - entries.adjoint());
  const double scale = max_abs(entries);
  if (asymmetry_ > kHermitianRelTol * scale) {
    std::ostringstream os;
    os << "HermitianOperator: asymmetry " << asymmetry_ << " exceeds " << kHermitianRelTol
       << " * max|A| = " << kHermitianRelTol * scale;
    throw InvalidArgument(os.str());
  }
  entries_ = symmetrized(entries);
}

HermitianOperator HermitianOperator::zero(Index dim) { return HermitianOperator(Matrix::Zero(dim, dim)); }

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("operator+: dimensions differ");
  return HermitianOperator(a.matrix() + b.matrix());
}

HermitianOperator operator*(double s, const HermitianOperator& a) { return HermitianOperator(s * a.matrix()); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix entries, Trusted) : entries_(std::move(entries)) {}

DensityMatrix::DensityMatrix(Matrix entries) {
  require_square(entries, "DensityMatrix");
  const double asym = max_abs(entries - entries.adjoint());
  if (asym > kHermitianRelTol * std::max(1.0, max_abs(entries)))
    throw InvalidArgument("DensityMatrix: matrix is not Hermitian");
  entries = symmetrized(entries);
  const double tr = entries.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr << " differs from 1 by more than " << kTraceTol;
    throw InvalidArgument(os.str());
  }
  const Spectrum s = hermitian_eig(entries);
  if (s.values(0) < -kPositivityTol) {
    std::ostringstream os;
    os << "DensityMatrix: lowest eigenvalue " << s.values(0) << " is below -" << kPositivityTol;
    throw InvalidArgument(os.str());
  }
  entries_ = std::move(entries);
}

DensityMatrix DensityMatrix::from_spectral(Matrix entries) {
  require_square(entries, "DensityMatrix");
  entries = symmetrized(entries);
  const double tr = entries.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr << " differs from 1 by more than " << kTraceTol;
    throw InvalidArgument(os.str());
  }
  return DensityMatrix(std::move(entries), Trusted{});
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim), Trusted{});
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const Vector& v = psi.amplitudes();
  return DensityMatrix(v * v.adjoint(), Trusted{});
}

DensityMatrix DensityMatrix::from_bloch(double rx, double ry, double rz) {
  if (rx * rx + ry * ry + rz * rz > 1.0 + 1e-10) throw InvalidArgument("from_bloch: |r| > 1");
  Matrix m = 0.5 * (Matrix::Identity(2, 2) + rx * pauli_x() + ry * pauli_y() + rz * pauli_z());
  return DensityMatrix(std::move(m), Trusted{});
}

// ---------------------------------------------------------------------------

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw InvalidArgument("PureState: empty amplitude vector");
  const double n = amplitudes_.norm();
  if (std::abs(n - 1.0) > kPureNormTol) {
    std::ostringstream os;
    os << "PureState: norm " << n << " is not 1 within " << kPureNormTol;
    throw InvalidArgument(os.str());
  }
}

PureState PureState::normalized(Vector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw InvalidArgument("PureState: cannot normalize the zero vector");
  return PureState(amplitudes / n);
}

PureState PureState::basis(Index dim, Index k) {
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return PureState(std::move(v));
}

// ---------------------------------------------------------------------------

Spectrum hermitian_eig(const Matrix& hermitian) {
  require_square(hermitian, "hermitian_eig");
  Spectrum out;
  Eigen::ComputationInfo info;
  if (is_real(hermitian)) {
    // Real symmetric input: the real solver is about twice as fast.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hermitian.real());
    info = es.info();
    if (info == Eigen::Success) {
      out.values = es.eigenvalues();
      out.vectors = es.eigenvectors().cast<Complex>();
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
    info = es.info();
    if (info == Eigen::Success) {
      out.values = es.eigenvalues();
      out.vectors = es.eigenvectors();
    }
  }
  if (info != Eigen::Success) {
    std::ostringstream os;
    os << "hermitian_eig: eigen-solver did not converge (dim " << hermitian.rows() << ", max|A| "
       << max_abs(hermitian) << ")";
    throw NumericalFailure(os.str());
  }
  return out;
}

Spectrum hermitian_eig(const HermitianOperator& a) { return hermitian_eig(a.matrix()); }

// ---------------------------------------------------------------------------

GibbsEnsemble::GibbsEnsemble(HermitianOperator hamiltonian, double beta)
    : hamiltonian_(std::make_shared<const HermitianOperator>(std::move(hamiltonian))), beta_(beta) {
  spectrum_ = std::make_shared<const Spectrum>(hermitian_eig(*hamiltonian_));
  fill_weights();
}

GibbsEnsemble::GibbsEnsemble(std::shared_ptr<const HermitianOperator> h,
                             std::shared_ptr<const Spectrum> spectrum, double beta)
    : hamiltonian_(std::move(h)), spectrum_(std::move(spectrum)), beta_(beta) {
  fill_weights();
}

void GibbsEnsemble::fill_weights() {
  if (!std::isfinite(beta_)) throw InvalidArgument("GibbsEnsemble: beta must be finite");
  const RealVector& e = spectrum_->values;
  // Shift by the extremal level that makes every exponent <= 0.
  const double ref = beta_ >= 0.0 ? e.minCoeff() : e.maxCoeff();
  populations_ = (-beta_ * (e.array() - ref)).exp().matrix();
  const double sum = populations_.sum();
  populations_ /= sum;
  log_z_ = std::log(sum) - beta_ * ref;
}

GibbsEnsemble GibbsEnsemble::at_beta(double beta) const { return GibbsEnsemble(hamiltonian_, spectrum_, beta); }

double GibbsEnsemble::mean_energy() const { return populations_.dot(spectrum_->values); }

double GibbsEnsemble::energy_variance() const {
  const double mean = mean_energy();
  return populations_.dot((spectrum_->values.array() - mean).square().matrix());
}

DensityMatrix GibbsEnsemble::state() const {
  const Matrix& v = spectrum_->vectors;
  Matrix rho = v * populations_.cast<Complex>().asDiagonal() * v.adjoint();
  return DensityMatrix::from_spectral(std::move(rho));
}

GibbsEnsemble gibbs_state(const HermitianOperator& h, double beta) {
  if (std::isinf(beta)) throw InvalidArgument("gibbs_state: beta = +inf, use ground_projector instead");
  if (!(beta >= 0.0)) throw InvalidArgument("gibbs_state: beta must be finite and non-negative");
  return GibbsEnsemble(h, beta);
}

DensityMatrix ground_projector(const HermitianOperator& h) {
  const Spectrum s = hermitian_eig(h);
  const double tol = 1e-10 * std::max(1.0, h.max_norm());
  Index k = 1;
  while (k < s.values.size() && s.values(k) - s.values(0) <= tol) ++k;
  Matrix p = s.vectors.leftCols(k) * s.vectors.leftCols(k).adjoint() / static_cast<double>(k);
  return DensityMatrix::from_spectral(std::move(p));
}

// ---------------------------------------------------------------------------

BipartitionSpec::BipartitionSpec(std::vector<int> site_dims, std::vector<int> keep_sites)
    : site_dims_(std::move(site_dims)), keep_(std::move(keep_sites)) {
  if (site_dims_.empty()) throw InvalidArgument("BipartitionSpec: no sites");
  for (int d : site_dims_)
    if (d < 1) throw InvalidArgument("BipartitionSpec: site dimensions must be positive");
  std::sort(keep_.begin(), keep_.end());
  keep_.erase(std::unique(keep_.begin(), keep_.end()), keep_.end());
  if (keep_.empty()) throw InvalidArgument("BipartitionSpec: keep_sites must be non-empty");
  if (keep_.front() < 0 || keep_.back() >= n_sites()) {
    std::ostringstream os;
    os << "BipartitionSpec: keep_sites must lie in [0, " << n_sites() - 1 << "]";
    throw InvalidArgument(os.str());
  }
}

BipartitionSpec BipartitionSpec::qubit_block(int n_sites, int n_keep, int first) {
  if (n_keep < 1 || n_keep > n_sites) throw InvalidArgument("qubit_block: need 1 <= n_keep <= n_sites");
  std::vector<int> keep;
  for (int k = 0; k < n_keep; ++k) keep.push_back((first + k) % n_sites);
  return BipartitionSpec(std::vector<int>(static_cast<std::size_t>(n_sites), 2), std::move(keep));
}

std::vector<int> BipartitionSpec::traced_sites() const {
  std::vector<int> out;
  for (int i = 0; i < n_sites(); ++i)
    if (!std::binary_search(keep_.begin(), keep_.end(), i)) out.push_back(i);
  return out;
}

Index BipartitionSpec::total_dim() const {
  Index d = 1;
  for (int s : site_dims_) d *= s;
  return d;
}

Index BipartitionSpec::kept_dim() const {
  Index d = 1;
  for (int i : keep_) d *= site_dims_[static_cast<std::size_t>(i)];
  return d;
}

std::vector<Index> BipartitionSpec::index_map() const {
  const int n = n_sites();
  // Place value of each site in the full index.
  std::vector<Index> stride(static_cast<std::size_t>(n));
  Index acc = 1;
  for (int i = n - 1; i >= 0; --i) {
    stride[static_cast<std::size_t>(i)] = acc;
    acc *= site_dims_[static_cast<std::size_t>(i)];
  }
  const std::vector<int> traced = traced_sites();
  auto offsets = [&](const std::vector<int>& sites) {
    Index dim = 1;
    for (int i : sites) dim *= site_dims_[static_cast<std::size_t>(i)];
    std::vector<Index> off(static_cast<std::size_t>(dim), 0);
    for (Index idx = 0; idx < dim; ++idx) {
      Index rem = idx;
      Index full = 0;
      for (auto it = sites.rbegin(); it != sites.rend(); ++it) {
        const int d = site_dims_[static_cast<std::size_t>(*it)];
        full += (rem % d) * stride[static_cast<std::size_t>(*it)];
        rem /= d;
      }
      off[static_cast<std::size_t>(idx)] = full;
    }
    return off;
  };
  const std::vector<Index> a_off = offsets(keep_);
  const std::vector<Index> b_off = offsets(traced);
  std::vector<Index> map;
  map.reserve(a_off.size() * b_off.size());
  for (Index a : a_off)
    for (Index b : b_off) map.push_back(a + b);
  return map;
}

Matrix partial_trace(const Matrix& op, const BipartitionSpec& layout) {
  if (op.rows() != op.cols() || op.rows() != layout.total_dim()) {
    std::ostringstream os;
    os << "partial_trace: layout expects dim " << layout.total_dim() << ", operator has dim " << op.rows()
       << "x" << op.cols();
    throw DimensionMismatch(os.str());
  }
  const Index da = layout.kept_dim();
  const Index db = layout.traced_dim();
  const std::vector<Index> map = layout.index_map();
  Matrix out = Matrix::Zero(da, da);
  for (Index a = 0; a < da; ++a)
    for (Index ap = 0; ap < da; ++ap) {
      Complex acc = 0.0;
      for (Index b = 0; b < db; ++b)
        acc += op(map[static_cast<std::size_t>(a * db + b)], map[static_cast<std::size_t>(ap * db + b)]);
      out(a, ap) = acc;
    }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const BipartitionSpec& layout) {
  return DensityMatrix::from_spectral(partial_trace(rho.matrix(), layout));
}

// ---------------------------------------------------------------------------

Matrix psd_sqrt(const Matrix& hermitian, double* clipped) {
  const Spectrum s = hermitian_eig(0.5 * (hermitian + hermitian.adjoint()));
  RealVector root(s.values.size());
  double clip = 0.0;
  for (Index i = 0; i < s.values.size(); ++i) {
    const double v = s.values(i);
    if (v < 0.0) clip += -v;
    root(i) = v > 0.0 ? std::sqrt(v) : 0.0;
  }
  if (clipped) *clipped = clip;
  return s.vectors * root.cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

namespace {

// Eigenvalues clipped at zero, renormalized to the original trace.
Matrix clipped_state(const Matrix& m) {
  const Spectrum s = hermitian_eig(0.5 * (m + m.adjoint()));
  const double tr = s.values.sum();
  RealVector w = s.values.cwiseMax(0.0);
  const double wsum = w.sum();
  if (wsum > 0.0) w *= tr / wsum;
  return s.vectors * w.cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

}  // namespace

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch("uhlmann_fidelity: dimensions differ");
  const Matrix sr = psd_sqrt(clipped_state(rho.matrix()));
  const Matrix inner = sr * clipped_state(sigma.matrix()) * sr;
  const Spectrum s = hermitian_eig(0.5 * (inner + inner.adjoint()));
  double f = 0.0;
  for (Index i = 0; i < s.values.size(); ++i)
    if (s.values(i) > 0.0) f += std::sqrt(s.values(i));
  return std::clamp(f, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch("trace_distance: dimensions differ");
  const Spectrum s = hermitian_eig(Matrix(rho.matrix() - sigma.matrix()));
  return std::clamp(0.5 * s.values.cwiseAbs().sum(), 0.0, 1.0);
}

PureState purify(const DensityMatrix& rho) {
  const Spectrum s = hermitian_eig(rho.matrix());
  const Index d = rho.dim();
  Vector psi = Vector::Zero(d * d);
  for (Index i = 0; i < d; ++i) {
    const double p = std::max(0.0, s.values(i));
    if (p == 0.0) continue;
    const Vector& v = s.vectors.col(i);
    psi += std::sqrt(p) * kron(Matrix(v), Matrix(v.conjugate())).col(0);
  }
  return PureState::normalized(std::move(psi));
}

Eigen::Vector3d bloch_vector(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DimensionMismatch("bloch_vector: expected a qubit state");
  const Matrix& m = rho.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace qtherm
