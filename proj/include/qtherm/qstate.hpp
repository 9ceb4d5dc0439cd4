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
 * Dense finite-dimensional state algebra: Hermitian operators, density
 * matrices, Gibbs ensembles, partial traces, fidelity and trace distance.
 *
 * Units: hbar = k_B = 1 throughout the toolkit. Energies and temperatures share
 * one unit and beta = 1/T.
 *
 * Tensor-product convention: site 0 is the leftmost (most significant) factor,
 * so the computational index of a qubit chain is s = sum_i b_i 2^(L-1-i).
 */

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace qtherm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Largest |entry| of a matrix (0 for an empty matrix).
double max_abs(const Matrix& m);

/// True when every entry has an exactly vanishing imaginary part.
bool is_real(const Matrix& m);

class HermitianOperator {
 public:
  /// Symmetrizes (A + A^dag)/2. Throws InvalidArgument if A is not square,
  /// is empty, or its asymmetry exceeds 1e-8 * max|A|.
  explicit HermitianOperator(Matrix entries);

  static HermitianOperator zero(Index dim);
  static HermitianOperator identity(Index dim);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  /// max|A - A^dag| of the matrix handed to the constructor.
  double asymmetry() const { return asymmetry_; }
  double max_norm() const { return max_abs(entries_); }

 private:
  Matrix entries_;
  double asymmetry_ = 0.0;
};

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator*(double s, const HermitianOperator& a);
/// Kronecker product a (x) b.
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);
Matrix kron(const Matrix& a, const Matrix& b);

class PureState;

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace (1e-10) and positivity (lowest
  /// eigenvalue >= -1e-10).
  explicit DensityMatrix(Matrix entries);

  /// Skips the eigenvalue-based positivity check. For states assembled from a
  /// spectral decomposition with non-negative weights; trace is still checked.
  static DensityMatrix from_spectral(Matrix entries);

  static DensityMatrix maximally_mixed(Index dim);
  static DensityMatrix from_pure(const PureState& psi);
  /// Single-qubit state (I + r.sigma)/2 in the basis where sigma_z = diag(1, -1).
  static DensityMatrix from_bloch(double rx, double ry, double rz);

  Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

 private:
  struct Trusted {};
  DensityMatrix(Matrix entries, Trusted);
  Matrix entries_;
};

class PureState {
 public:
  /// Requires unit 2-norm within 1e-12.
  explicit PureState(Vector amplitudes);
  /// Rescales to unit norm. Throws on the zero vector.
  static PureState normalized(Vector amplitudes);
  static PureState basis(Index dim, Index k);

  Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  Vector amplitudes_;
};

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
struct Spectrum {
  RealVector values;
  Matrix vectors;
};

/// Throws NumericalFailure (with norm and dim) when the solver does not converge.
Spectrum hermitian_eig(const HermitianOperator& a);
Spectrum hermitian_eig(const Matrix& hermitian);

/// Thermal state e^{-beta H}/Z with a cached spectral decomposition.
class GibbsEnsemble {
 public:
  GibbsEnsemble(HermitianOperator hamiltonian, double beta);

  /// Same Hamiltonian, another inverse temperature, no new diagonalization.
  /// Accepts any finite beta (a slightly negative one is meaningful for
  /// finite spectra and is used by difference quotients).
  GibbsEnsemble at_beta(double beta) const;

  const HermitianOperator& hamiltonian() const { return *hamiltonian_; }
  double beta() const { return beta_; }
  const RealVector& energies() const { return spectrum_->values; }
  const Matrix& eigenvectors() const { return spectrum_->vectors; }
  /// Boltzmann weights e^{-beta(E_i - E_min)}/sum, aligned with energies().
  const RealVector& populations() const { return populations_; }
  double log_partition() const { return log_z_; }

  double mean_energy() const;
  /// Tr[rho H^2] - Tr[rho H]^2, evaluated on centred energies.
  double energy_variance() const;

  DensityMatrix state() const;

 private:
  GibbsEnsemble(std::shared_ptr<const HermitianOperator> h,
                std::shared_ptr<const Spectrum> spectrum, double beta);
  void fill_weights();

  std::shared_ptr<const HermitianOperator> hamiltonian_;
  std::shared_ptr<const Spectrum> spectrum_;
  double beta_ = 0.0;
  RealVector populations_;
  double log_z_ = 0.0;
};

/// Rejects beta < 0 and non-finite beta (use ground_projector for T = 0).
GibbsEnsemble gibbs_state(const HermitianOperator& h, double beta);

/// Uniform mixture over the lowest eigenspace (degeneracy tolerance 1e-10 * max|H|).
DensityMatrix ground_projector(const HermitianOperator& h);

/// Tensor-factor layout of a register and the subsystem A that is kept.
class BipartitionSpec {
 public:
  BipartitionSpec(std::vector<int> site_dims, std::vector<int> keep_sites);

  /// L qubits, keep the contiguous block [first, first + n_keep) (periodic wrap).
  static BipartitionSpec qubit_block(int n_sites, int n_keep, int first = 0);

  const std::vector<int>& site_dims() const { return site_dims_; }
  /// Sorted, unique.
  const std::vector<int>& keep_sites() const { return keep_; }
  std::vector<int> traced_sites() const;

  int n_sites() const { return static_cast<int>(site_dims_.size()); }
  Index total_dim() const;
  Index kept_dim() const;
  Index traced_dim() const { return total_dim() / kept_dim(); }

  /// Full index of (kept index a, traced index b); both in row-major order of
  /// their site lists. Size kept_dim * traced_dim, laid out as a * traced + b.
  std::vector<Index> index_map() const;

 private:
  std::vector<int> site_dims_;
  std::vector<int> keep_;
};

/// Tr_B of an arbitrary square operator. Throws DimensionMismatch.
Matrix partial_trace(const Matrix& op, const BipartitionSpec& layout);
DensityMatrix partial_trace(const DensityMatrix& rho, const BipartitionSpec& layout);

/// Tr sqrt(sqrt(rho) sigma sqrt(rho)), with negative eigenvalues clipped to 0.
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// 1 - F evaluated in 113-bit (binary128) arithmetic. The inputs are
/// re-normalized to unit trace in extended precision first. Used by the
/// fidelity-limit oracles, where 1 - F is far below double epsilon times dim.
double infidelity_extended(const Matrix& rho, const Matrix& sigma);

/// 1 - F between Tr_B e^{-beta_a H}/Z and Tr_B e^{-beta_b H}/Z, with both
/// reduced states assembled in binary128 from the spectral decomposition of H
/// (eigenvalues `energies`, eigenvectors as columns of `vectors`).
double reduced_gibbs_infidelity_extended(const RealVector& energies, const Matrix& vectors, double beta_a,
                                         double beta_b, const BipartitionSpec& layout);

/// (1/2) sum |eig(rho - sigma)|.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Canonical purification sum_i sqrt(p_i) |i> (x) |i*> on dim^2, system factor first.
PureState purify(const DensityMatrix& rho);

/// Square root of a positive semidefinite Hermitian matrix. Negative
/// eigenvalues are set to zero; the total clipped magnitude is written to
/// *clipped when given.
Matrix psd_sqrt(const Matrix& hermitian, double* clipped = nullptr);

/// Bloch vector (Tr[rho sx], Tr[rho sy], Tr[rho sz]) of a qubit state.
Eigen::Vector3d bloch_vector(const DensityMatrix& rho);

/// Pauli matrices in the basis |0>, |1> with sigma_z|0> = |0>.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

}  // namespace qtherm
