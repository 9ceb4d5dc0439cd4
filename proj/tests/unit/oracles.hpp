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

// Test-only reference implementations. Nothing here calls into the library's
// numerics; they are deliberately naive so they can serve as oracles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Matrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(n(g), n(g));
  return m;
}

inline Matrix random_hermitian(Eigen::Index d, std::mt19937_64& g) {
  const Matrix a = random_complex(d, d, g);
  return (a + a.adjoint()) / 2.0;
}

inline Matrix random_real_symmetric(Eigen::Index d, std::mt19937_64& g) {
  const Matrix a = random_complex(d, d, g).real().cast<Complex>();
  return (a + a.transpose()) / 2.0;
}

/// Full-rank mixed state G G^dagger / Tr.
inline Matrix random_density(Eigen::Index d, std::mt19937_64& g) {
  const Matrix a = random_complex(d, d, g);
  const Matrix r = a * a.adjoint();
  return r / r.trace().real();
}

inline Vector random_pure(Eigen::Index d, std::mt19937_64& g) {
  const Vector v = random_complex(d, 1, g).col(0);
  return v / v.norm();
}

/// Haar-like unitary from QR with the R diagonal phases removed.
inline Matrix random_unitary(Eigen::Index d, std::mt19937_64& g) {
  Eigen::HouseholderQR<Matrix> qr(random_complex(d, d, g));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < d; ++k) q.col(k) *= std::abs(r(k, k)) / r(k, k);
  return q;
}

/// exp(A) by scaling and squaring of a truncated Taylor series.
inline Matrix expm(const Matrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (norm / std::ldexp(1.0, s) > 0.25) ++s;
  const Matrix b = a / std::ldexp(1.0, s);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

inline Matrix gibbs(const Matrix& h, double beta) {
  // Shift by the diagonal minimum bound to keep exp() finite.
  const double shift = h.diagonal().real().minCoeff() - h.cwiseAbs().rowwise().sum().maxCoeff();
  const Matrix e = expm(-beta * (h - shift * Matrix::Identity(h.rows(), h.cols())));
  return e / e.trace().real();
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix sx() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}
inline Matrix sy() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex(0, -1);
  m(1, 0) = Complex(0, 1);
  return m;
}
inline Matrix sz() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

/// Single-site operator at `site` of an L-qubit chain, site 0 leftmost.
inline Matrix site_op(const Matrix& op, int site, int n_sites) {
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < n_sites; ++i) out = kron(out, i == site ? op : Matrix::Identity(2, 2));
  return out;
}

inline Matrix ising(int n, double h) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    m -= site_op(sx(), i, n) * site_op(sx(), (i + 1) % n, n);
    m -= h * site_op(sz(), i, n);
  }
  return m;
}

inline Matrix xxz(int n, double delta) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    m += site_op(sx(), i, n) * site_op(sx(), j, n);
    m += site_op(sy(), i, n) * site_op(sy(), j, n);
    m += delta * site_op(sz(), i, n) * site_op(sz(), j, n);
  }
  return m;
}

/// Partial trace of an L-qubit operator by explicit index contraction.
inline Matrix partial_trace(const Matrix& rho, int n_sites, const std::vector<int>& keep) {
  const int nk = static_cast<int>(keep.size());
  std::vector<int> traced;
  for (int s = 0; s < n_sites; ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);
  auto bit = [&](int value, int pos, int width) { return (value >> (width - 1 - pos)) & 1; };
  auto compose = [&](int a, int b) {
    int idx = 0;
    for (int s = 0; s < n_sites; ++s) {
      int v = 0;
      for (int k = 0; k < nk; ++k)
        if (keep[static_cast<std::size_t>(k)] == s) v = bit(a, k, nk);
      for (std::size_t k = 0; k < traced.size(); ++k)
        if (traced[k] == s) v = bit(b, static_cast<int>(k), static_cast<int>(traced.size()));
      idx = 2 * idx + v;
    }
    return idx;
  };
  const int dk = 1 << nk, dt = 1 << static_cast<int>(traced.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j)
      for (int b = 0; b < dt; ++b) out(i, j) += rho(compose(i, b), compose(j, b));
  return out;
}

/// Thermalizing qubit master equation, |0> excited, H = (omega/2) sigma_z,
/// decay gamma (n+1) on sigma_- = |1><0| and excitation gamma n on sigma_+.
inline Matrix lindblad_rhs(const Matrix& rho, double omega, double gamma, double n) {
  const Matrix h = 0.5 * omega * sz();
  Matrix lower = Matrix::Zero(2, 2);
  lower(1, 0) = 1.0;
  const Matrix raise = lower.adjoint();
  auto diss = [&](const Matrix& l) {
    return Matrix(l * rho * l.adjoint() - 0.5 * (l.adjoint() * l * rho + rho * l.adjoint() * l));
  };
  return Matrix(Complex(0, -1) * (h * rho - rho * h)) + gamma * (n + 1) * diss(lower) + gamma * n * diss(raise);
}

inline Matrix rk4_lindblad(Matrix rho, double omega, double gamma, double n, double t, double dt) {
  const int steps = static_cast<int>(std::ceil(t / dt));
  const double h = t / steps;
  for (int k = 0; k < steps; ++k) {
    const Matrix k1 = lindblad_rhs(rho, omega, gamma, n);
    const Matrix k2 = lindblad_rhs(rho + 0.5 * h * k1, omega, gamma, n);
    const Matrix k3 = lindblad_rhs(rho + 0.5 * h * k2, omega, gamma, n);
    const Matrix k4 = lindblad_rhs(rho + h * k3, omega, gamma, n);
    rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

/// Maximizer of a unimodal f on [a, b].
inline double golden_max(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Five-point central difference.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
