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

// 1 - F in binary128. Kept in its own translation unit because the Eigen
// NumTraits specialization below must be seen before <Eigen/Dense>.

#include <boost/multiprecision/float128.hpp>
#include <Eigen/Core>

namespace Eigen {
template <>
struct NumTraits<boost::multiprecision::float128> : GenericNumTraits<boost::multiprecision::float128> {
  using Q = boost::multiprecision::float128;
  using Real = Q;
  using NonInteger = Q;
  using Literal = Q;
  using Nested = Q;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 8,
    MulCost = 16
  };
  static Q epsilon() { return std::numeric_limits<Q>::epsilon(); }
  static Q dummy_precision() { return Q(1e-28); }
  static Q highest() { return (std::numeric_limits<Q>::max)(); }
  static Q lowest() { return -(std::numeric_limits<Q>::max)(); }
  static Q infinity() { return std::numeric_limits<Q>::infinity(); }
  static Q quiet_NaN() { return std::numeric_limits<Q>::quiet_NaN(); }
  static int digits10() { return std::numeric_limits<Q>::digits10; }
  static int digits() { return std::numeric_limits<Q>::digits; }
};
}  // namespace Eigen

#include <Eigen/Dense>

#include <cmath>

#include "qtherm/errors.hpp"
#include "qtherm/qstate.hpp"

namespace qtherm {

namespace {

using Quad = boost::multiprecision::float128;
using QuadMatrix = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;

// Complex Hermitian A = X + iY maps to the real symmetric [[X, -Y], [Y, X]],
// whose spectrum is that of A with every eigenvalue doubled in multiplicity.
QuadMatrix to_quad(const Matrix& m, bool real) {
  const Index d = m.rows();
  if (real) {
    QuadMatrix out(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) out(i, j) = Quad(m(i, j).real());
    return out;
  }
  QuadMatrix out(2 * d, 2 * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      const Quad re(m(i, j).real());
      const Quad im(m(i, j).imag());
      out(i, j) = re;
      out(i + d, j + d) = re;
      out(i, j + d) = -im;
      out(i + d, j) = im;
    }
  return out;
}

void normalize(QuadMatrix& m, int multiplicity) {
  m = (m + m.transpose()) / Quad(2);
  const Quad tr = m.trace() / Quad(multiplicity);
  m /= tr;
}

Eigen::SelfAdjointEigenSolver<QuadMatrix> solve(const QuadMatrix& m) {
  Eigen::SelfAdjointEigenSolver<QuadMatrix> es(m);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("infidelity_extended: extended-precision eigen-solver did not converge");
  return es;
}

QuadMatrix psd_root(const QuadMatrix& m) {
  const auto es = solve(m);
  QuadMatrix w = es.eigenvalues();
  for (Index i = 0; i < w.rows(); ++i) {
    const Quad v = w(i, 0);
    w(i, 0) = v > 0 ? boost::multiprecision::sqrt(v) : Quad(0);
  }
  return es.eigenvectors() * w.col(0).asDiagonal() * es.eigenvectors().transpose();
}

// F = || sqrt(a) sqrt(b) ||_1. The singular values carry absolute error
// ~eps |a|, whereas eig(sqrt(a) b sqrt(a)) followed by a square root turns
// eps-sized eigenvalues into sqrt(eps)-sized errors in F.
Quad infidelity(QuadMatrix a, QuadMatrix b, int mult) {
  normalize(a, mult);
  normalize(b, mult);
  const Eigen::JacobiSVD<QuadMatrix> svd(psd_root(a) * psd_root(b));
  return Quad(1) - svd.singularValues().sum() / Quad(mult);
}

}  // namespace

double infidelity_extended(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != rho.cols() || sigma.rows() != sigma.cols() || rho.rows() != sigma.rows())
    throw DimensionMismatch("infidelity_extended: operands must be square with equal dimensions");
  const bool real = is_real(rho) && is_real(sigma);
  return static_cast<double>(infidelity(to_quad(rho, real), to_quad(sigma, real), real ? 1 : 2));
}

double reduced_gibbs_infidelity_extended(const RealVector& energies, const Matrix& vectors, double beta_a,
                                         double beta_b, const BipartitionSpec& layout) {
  const Index dim = energies.size();
  if (vectors.rows() != dim || vectors.cols() != dim || layout.total_dim() != dim)
    throw DimensionMismatch("reduced_gibbs_infidelity_extended: spectrum and layout dimensions differ");
  if (!std::isfinite(beta_a) || !std::isfinite(beta_b))
    throw InvalidArgument("reduced_gibbs_infidelity_extended: beta must be finite");
  const Index da = layout.kept_dim();
  const Index db = layout.traced_dim();
  const std::vector<Index> map = layout.index_map();

  const Quad e0 = Quad(energies.minCoeff());
  std::vector<Quad> wa(static_cast<std::size_t>(dim)), wb(static_cast<std::size_t>(dim));
  for (Index k = 0; k < dim; ++k) {
    const Quad e = Quad(energies(k)) - e0;
    wa[static_cast<std::size_t>(k)] = boost::multiprecision::exp(-Quad(beta_a) * e);
    wb[static_cast<std::size_t>(k)] = boost::multiprecision::exp(-Quad(beta_b) * e);
  }

  // rho_A = sum_k w_k M_k M_k^dag with M_k(a, b) = <a b|v_k>, real and imaginary parts kept apart.
  QuadMatrix xa = QuadMatrix::Zero(da, da), ya = xa, xb = xa, yb = xa;
  QuadMatrix re(da, db), im(da, db);
  bool complex = false;
  for (Index k = 0; k < dim; ++k) {
    const Quad wka = wa[static_cast<std::size_t>(k)], wkb = wb[static_cast<std::size_t>(k)];
    if (wka < Quad(1e-60) && wkb < Quad(1e-60)) continue;
    Quad norm = 0;
    for (Index a = 0; a < da; ++a)
      for (Index b = 0; b < db; ++b) {
        const Complex c = vectors(map[static_cast<std::size_t>(a * db + b)], k);
        re(a, b) = Quad(c.real());
        im(a, b) = Quad(c.imag());
        norm += re(a, b) * re(a, b) + im(a, b) * im(a, b);
        complex = complex || c.imag() != 0.0;
      }
    const QuadMatrix x = (re * re.transpose() + im * im.transpose()) / norm;
    xa += wka * x;
    xb += wkb * x;
    if (complex) {
      const QuadMatrix y = (im * re.transpose() - re * im.transpose()) / norm;
      ya += wka * y;
      yb += wkb * y;
    }
  }
  if (!complex) return static_cast<double>(infidelity(xa, xb, 1));
  auto embed = [da](const QuadMatrix& x, const QuadMatrix& y) {
    QuadMatrix out(2 * da, 2 * da);
    out << x, -y, y, x;
    return out;
  };
  return static_cast<double>(infidelity(embed(xa, ya), embed(xb, yb), 2));
}

}  // namespace qtherm
