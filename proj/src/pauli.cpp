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

#include "qtherm/pauli.hpp"

#include <bit>
#include <sstream>

#include "qtherm/errors.hpp"

namespace qtherm {

int PauliTerm::y_count() const { return std::popcount(x_mask & z_mask); }

Complex PauliTerm::phase() const {
  switch (y_count() % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

PauliSum::PauliSum(int n_sites) : n_sites_(n_sites) {
  if (n_sites < 1 || n_sites > 30) throw InvalidArgument("PauliSum: need 1 <= n_sites <= 30");
}

void PauliSum::add(double coefficient, const std::vector<int>& sites, const std::string& ops) {
  if (sites.size() != ops.size()) throw InvalidArgument("PauliSum::add: one operator letter per site");
  PauliTerm t;
  t.coefficient = coefficient;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const int site = sites[k];
    if (site < 0 || site >= n_sites_) {
      std::ostringstream os;
      os << "PauliSum::add: site " << site << " outside [0, " << n_sites_ - 1 << "]";
      throw InvalidArgument(os.str());
    }
    const std::uint64_t bit = std::uint64_t{1} << (n_sites_ - 1 - site);
    // Repeated sites multiply; only distinct sites are needed by the builders.
    if ((t.x_mask | t.z_mask) & bit) throw InvalidArgument("PauliSum::add: repeated site in one term");
    switch (ops[k]) {
      case 'I':
        break;
      case 'X':
        t.x_mask |= bit;
        break;
      case 'Y':
        t.x_mask |= bit;
        t.z_mask |= bit;
        break;
      case 'Z':
        t.z_mask |= bit;
        break;
      default:
        throw InvalidArgument(std::string("PauliSum::add: unknown Pauli letter '") + ops[k] + "'");
    }
  }
  terms_.push_back(t);
}

void PauliSum::add_identity(double coefficient) { terms_.push_back({coefficient, 0, 0}); }

bool PauliSum::is_real() const {
  for (const auto& t : terms_)
    if (!t.is_real()) return false;
  return true;
}

namespace {

inline double z_sign(std::uint64_t s, std::uint64_t z_mask) { return (std::popcount(s & z_mask) & 1) ? -1.0 : 1.0; }

}  // namespace

Matrix PauliSum::to_matrix() const {
  const Index d = dim();
  Matrix m = Matrix::Zero(d, d);
  for (const auto& t : terms_) {
    const Complex c = t.coefficient * t.phase();
    for (Index s = 0; s < d; ++s) {
      const auto su = static_cast<std::uint64_t>(s);
      m(static_cast<Index>(su ^ t.x_mask), s) += c * z_sign(su, t.z_mask);
    }
  }
  return m;
}

void PauliSum::apply_to_rows(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const {
  if (!is_real()) throw InvalidArgument("PauliSum::apply_to_rows: real overload needs a real Hamiltonian");
  if (in.cols() != dim()) throw DimensionMismatch("PauliSum::apply_to_rows: column count must equal 2^L");
  out.setZero(in.rows(), in.cols());
  for (const auto& t : terms_) {
    const double c = t.coefficient * t.phase().real();
    for (Index s = 0; s < dim(); ++s) {
      const auto su = static_cast<std::uint64_t>(s);
      out.col(static_cast<Index>(su ^ t.x_mask)) += (c * z_sign(su, t.z_mask)) * in.col(s);
    }
  }
}

void PauliSum::apply_to_rows(const Matrix& in, Matrix& out) const {
  if (in.cols() != dim()) throw DimensionMismatch("PauliSum::apply_to_rows: column count must equal 2^L");
  out.setZero(in.rows(), in.cols());
  for (const auto& t : terms_) {
    const Complex c = t.coefficient * t.phase();
    for (Index s = 0; s < dim(); ++s) {
      const auto su = static_cast<std::uint64_t>(s);
      out.col(static_cast<Index>(su ^ t.x_mask)) += (c * z_sign(su, t.z_mask)) * in.col(s);
    }
  }
}

Vector PauliSum::apply(const Vector& v) const {
  if (v.size() != dim()) throw DimensionMismatch("PauliSum::apply: vector length must equal 2^L");
  Matrix out;
  apply_to_rows(Matrix(v.transpose()), out);
  return out.row(0).transpose();
}

}  // namespace qtherm
