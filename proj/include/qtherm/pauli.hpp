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
 * Hamiltonians stored as weighted Pauli strings, applied without forming the
 * dense matrix. Site i of an L-site register is bit (L - 1 - i) of the
 * computational index.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "qtherm/qstate.hpp"

namespace qtherm {

/// coefficient * P, P = i^{n_y} X^{x_mask} Z^{z_mask} (Y = iXZ on every site
/// where both masks are set). An empty mask pair is the identity.
struct PauliTerm {
  double coefficient = 0.0;
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;

  int y_count() const;
  /// i^{n_y}, always one of 1, i, -1, -i.
  Complex phase() const;
  /// True when the matrix of P is real (even number of Y factors).
  bool is_real() const { return y_count() % 2 == 0; }
};

class PauliSum {
 public:
  explicit PauliSum(int n_sites);

  int n_sites() const { return n_sites_; }
  Index dim() const { return Index{1} << n_sites_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }

  /// Adds coefficient * (product of the given single-site operators).
  /// `ops` is a string over {I, X, Y, Z}, one letter per listed site.
  void add(double coefficient, const std::vector<int>& sites, const std::string& ops);
  void add_identity(double coefficient);

  /// All terms have real matrices.
  bool is_real() const;

  Matrix to_matrix() const;
  HermitianOperator to_operator() const { return HermitianOperator(to_matrix()); }

  /// Treats every row of `in` as a state on this register (column index =
  /// computational index) and writes out.row(r) = H in.row(r). `in` must have
  /// dim() columns. Works in O(terms * in.size()).
  void apply_to_rows(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const;
  void apply_to_rows(const Matrix& in, Matrix& out) const;

  /// out = H v.
  Vector apply(const Vector& v) const;

 private:
  int n_sites_;
  std::vector<PauliTerm> terms_;
};

}  // namespace qtherm
