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

#include <random>

#include "oracles.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/pauli.hpp"

using namespace qtherm;

namespace {

Matrix single(char op) {
  switch (op) {
    case 'X':
      return oracle::sx();
    case 'Y':
      return oracle::sy();
    case 'Z':
      return oracle::sz();
  }
  return Matrix::Identity(2, 2);
}

}  // namespace

TEST_CASE("PauliSum: every single- and two-site string matches the Kronecker product") {
  const int n = 3;
  const std::string ops = "XYZ";
  for (char a : ops)
    for (int i = 0; i < n; ++i) {
      PauliSum s(n);
      s.add(0.7, {i}, std::string(1, a));
      CHECK(max_abs(s.to_matrix() - 0.7 * oracle::site_op(single(a), i, n)) < 1e-15);
      for (char b : ops)
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          PauliSum t(n);
          t.add(-1.3, {i, j}, std::string{a, b});
          const Matrix expected = -1.3 * oracle::site_op(single(a), i, n) * oracle::site_op(single(b), j, n);
          CHECK(max_abs(t.to_matrix() - expected) < 1e-15);
        }
    }
}

TEST_CASE("PauliSum: realness follows the number of Y factors") {
  PauliSum s(2);
  s.add(1.0, {0, 1}, "YY");
  CHECK(s.is_real());
  s.add(1.0, {0}, "Y");
  CHECK_FALSE(s.is_real());
  Eigen::MatrixXd out;
  CHECK_THROWS_AS(s.apply_to_rows(Eigen::MatrixXd::Zero(1, 4), out), InvalidArgument);
}

TEST_CASE("PauliSum: matrix-free action equals the dense product") {
  std::mt19937_64 g(83);
  std::normal_distribution<double> n;
  const int sites = 5;
  PauliSum s(sites);
  for (int i = 0; i < sites; ++i) {
    s.add(n(g), {i, (i + 1) % sites}, "XX");
    s.add(n(g), {i, (i + 2) % sites}, "YZ");
    s.add(n(g), {i}, "Y");
  }
  s.add_identity(0.3);
  const Matrix h = s.to_matrix();
  CHECK(max_abs(h - h.adjoint()) < 1e-14);

  const Vector v = oracle::random_pure(32, g);
  CHECK(max_abs(Matrix(s.apply(v) - h * v)) < 1e-13);

  const Matrix rows = oracle::random_complex(4, 32, g);
  Matrix out;
  s.apply_to_rows(rows, out);
  CHECK(max_abs(out - rows * h.transpose()) < 1e-12);
}

TEST_CASE("PauliSum: real overload of the row action") {
  std::mt19937_64 g(89);
  PauliSum s(4);
  s.add(0.4, {0, 1}, "XX");
  s.add(-0.9, {1, 2}, "YY");
  s.add(0.2, {3}, "Z");
  const Eigen::MatrixXd rows = oracle::random_complex(3, 16, g).real();
  Eigen::MatrixXd out;
  s.apply_to_rows(rows, out);
  const Eigen::MatrixXd expected = rows * s.to_matrix().real().transpose();
  CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("PauliSum: argument checks") {
  PauliSum s(3);
  CHECK_THROWS_AS(s.add(1.0, {3}, "X"), InvalidArgument);
  CHECK_THROWS_AS(s.add(1.0, {0, 1}, "X"), InvalidArgument);
  CHECK_THROWS_AS(s.add(1.0, {0}, "Q"), InvalidArgument);
  CHECK_THROWS_AS(s.apply(Vector::Zero(4)), DimensionMismatch);
}
