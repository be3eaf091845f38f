// Copyright 2026 The tzsl Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tzsl/gradcheck.hpp"
#include "tzsl/matrix.hpp"
#include "tzsl/rng.hpp"

using namespace tzsl;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  REQUIRE(a.same_shape(b));
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  }
  return m;
}

}  // namespace

TEST_CASE("matmul identity and hand arithmetic") {
  Rng rng(7);
  const Matrix x = rng.gaussian_matrix(3, 5);
  CHECK(max_abs_diff(matmul(Matrix::identity(3), x), x) == 0.0);

  const Matrix a(2, 2, {1, 2, 3, 4});
  const Matrix b(2, 1, {1, 1});
  const Matrix c = matmul(a, b);
  CHECK(c(0, 0) == doctest::Approx(3.0));
  CHECK(c(1, 0) == doctest::Approx(7.0));
}

TEST_CASE("matmul matches the serial triple-loop reference") {
  Rng rng(11);
  // Small product plus one big enough to take the parallel path.
  for (const auto [n, k, m] : {std::tuple{5, 4, 3}, std::tuple{70, 90, 50}}) {
    const Matrix a = rng.gaussian_matrix(n, k);
    const Matrix b = rng.gaussian_matrix(k, m);
    CHECK(max_abs_diff(matmul(a, b), serial::matmul(a, b)) < 1e-12);
  }
}

TEST_CASE("matmul shape error names both shapes") {
  const Matrix a(2, 3);
  const Matrix b(4, 2);
  CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("2x3"), shape_error);
  try {
    matmul(a, b);
  } catch (const shape_error& e) {
    CHECK(std::string(e.what()).find("4x2") != std::string::npos);
  }
}

TEST_CASE("matmul associativity on random triples") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = rng.gaussian_matrix(2 + rng.below(6), 2 + rng.below(6));
    const Matrix b = rng.gaussian_matrix(a.cols(), 2 + rng.below(6));
    const Matrix c = rng.gaussian_matrix(b.cols(), 2 + rng.below(6));
    const Matrix left = matmul(matmul(a, b), c);
    const Matrix right = matmul(a, matmul(b, c));
    const double rel = max_abs_diff(left, right) / std::max(1.0, max_abs(right));
    CHECK(rel < 1e-9);
  }
}

TEST_CASE("hadamard") {
  Rng rng(17);
  const Matrix a = rng.gaussian_matrix(3, 4);
  CHECK(max_abs_diff(hadamard(a, Matrix::filled(3, 4, 1.0)), a) == 0.0);
  CHECK(max_abs(hadamard(a, Matrix(3, 4))) == 0.0);

  const Matrix h = hadamard(Matrix(1, 2, {2, 3}), Matrix(1, 2, {4, 5}));
  CHECK(h(0, 0) == doctest::Approx(8.0));
  CHECK(h(0, 1) == doctest::Approx(15.0));

  CHECK_THROWS_AS(hadamard(Matrix(2, 2), Matrix(2, 3)), shape_error);
}

TEST_CASE("relu") {
  const Matrix r = relu(Matrix(1, 2, {-1, 2}));
  CHECK(r(0, 0) == 0.0);
  CHECK(r(0, 1) == 2.0);

  Rng rng(19);
  Matrix pos = rng.uniform_matrix(4, 4, 0.0, 5.0);
  CHECK(max_abs_diff(relu(pos), pos) == 0.0);

  const Matrix x = rng.gaussian_matrix(5, 5);
  CHECK(max_abs_diff(relu(relu(x)), relu(x)) == 0.0);
  CHECK(max_abs_diff(relu(x), serial::relu(x)) == 0.0);
}

TEST_CASE("row_l2_normalize") {
  const Matrix n = row_l2_normalize(Matrix(1, 2, {3, 4}));
  CHECK(n(0, 0) == doctest::Approx(0.6));
  CHECK(n(0, 1) == doctest::Approx(0.8));

  const Matrix unit(1, 2, {1, 0});
  CHECK(max_abs_diff(row_l2_normalize(unit), unit) == 0.0);

  const Matrix zero(1, 2, {0, 0});
  CHECK(max_abs_diff(row_l2_normalize(zero), zero) == 0.0);
}

TEST_CASE("row_l2_normalize produces unit rows and is idempotent") {
  Rng rng(23);
  const Matrix x = rng.gaussian_matrix(40, 7);
  const Matrix n = row_l2_normalize(x);
  for (int r = 0; r < n.rows(); ++r) {
    double sq = 0.0;
    for (int c = 0; c < n.cols(); ++c) sq += n(r, c) * n(r, c);
    CHECK(std::fabs(std::sqrt(sq) - 1.0) < 1e-12);
  }
  CHECK(max_abs_diff(row_l2_normalize(n), n) < 1e-12);
  CHECK(max_abs_diff(n, serial::row_l2_normalize(x)) < 1e-15);
}

TEST_CASE("finite differences recover simple analytic derivatives") {
  auto sum_squares = [](const Matrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) s += m.data()[i] * m.data()[i];
    return s;
  };
  const Matrix g = finite_difference_gradient(sum_squares, Matrix(1, 1, {3.0}), 1e-5);
  CHECK(std::fabs(g(0, 0) - 6.0) < 1e-6);

  const Matrix gc = finite_difference_gradient([](const Matrix&) { return 4.2; },
                                               Matrix(2, 3), 1e-5);
  CHECK(max_abs(gc) < 1e-8);

  auto sum_relu = [](const Matrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) s += std::max(0.0, m.data()[i]);
    return s;
  };
  const Matrix gr = finite_difference_gradient(sum_relu, Matrix(1, 2, {2.0, -2.0}), 1e-5);
  CHECK(std::fabs(gr(0, 0) - 1.0) < 1e-6);
  CHECK(std::fabs(gr(0, 1) - 0.0) < 1e-6);
}

TEST_CASE("finite differences reject bad inputs") {
  auto nan_fn = [](const Matrix&) { return std::nan(""); };
  CHECK_THROWS_AS(finite_difference_gradient(nan_fn, Matrix(1, 1), 1e-5), numeric_error);
  auto ok_fn = [](const Matrix&) { return 0.0; };
  CHECK_THROWS_AS(finite_difference_gradient(ok_fn, Matrix(1, 1), 0.0), validation_error);
}

TEST_CASE("rng streams are reproducible") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c(42), d(43);
  bool differs = false;
  for (int i = 0; i < 10; ++i) differs = differs || (c.next_u64() != d.next_u64());
  CHECK(differs);
}

TEST_CASE("rng gaussian has the documented moments") {
  Rng rng(31);
  const int n = 20000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sq += g * g;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.03);
  CHECK(std::fabs(std::sqrt(var) - 1.0) < 0.03);
}

TEST_CASE("check_finite flags NaN") {
  Matrix m(1, 2, {1.0, std::nan("")});
  CHECK_THROWS_AS(check_finite(m, "test"), numeric_error);
}
