// Copyright 2026 The MaxInfo Authors.
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

#include <cmath>

#include "maxinfo/error.hpp"
#include "maxinfo/linalg.hpp"
#include "oracles.hpp"

using namespace maxinfo;

namespace {

double reconstruction_error(const Matrix& q, const SvdReduction& svd) {
  const Index s = svd.rank();
  const Matrix approx =
      svd.basis * svd.singular_values.head(s).asDiagonal() * svd.right.transpose();
  return (q - approx).norm();
}

double tail_norm(const Vector& sigma, Index s) {
  return std::sqrt(sigma.tail(sigma.size() - s).squaredNorm());
}

void check_contract(const Matrix& q, const SvdReduction& svd, Index s) {
  REQUIRE(svd.rank() == s);
  REQUIRE(svd.singular_values.size() == std::min(q.rows(), q.cols()));
  const Matrix gram = svd.basis.transpose() * svd.basis;
  CHECK((gram - Matrix::Identity(s, s)).cwiseAbs().maxCoeff() <= 1e-8);
  for (Index i = 1; i < svd.singular_values.size(); ++i) {
    CHECK(svd.singular_values(i) <= svd.singular_values(i - 1));
  }
  CHECK(svd.singular_values.minCoeff() >= 0.0);
  const double energy = q.squaredNorm();
  CHECK(std::abs(svd.singular_values.squaredNorm() - energy) <= 1e-6 * energy);
}

}  // namespace

TEST_CASE("truncated_svd: rank-one outer product") {
  Matrix q(2, 2);
  q << 1, 2, 2, 4;
  for (SvdMethod method : {SvdMethod::Direct, SvdMethod::Gram, SvdMethod::Auto}) {
    const SvdReduction svd = truncated_svd(q, 1, method);
    CHECK(svd.singular_values(0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(std::abs(svd.singular_values(1)) <= 1e-7);
    CHECK(reconstruction_error(q, svd) <= 1e-12);
  }
}

TEST_CASE("truncated_svd: identity keeps all unit singular values") {
  const Matrix q = Matrix::Identity(3, 3);
  const SvdReduction svd = truncated_svd(q, 3);
  CHECK((svd.singular_values - Vector::Ones(3)).cwiseAbs().maxCoeff() <= 1e-14);
  check_contract(q, svd, 3);
}

TEST_CASE("truncated_svd: 16x8 seed 42 tail matches eigen-decomposition oracle") {
  const Matrix q = oracle::random_matrix(16, 8, 42);
  const Vector reference = oracle::singular_values_via_eigen(q);
  const double expected_tail = tail_norm(reference, 4);
  for (SvdMethod method : {SvdMethod::Direct, SvdMethod::Gram}) {
    const SvdReduction svd = truncated_svd(q, 4, method);
    check_contract(q, svd, 4);
    CHECK(std::abs(reconstruction_error(q, svd) - expected_tail) <= 1e-9 * expected_tail);
    CHECK((svd.singular_values - reference).cwiseAbs().maxCoeff() <= 1e-9 * reference(0));
  }
}

TEST_CASE("truncated_svd: contract on random shapes, both routes") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    std::mt19937_64 rng(seed);
    const Index n = 1 + static_cast<Index>(rng() % 64);
    const Index d = 1 + static_cast<Index>(rng() % 64);
    const Index s = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(std::min(n, d)));
    const Matrix q = oracle::random_matrix(n, d, seed + 1000);
    for (SvdMethod method : {SvdMethod::Direct, SvdMethod::Gram}) {
      CAPTURE(seed);
      const SvdReduction svd = truncated_svd(q, s, method);
      check_contract(q, svd, s);
      const double tail = tail_norm(svd.singular_values, s);
      const double err = reconstruction_error(q, svd);
      CHECK(std::abs(err - tail) <= 1e-6 * std::max(tail, 1e-300) + 1e-12 * q.norm());
    }
  }
}

TEST_CASE("truncated_svd: sign convention and determinism") {
  const Matrix q = oracle::random_matrix(20, 12, 7);
  const SvdReduction a = truncated_svd(q, 5);
  const SvdReduction b = truncated_svd(q, 5);
  CHECK(a.basis == b.basis);
  CHECK(a.singular_values == b.singular_values);
  for (Index j = 0; j < a.right.cols(); ++j) {
    Index first = 0;
    while (std::abs(a.right(first, j)) <= 1e-10) ++first;
    CHECK(a.right(first, j) > 0.0);
  }
  // Flipping the sign of the input flips U, never V.
  const SvdReduction flipped = truncated_svd(-q, 5);
  CHECK((flipped.right - a.right).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((flipped.basis + a.basis).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("truncated_svd: gram route on a large wide and a large tall input") {
  for (auto [n, d] : {std::pair<Index, Index>{200, 300}, {300, 120}}) {
    const Matrix q = oracle::random_matrix(n, d, 99);
    const SvdReduction gram = truncated_svd(q, 8, SvdMethod::Gram);
    const SvdReduction direct = truncated_svd(q, 8, SvdMethod::Direct);
    check_contract(q, gram, 8);
    CHECK(gram.method == SvdMethod::Gram);
    CHECK((gram.singular_values.head(8) - direct.singular_values.head(8)).cwiseAbs().maxCoeff() <=
          1e-10 * direct.singular_values(0));
    CHECK((gram.basis - direct.basis).cwiseAbs().maxCoeff() <= 1e-8);
    const SvdReduction automatic = truncated_svd(q, 8);
    CHECK(automatic.method == SvdMethod::Gram);
  }
}

TEST_CASE("truncated_svd: auto falls back to the direct route for a tiny tail") {
  // Rank one plus noise far below sqrt(eps): the Gram route cannot resolve the tail.
  Matrix q = oracle::random_matrix(100, 1, 3) * oracle::random_matrix(1, 90, 4);
  q += 1e-13 * oracle::random_matrix(100, 90, 5);
  const SvdReduction svd = truncated_svd(q, 1);
  CHECK(svd.method == SvdMethod::Direct);
  CHECK(numerical_rank(svd.singular_values) == 1);
  const double tail = tail_norm(svd.singular_values, 1);
  CHECK(std::abs(reconstruction_error(q, svd) - tail) <= 1e-6 * tail + 1e-12 * q.norm());
}

TEST_CASE("truncated_svd: errors") {
  Matrix q = Matrix::Ones(3, 2);
  CHECK_THROWS_AS(truncated_svd(q, 0), Error);
  try {
    truncated_svd(q, 3);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidRank);
  }
  q(1, 1) = std::nan("");
  try {
    truncated_svd(q, 1);
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidInput);
  }
}

TEST_CASE("numerical_rank") {
  Vector sigma(4);
  sigma << 2.0, 1.0, 1e-11, 0.0;
  CHECK(numerical_rank(sigma) == 2);
  CHECK(numerical_rank(Vector::Zero(3)) == 0);
}

TEST_CASE("rect_vol: worked values") {
  CHECK(rect_vol(Matrix::Identity(2, 2)) == doctest::Approx(1.0).epsilon(1e-14));
  Matrix diag(2, 2);
  diag << 3, 0, 0, 4;
  CHECK(rect_vol(diag) == doctest::Approx(12.0).epsilon(1e-14));
  Matrix tall(3, 2);
  tall << 1, 0, 0, 1, 1, 1;
  CHECK(rect_vol(tall) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(rect_vol(Matrix(tall.transpose())) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("log_rect_vol: worked values and singular sentinel") {
  CHECK(std::abs(log_rect_vol(Matrix::Identity(2, 2))) <= 1e-15);
  Matrix diag(2, 2);
  diag << 3, 0, 0, 4;
  CHECK(log_rect_vol(diag) == doctest::Approx(std::log(12.0)).epsilon(1e-12));
  const Matrix ones = Matrix::Ones(2, 2);
  CHECK(log_rect_vol(ones) == kLogZero);
  CHECK(rect_vol(ones) == 0.0);
  CHECK(log_rect_vol(Matrix::Zero(3, 4)) == kLogZero);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = INFINITY;
  CHECK_THROWS_AS(log_rect_vol(bad), Error);
}

TEST_CASE("rect_vol: agrees with the Gram-determinant oracle") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    const Index p = 1 + static_cast<Index>(rng() % 10);
    const Index q = 1 + static_cast<Index>(rng() % 10);
    const Matrix a = oracle::random_matrix(p, q, seed);
    const double lv = log_rect_vol(a);
    CHECK(lv == doctest::Approx(oracle::gram_log_volume(a)).epsilon(1e-9));
    CHECK(std::abs(std::exp(lv) - rect_vol(a)) <= 1e-10 * rect_vol(a));
  }
}

TEST_CASE("rect_vol: invariances and Hadamard bound") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    const Index p = 1 + static_cast<Index>(rng() % 8);
    const Index q = p + static_cast<Index>(rng() % 6);
    const Matrix a = oracle::random_matrix(p, q, seed + 77);
    const double v = rect_vol(a);

    // Row permutation.
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(p);
    perm.setIdentity();
    std::shuffle(perm.indices().data(), perm.indices().data() + p, rng);
    CHECK(std::abs(rect_vol(perm * a) - v) <= 1e-8 * v);

    // Orthogonal right factor.
    const Eigen::HouseholderQR<Matrix> qr(oracle::random_matrix(q, q, seed + 5));
    const Matrix o = qr.householderQ();
    CHECK(std::abs(rect_vol(a * o) - v) <= 1e-8 * v);

    // Hadamard: volume of a wide matrix is at most the product of its row norms.
    CHECK(v <= a.rowwise().norm().prod() * (1.0 + 1e-12));

    // Tall orientation: rows permuted still invariant.
    const Matrix tall = a.transpose();
    CHECK(std::abs(rect_vol(tall) - v) <= 1e-8 * v);
  }
}

TEST_CASE("log volume is the simplex entropy up to ln k!") {
  // The uniform density on the simplex spanned by the rows has entropy
  // ln(vol) = log_rect_vol - ln(k!), a constant offset from the MaxVol objective.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Index k = 1 + static_cast<Index>(seed % 5);
    Matrix s = oracle::random_matrix(k, 7, seed + 11);
    s.rowwise().normalize();
    double log_factorial = 0.0;
    for (Index i = 2; i <= k; ++i) log_factorial += std::log(static_cast<double>(i));
    const double entropy = std::log(oracle::simplex_volume_cayley_menger(s));
    CHECK(entropy == doctest::Approx(log_rect_vol(s) - log_factorial).epsilon(1e-8));
  }
}

TEST_CASE("EmbeddingMatrix validates shape and values") {
  CHECK_THROWS_AS(EmbeddingMatrix{Matrix(0, 3)}, Error);
  Matrix m = Matrix::Ones(2, 2);
  m(1, 0) = std::nan("");
  CHECK_THROWS_AS(EmbeddingMatrix{m}, Error);
  const EmbeddingMatrix ok(Matrix::Ones(4, 3));
  CHECK(ok.slice(1, 3).rows() == 2);
}
