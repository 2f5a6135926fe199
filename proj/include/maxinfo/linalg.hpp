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

#pragma once

#include <Eigen/Dense>

#include <limits>

namespace maxinfo {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MatrixRef = Eigen::Ref<const Matrix>;

/// Singular values with sigma_i / sigma_1 at or below this count as zero.
inline constexpr double kRankTolerance = 1e-10;

/// Sentinel for the log-volume of a rank-deficient matrix.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// Per-frame embeddings, one row per sampled frame.
///
/// Always at least 1x1 and finite; values are held in double precision
/// regardless of the on-disk storage type.
class EmbeddingMatrix {
 public:
  explicit EmbeddingMatrix(Matrix values);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  const Matrix& values() const { return values_; }

  /// Copy of rows [begin, end).
  EmbeddingMatrix slice(Index begin, Index end) const;

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  Matrix values_;
};

enum class SvdMethod {
  /// Direct for small inputs, Gram for large ones with a direct fallback
  /// whenever the discarded tail is too small to resolve through the Gram matrix.
  Auto,
  /// Divide-and-conquer LAPACK SVD of the matrix itself.
  Direct,
  /// Eigen-decomposition of the smaller Gram matrix, top singular triplets
  /// refined by a Rayleigh-Ritz step on the original matrix.
  Gram,
};

/// Rank-s truncation of an n x d matrix.
struct SvdReduction {
  Matrix basis;            ///< n x s, orthonormal columns (left singular vectors)
  Matrix right;            ///< d x s, right singular vectors
  Vector singular_values;  ///< all min(n, d) values, non-increasing
  SvdMethod method = SvdMethod::Direct;  ///< route actually taken

  Index rank() const { return basis.cols(); }
};

/// Top-s left/right singular vectors and the full singular spectrum.
///
/// Each right singular vector is signed so that its first entry with
/// magnitude above 1e-10 is positive; the left vector follows.
SvdReduction truncated_svd(const MatrixRef& q, Index s, SvdMethod method = SvdMethod::Auto);

/// Number of singular values with sigma_i > tol * sigma_1 (0 for the zero matrix).
Index numerical_rank(const Vector& singular_values, double tol = kRankTolerance);

/// log sqrt(det(G)) with G the Gram matrix over the smaller dimension;
/// kLogZero when the matrix is numerically rank deficient.
double log_rect_vol(const MatrixRef& a);

double rect_vol(const MatrixRef& a);

/// Throws InvalidInput when any entry is NaN or infinite.
void require_finite(const MatrixRef& a, const char* what);

}  // namespace maxinfo
