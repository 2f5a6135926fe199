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

#include "maxinfo/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "maxinfo/error.hpp"

namespace maxinfo {

namespace {

// Below this size the direct SVD is cheap enough that the Gram route buys nothing.
constexpr Index kDirectSizeLimit = 64;

// The Gram route resolves eigenvalues to about n * eps * ||Q||_F^2; a tail
// holding less than this fraction of the energy is refused and routed to the
// direct SVD.
constexpr double kGramTailFraction = 1e-4;

constexpr double kSignThreshold = 1e-10;

lapack_int to_lapack(Index v) { return static_cast<lapack_int>(v); }

void fix_signs(SvdReduction& out) {
  for (Index j = 0; j < out.right.cols(); ++j) {
    auto v = out.right.col(j);
    for (Index i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) > kSignThreshold) {
        if (v(i) < 0) {
          v = -v;
          out.basis.col(j) = -out.basis.col(j);
        }
        break;
      }
    }
  }
}

SvdReduction direct_svd(const MatrixRef& q, Index s) {
  const Eigen::BDCSVD<Matrix> svd(q, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) fail(Errc::NumericalFailure, "direct SVD did not converge");
  SvdReduction out;
  out.basis = svd.matrixU().leftCols(s);
  out.right = svd.matrixV().leftCols(s);
  out.singular_values = svd.singularValues();
  out.method = SvdMethod::Direct;
  return out;
}

struct GramEigen {
  Vector values;   // all eigenvalues, descending
  Matrix vectors;  // top-k eigenvectors, descending order
};

// Symmetric eigen-decomposition of the lower triangle of g: all eigenvalues,
// but eigenvectors only for the k largest. The reduction to tridiagonal form
// stays in Eigen; LAPACK only sees the tridiagonal problem.
GramEigen top_eigen(const Matrix& g, Index k) {
  const Index p = g.rows();
  const lapack_int lp = to_lapack(p);
  const Eigen::Tridiagonalization<Matrix> tri(g);
  Vector diag = tri.diagonal();
  Vector off = Vector::Zero(p);
  off.head(p - 1) = tri.subDiagonal();

  Vector all = diag;
  Vector all_off = off;
  lapack_int info = LAPACKE_dsterf(lp, all.data(), all_off.data());
  if (info != 0) fail(Errc::NumericalFailure, "dsterf failed with info=" + std::to_string(info));

  Vector w(p);
  Matrix z(p, k);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(std::max<Index>(k, 1)));
  lapack_int found = 0;
  lapack_logical tryrac = 1;
  info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'I', lp, diag.data(), off.data(), 0.0, 0.0,
                        to_lapack(p - k + 1), lp, &found, w.data(), z.data(), lp, to_lapack(k),
                        support.data(), &tryrac);
  if (info != 0 || found != k) {
    fail(Errc::NumericalFailure, "dstemr failed with info=" + std::to_string(info));
  }

  GramEigen out;
  out.values = all.reverse();
  out.vectors = tri.matrixQ() * z.rowwise().reverse();
  return out;
}

// Returns false (leaving `out` untouched) when the tail is below the
// resolution of the Gram route and `allow_refuse` is set.
bool gram_svd(const MatrixRef& q, Index s, bool allow_refuse, SvdReduction& out) {
  const Index n = q.rows();
  const Index d = q.cols();
  const bool wide = n <= d;
  const Index p = std::min(n, d);

  Matrix g = Matrix::Zero(p, p);
  if (wide) {
    g.selfadjointView<Eigen::Lower>().rankUpdate(q);
  } else {
    g.selfadjointView<Eigen::Lower>().rankUpdate(q.transpose());
  }
  const double energy = g.diagonal().sum();
  GramEigen eig = top_eigen(g, s);

  double tail = 0.0;
  for (Index i = s; i < p; ++i) tail += std::max(eig.values(i), 0.0);
  if (allow_refuse && s < p && tail < kGramTailFraction * energy) return false;

  // Rayleigh-Ritz: the top singular triplets are recomputed from the
  // projection of q itself, which restores accuracy lost by squaring.
  Matrix left;
  Matrix right;
  Vector top;
  if (wide) {
    Matrix projected = eig.vectors.transpose() * q;  // s x d
    Eigen::JacobiSVD<Matrix> small(projected, Eigen::ComputeThinU | Eigen::ComputeThinV);
    left = eig.vectors * small.matrixU();
    right = small.matrixV();
    top = small.singularValues();
  } else {
    Matrix projected = q * eig.vectors;  // n x s
    Eigen::JacobiSVD<Matrix> small(projected, Eigen::ComputeThinU | Eigen::ComputeThinV);
    left = small.matrixU();
    right = eig.vectors * small.matrixV();
    top = small.singularValues();
  }

  out.basis = std::move(left);
  out.right = std::move(right);
  out.singular_values.resize(p);
  out.singular_values.head(s) = top;
  double ceiling = top(s - 1);
  for (Index i = s; i < p; ++i) {
    ceiling = std::min(ceiling, std::sqrt(std::max(eig.values(i), 0.0)));
    out.singular_values(i) = ceiling;
  }
  out.method = SvdMethod::Gram;
  return true;
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    fail(Errc::InvalidInput, "embedding matrix must be at least 1x1, got " +
                                 std::to_string(values_.rows()) + "x" +
                                 std::to_string(values_.cols()));
  }
  require_finite(values_, "embedding matrix");
}

EmbeddingMatrix EmbeddingMatrix::slice(Index begin, Index end) const {
  return EmbeddingMatrix(values_.middleRows(begin, end - begin));
}

void require_finite(const MatrixRef& a, const char* what) {
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (!std::isfinite(a(i, j))) {
        fail(Errc::InvalidInput, std::string(what) + " has a non-finite value at row " +
                                     std::to_string(i) + ", column " + std::to_string(j));
      }
    }
  }
}

SvdReduction truncated_svd(const MatrixRef& q, Index s, SvdMethod method) {
  if (q.rows() < 1 || q.cols() < 1) fail(Errc::InvalidInput, "empty matrix");
  require_finite(q, "svd input");
  const Index p = std::min(q.rows(), q.cols());
  if (s < 1 || s > p) {
    fail(Errc::InvalidRank,
         "rank " + std::to_string(s) + " outside [1, " + std::to_string(p) + "]");
  }

  SvdReduction out;
  switch (method) {
    case SvdMethod::Direct:
      out = direct_svd(q, s);
      break;
    case SvdMethod::Gram:
      gram_svd(q, s, false, out);
      break;
    case SvdMethod::Auto:
      if (p <= kDirectSizeLimit || !gram_svd(q, s, true, out)) out = direct_svd(q, s);
      break;
  }
  fix_signs(out);
  return out;
}

Index numerical_rank(const Vector& singular_values, double tol) {
  if (singular_values.size() == 0 || !(singular_values(0) > 0.0)) return 0;
  const double cutoff = tol * singular_values(0);
  Index r = 0;
  while (r < singular_values.size() && singular_values(r) > cutoff) ++r;
  return r;
}

double log_rect_vol(const MatrixRef& a) {
  if (a.rows() < 1 || a.cols() < 1) fail(Errc::InvalidInput, "empty matrix");
  require_finite(a, "rect_vol input");
  // Volume of a p x q matrix equals the product of |R_ii| from a QR of its
  // tall orientation.
  Matrix tall = a.rows() >= a.cols() ? Matrix(a) : Matrix(a.transpose());
  Eigen::ColPivHouseholderQR<Matrix> qr(tall);
  if (qr.rank() < tall.cols()) return kLogZero;
  const Matrix& r = qr.matrixQR();
  double log_volume = 0.0;
  for (Index i = 0; i < tall.cols(); ++i) log_volume += std::log(std::abs(r(i, i)));
  return log_volume;
}

double rect_vol(const MatrixRef& a) {
  const double lv = log_rect_vol(a);
  return lv == kLogZero ? 0.0 : std::exp(lv);
}

}  // namespace maxinfo
