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

#include "maxinfo/maxvol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maxinfo/error.hpp"

namespace maxinfo {

namespace {

std::vector<Index> initial_pivots(const MatrixRef& basis) {
  const Index n = basis.rows();
  const Index s = basis.cols();
  Matrix work = basis;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::vector<Index> pivots;
  pivots.reserve(static_cast<std::size_t>(s));
  for (Index j = 0; j < s; ++j) {
    Index best = -1;
    double best_abs = -1.0;
    for (Index i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      const double v = std::abs(work(i, j));
      if (v > best_abs) {
        best_abs = v;
        best = i;
      }
    }
    if (!(best_abs > 0.0)) fail(Errc::RankDeficient, "zero pivot in column " + std::to_string(j));
    used[static_cast<std::size_t>(best)] = true;
    pivots.push_back(best);
    const Eigen::RowVectorXd pivot_row = work.row(best);
    for (Index i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      const double factor = work(i, j) / pivot_row(j);
      work.row(i) -= factor * pivot_row;
    }
  }
  return pivots;
}

Matrix solve_coefficients(const MatrixRef& basis, const std::vector<Index>& pivots) {
  const Index s = basis.cols();
  Matrix square(s, s);
  for (Index j = 0; j < s; ++j) square.row(j) = basis.row(pivots[static_cast<std::size_t>(j)]);
  // C * square = basis  <=>  square^T * C^T = basis^T
  Eigen::PartialPivLU<Matrix> lu(square.transpose());
  Matrix coeff = lu.solve(basis.transpose()).transpose();
  for (Index j = 0; j < s; ++j) {
    coeff.row(pivots[static_cast<std::size_t>(j)]).setZero();
    coeff(pivots[static_cast<std::size_t>(j)], j) = 1.0;
  }
  return coeff;
}

}  // namespace

double effective_tau(double tol, TolConvention convention) {
  if (!std::isfinite(tol) || tol < 0.0) fail(Errc::InvalidConfig, "tolerance must be finite and >= 0");
  return convention == TolConvention::Sqrt1p ? std::sqrt(1.0 + tol * tol) : tol;
}

void MaxVolParams::validate(Index n) const {
  if (!std::isfinite(tau) || tau < 0.0) fail(Errc::InvalidConfig, "tau must be finite and >= 0");
  if (min_rows < 1 || min_rows > max_rows || max_rows > n) {
    fail(Errc::InvalidConfig, "need 1 <= min_rows <= max_rows <= n, got min_rows=" +
                                  std::to_string(min_rows) + " max_rows=" + std::to_string(max_rows) +
                                  " n=" + std::to_string(n));
  }
  if (max_sweeps < 0) fail(Errc::InvalidConfig, "max_sweeps must be >= 0");
}

SquareMaxVol maxvol_square(const MatrixRef& basis, int max_sweeps) {
  const Index n = basis.rows();
  const Index s = basis.cols();
  if (s < 1 || n < s) {
    fail(Errc::InvalidInput, "square maxvol needs n >= s >= 1, got " + std::to_string(n) + "x" +
                                 std::to_string(s));
  }
  require_finite(basis, "maxvol basis");
  const Eigen::JacobiSVD<Matrix> sv(basis);
  const Index rank = numerical_rank(sv.singularValues());
  if (rank < s) {
    fail(Errc::RankDeficient,
         "basis has numerical rank " + std::to_string(rank) + " < " + std::to_string(s));
  }

  SquareMaxVol out;
  out.pivots = initial_pivots(basis);
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (Index p : out.pivots) is_pivot[static_cast<std::size_t>(p)] = true;

  for (;;) {
    out.coeff = solve_coefficients(basis, out.pivots);
    Index best_i = -1;
    Index best_j = -1;
    double best = 1.0 + kDominanceSlack;
    for (Index i = 0; i < n; ++i) {
      if (is_pivot[static_cast<std::size_t>(i)]) continue;
      for (Index j = 0; j < s; ++j) {
        const double v = std::abs(out.coeff(i, j));
        if (v > best) {
          best = v;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_i < 0) break;
    if (out.swaps >= max_sweeps) {
      out.converged = false;
      break;
    }
    // Swapping pivot j for row i multiplies |det| by |C_ij| > 1.
    is_pivot[static_cast<std::size_t>(out.pivots[static_cast<std::size_t>(best_j)])] = false;
    is_pivot[static_cast<std::size_t>(best_i)] = true;
    out.pivots[static_cast<std::size_t>(best_j)] = best_i;
    ++out.swaps;
  }
  return out;
}

SelectionState::SelectionState(Matrix basis, const SquareMaxVol& square) : basis_(std::move(basis)) {
  const Index n = basis_.rows();
  const Index k = static_cast<Index>(square.pivots.size());
  if (k != basis_.cols() || square.coeff.rows() != n || square.coeff.cols() != k) {
    fail(Errc::InvalidInput, "square result does not match the basis shape");
  }
  coeff_ = Matrix::Zero(n, std::max<Index>(2 * k, 8));
  coeff_.leftCols(k) = square.coeff;
  norms_sq_ = square.coeff.rowwise().squaredNorm();
  selected_.assign(static_cast<std::size_t>(n), false);
  for (Index p : square.pivots) selected_[static_cast<std::size_t>(p)] = true;
  pivots_ = square.pivots;
  square_pivots_ = square.pivots;

  Matrix chosen(k, k);
  for (Index j = 0; j < k; ++j) chosen.row(j) = basis_.row(pivots_[static_cast<std::size_t>(j)]);
  log_volume_ = log_rect_vol(chosen);
  square_log_volume_ = log_volume_;
}

SelectionState SelectionState::empty(Index rows) {
  SelectionState state;
  state.basis_ = Matrix::Zero(rows, 0);
  state.coeff_ = Matrix::Zero(rows, 8);
  state.norms_sq_ = Vector::Zero(rows);
  state.selected_.assign(static_cast<std::size_t>(rows), false);
  state.log_volume_ = kLogZero;
  state.square_log_volume_ = kLogZero;
  return state;
}

std::vector<Index> SelectionState::sorted_pivots() const {
  std::vector<Index> out = pivots_;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index> SelectionState::unselected_rows() const {
  std::vector<Index> out;
  for (Index i = 0; i < rows(); ++i) {
    if (!is_selected(i)) out.push_back(i);
  }
  return out;
}

Matrix SelectionState::unselected_coefficients() const {
  const std::vector<Index> rest = unselected_rows();
  Matrix out(static_cast<Index>(rest.size()), size());
  for (std::size_t r = 0; r < rest.size(); ++r) {
    out.row(static_cast<Index>(r)) = coeff_.row(rest[r]).head(size());
  }
  return out;
}

double SelectionState::coeff_norm(Index row) const { return std::sqrt(norms_sq_(row)); }

Index SelectionState::best_candidate() const {
  Index best = -1;
  double best_value = -1.0;
  for (Index i = 0; i < rows(); ++i) {
    if (is_selected(i)) continue;
    if (norms_sq_(i) > best_value) {
      best_value = norms_sq_(i);
      best = i;
    }
  }
  return best;
}

void SelectionState::append(Index row) {
  if (row < 0 || row >= rows()) {
    fail(Errc::InvalidPivot, "row " + std::to_string(row) + " outside [0, " +
                                 std::to_string(rows()) + ")");
  }
  if (is_selected(row)) fail(Errc::InvalidPivot, "row " + std::to_string(row) + " already selected");

  const Index k = size();
  if (k == coeff_.cols()) coeff_.conservativeResize(Eigen::NoChange, 2 * k);

  const double gain = norms_sq_(row);
  const double denom = 1.0 + gain;
  const Eigen::RowVectorXd c = coeff_.row(row).head(k);
  const Vector h = coeff_.leftCols(k) * c.transpose();

  coeff_.leftCols(k).noalias() -= (h / denom) * c;
  coeff_.col(k) = h / denom;
  norms_sq_ = (norms_sq_.array() - h.array().square() / denom).max(0.0);

  selected_[static_cast<std::size_t>(row)] = true;
  pivots_.push_back(row);
  log_volume_ += 0.5 * std::log1p(gain);
  steps_.push_back({row, std::sqrt(gain), log_volume_});
}

SelectionState append_row(SelectionState state, Index row) {
  state.append(row);
  return state;
}

SelectionState rect_maxvol(const MatrixRef& basis, const MaxVolParams& params) {
  const Index n = basis.rows();
  if (n < 1 || basis.cols() < 1) fail(Errc::InvalidInput, "rect_maxvol needs a non-empty basis");
  require_finite(basis, "maxvol basis");
  params.validate(n);

  Eigen::JacobiSVD<Matrix> sv(basis, Eigen::ComputeThinV);
  const Index rank = numerical_rank(sv.singularValues());
  if (rank > params.max_rows) {
    fail(Errc::InvalidConfig, "max_rows=" + std::to_string(params.max_rows) +
                                  " is below the numerical rank " + std::to_string(rank) +
                                  " of the basis; reduce the SVD rank");
  }

  SelectionState state = [&] {
    if (rank == 0) return SelectionState::empty(n);
    // Projecting onto the numerical row space keeps every Gram determinant
    // of up to `rank` rows unchanged and makes the square phase well posed.
    Matrix work = rank == basis.cols() ? Matrix(basis) : Matrix(basis * sv.matrixV().leftCols(rank));
    SquareMaxVol square = maxvol_square(work, params.max_sweeps);
    return SelectionState(std::move(work), square);
  }();

  while (state.size() < params.max_rows && state.size() < n) {
    const Index best = state.best_candidate();
    if (state.coeff_norm(best) <= params.tau && state.size() >= params.min_rows) break;
    state.append(best);
  }
  return state;
}

}  // namespace maxinfo
