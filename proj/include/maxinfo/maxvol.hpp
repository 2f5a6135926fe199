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

#include <vector>

#include "maxinfo/linalg.hpp"

namespace maxinfo {

/// Coefficients up to 1 + kDominanceSlack in magnitude count as dominant.
inline constexpr double kDominanceSlack = 1e-9;

/// How a user-facing tolerance maps to the threshold on coefficient-row norms.
enum class TolConvention {
  /// tau = sqrt(1 + tol^2): rows already spanned by the selection (norm 1)
  /// are pruned for any tol > 0.
  Sqrt1p,
  /// tau = tol.
  Literal,
};

double effective_tau(double tol, TolConvention convention);

struct MaxVolParams {
  double tau = 1.05;  ///< stop once every unselected coefficient-row norm is <= tau
  Index min_rows = 1;
  Index max_rows = 1;
  int max_sweeps = 100;  ///< swap limit for the square phase

  void validate(Index n) const;
};

/// Result of the square (dominant submatrix) search.
struct SquareMaxVol {
  std::vector<Index> pivots;  ///< pivots[j] is the row matched to column j of coeff
  Matrix coeff;               ///< n x s, coeff * basis(pivots, :) = basis
  int swaps = 0;
  bool converged = true;
};

/// Dominant s x s submatrix of an n x s basis of full column rank.
///
/// Starts from partial-pivoting elimination and swaps while some coefficient
/// exceeds 1 + kDominanceSlack in magnitude. Ties go to the lowest row, then
/// the lowest column. Throws RankDeficient when the numerical rank is below s.
SquareMaxVol maxvol_square(const MatrixRef& basis, int max_sweeps = 100);

/// One greedy append.
struct StepRecord {
  Index row = 0;
  double coeff_norm = 0.0;  ///< ||C_i||_2 of the row at the time it was appended
  double log_volume = 0.0;  ///< running log volume after the append

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

/// Growing pivot set with the coefficient matrix C solving C * basis(pivots) = basis.
///
/// C is kept for all n rows (pivot rows included) and updated by rank-one
/// corrections on each append. The running log-volume follows
/// log V_new = log V_old + 0.5 * log(1 + ||C_i||^2).
class SelectionState {
 public:
  /// State after the square phase. `basis` must have full column rank
  /// equal to the number of pivots.
  SelectionState(Matrix basis, const SquareMaxVol& square);

  /// State with no pivots over a zero-rank basis (n x 0); every append keeps
  /// the volume at zero.
  static SelectionState empty(Index rows);

  Index rows() const { return basis_.rows(); }
  Index size() const { return static_cast<Index>(pivots_.size()); }
  const Matrix& basis() const { return basis_; }

  /// Pivots in insertion order (square pivots first).
  const std::vector<Index>& pivots() const { return pivots_; }
  std::vector<Index> sorted_pivots() const;
  const std::vector<Index>& square_pivots() const { return square_pivots_; }
  double square_log_volume() const { return square_log_volume_; }

  bool is_selected(Index row) const { return selected_[static_cast<std::size_t>(row)]; }

  /// n x size() coefficient matrix over all rows.
  Matrix coefficients() const { return coeff_.leftCols(size()); }
  /// Rows of coefficients() that are not pivots, in ascending row order.
  Matrix unselected_coefficients() const;
  std::vector<Index> unselected_rows() const;

  double coeff_norm(Index row) const;
  double log_volume() const { return log_volume_; }
  const std::vector<StepRecord>& steps() const { return steps_; }

  /// Unselected row with the largest coefficient norm (lowest index on
  /// ties), or -1 when every row is selected.
  Index best_candidate() const;

  /// Adds `row` to the pivots. Throws InvalidPivot for a duplicate or
  /// out-of-range row.
  void append(Index row);

 private:
  SelectionState() = default;

  Matrix basis_;
  Matrix coeff_;
  Vector norms_sq_;
  std::vector<Index> pivots_;
  std::vector<Index> square_pivots_;
  std::vector<bool> selected_;
  std::vector<StepRecord> steps_;
  double log_volume_ = 0.0;
  double square_log_volume_ = 0.0;
};

/// Value-semantics wrapper around SelectionState::append.
SelectionState append_row(SelectionState state, Index row);

/// Rectangular MaxVol: square phase, then greedy appends of the row with
/// the largest coefficient norm until the norms drop to params.tau or
/// max_rows is reached, topping up to min_rows if the tolerance stops early.
///
/// A rank-deficient basis is first projected onto its numerical row space,
/// so the square phase picks as many rows as the numerical rank.
SelectionState rect_maxvol(const MatrixRef& basis, const MaxVolParams& params);

}  // namespace maxinfo
