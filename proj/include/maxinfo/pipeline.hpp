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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "maxinfo/linalg.hpp"
#include "maxinfo/maxvol.hpp"
#include "maxinfo/metrics.hpp"

namespace maxinfo {

enum class Mode { Fast, Slow, Chunked };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);
std::string to_string(TolConvention convention);
TolConvention parse_tol_convention(const std::string& text);
std::string to_string(SvdMethod method);
SvdMethod parse_svd_method(const std::string& text);

struct MaxInfoConfig {
  Index rank = 8;       ///< SVD truncation R
  double tol = 0.3;     ///< user-facing tolerance, mapped through tol_convention
  Index min_out = 1;
  Index max_out = 64;
  Mode mode = Mode::Fast;
  Index pool = 128;     ///< slow mode: expected number of input rows
  Index chunks = 32;    ///< chunked mode: number of contiguous chunks
  TolConvention tol_convention = TolConvention::Sqrt1p;
  SvdMethod svd = SvdMethod::Auto;

  /// Checks the invariants that hold for any input, plus the mode-specific
  /// constraints against `rows` input frames.
  void validate(Index rows) const;

  friend bool operator==(const MaxInfoConfig&, const MaxInfoConfig&) = default;
};

/// What happened inside one SVD + MaxVol block (a chunk, or the whole input).
struct SegmentDiagnostics {
  Index begin = 0;  ///< first global row
  Index end = 0;    ///< one past the last global row
  Index rank = 0;   ///< SVD rank the selection ran in
  Index min_rows = 0;
  Index max_rows = 0;
  double tau = 0.0;
  std::vector<double> top_singular_values;
  std::vector<Index> square_pivots;  ///< global rows, square-phase order
  double square_log_volume = 0.0;
  std::vector<StepRecord> steps;     ///< greedy appends, global rows, insertion order
  double log_volume = 0.0;

  friend bool operator==(const SegmentDiagnostics&, const SegmentDiagnostics&) = default;
};

struct Timing {
  double embedding_load_ms = 0.0;
  double svd_ms = 0.0;
  double maxvol_ms = 0.0;

  friend bool operator==(const Timing&, const Timing&) = default;
};

struct FrameRecord {
  Index row_index = 0;
  long long source_frame_number = 0;
  double timestamp_seconds = 0.0;

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct SelectionReport {
  std::vector<Index> selected_indices;  ///< ascending
  Mode mode = Mode::Fast;
  MaxInfoConfig config;
  Index input_rows = 0;
  Index input_cols = 0;
  Index selected_before_downsample = 0;
  std::vector<SegmentDiagnostics> segments;
  Timing timing;
  std::optional<MetricsBlock> metrics;
  std::optional<std::vector<FrameRecord>> frames;  ///< manifest rows of the selection

  friend bool operator==(const SelectionReport&, const SelectionReport&) = default;
};

/// Contiguous [begin, end) chunks; the first n mod m chunks get one extra row.
std::vector<std::pair<Index, Index>> chunk_bounds(Index n, Index m);

/// Splits `total` into m parts the same way chunk_bounds splits rows.
std::vector<Index> split_budget(Index total, Index m);

/// Picks k entries of an ascending list at positions floor(j * (L - 1) / (k - 1)).
/// Throws InvalidCount for k = 0 or k > size.
std::vector<Index> uniform_downsample(const std::vector<Index>& indices, Index k);

/// SVD + rect MaxVol once on the whole input, output bounded by (min_out, max_out).
SelectionReport select_fast(const EmbeddingMatrix& q, const MaxInfoConfig& cfg);

/// MaxInfo over an oversampled pool of cfg.pool rows, then uniform
/// downsampling of the selection to max_out if it is larger.
SelectionReport select_slow(const EmbeddingMatrix& q, const MaxInfoConfig& cfg);

/// Independent SVD + MaxVol per contiguous chunk; every chunk contributes.
SelectionReport select_chunked(const EmbeddingMatrix& q, const MaxInfoConfig& cfg);

/// Dispatches on cfg.mode.
SelectionReport select(const EmbeddingMatrix& q, const MaxInfoConfig& cfg);

}  // namespace maxinfo
