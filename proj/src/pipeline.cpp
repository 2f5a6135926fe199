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

#include "maxinfo/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "maxinfo/baselines.hpp"
#include "maxinfo/error.hpp"

namespace maxinfo {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct BlockResult {
  std::vector<Index> pivots;  // global, ascending
  SegmentDiagnostics diag;
  double svd_ms = 0.0;
  double maxvol_ms = 0.0;
};

// One MaxInfo block over rows [offset, offset + block.rows()).
BlockResult run_block(const MatrixRef& block, Index offset, const MaxInfoConfig& cfg,
                      Index min_rows, Index max_rows, bool cap_rank_by_budget) {
  const Index n = block.rows();
  const Index k = std::min({cfg.rank, n, block.cols()});

  BlockResult out;
  auto start = Clock::now();
  const SvdReduction svd = truncated_svd(block, k, cfg.svd);
  out.svd_ms = elapsed_ms(start);

  Index s = std::min(k, numerical_rank(svd.singular_values));
  if (cap_rank_by_budget) s = std::min(s, max_rows);

  MaxVolParams params;
  params.tau = effective_tau(cfg.tol, cfg.tol_convention);
  params.min_rows = min_rows;
  params.max_rows = max_rows;

  start = Clock::now();
  const Matrix basis = s > 0 ? Matrix(svd.basis.leftCols(s)) : Matrix(Matrix::Zero(n, 1));
  const SelectionState state = rect_maxvol(basis, params);
  out.maxvol_ms = elapsed_ms(start);

  for (Index p : state.sorted_pivots()) out.pivots.push_back(p + offset);

  SegmentDiagnostics& d = out.diag;
  d.begin = offset;
  d.end = offset + n;
  d.rank = s;
  d.min_rows = min_rows;
  d.max_rows = max_rows;
  d.tau = params.tau;
  d.top_singular_values.assign(svd.singular_values.data(), svd.singular_values.data() + k);
  for (Index p : state.square_pivots()) d.square_pivots.push_back(p + offset);
  d.square_log_volume = state.square_log_volume();
  for (StepRecord step : state.steps()) {
    step.row += offset;
    d.steps.push_back(step);
  }
  d.log_volume = state.log_volume();
  return out;
}

SelectionReport start_report(const EmbeddingMatrix& q, const MaxInfoConfig& cfg) {
  SelectionReport report;
  report.mode = cfg.mode;
  report.config = cfg;
  report.input_rows = q.rows();
  report.input_cols = q.cols();
  return report;
}

void absorb(SelectionReport& report, BlockResult&& block) {
  report.selected_indices.insert(report.selected_indices.end(), block.pivots.begin(), block.pivots.end());
  report.timing.svd_ms += block.svd_ms;
  report.timing.maxvol_ms += block.maxvol_ms;
  report.segments.push_back(std::move(block.diag));
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Fast: return "fast";
    case Mode::Slow: return "slow";
    case Mode::Chunked: return "chunked";
  }
  return "fast";
}

Mode parse_mode(const std::string& text) {
  if (text == "fast") return Mode::Fast;
  if (text == "slow") return Mode::Slow;
  if (text == "chunked") return Mode::Chunked;
  fail(Errc::InvalidConfig, "unknown mode '" + text + "'");
}

std::string to_string(TolConvention convention) {
  return convention == TolConvention::Sqrt1p ? "sqrt1p" : "literal";
}

TolConvention parse_tol_convention(const std::string& text) {
  if (text == "sqrt1p") return TolConvention::Sqrt1p;
  if (text == "literal") return TolConvention::Literal;
  fail(Errc::InvalidConfig, "unknown tolerance convention '" + text + "'");
}

std::string to_string(SvdMethod method) {
  switch (method) {
    case SvdMethod::Auto: return "auto";
    case SvdMethod::Direct: return "direct";
    case SvdMethod::Gram: return "gram";
  }
  return "auto";
}

SvdMethod parse_svd_method(const std::string& text) {
  if (text == "auto") return SvdMethod::Auto;
  if (text == "direct") return SvdMethod::Direct;
  if (text == "gram") return SvdMethod::Gram;
  fail(Errc::InvalidConfig, "unknown svd method '" + text + "'");
}

void MaxInfoConfig::validate(Index rows) const {
  if (rank < 1) fail(Errc::InvalidConfig, "rank must be >= 1");
  if (!std::isfinite(tol) || tol < 0.0) fail(Errc::InvalidConfig, "tol must be finite and >= 0");
  if (min_out < 1 || min_out > max_out) {
    fail(Errc::InvalidConfig, "need 1 <= min_out <= max_out, got min_out=" + std::to_string(min_out) +
                                  " max_out=" + std::to_string(max_out));
  }
  if (max_out > rows) {
    fail(Errc::InvalidConfig, "max_out=" + std::to_string(max_out) + " exceeds the " +
                                  std::to_string(rows) + " input frames");
  }
  switch (mode) {
    case Mode::Fast:
      break;
    case Mode::Slow:
      if (pool < max_out) fail(Errc::InvalidConfig, "pool must be >= max_out");
      if (pool != rows) {
        fail(Errc::InvalidConfig, "slow mode expects a pool of " + std::to_string(pool) +
                                      " frames, got " + std::to_string(rows));
      }
      break;
    case Mode::Chunked:
      if (chunks < 1) fail(Errc::InvalidChunking, "chunks must be >= 1");
      if (rows < chunks) {
        fail(Errc::InvalidChunking, std::to_string(rows) + " frames cannot fill " +
                                        std::to_string(chunks) + " chunks");
      }
      if (chunks > max_out) {
        fail(Errc::InvalidConfig, "chunks=" + std::to_string(chunks) +
                                      " exceeds max_out; every chunk must be able to contribute");
      }
      break;
  }
}

std::vector<std::pair<Index, Index>> chunk_bounds(Index n, Index m) {
  if (m < 1 || n < m) {
    fail(Errc::InvalidChunking, "cannot split " + std::to_string(n) + " rows into " +
                                    std::to_string(m) + " chunks");
  }
  std::vector<std::pair<Index, Index>> out;
  Index begin = 0;
  for (Index c = 0; c < m; ++c) {
    const Index len = n / m + (c < n % m ? 1 : 0);
    out.emplace_back(begin, begin + len);
    begin += len;
  }
  return out;
}

std::vector<Index> split_budget(Index total, Index m) {
  std::vector<Index> out(static_cast<std::size_t>(m));
  for (Index c = 0; c < m; ++c) out[static_cast<std::size_t>(c)] = total / m + (c < total % m ? 1 : 0);
  return out;
}

std::vector<Index> uniform_downsample(const std::vector<Index>& indices, Index k) {
  if (k < 1) fail(Errc::InvalidCount, "downsample target must be >= 1");
  const auto len = static_cast<Index>(indices.size());
  if (k > len) {
    fail(Errc::InvalidCount, "cannot downsample " + std::to_string(len) + " indices to " + std::to_string(k));
  }
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(k));
  for (Index pos : uniform_sample(len, k)) out.push_back(indices[static_cast<std::size_t>(pos)]);
  return out;
}

SelectionReport select_fast(const EmbeddingMatrix& q, const MaxInfoConfig& cfg) {
  MaxInfoConfig fast = cfg;
  fast.mode = Mode::Fast;
  fast.validate(q.rows());
  SelectionReport report = start_report(q, fast);
  absorb(report, run_block(q.values(), 0, fast, fast.min_out, fast.max_out, true));
  report.selected_before_downsample = static_cast<Index>(report.selected_indices.size());
  return report;
}

SelectionReport select_slow(const EmbeddingMatrix& q, const MaxInfoConfig& cfg) {
  MaxInfoConfig slow = cfg;
  slow.mode = Mode::Slow;
  slow.validate(q.rows());
  SelectionReport report = start_report(q, slow);
  absorb(report, run_block(q.values(), 0, slow, slow.min_out, q.rows(), true));
  report.selected_before_downsample = static_cast<Index>(report.selected_indices.size());
  if (report.selected_before_downsample > slow.max_out) {
    report.selected_indices = uniform_downsample(report.selected_indices, slow.max_out);
  }
  return report;
}

SelectionReport select_chunked(const EmbeddingMatrix& q, const MaxInfoConfig& cfg) {
  MaxInfoConfig chunked = cfg;
  chunked.mode = Mode::Chunked;
  chunked.validate(q.rows());
  SelectionReport report = start_report(q, chunked);

  const auto bounds = chunk_bounds(q.rows(), chunked.chunks);
  const auto max_budget = split_budget(chunked.max_out, chunked.chunks);
  const auto min_budget = split_budget(chunked.min_out, chunked.chunks);
  for (std::size_t c = 0; c < bounds.size(); ++c) {
    const auto [begin, end] = bounds[c];
    const Index lo = std::max<Index>(1, min_budget[c]);
    absorb(report, run_block(q.values().middleRows(begin, end - begin), begin, chunked, lo,
                             max_budget[c], true));
  }
  report.selected_before_downsample = static_cast<Index>(report.selected_indices.size());
  return report;
}

SelectionReport select(const EmbeddingMatrix& q, const MaxInfoConfig& cfg) {
  switch (cfg.mode) {
    case Mode::Fast: return select_fast(q, cfg);
    case Mode::Slow: return select_slow(q, cfg);
    case Mode::Chunked: return select_chunked(q, cfg);
  }
  return select_fast(q, cfg);
}

}  // namespace maxinfo
