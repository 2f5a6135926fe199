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

#include "maxinfo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "maxinfo/error.hpp"

namespace maxinfo {

namespace {

double cosine(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  const double denom = a.norm() * b.norm();
  if (!(denom > 0.0)) fail(Errc::InvalidInput, "cosine of a zero vector");
  return std::clamp(a.dot(b) / denom, -1.0, 1.0);
}

void check_indices(const EmbeddingMatrix& q, const std::vector<Index>& indices) {
  for (Index i : indices) {
    if (i < 0 || i >= q.rows()) {
      fail(Errc::InvalidInput, "index " + std::to_string(i) + " outside [0, " +
                                   std::to_string(q.rows()) + ")");
    }
  }
}

}  // namespace

std::vector<double> neighbor_cosine(const EmbeddingMatrix& q, const std::vector<Index>& indices) {
  check_indices(q, indices);
  std::vector<double> out;
  for (std::size_t j = 1; j < indices.size(); ++j) {
    out.push_back(cosine(q.values().row(indices[j - 1]), q.values().row(indices[j])));
  }
  return out;
}

double clip_score(const EmbeddingMatrix& q, const std::vector<Index>& indices, const Vector& query) {
  if (query.size() != q.cols()) {
    fail(Errc::InvalidInput, "query has dimension " + std::to_string(query.size()) +
                                 ", embeddings have " + std::to_string(q.cols()));
  }
  require_finite(query, "query");
  if (!(query.norm() > 0.0)) fail(Errc::InvalidInput, "query embedding is zero");
  if (indices.empty()) fail(Errc::InvalidInput, "clip score of an empty selection");
  check_indices(q, indices);
  const Eigen::RowVectorXd target = query.transpose();
  double total = 0.0;
  for (Index i : indices) total += cosine(q.values().row(i), target);
  return total / static_cast<double>(indices.size());
}

MetricsBlock compute_metrics(const EmbeddingMatrix& q, const std::vector<Index>& indices,
                             const std::optional<Vector>& query) {
  MetricsBlock out;
  out.selected_count = static_cast<Index>(indices.size());
  out.neighbor_cosine = neighbor_cosine(q, indices);
  if (!out.neighbor_cosine.empty()) {
    out.mean_neighbor_cosine =
        std::accumulate(out.neighbor_cosine.begin(), out.neighbor_cosine.end(), 0.0) /
        static_cast<double>(out.neighbor_cosine.size());
  }
  if (query) out.clip_score = clip_score(q, indices, *query);
  return out;
}

Histogram cosine_histogram(std::span<const double> values, Index bins) {
  if (bins < 1) fail(Errc::InvalidCount, "histogram needs at least one bin");
  Histogram out;
  out.edges.resize(static_cast<std::size_t>(bins + 1));
  for (Index b = 0; b <= bins; ++b) {
    out.edges[static_cast<std::size_t>(b)] = -1.0 + 2.0 * static_cast<double>(b) / static_cast<double>(bins);
  }
  out.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    if (!std::isfinite(v)) fail(Errc::InvalidInput, "non-finite cosine value");
    const double clamped = std::clamp(v, -1.0, 1.0);
    auto bin = static_cast<Index>(std::floor((clamped + 1.0) / 2.0 * static_cast<double>(bins)));
    bin = std::min(bin, bins - 1);
    ++out.counts[static_cast<std::size_t>(bin)];
  }
  return out;
}

}  // namespace maxinfo
