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
#include <span>
#include <vector>

#include "maxinfo/linalg.hpp"

namespace maxinfo {

/// Diversity and relevance summary of one selection.
struct MetricsBlock {
  Index selected_count = 0;
  std::vector<double> neighbor_cosine;        ///< selected_count - 1 entries
  std::optional<double> mean_neighbor_cosine;  ///< empty when fewer than 2 frames
  std::optional<double> clip_score;            ///< mean cosine to the query, if one was given

  friend bool operator==(const MetricsBlock&, const MetricsBlock&) = default;
};

/// Cosine of consecutive selected rows, in order. Empty for fewer than two indices.
std::vector<double> neighbor_cosine(const EmbeddingMatrix& q, const std::vector<Index>& indices);

/// Mean cosine between the selected rows and `query`. Throws InvalidInput for a
/// zero or non-finite query, a dimension mismatch, or an empty selection.
double clip_score(const EmbeddingMatrix& q, const std::vector<Index>& indices, const Vector& query);

MetricsBlock compute_metrics(const EmbeddingMatrix& q, const std::vector<Index>& indices,
                             const std::optional<Vector>& query = std::nullopt);

/// Fixed-width histogram of cosine values over [-1, 1]; the last bin is closed.
struct Histogram {
  std::vector<double> edges;  ///< bins + 1 entries
  std::vector<Index> counts;

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

Histogram cosine_histogram(std::span<const double> values, Index bins);

}  // namespace maxinfo
