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
#include <vector>

#include "maxinfo/metrics.hpp"
#include "maxinfo/pipeline.hpp"

namespace maxinfo {

inline constexpr double kDefaultClipThreshold = 0.5;

struct StrategyResult {
  std::string name;
  std::vector<Index> indices;
  MetricsBlock metrics;

  friend bool operator==(const StrategyResult&, const StrategyResult&) = default;
};

struct Comparison {
  MaxInfoConfig config;
  double theta = kDefaultClipThreshold;
  std::vector<StrategyResult> strategies;

  const StrategyResult& get(const std::string& name) const;

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

/// MaxInfo over `rows` only, budget clamped to the subset size. Indices in
/// the result refer to the full matrix.
SelectionReport select_subset(const EmbeddingMatrix& q, const std::vector<Index>& rows,
                              const MaxInfoConfig& cfg);

/// Runs, in this order:
///   uniform            - max_out evenly spaced frames
///   clip_threshold     - similarity-threshold scan at theta
///   maxinfo            - the configured MaxInfo pipeline
///   clip_then_maxinfo  - MaxInfo over the frames the threshold scan kept
///   maxinfo_then_clip  - threshold scan over the MaxInfo selection
Comparison compare_strategies(const EmbeddingMatrix& q, const MaxInfoConfig& cfg,
                              double theta = kDefaultClipThreshold,
                              const std::optional<Vector>& query = std::nullopt);

}  // namespace maxinfo
