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

#include "maxinfo/compare.hpp"

#include <algorithm>

#include "maxinfo/baselines.hpp"
#include "maxinfo/error.hpp"

namespace maxinfo {

const StrategyResult& Comparison::get(const std::string& name) const {
  for (const auto& s : strategies) {
    if (s.name == name) return s;
  }
  fail(Errc::InvalidInput, "no strategy named '" + name + "'");
}

SelectionReport select_subset(const EmbeddingMatrix& q, const std::vector<Index>& rows,
                              const MaxInfoConfig& cfg) {
  const auto count = static_cast<Index>(rows.size());
  if (count == 0) fail(Errc::InvalidInput, "empty subset");
  Matrix sub(count, q.cols());
  for (Index r = 0; r < count; ++r) sub.row(r) = q.values().row(rows[static_cast<std::size_t>(r)]);

  MaxInfoConfig local = cfg;
  local.max_out = std::min(cfg.max_out, count);
  local.min_out = std::min(cfg.min_out, local.max_out);
  local.pool = count;
  local.chunks = std::min({cfg.chunks, count, local.max_out});
  SelectionReport report = select(EmbeddingMatrix(std::move(sub)), local);
  for (Index& i : report.selected_indices) i = rows[static_cast<std::size_t>(i)];
  return report;
}

Comparison compare_strategies(const EmbeddingMatrix& q, const MaxInfoConfig& cfg, double theta,
                              const std::optional<Vector>& query) {
  cfg.validate(q.rows());
  Comparison out;
  out.config = cfg;
  out.theta = theta;

  auto add = [&](std::string name, std::vector<Index> indices) {
    MetricsBlock metrics = compute_metrics(q, indices, query);
    out.strategies.push_back({std::move(name), std::move(indices), std::move(metrics)});
  };

  add("uniform", uniform_sample(q.rows(), cfg.max_out));
  const std::vector<Index> thresholded = clip_threshold_select(q, theta);
  add("clip_threshold", thresholded);
  const std::vector<Index> maxinfo = select(q, cfg).selected_indices;
  add("maxinfo", maxinfo);
  add("clip_then_maxinfo", select_subset(q, thresholded, cfg).selected_indices);
  add("maxinfo_then_clip", clip_threshold_select(q, maxinfo, theta));
  return out;
}

}  // namespace maxinfo
