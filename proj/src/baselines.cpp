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

#include "maxinfo/baselines.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "maxinfo/error.hpp"

namespace maxinfo {

std::vector<Index> uniform_sample(Index n, Index k) {
  if (k < 1 || k > n) {
    fail(Errc::InvalidCount,
         "need 1 <= k <= n, got k=" + std::to_string(k) + " n=" + std::to_string(n));
  }
  std::vector<Index> out(static_cast<std::size_t>(k));
  if (k == 1) {
    out[0] = 0;
    return out;
  }
  for (Index j = 0; j < k; ++j) out[static_cast<std::size_t>(j)] = j * (n - 1) / (k - 1);
  return out;
}

std::vector<Index> clip_threshold_select(const EmbeddingMatrix& q, const std::vector<Index>& candidates,
                                         double theta) {
  if (!std::isfinite(theta)) fail(Errc::InvalidConfig, "theta must be finite");
  const Matrix& values = q.values();
  for (Index i : candidates) {
    if (i < 0 || i >= q.rows()) fail(Errc::InvalidInput, "candidate row " + std::to_string(i) + " out of range");
    if (!(values.row(i).norm() > 0.0)) {
      fail(Errc::InvalidInput, "row " + std::to_string(i) + " has zero norm");
    }
  }
  std::vector<Index> kept;
  if (candidates.empty()) return kept;
  kept.push_back(candidates.front());
  Eigen::RowVectorXd last = values.row(candidates.front()).normalized();
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    const Eigen::RowVectorXd current = values.row(candidates[c]).normalized();
    if (current.dot(last) < theta) {
      kept.push_back(candidates[c]);
      last = current;
    }
  }
  return kept;
}

std::vector<Index> clip_threshold_select(const EmbeddingMatrix& q, double theta) {
  std::vector<Index> all(static_cast<std::size_t>(q.rows()));
  std::iota(all.begin(), all.end(), Index{0});
  return clip_threshold_select(q, all, theta);
}

}  // namespace maxinfo
