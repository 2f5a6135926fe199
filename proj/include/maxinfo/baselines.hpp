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

/// Evenly spaced positions floor(j * (n - 1) / (k - 1)), j = 0..k-1, both
/// endpoints included; k = 1 gives {0}. Throws InvalidCount unless 1 <= k <= n.
std::vector<Index> uniform_sample(Index n, Index k);

/// Keeps frame 0, then every frame whose cosine to the last kept frame is
/// below `theta`. Throws InvalidInput on a zero row.
std::vector<Index> clip_threshold_select(const EmbeddingMatrix& q, double theta);

/// Same scan restricted to `candidates` (ascending), returning a subset of them.
std::vector<Index> clip_threshold_select(const EmbeddingMatrix& q, const std::vector<Index>& candidates,
                                         double theta);

}  // namespace maxinfo
