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

#include <cstdint>
#include <vector>

#include "maxinfo/linalg.hpp"

namespace maxinfo::synthetic {

/// i.i.d. standard normal entries.
EmbeddingMatrix gaussian(Index rows, Index cols, std::uint64_t seed);

/// One random unit vector repeated on every row (a static video).
EmbeddingMatrix constant_video(Index rows, Index cols, std::uint64_t seed);

/// `count` random orthonormal vectors of dimension `dim`, as columns.
Matrix orthonormal_columns(Index dim, Index count, std::uint64_t seed);

struct SceneStream {
  EmbeddingMatrix embeddings;
  std::vector<Index> labels;  ///< scene of each row
};

/// Scenes in time order: scene k occupies lengths[k] consecutive rows equal to
/// an orthonormal scene mean plus N(0, noise^2) per coordinate.
SceneStream scene_stream(const std::vector<Index>& lengths, Index cols, double noise, std::uint64_t seed);

struct RelevanceStream {
  EmbeddingMatrix embeddings;
  Vector query;                     ///< unit norm
  std::vector<Index> answer_rows;   ///< contiguous, ascending
};

/// Frames with an exact cosine to a query: `answer_count` consecutive frames at
/// `answer_cosine`, the rest at `background_cosine`. The part orthogonal to
/// the query follows a scene model: `scenes` background scenes plus one answer
/// event, each a unit prototype with N(0, noise^2) jitter.
RelevanceStream relevance_stream(Index rows, Index cols, Index answer_count, double answer_cosine,
                                 double background_cosine, Index scenes, double noise, std::uint64_t seed);

}  // namespace maxinfo::synthetic
