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

#include "maxinfo/synthetic.hpp"

#include <cmath>
#include <random>
#include <string>

#include "maxinfo/error.hpp"

namespace maxinfo::synthetic {

namespace {

Matrix normal_matrix(Index rows, Index cols, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> normal(0.0, sd);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

Matrix orthonormal(Index dim, Index count, std::mt19937_64& rng) {
  if (count > dim) {
    fail(Errc::InvalidInput, "cannot draw " + std::to_string(count) + " orthonormal vectors in dimension " +
                                 std::to_string(dim));
  }
  const Matrix g = normal_matrix(dim, count, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(dim, count);
}

}  // namespace

EmbeddingMatrix gaussian(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return EmbeddingMatrix(normal_matrix(rows, cols, rng));
}

EmbeddingMatrix constant_video(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::RowVectorXd frame = normal_matrix(1, cols, rng).row(0).normalized();
  return EmbeddingMatrix(frame.replicate(rows, 1));
}

Matrix orthonormal_columns(Index dim, Index count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return orthonormal(dim, count, rng);
}

SceneStream scene_stream(const std::vector<Index>& lengths, Index cols, double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto scenes = static_cast<Index>(lengths.size());
  const Matrix means = orthonormal(cols, scenes, rng);
  Index rows = 0;
  for (Index len : lengths) rows += len;
  Matrix values = normal_matrix(rows, cols, rng, noise);
  std::vector<Index> labels;
  Index r = 0;
  for (Index k = 0; k < scenes; ++k) {
    for (Index t = 0; t < lengths[static_cast<std::size_t>(k)]; ++t, ++r) {
      values.row(r) += means.col(k).transpose();
      labels.push_back(k);
    }
  }
  return {EmbeddingMatrix(std::move(values)), std::move(labels)};
}

RelevanceStream relevance_stream(Index rows, Index cols, Index answer_count, double answer_cosine,
                                 double background_cosine, Index scenes, double noise, std::uint64_t seed) {
  if (answer_count < 1 || answer_count >= rows || scenes < 1 || scenes + 2 > cols) {
    fail(Errc::InvalidInput, "relevance stream parameters out of range");
  }
  std::mt19937_64 rng(seed);
  // Column 0 is the query; columns 1.. are scene prototypes, the last one the answer event.
  const Matrix axes = orthonormal(cols, scenes + 2, rng);
  const Vector query = axes.col(0);
  std::uniform_int_distribution<Index> where(0, rows - answer_count);
  const Index answer_begin = where(rng);

  const Index background = rows - answer_count;
  Matrix values(rows, cols);
  std::vector<Index> answer_rows;
  Index seen_background = 0;
  for (Index r = 0; r < rows; ++r) {
    const bool answer = r >= answer_begin && r < answer_begin + answer_count;
    const Index scene = answer ? scenes + 1 : 1 + (seen_background++ * scenes) / background;
    Vector side = axes.col(scene) + normal_matrix(cols, 1, rng, noise).col(0);
    side -= side.dot(query) * query;
    side.normalize();
    const double c = answer ? answer_cosine : background_cosine;
    values.row(r) = (c * query + std::sqrt(1.0 - c * c) * side).transpose();
    if (answer) answer_rows.push_back(r);
  }
  return {EmbeddingMatrix(std::move(values)), query, std::move(answer_rows)};
}

}  // namespace maxinfo::synthetic
