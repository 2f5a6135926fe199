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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "maxinfo/linalg.hpp"
#include "maxinfo/pipeline.hpp"

namespace maxinfo {

// MXIF layout, all integers little-endian:
//
//   offset  size  field
//        0     4  magic "MXIF"
//        4     2  version (1)
//        6     1  dtype (0 = float32 LE)
//        7     1  reserved (0)
//        8     4  rows
//       12     4  cols
//       16     -  rows * cols float32 values, row-major
inline constexpr std::uint16_t kMxifVersion = 1;
inline constexpr std::uint8_t kMxifFloat32 = 0;
inline constexpr std::size_t kMxifHeaderSize = 16;

EmbeddingMatrix read_embeddings(const std::filesystem::path& path);

/// Values are stored as float32; throws InvalidInput if one overflows it.
void write_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path);

/// Rectangular numeric CSV without a header row.
EmbeddingMatrix read_csv_embeddings(const std::filesystem::path& path);

/// Writes every value with enough digits to round-trip a double.
void write_csv_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path);

enum class EmbeddingFormat { Auto, Binary, Csv };

EmbeddingFormat parse_embedding_format(const std::string& text);

/// Auto picks CSV for a ".csv" extension and MXIF otherwise.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                EmbeddingFormat format = EmbeddingFormat::Auto);

/// Frame provenance written next to an MXIF file by the embedding extractor.
struct FrameManifest {
  std::string video_id;
  double fps_sampled = 0.0;
  long long total_frames = 0;
  std::optional<std::string> encoder;
  std::optional<std::string> pooling;  ///< "cls" or "mean"
  std::vector<FrameRecord> frames;

  /// Row indices dense from 0, timestamps strictly increasing.
  void validate() const;

  friend bool operator==(const FrameManifest&, const FrameManifest&) = default;
};

FrameManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const FrameManifest& manifest, const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

std::string read_text(const std::filesystem::path& path);

}  // namespace maxinfo
