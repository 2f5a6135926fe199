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

#include "maxinfo/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string_view>

#include "maxinfo/error.hpp"
#include "maxinfo/report.hpp"

namespace maxinfo {

namespace fs = std::filesystem;

namespace {

constexpr std::array<char, 4> kMagic = {'M', 'X', 'I', 'F'};

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t load_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void store_u32(std::string& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<char>((v >> shift) & 0xFFu));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

EmbeddingMatrix read_embeddings(const fs::path& path) {
  const std::vector<unsigned char> bytes = read_bytes(path);
  const std::string where = "'" + path.string() + "': ";
  if (bytes.size() < kMxifHeaderSize) {
    fail(Errc::FormatError, where + "header truncated, expected " + std::to_string(kMxifHeaderSize) +
                                " bytes, got " + std::to_string(bytes.size()));
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    fail(Errc::FormatError, where + "bad magic at byte offset 0, expected \"MXIF\"");
  }
  const unsigned version = bytes[4] | static_cast<unsigned>(bytes[5]) << 8;
  if (version != kMxifVersion) {
    fail(Errc::FormatError, where + "unsupported version " + std::to_string(version) + " at byte offset 4");
  }
  if (bytes[6] != kMxifFloat32) {
    fail(Errc::FormatError, where + "unsupported dtype " + std::to_string(bytes[6]) + " at byte offset 6");
  }
  if (bytes[7] != 0) fail(Errc::FormatError, where + "reserved byte at offset 7 is not zero");
  const std::uint32_t rows = load_u32(&bytes[8]);
  const std::uint32_t cols = load_u32(&bytes[12]);
  if (rows == 0 || cols == 0) {
    fail(Errc::FormatError, where + "empty shape " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  const std::uint64_t expected = std::uint64_t{rows} * cols * 4;
  const std::uint64_t actual = bytes.size() - kMxifHeaderSize;
  if (actual != expected) {
    fail(Errc::FormatError, where + "payload at byte offset 16 is " + std::to_string(actual) +
                                " bytes, expected " + std::to_string(expected) + " for " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }

  Matrix values(rows, cols);
  const unsigned char* p = bytes.data() + kMxifHeaderSize;
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j, p += 4) {
      const float v = std::bit_cast<float>(load_u32(p));
      if (!std::isfinite(v)) {
        fail(Errc::InvalidInput, where + "non-finite value at row " + std::to_string(i) + ", column " +
                                     std::to_string(j) + " (byte offset " +
                                     std::to_string(p - bytes.data()) + ")");
      }
      values(i, j) = v;
    }
  }
  return EmbeddingMatrix(std::move(values));
}

void write_embeddings(const EmbeddingMatrix& matrix, const fs::path& path) {
  const Matrix& values = matrix.values();
  if (values.rows() > std::numeric_limits<std::uint32_t>::max() ||
      values.cols() > std::numeric_limits<std::uint32_t>::max()) {
    fail(Errc::InvalidInput, "matrix too large for MXIF");
  }
  std::string out;
  out.reserve(kMxifHeaderSize + static_cast<std::size_t>(values.size()) * 4);
  out.append(kMagic.begin(), kMagic.end());
  out.push_back(static_cast<char>(kMxifVersion & 0xFF));
  out.push_back(static_cast<char>(kMxifVersion >> 8));
  out.push_back(static_cast<char>(kMxifFloat32));
  out.push_back(0);
  store_u32(out, static_cast<std::uint32_t>(values.rows()));
  store_u32(out, static_cast<std::uint32_t>(values.cols()));
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      const auto v = static_cast<float>(values(i, j));
      if (!std::isfinite(v)) {
        fail(Errc::InvalidInput, "value at row " + std::to_string(i) + ", column " + std::to_string(j) +
                                     " does not fit in float32");
      }
      store_u32(out, std::bit_cast<std::uint32_t>(v));
    }
  }
  write_text_atomic(path, out);
}

EmbeddingMatrix read_csv_embeddings(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open '" + path.string() + "'");
  const std::string where = "'" + path.string() + "': ";

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t blank_since = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      if (blank_since == 0) blank_since = line_no;
      continue;
    }
    if (blank_since != 0) fail(Errc::FormatError, where + "blank line " + std::to_string(blank_since));
    std::vector<double> row;
    std::string_view rest = line;
    std::size_t column = 0;
    for (;;) {
      ++column;
      const std::size_t comma = rest.find(',');
      const std::string_view field = trim(rest.substr(0, comma));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        fail(Errc::FormatError, where + "line " + std::to_string(line_no) + ", column " +
                                    std::to_string(column) + ": '" + std::string(field) +
                                    "' is not a number");
      }
      if (!std::isfinite(v)) {
        fail(Errc::InvalidInput, where + "non-finite value at row " + std::to_string(rows.size()) +
                                     " (line " + std::to_string(line_no) + ")");
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(Errc::FormatError, where + "ragged row at line " + std::to_string(line_no) + ": " +
                                  std::to_string(row.size()) + " fields, expected " +
                                  std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(Errc::FormatError, where + "no data rows");

  Matrix values(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return EmbeddingMatrix(std::move(values));
}

void write_csv_embeddings(const EmbeddingMatrix& matrix, const fs::path& path) {
  std::string out;
  std::array<char, 32> buf{};
  const Matrix& values = matrix.values();
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j > 0) out.push_back(',');
      const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), values(i, j));
      out.append(buf.data(), ptr);
    }
    out.push_back('\n');
  }
  write_text_atomic(path, out);
}

EmbeddingFormat parse_embedding_format(const std::string& text) {
  if (text == "auto") return EmbeddingFormat::Auto;
  if (text == "binary" || text == "mxif") return EmbeddingFormat::Binary;
  if (text == "csv") return EmbeddingFormat::Csv;
  fail(Errc::InvalidConfig, "unknown embedding format '" + text + "'");
}

EmbeddingMatrix load_embeddings(const fs::path& path, EmbeddingFormat format) {
  if (format == EmbeddingFormat::Auto) {
    format = path.extension() == ".csv" ? EmbeddingFormat::Csv : EmbeddingFormat::Binary;
  }
  return format == EmbeddingFormat::Csv ? read_csv_embeddings(path) : read_embeddings(path);
}

void FrameManifest::validate() const {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].row_index != static_cast<Index>(i)) {
      fail(Errc::FormatError, "manifest frame " + std::to_string(i) + " has row_index " +
                                  std::to_string(frames[i].row_index));
    }
    if (!std::isfinite(frames[i].timestamp_seconds)) {
      fail(Errc::FormatError, "manifest frame " + std::to_string(i) + " has a non-finite timestamp");
    }
    if (i > 0 && !(frames[i].timestamp_seconds > frames[i - 1].timestamp_seconds)) {
      fail(Errc::FormatError, "manifest timestamps not strictly increasing at frame " + std::to_string(i));
    }
  }
}

FrameManifest read_manifest(const fs::path& path) {
  const std::string text = read_text(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(Errc::FormatError, "'" + path.string() + "': byte " + std::to_string(e.byte) + ": " + e.what());
  }
  FrameManifest manifest = manifest_from_json(j);
  manifest.validate();
  return manifest;
}

void write_manifest(const FrameManifest& manifest, const fs::path& path) {
  manifest.validate();
  write_text_atomic(path, dump(to_json(manifest)));
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoError, "cannot write '" + tmp.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) fail(Errc::IoError, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(Errc::IoError, "cannot move output into '" + path.string() + "'");
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace maxinfo
