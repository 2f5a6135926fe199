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

#include "maxinfo/report.hpp"

#include <cmath>

#include "maxinfo/error.hpp"

namespace maxinfo {

namespace {

Json log_volume_json(double v) { return v == kLogZero ? Json(nullptr) : Json(v); }

double log_volume_from(const Json& j) { return j.is_null() ? kLogZero : j.get<double>(); }

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

// nlohmann exceptions from .at()/.get() become FormatError.
template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    fail(Errc::FormatError, std::string(what) + ": " + e.what());
  }
}

Json to_json(const StepRecord& s) {
  return {{"row", s.row}, {"coeff_norm", s.coeff_norm}, {"log_volume", log_volume_json(s.log_volume)}};
}

Json to_json(const SegmentDiagnostics& d) {
  Json steps = Json::array();
  for (const auto& s : d.steps) steps.push_back(to_json(s));
  return {{"begin", d.begin},
          {"end", d.end},
          {"rank", d.rank},
          {"min_rows", d.min_rows},
          {"max_rows", d.max_rows},
          {"tau", d.tau},
          {"top_singular_values", d.top_singular_values},
          {"square_pivots", d.square_pivots},
          {"square_log_volume", log_volume_json(d.square_log_volume)},
          {"steps", steps},
          {"log_volume", log_volume_json(d.log_volume)}};
}

SegmentDiagnostics segment_from_json(const Json& j) {
  SegmentDiagnostics d;
  d.begin = j.at("begin").get<Index>();
  d.end = j.at("end").get<Index>();
  d.rank = j.at("rank").get<Index>();
  d.min_rows = j.at("min_rows").get<Index>();
  d.max_rows = j.at("max_rows").get<Index>();
  d.tau = j.at("tau").get<double>();
  d.top_singular_values = j.at("top_singular_values").get<std::vector<double>>();
  d.square_pivots = j.at("square_pivots").get<std::vector<Index>>();
  d.square_log_volume = log_volume_from(j.at("square_log_volume"));
  for (const auto& s : j.at("steps")) {
    d.steps.push_back({s.at("row").get<Index>(), s.at("coeff_norm").get<double>(),
                       log_volume_from(s.at("log_volume"))});
  }
  d.log_volume = log_volume_from(j.at("log_volume"));
  return d;
}

Json to_json(const FrameRecord& f) {
  return {{"row_index", f.row_index},
          {"source_frame_number", f.source_frame_number},
          {"timestamp_seconds", f.timestamp_seconds}};
}

FrameRecord frame_from_json(const Json& j) {
  return {j.at("row_index").get<Index>(), j.at("source_frame_number").get<long long>(),
          j.at("timestamp_seconds").get<double>()};
}

}  // namespace

Json to_json(const MaxInfoConfig& cfg) {
  return {{"rank", cfg.rank},
          {"tol", cfg.tol},
          {"min_out", cfg.min_out},
          {"max_out", cfg.max_out},
          {"mode", to_string(cfg.mode)},
          {"pool", cfg.pool},
          {"chunks", cfg.chunks},
          {"tol_convention", to_string(cfg.tol_convention)},
          {"svd", to_string(cfg.svd)}};
}

MaxInfoConfig config_from_json(const Json& j) {
  return guarded("config", [&] {
    MaxInfoConfig cfg;
    cfg.rank = j.at("rank").get<Index>();
    cfg.tol = j.at("tol").get<double>();
    cfg.min_out = j.at("min_out").get<Index>();
    cfg.max_out = j.at("max_out").get<Index>();
    cfg.mode = parse_mode(j.at("mode").get<std::string>());
    cfg.pool = j.at("pool").get<Index>();
    cfg.chunks = j.at("chunks").get<Index>();
    cfg.tol_convention = parse_tol_convention(j.at("tol_convention").get<std::string>());
    cfg.svd = parse_svd_method(j.at("svd").get<std::string>());
    return cfg;
  });
}

Json to_json(const MetricsBlock& m) {
  return {{"selected_count", m.selected_count},
          {"neighbor_cosine", m.neighbor_cosine},
          {"mean_neighbor_cosine", optional_json(m.mean_neighbor_cosine)},
          {"clip_score", optional_json(m.clip_score)},
          {"clip_score_aggregation", "mean"}};
}

MetricsBlock metrics_from_json(const Json& j) {
  return guarded("metrics", [&] {
    MetricsBlock m;
    m.selected_count = j.at("selected_count").get<Index>();
    m.neighbor_cosine = j.at("neighbor_cosine").get<std::vector<double>>();
    m.mean_neighbor_cosine = optional_from<double>(j, "mean_neighbor_cosine");
    m.clip_score = optional_from<double>(j, "clip_score");
    return m;
  });
}

Json to_json(const FrameManifest& manifest) {
  Json video = {{"id", manifest.video_id},
                {"fps_sampled", manifest.fps_sampled},
                {"total_frames", manifest.total_frames}};
  if (manifest.encoder) video["encoder"] = *manifest.encoder;
  if (manifest.pooling) video["pooling"] = *manifest.pooling;
  Json frames = Json::array();
  for (const auto& f : manifest.frames) frames.push_back(to_json(f));
  return {{"format", "maxinfo-manifest"}, {"version", 1}, {"video", video}, {"frames", frames}};
}

FrameManifest manifest_from_json(const Json& j) {
  return guarded("manifest", [&] {
    if (j.at("format").get<std::string>() != "maxinfo-manifest") {
      fail(Errc::FormatError, "manifest: unexpected format tag");
    }
    if (j.at("version").get<int>() != 1) fail(Errc::FormatError, "manifest: unsupported version");
    FrameManifest m;
    const Json& video = j.at("video");
    m.video_id = video.at("id").get<std::string>();
    m.fps_sampled = video.at("fps_sampled").get<double>();
    m.total_frames = video.at("total_frames").get<long long>();
    m.encoder = optional_from<std::string>(video, "encoder");
    m.pooling = optional_from<std::string>(video, "pooling");
    for (const auto& f : j.at("frames")) m.frames.push_back(frame_from_json(f));
    return m;
  });
}

Json to_json(const SelectionReport& r, bool canonical) {
  Json segments = Json::array();
  for (const auto& s : r.segments) segments.push_back(to_json(s));
  Json out = {
      {"format", "maxinfo-selection"},
      {"version", 1},
      {"mode", to_string(r.mode)},
      {"config", to_json(r.config)},
      {"selected_indices", r.selected_indices},
      {"counts",
       {{"input_rows", r.input_rows},
        {"input_cols", r.input_cols},
        {"selected_before_downsample", r.selected_before_downsample},
        {"selected", r.selected_indices.size()}}},
      {"segments", segments},
      {"timing_ms",
       {{"embedding_load", canonical ? 0.0 : r.timing.embedding_load_ms},
        {"svd", canonical ? 0.0 : r.timing.svd_ms},
        {"maxvol", canonical ? 0.0 : r.timing.maxvol_ms}}},
  };
  if (r.metrics) out["metrics"] = to_json(*r.metrics);
  if (r.frames) {
    Json frames = Json::array();
    for (const auto& f : *r.frames) frames.push_back(to_json(f));
    out["frames"] = frames;
  }
  return out;
}

SelectionReport report_from_json(const Json& j) {
  return guarded("report", [&] {
    if (j.at("format").get<std::string>() != "maxinfo-selection") {
      fail(Errc::FormatError, "report: unexpected format tag");
    }
    SelectionReport r;
    r.mode = parse_mode(j.at("mode").get<std::string>());
    r.config = config_from_json(j.at("config"));
    r.selected_indices = j.at("selected_indices").get<std::vector<Index>>();
    const Json& counts = j.at("counts");
    r.input_rows = counts.at("input_rows").get<Index>();
    r.input_cols = counts.at("input_cols").get<Index>();
    r.selected_before_downsample = counts.at("selected_before_downsample").get<Index>();
    for (const auto& s : j.at("segments")) r.segments.push_back(segment_from_json(s));
    const Json& t = j.at("timing_ms");
    r.timing = {t.at("embedding_load").get<double>(), t.at("svd").get<double>(), t.at("maxvol").get<double>()};
    if (j.contains("metrics")) r.metrics = metrics_from_json(j.at("metrics"));
    if (j.contains("frames")) {
      std::vector<FrameRecord> frames;
      for (const auto& f : j.at("frames")) frames.push_back(frame_from_json(f));
      r.frames = std::move(frames);
    }
    return r;
  });
}

Json to_json(const Comparison& c) {
  Json strategies = Json::array();
  for (const auto& s : c.strategies) {
    strategies.push_back({{"name", s.name}, {"indices", s.indices}, {"metrics", to_json(s.metrics)}});
  }
  return {{"format", "maxinfo-comparison"},
          {"version", 1},
          {"config", to_json(c.config)},
          {"theta", c.theta},
          {"strategies", strategies}};
}

Comparison comparison_from_json(const Json& j) {
  return guarded("comparison", [&] {
    if (j.at("format").get<std::string>() != "maxinfo-comparison") {
      fail(Errc::FormatError, "comparison: unexpected format tag");
    }
    Comparison c;
    c.config = config_from_json(j.at("config"));
    c.theta = j.at("theta").get<double>();
    for (const auto& s : j.at("strategies")) {
      c.strategies.push_back({s.at("name").get<std::string>(), s.at("indices").get<std::vector<Index>>(),
                              metrics_from_json(s.at("metrics"))});
    }
    return c;
  });
}

Json to_json(const Histogram& h) { return {{"edges", h.edges}, {"counts", h.counts}}; }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace maxinfo
