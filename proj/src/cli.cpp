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

#include "maxinfo/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "maxinfo/baselines.hpp"
#include "maxinfo/compare.hpp"
#include "maxinfo/io.hpp"
#include "maxinfo/metrics.hpp"
#include "maxinfo/pipeline.hpp"
#include "maxinfo/report.hpp"
#include "maxinfo/synthetic.hpp"

namespace maxinfo::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct InputOptions {
  std::string embeddings;
  std::string format = "auto";
  std::string manifest;
  std::string query;
};

struct SelectionOptions {
  Index rank = 8;
  double tol = 0.3;
  Index min_out = 1;
  Index max_out = 64;
  std::string mode = "fast";
  Index pool = 0;  // 0: use the number of input rows
  Index chunks = 32;
  std::string tol_convention = "sqrt1p";
  std::string svd = "auto";

  MaxInfoConfig to_config(Index rows) const {
    MaxInfoConfig cfg;
    cfg.rank = rank;
    cfg.tol = tol;
    cfg.min_out = min_out;
    cfg.max_out = max_out;
    cfg.mode = parse_mode(mode);
    cfg.pool = pool > 0 ? pool : rows;
    cfg.chunks = chunks;
    cfg.tol_convention = parse_tol_convention(tol_convention);
    cfg.svd = parse_svd_method(svd);
    return cfg;
  }
};

void add_input_options(CLI::App* cmd, InputOptions& in, bool with_query) {
  cmd->add_option("--embeddings", in.embeddings, "MXIF or CSV embedding file")->required();
  cmd->add_option("--format", in.format, "auto | binary | csv")
      ->check(CLI::IsMember({"auto", "binary", "mxif", "csv"}));
  cmd->add_option("--manifest", in.manifest, "frame manifest for the embedding rows");
  if (with_query) cmd->add_option("--query", in.query, "one-row MXIF/CSV query embedding");
}

void add_selection_options(CLI::App* cmd, SelectionOptions& sel) {
  cmd->add_option("--rank", sel.rank, "SVD truncation rank R")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", sel.tol, "selection tolerance")->check(CLI::NonNegativeNumber);
  cmd->add_option("--min", sel.min_out, "minimum number of selected frames")->check(CLI::PositiveNumber);
  cmd->add_option("--max", sel.max_out, "maximum number of selected frames")->check(CLI::PositiveNumber);
  cmd->add_option("--mode", sel.mode, "fast | slow | chunked")
      ->check(CLI::IsMember({"fast", "slow", "chunked"}));
  cmd->add_option("--pool", sel.pool, "slow mode pool size (defaults to the input rows)");
  cmd->add_option("--chunks", sel.chunks, "chunk count M for chunked mode")->check(CLI::PositiveNumber);
  cmd->add_option("--tol-convention", sel.tol_convention, "sqrt1p | literal")
      ->check(CLI::IsMember({"sqrt1p", "literal"}));
  cmd->add_option("--svd", sel.svd, "auto | direct | gram")->check(CLI::IsMember({"auto", "direct", "gram"}));
}

struct LoadedInput {
  EmbeddingMatrix embeddings;
  std::optional<FrameManifest> manifest;
  std::optional<Vector> query;
  double load_ms = 0.0;
};

LoadedInput load_input(const InputOptions& in) {
  const auto start = Clock::now();
  EmbeddingMatrix q = load_embeddings(in.embeddings, parse_embedding_format(in.format));
  const double load_ms = elapsed_ms(start);
  LoadedInput out{std::move(q), std::nullopt, std::nullopt, load_ms};
  if (!in.manifest.empty()) {
    out.manifest = read_manifest(in.manifest);
    if (static_cast<Index>(out.manifest->frames.size()) != out.embeddings.rows()) {
      fail(Errc::FormatError, "manifest lists " + std::to_string(out.manifest->frames.size()) +
                                  " frames but the embedding file has " +
                                  std::to_string(out.embeddings.rows()) + " rows");
    }
  }
  if (!in.query.empty()) {
    const EmbeddingMatrix query = load_embeddings(in.query);
    if (query.rows() != 1) fail(Errc::FormatError, "query file must hold exactly one row");
    out.query = query.values().row(0).transpose();
  }
  return out;
}

void emit(const std::string& path, const std::string& text) {
  if (!path.empty()) write_text_atomic(path, text);
}

int cmd_select(const InputOptions& in, const SelectionOptions& sel, const std::string& out_path,
               bool canonical, std::ostream& out) {
  LoadedInput input = load_input(in);
  const MaxInfoConfig cfg = sel.to_config(input.embeddings.rows());
  SelectionReport report = select(input.embeddings, cfg);
  report.timing.embedding_load_ms = input.load_ms;
  report.metrics = compute_metrics(input.embeddings, report.selected_indices, input.query);
  if (input.manifest) {
    std::vector<FrameRecord> frames;
    for (Index i : report.selected_indices) frames.push_back(input.manifest->frames[static_cast<std::size_t>(i)]);
    report.frames = std::move(frames);
  }
  emit(out_path, dump(to_json(report, canonical)));
  std::ostringstream lines;
  for (Index i : report.selected_indices) lines << i << '\n';
  out << lines.str();
  return kOk;
}

std::string format_optional(const std::optional<double>& v) {
  if (!v) return "-";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(4) << *v;
  return ss.str();
}

int cmd_compare(const InputOptions& in, const SelectionOptions& sel, double theta,
                const std::string& out_path, std::ostream& out) {
  const LoadedInput input = load_input(in);
  const MaxInfoConfig cfg = sel.to_config(input.embeddings.rows());
  const Comparison comparison = compare_strategies(input.embeddings, cfg, theta, input.query);
  emit(out_path, dump(to_json(comparison)));
  std::ostringstream table;
  table << std::left << std::setw(20) << "strategy" << std::right << std::setw(8) << "frames"
        << std::setw(14) << "mean_nbr_cos" << std::setw(12) << "clip_score" << '\n';
  for (const auto& s : comparison.strategies) {
    table << std::left << std::setw(20) << s.name << std::right << std::setw(8) << s.indices.size()
          << std::setw(14) << format_optional(s.metrics.mean_neighbor_cosine) << std::setw(12)
          << format_optional(s.metrics.clip_score) << '\n';
  }
  out << table.str();
  return kOk;
}

int cmd_stats(const InputOptions& in, const SelectionOptions& sel, const std::string& strategy, double theta,
              Index bins, const std::string& out_path, std::ostream& out) {
  const LoadedInput input = load_input(in);
  const EmbeddingMatrix& q = input.embeddings;
  std::vector<Index> indices;
  if (strategy == "all") {
    indices.resize(static_cast<std::size_t>(q.rows()));
    for (Index i = 0; i < q.rows(); ++i) indices[static_cast<std::size_t>(i)] = i;
  } else if (strategy == "uniform") {
    indices = uniform_sample(q.rows(), std::min(sel.max_out, q.rows()));
  } else if (strategy == "clip") {
    indices = clip_threshold_select(q, theta);
  } else {
    indices = select(q, sel.to_config(q.rows())).selected_indices;
  }
  const MetricsBlock metrics = compute_metrics(q, indices, input.query);
  const Histogram histogram = cosine_histogram(metrics.neighbor_cosine, bins);
  Json j = {{"format", "maxinfo-stats"},
            {"version", 1},
            {"strategy", strategy},
            {"indices", indices},
            {"metrics", to_json(metrics)},
            {"histogram", to_json(histogram)}};
  emit(out_path, dump(j));
  std::ostringstream text;
  text << std::fixed << std::setprecision(2);
  for (std::size_t b = 0; b < histogram.counts.size(); ++b) {
    text << histogram.edges[b] << ' ' << histogram.edges[b + 1] << ' ' << histogram.counts[b] << '\n';
  }
  out << text.str();
  return kOk;
}

struct BenchRow {
  std::string label;
  Index rows = 0;
  Index cols = 0;
  std::vector<double> total_ms;
  std::vector<double> svd_ms;
  std::vector<double> maxvol_ms;
  Index selected = 0;
};

double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

BenchRow bench_one(const std::string& label, const EmbeddingMatrix& q, const MaxInfoConfig& cfg, int reps) {
  BenchRow row{label, q.rows(), q.cols(), {}, {}, {}, 0};
  for (int r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    const SelectionReport report = select(q, cfg);
    row.total_ms.push_back(elapsed_ms(start));
    row.svd_ms.push_back(report.timing.svd_ms);
    row.maxvol_ms.push_back(report.timing.maxvol_ms);
    row.selected = static_cast<Index>(report.selected_indices.size());
  }
  return row;
}

int cmd_bench(const SelectionOptions& sel, const std::vector<Index>& sizes, Index dim, Index chunk_count,
              Index chunk_size, int reps, std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  if (reps < 1) fail(Errc::InvalidConfig, "--reps must be >= 1");
  std::vector<BenchRow> rows;
  for (Index n : sizes) {
    const EmbeddingMatrix q = synthetic::gaussian(n, dim, seed);
    MaxInfoConfig cfg = sel.to_config(n);
    cfg.mode = Mode::Fast;
    cfg.max_out = std::min(cfg.max_out, n);
    rows.push_back(bench_one("fast", q, cfg, reps));
  }
  if (chunk_count > 0) {
    const Index n = chunk_count * chunk_size;
    const EmbeddingMatrix q = synthetic::gaussian(n, dim, seed);
    MaxInfoConfig cfg = sel.to_config(n);
    cfg.mode = Mode::Chunked;
    cfg.chunks = chunk_count;
    cfg.max_out = std::max(cfg.max_out, chunk_count);
    rows.push_back(bench_one("chunked " + std::to_string(chunk_count) + "x" + std::to_string(chunk_size), q,
                             cfg, reps));
  }

  Json results = Json::array();
  std::ostringstream table;
  table << std::left << std::setw(16) << "method" << std::right << std::setw(7) << "rows" << std::setw(6)
        << "cols" << std::setw(9) << "frames" << std::setw(12) << "median_ms" << std::setw(10) << "p95_ms"
        << std::setw(10) << "svd_ms" << std::setw(12) << "maxvol_ms" << '\n';
  table << std::fixed << std::setprecision(3);
  for (const auto& r : rows) {
    const double median = percentile(r.total_ms, 0.5);
    const double p95 = percentile(r.total_ms, 0.95);
    const double svd = percentile(r.svd_ms, 0.5);
    const double maxvol = percentile(r.maxvol_ms, 0.5);
    table << std::left << std::setw(16) << r.label << std::right << std::setw(7) << r.rows << std::setw(6)
          << r.cols << std::setw(9) << r.selected << std::setw(12) << median << std::setw(10) << p95
          << std::setw(10) << svd << std::setw(12) << maxvol << '\n';
    results.push_back({{"method", r.label},
                       {"rows", r.rows},
                       {"cols", r.cols},
                       {"selected", r.selected},
                       {"repetitions", reps},
                       {"median_ms", median},
                       {"p95_ms", p95},
                       {"median_svd_ms", svd},
                       {"median_maxvol_ms", maxvol}});
  }
  emit(out_path, dump({{"format", "maxinfo-bench"}, {"version", 1}, {"seed", seed}, {"results", results}}));
  out << table.str();
  return kOk;
}

std::vector<Index> parse_lengths(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const long long v = std::stoll(item);
      if (v < 1) throw std::invalid_argument(item);
      out.push_back(static_cast<Index>(v));
    } catch (const std::exception&) {
      fail(Errc::InvalidConfig, "bad scene length '" + item + "'");
    }
  }
  if (out.empty()) fail(Errc::InvalidConfig, "empty scene list");
  return out;
}

int cmd_synth(const std::string& kind, Index rows, Index cols, const std::string& scenes, double noise,
              std::uint64_t seed, const std::string& out_path, const std::string& manifest_path,
              std::ostream& out) {
  std::optional<EmbeddingMatrix> q;
  if (kind == "gaussian") {
    q = synthetic::gaussian(rows, cols, seed);
  } else if (kind == "constant") {
    q = synthetic::constant_video(rows, cols, seed);
  } else if (kind == "orthonormal") {
    if (rows > cols) fail(Errc::InvalidConfig, "orthonormal rows need rows <= cols");
    q = EmbeddingMatrix(synthetic::orthonormal_columns(cols, rows, seed).transpose());
  } else {
    q = synthetic::scene_stream(parse_lengths(scenes), cols, noise, seed).embeddings;
  }
  if (std::filesystem::path(out_path).extension() == ".csv") {
    write_csv_embeddings(*q, out_path);
  } else {
    write_embeddings(*q, out_path);
  }
  if (!manifest_path.empty()) {
    FrameManifest manifest;
    manifest.video_id = "synthetic-" + kind + "-" + std::to_string(seed);
    manifest.fps_sampled = 1.0;
    manifest.total_frames = q->rows();
    for (Index i = 0; i < q->rows(); ++i) manifest.frames.push_back({i, i, static_cast<double>(i)});
    write_manifest(manifest, manifest_path);
  }
  out << q->rows() << "x" << q->cols() << '\n';
  return kOk;
}

}  // namespace

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::InvalidConfig:
    case Errc::InvalidCount:
    case Errc::InvalidChunking:
      return kUsage;
    case Errc::FormatError:
    case Errc::IoError:
    case Errc::InvalidInput:
      return kFormat;
    case Errc::InvalidRank:
    case Errc::RankDeficient:
    case Errc::InvalidPivot:
    case Errc::NumericalFailure:
      return kNumerical;
  }
  return kFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Keyframe selection by maximum-volume submatrices of frame embeddings", "maxinfo"};
  app.require_subcommand(1);

  InputOptions in;
  SelectionOptions sel;
  std::string out_path;
  bool canonical = false;
  double theta = kDefaultClipThreshold;

  auto* select_cmd = app.add_subcommand("select", "select keyframes and write a selection report");
  add_input_options(select_cmd, in, true);
  add_selection_options(select_cmd, sel);
  select_cmd->add_option("--out", out_path, "report path");
  select_cmd->add_flag("--canonical", canonical, "zero timing fields in the report");

  auto* compare_cmd = app.add_subcommand("compare", "compare uniform, threshold and MaxInfo strategies");
  add_input_options(compare_cmd, in, true);
  add_selection_options(compare_cmd, sel);
  compare_cmd->add_option("--theta", theta, "similarity threshold for the threshold baseline");
  compare_cmd->add_option("--out", out_path, "comparison report path");

  std::string strategy = "all";
  // An odd bin count puts cosine 0 (orthogonal neighbors) in the interior of a bin.
  Index bins = 21;
  auto* stats_cmd = app.add_subcommand("stats", "neighbor-cosine histogram of a selection");
  add_input_options(stats_cmd, in, true);
  add_selection_options(stats_cmd, sel);
  stats_cmd->add_option("--strategy", strategy, "all | uniform | clip | maxinfo")
      ->check(CLI::IsMember({"all", "uniform", "clip", "maxinfo"}));
  stats_cmd->add_option("--theta", theta, "similarity threshold for --strategy clip");
  stats_cmd->add_option("--bins", bins, "histogram bins over [-1, 1]")->check(CLI::PositiveNumber);
  stats_cmd->add_option("--out", out_path, "stats report path");

  std::vector<Index> sizes = {128, 256, 512};
  Index dim = 768;
  Index chunk_count = 32;
  Index chunk_size = 32;
  int reps = 20;
  std::uint64_t seed = 0;
  auto* bench_cmd = app.add_subcommand("bench", "time SVD + rect MaxVol on synthetic inputs");
  add_selection_options(bench_cmd, sel);
  bench_cmd->add_option("--sizes", sizes, "frame counts for the fast pipeline")->delimiter(',');
  bench_cmd->add_option("--dim", dim, "embedding dimension")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--bench-chunks", chunk_count, "chunk count for the chunked run (0 skips it)");
  bench_cmd->add_option("--chunk-size", chunk_size, "frames per chunk")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--reps", reps, "repetitions per input")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", seed, "seed for the synthetic inputs");
  bench_cmd->add_option("--out", out_path, "JSON results path");

  std::string kind = "gaussian";
  Index rows = 128;
  Index cols = 64;
  std::string scenes = "80,5,5,5,5";
  double noise = 0.05;
  std::string manifest_out;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic embedding file");
  synth_cmd->add_option("--kind", kind, "gaussian | constant | orthonormal | scenes")
      ->check(CLI::IsMember({"gaussian", "constant", "orthonormal", "scenes"}));
  synth_cmd->add_option("--rows", rows, "frames (ignored for scenes)")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--cols", cols, "embedding dimension")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--scenes", scenes, "comma-separated scene lengths");
  synth_cmd->add_option("--noise", noise, "per-coordinate noise for scenes")->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--seed", seed, "random seed");
  synth_cmd->add_option("--out", out_path, "output .mxif or .csv")->required();
  synth_cmd->add_option("--manifest", manifest_out, "also write a 1 fps frame manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*select_cmd) return cmd_select(in, sel, out_path, canonical, out);
    if (*compare_cmd) return cmd_compare(in, sel, theta, out_path, out);
    if (*stats_cmd) return cmd_stats(in, sel, strategy, theta, bins, out_path, out);
    if (*bench_cmd) return cmd_bench(sel, sizes, dim, chunk_count, chunk_size, reps, seed, out_path, out);
    if (*synth_cmd) return cmd_synth(kind, rows, cols, scenes, noise, seed, out_path, manifest_out, out);
  } catch (const Error& e) {
    err << "maxinfo: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "maxinfo: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"maxinfo"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace maxinfo::cli
