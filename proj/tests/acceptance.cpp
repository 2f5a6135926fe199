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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "maxinfo/baselines.hpp"
#include "maxinfo/cli.hpp"
#include "maxinfo/io.hpp"
#include "maxinfo/maxvol.hpp"
#include "maxinfo/metrics.hpp"
#include "maxinfo/pipeline.hpp"
#include "maxinfo/synthetic.hpp"
#include "oracles.hpp"

using namespace maxinfo;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!pass) ++failures;
}

// Runs a criterion; an escaping exception counts as a failure.
void criterion(const std::string& name, const std::function<void(const std::string&)>& body) {
  try {
    body(name);
  } catch (const std::exception& e) {
    report(false, name, std::string("exception: ") + e.what());
  }
}

std::string fmt(double v, int precision = 3) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(precision);
  ss << v;
  return ss.str();
}

std::string sci(double v) {
  std::ostringstream ss;
  ss.setf(std::ios::scientific);
  ss.precision(2);
  ss << v;
  return ss.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<Index> sorted(std::vector<Index> v) {
  std::sort(v.begin(), v.end());
  return v;
}

void volume_recursion(const std::string& name) {
  const auto start = Clock::now();
  double worst = 0.0;
  long steps = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    std::mt19937_64 rng(seed);
    const Index s = 1 + static_cast<Index>(rng() % 8);
    const Index n = s + static_cast<Index>(rng() % static_cast<std::uint64_t>(33 - s));
    const Index d = s + static_cast<Index>(rng() % 16);
    const Matrix q = oracle::random_matrix(n, d, seed + 10'000);
    const Matrix basis = truncated_svd(q, s).basis;
    MaxVolParams params;
    params.tau = 0.0;
    params.min_rows = 1;
    params.max_rows = n;
    const SelectionState st = rect_maxvol(basis, params);
    std::vector<Index> prefix = st.square_pivots();
    worst = std::max(worst, std::abs(st.square_log_volume() -
                                     oracle::gram_log_volume(oracle::take_rows(basis, prefix))));
    for (const StepRecord& step : st.steps()) {
      prefix.push_back(step.row);
      const double direct = oracle::gram_log_volume(oracle::take_rows(basis, prefix));
      worst = std::max(worst, std::abs(step.log_volume - direct));
      ++steps;
    }
  }
  const double elapsed = seconds_since(start);
  report(worst <= 1e-8 && elapsed < 10.0, name,
         "1000 instances, " + std::to_string(steps) + " appends, max |recursive - direct| = " + sci(worst) +
             " (tol 1e-8), " + fmt(elapsed, 2) + " s (limit 10 s)");
}

void square_dominance(const std::string& name) {
  const auto start = Clock::now();
  int ok = 0;
  double worst_coeff = 0.0;
  double worst_swap = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Matrix a = oracle::random_matrix(12, 3, seed + 20'000);
    const SquareMaxVol sq = maxvol_square(a);
    const double coeff = sq.coeff.cwiseAbs().maxCoeff();
    const double swap = oracle::best_single_swap_ratio(a, sq.pivots);
    worst_coeff = std::max(worst_coeff, coeff);
    worst_swap = std::max(worst_swap, swap);
    if (coeff <= 1.0 + 1e-9 && swap <= 1.0 + 1e-9) ++ok;
  }
  const double elapsed = seconds_since(start);
  report(ok == 200 && elapsed < 10.0, name,
         std::to_string(ok) + "/200 dominant, max |C| = " + fmt(worst_coeff, 12) + ", best swap ratio = " +
             fmt(worst_swap, 12) + ", " + fmt(elapsed, 2) + " s (limit 10 s)");
}

void greedy_vs_brute_force(const std::string& name) {
  const auto start = Clock::now();
  const std::vector<Index> uniform = uniform_sample(12, 6);
  int beats_uniform = 0;
  int beats_random = 0;
  int optimal = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Matrix a = oracle::random_matrix(12, 3, seed + 30'000);
    MaxVolParams params;
    params.tau = 0.0;
    params.min_rows = 6;
    params.max_rows = 6;
    const std::vector<Index> greedy = rect_maxvol(a, params).sorted_pivots();
    const double ours = oracle::gram_log_volume(oracle::take_rows(a, greedy));
    if (ours >= oracle::gram_log_volume(oracle::take_rows(a, uniform))) ++beats_uniform;
    std::mt19937_64 rng(seed);
    double best_random = -INFINITY;
    for (int t = 0; t < 1000; ++t) {
      best_random = std::max(best_random,
                             oracle::gram_log_volume(oracle::take_rows(a, oracle::random_subset(12, 6, rng))));
    }
    if (ours >= best_random) ++beats_random;
    if (ours >= oracle::brute_force_best_log_volume(a, 6) - 1e-12) ++optimal;
  }
  const double elapsed = seconds_since(start);
  report(beats_uniform == 100 && beats_random >= 80 && elapsed < 30.0, name,
         ">= uniform subset " + std::to_string(beats_uniform) + "/100 (need 100), >= best of 1000 random " +
             std::to_string(beats_random) + "/100 (need 80), brute-force optimum reached " +
             std::to_string(optimal) + "/100, " + fmt(elapsed, 2) + " s (limit 30 s)");
}

void svd_contract(const std::string& name) {
  int ok = 0;
  double worst_recon = 0.0;
  double worst_orth = 0.0;
  double worst_spectrum = 0.0;
  const int instances = 500;
  for (std::uint64_t seed = 0; seed < static_cast<std::uint64_t>(instances); ++seed) {
    std::mt19937_64 rng(seed);
    const Index n = 1 + static_cast<Index>(rng() % 64);
    const Index d = 1 + static_cast<Index>(rng() % 64);
    const Index s = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(std::min(n, d)));
    const Matrix q = oracle::random_matrix(n, d, seed + 40'000);
    const Vector reference = oracle::singular_values_via_eigen(q);
    bool good = true;
    for (SvdMethod method : {SvdMethod::Auto, SvdMethod::Direct, SvdMethod::Gram}) {
      const SvdReduction svd = truncated_svd(q, s, method);
      const Matrix approx = svd.basis * svd.singular_values.head(s).asDiagonal() * svd.right.transpose();
      const double err = (q - approx).norm();
      const double tail = std::sqrt(svd.singular_values.tail(svd.singular_values.size() - s).squaredNorm());
      // Relative to the tail, with a floor at the rounding level of q itself.
      const double recon = std::abs(err - tail) / (tail + 64 * 2.2e-16 * q.norm() / 1e-9);
      const double orth = (svd.basis.transpose() * svd.basis - Matrix::Identity(s, s)).cwiseAbs().maxCoeff();
      const double spectrum = (svd.singular_values - reference).cwiseAbs().maxCoeff() / reference(0);
      worst_recon = std::max(worst_recon, recon);
      worst_orth = std::max(worst_orth, orth);
      worst_spectrum = std::max(worst_spectrum, spectrum);
      good = good && recon <= 1e-9 && orth <= 1e-8 && spectrum <= 1e-9;
    }
    if (good) ++ok;
  }
  report(ok == instances, name,
         std::to_string(ok) + "/500 instances on auto, direct and gram routes; max relative tail mismatch " +
             sci(worst_recon) + " (tol 1e-9), max orthonormality error " + sci(worst_orth) +
             " (tol 1e-8), max spectrum deviation from eigen oracle " + sci(worst_spectrum) + " (x sigma_1)");
}

struct SuiteInput {
  std::string name;
  EmbeddingMatrix q;
};

std::vector<SuiteInput> adversarial_suite(std::uint64_t seed) {
  std::vector<SuiteInput> out;
  out.push_back({"constant", synthetic::constant_video(100, 64, seed)});
  out.push_back({"2-scene", synthetic::scene_stream({50, 50}, 64, 0.05, seed).embeddings});
  out.push_back({"5-scene-skewed", synthetic::scene_stream({80, 5, 5, 5, 5}, 64, 0.05, seed).embeddings});
  out.push_back({"noise", synthetic::gaussian(100, 64, seed)});
  return out;
}

void cardinality_and_coverage(const std::string& name) {
  long runs = 0;
  long violations = 0;
  std::string first_violation;
  struct Budget {
    Index lo, hi, chunks;
  };
  const std::vector<Budget> budgets = {{1, 16, 8}, {4, 10, 5}, {1, 64, 32}, {5, 5, 5}};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    for (const SuiteInput& input : adversarial_suite(seed)) {
      for (Mode mode : {Mode::Fast, Mode::Slow, Mode::Chunked}) {
        for (const Budget& b : budgets) {
          MaxInfoConfig cfg;
          cfg.mode = mode;
          cfg.min_out = b.lo;
          cfg.max_out = b.hi;
          cfg.pool = input.q.rows();
          cfg.chunks = b.chunks;
          const SelectionReport r = select(input.q, cfg);
          const auto k = static_cast<Index>(r.selected_indices.size());
          bool ok = k >= b.lo && k <= b.hi && std::is_sorted(r.selected_indices.begin(), r.selected_indices.end());
          if (mode == Mode::Chunked) {
            for (const auto& [begin, end] : chunk_bounds(input.q.rows(), b.chunks)) {
              ok = ok && std::any_of(r.selected_indices.begin(), r.selected_indices.end(),
                                     [&](Index i) { return i >= begin && i < end; });
            }
          }
          ++runs;
          if (!ok) {
            ++violations;
            if (first_violation.empty()) {
              first_violation = "; first: " + input.name + " " + to_string(mode) + " seed " + std::to_string(seed);
            }
          }
        }
      }
    }
  }
  report(violations == 0, name,
         std::to_string(violations) + " violations in " + std::to_string(runs) +
             " runs (constant, 2-scene, 5-scene 80/5/5/5/5, noise; fast, slow, chunked; 100 seeds)" +
             first_violation);
}

void diversity(const std::string& name) {
  int covered = 0;
  int uniform_covered = 0;
  int lower = 0;
  double ours_total = 0.0;
  double uniform_total = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto stream = synthetic::scene_stream({80, 5, 5, 5, 5}, 64, 0.05, seed);
    MaxInfoConfig cfg;
    cfg.max_out = 5;
    const std::vector<Index> ours = select_fast(stream.embeddings, cfg).selected_indices;
    const std::vector<Index> base = uniform_sample(stream.embeddings.rows(), static_cast<Index>(ours.size()));
    auto clusters = [&](const std::vector<Index>& idx) {
      std::set<Index> seen;
      for (Index i : idx) seen.insert(stream.labels[static_cast<std::size_t>(i)]);
      return seen.size();
    };
    if (clusters(ours) >= 4) ++covered;
    if (clusters(base) >= 4) ++uniform_covered;
    const double a = compute_metrics(stream.embeddings, ours, std::nullopt).mean_neighbor_cosine.value_or(0.0);
    const double b = compute_metrics(stream.embeddings, base, std::nullopt).mean_neighbor_cosine.value_or(0.0);
    ours_total += a;
    uniform_total += b;
    if (a <= b) ++lower;
  }
  report(covered >= 95 && ours_total <= uniform_total && covered >= uniform_covered, name,
         "mean neighbor cosine " + fmt(ours_total / 100, 4) + " vs uniform " + fmt(uniform_total / 100, 4) +
             " (lower in " + std::to_string(lower) + "/100 seeds); >= 4 clusters in " + std::to_string(covered) +
             "/100 seeds (need 95), uniform " + std::to_string(uniform_covered) + "/100");
}

void relevance(const std::string& name) {
  int at_least = 0;
  int strictly = 0;
  int answer_hit = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = synthetic::relevance_stream(128, 64, 8, 0.8, 0.2, 4, 0.05, seed);
    const std::vector<Index> ours = select_fast(s.embeddings, MaxInfoConfig{}).selected_indices;
    const std::vector<Index> base = uniform_sample(128, static_cast<Index>(ours.size()));
    const double a = clip_score(s.embeddings, ours, s.query);
    const double b = clip_score(s.embeddings, base, s.query);
    // Scores are means of exact 0.8 / 0.2 cosines; equal selections of answer
    // frames tie up to summation order.
    if (a >= b - 1e-12) ++at_least;
    if (a > b + 1e-12) ++strictly;
    if (std::any_of(ours.begin(), ours.end(), [&](Index i) {
          return std::binary_search(s.answer_rows.begin(), s.answer_rows.end(), i);
        })) {
      ++answer_hit;
    }
  }
  report(at_least >= 90, name,
         "clip_score >= uniform in " + std::to_string(at_least) + "/100 seeds (need 90); strictly higher in " +
             std::to_string(strictly) + "/100; selection contains an answer frame in " +
             std::to_string(answer_hit) + "/100");
}

double median_select_ms(const EmbeddingMatrix& q, const MaxInfoConfig& cfg, int reps) {
  std::vector<double> times;
  select(q, cfg);  // warm-up
  for (int r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    const SelectionReport report = select(q, cfg);
    times.push_back(1000.0 * seconds_since(start));
  }
  return median(times);
}

void latency(const std::string& name) {
  const int reps = 21;
  MaxInfoConfig fast;
  const double big = median_select_ms(synthetic::gaussian(512, 768, 1), fast, reps);
  const double small = median_select_ms(synthetic::gaussian(128, 768, 2), fast, reps);
  MaxInfoConfig chunked;
  chunked.mode = Mode::Chunked;
  chunked.chunks = 32;
  const double chunks = median_select_ms(synthetic::gaussian(32 * 32, 768, 3), chunked, reps);
  report(big <= 55.0 && small <= 25.0 && chunks <= 200.0, name,
         "median SVD + MaxVol over " + std::to_string(reps) + " runs: 512x768 " + fmt(big, 2) +
             " ms (limit 55), 128x768 " + fmt(small, 2) + " ms (limit 25), chunked 32 chunks x 32 frames x 768 " +
             fmt(chunks, 2) + " ms (limit 200)");
}

int run_binary(const std::string& args) {
  const std::string command = std::string(MAXINFO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void determinism(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("maxinfo_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string input = (dir / "q.mxif").string();
  write_embeddings(synthetic::scene_stream({60, 30, 20, 18}, 96, 0.05, 17).embeddings, input);
  int identical = 0;
  int total = 0;
  for (const char* mode : {"fast", "slow", "chunked"}) {
    const std::string flags = std::string("select --embeddings ") + input + " --mode " + mode +
                              " --max 24 --chunks 8 --canonical --out ";
    std::ostringstream sink;
    std::ostringstream err;
    const std::string a = (dir / "a.json").string();
    const std::string b = (dir / "b.json").string();
    const std::string c = (dir / "c.json").string();
    const int ra = cli::run({"select", "--embeddings", input, "--mode", mode, "--max", "24", "--chunks", "8",
                             "--canonical", "--out", a},
                            sink, err);
    const int rb = cli::run({"select", "--embeddings", input, "--mode", mode, "--max", "24", "--chunks", "8",
                             "--canonical", "--out", b},
                            sink, err);
    const int rc = run_binary(flags + c);
    total += 2;
    if (ra == 0 && rb == 0 && read_text(a) == read_text(b)) ++identical;
    if (ra == 0 && rc == 0 && read_text(a) == read_text(c)) ++identical;
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  report(identical == total, name,
         std::to_string(identical) + "/" + std::to_string(total) +
             " report pairs byte-identical (in-process and binary runs, fast/slow/chunked)");
}

}  // namespace

int main() {
  criterion("volume-update recursion", volume_recursion);
  criterion("square MaxVol dominance", square_dominance);
  criterion("greedy vs brute force", greedy_vs_brute_force);
  criterion("SVD contract", svd_contract);
  criterion("pipeline cardinality and chunk coverage", cardinality_and_coverage);
  criterion("diversity", diversity);
  criterion("relevance", relevance);
  criterion("latency", latency);
  criterion("determinism", determinism);
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
