// Copyright 2026 The svtlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SVTLAB_BENCH_H_
#define SVTLAB_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "svtlab/format.h"

namespace svtlab {

struct Item {
  std::string id;
  double score = 0.0;
};

// Item support counts; the score distribution a top-c selection runs over.
struct ItemHistogram {
  std::vector<Item> items;

  std::size_t size() const { return items.size(); }
  double Total() const;
};

// One transaction per line, whitespace-separated item ids. An item counts
// once per transaction; blank lines are skipped. Throws DataError on an
// unreadable file or a corpus with no items.
ItemHistogram IngestTransactions(std::istream& in);
ItemHistogram IngestTransactions(const std::filesystem::path& path);

// `item,count` with a header row.
ItemHistogram ReadHistogramCsv(std::istream& in);
ItemHistogram ReadHistogramCsv(const std::filesystem::path& path);
void WriteHistogramCsv(std::ostream& out, const ItemHistogram& hist);

// n_records draws from p_i proportional to 1/i over n_items ranks. Ids are
// zero-padded ranks ("item0001", ...), so id order equals rank order.
ItemHistogram GenZipf(std::size_t n_items, std::size_t n_records,
                      std::uint64_t seed);

struct TopC {
  // Histogram indices, best first.
  std::vector<std::size_t> indices;
  // Midpoint of the c-th and (c+1)-th scores.
  double threshold = 0.0;
};

// Ranks by descending score, ties by ascending id. Throws InvalidCutoff
// unless 1 <= c < number of items.
TopC TrueTopC(const ItemHistogram& hist, std::size_t c);

// Fraction of the true top-c missed by `selected`.
double ScoreFnr(const std::vector<std::size_t>& selected,
                const std::vector<std::size_t>& top_c);

// 1 - avgScore(selected) / avgScore(top_c). Throws UndefinedMetric on an
// empty selection. Can go negative when fewer than c items were selected.
double ScoreSer(const std::vector<std::size_t>& selected,
                const std::vector<std::size_t>& top_c,
                const ItemHistogram& hist);

// SER with unfilled slots scoring zero: 1 - sum(selected) / sum(top_c).
// Equals ScoreSer when |selected| = c and stays within [0, 1] otherwise.
double ScoreSerCountMatched(const std::vector<std::size_t>& selected,
                            const std::vector<std::size_t>& top_c,
                            const ItemHistogram& hist);

enum class MethodKind { kSvtDpBook, kSvtS, kSvtReTr, kEm };

// One term of a budget ratio string: coefficient * c^power.
struct RatioTerm {
  std::string token;
  double coefficient = 1.0;
  double power = 0.0;

  double Evaluate(std::size_t c) const;
};

// Accepts a positive number, "c", "c23" (c^(2/3)) or "2c23" ((2c)^(2/3)).
RatioTerm ParseRatioTerm(std::string_view token);

struct BenchMethod {
  MethodKind kind = MethodKind::kEm;
  RatioTerm threshold_part;
  RatioTerm query_part;
  double boost_sigmas = 0.0;

  // Canonical flag spelling, e.g. "svt-retr:1:c23:3D".
  std::string Name() const;
  // eps2 / eps1 at cutoff c.
  double Ratio(std::size_t c) const;
};

// Grammar: "em" | "svt-dpbook" | "svt-s:<r1>:<r2>" |
// "svt-retr:<r1>:<r2>:<k>D". Throws InvalidArgument.
BenchMethod ParseMethod(std::string_view spec);

struct BenchPlan {
  BenchMethod method;
  std::size_t c = 1;
  double epsilon = 0.1;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
};

struct TrialResult {
  std::size_t trial = 0;
  std::size_t selected_count = 0;
  double fnr = 0.0;
  // Count-matched SER; NaN when nothing was selected.
  double ser = 0.0;
};

struct BenchResult {
  BenchPlan plan;
  std::vector<TrialResult> trials;
  double mean_ser = 0.0;
  double std_ser = 0.0;
  double mean_fnr = 0.0;
  double std_fnr = 0.0;
  // Trials with an empty selection, excluded from the SER statistics.
  std::size_t undefined_ser = 0;
};

// Each trial shuffles the items with its own stream (derived from the plan
// seed and trial index), treats counts as monotonic sensitivity-1 queries
// with the midpoint threshold, and runs the plan's method.
BenchResult RunBench(const BenchPlan& plan, const ItemHistogram& hist);

void WriteTrialsCsvHeader(std::ostream& out);
void WriteTrialsCsvRows(std::ostream& out, const BenchResult& result);
void WriteSummaryCsvHeader(std::ostream& out);
void WriteSummaryCsvRow(std::ostream& out, const BenchResult& result);

}  // namespace svtlab

#endif  // SVTLAB_BENCH_H_
