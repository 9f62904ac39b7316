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

#ifndef SVTLAB_SVT_H_
#define SVTLAB_SVT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svtlab/budget.h"
#include "svtlab/query_set.h"
#include "svtlab/random.h"

namespace svtlab {

// The six published SVT variants plus the generalized three-budget SVT.
//   kAlg1  proposed instantiation: rho ~ Lap(D/e1), nu ~ Lap(2cD/e2)
//   kAlg2  textbook SVT: rho ~ Lap(cD/e1), re-drawn after every positive
//   kAlg3  lecture-notes SVT: releases q_i + nu_i for positives
//   kAlg4  e1 = e/4, nu ~ Lap(D/e2)
//   kAlg5  no query noise, no cutoff
//   kAlg6  nu ~ Lap(D/e2), no cutoff; a free (e1, e2) split makes it GPTT
//   kAlg7  generalized SVT with (e1, e2, e3); monotonic halves nu
// Alg3, Alg5 and Alg6 are not private; they exist as audit subjects.
enum class Variant { kAlg1, kAlg2, kAlg3, kAlg4, kAlg5, kAlg6, kAlg7 };

std::string_view VariantName(Variant v);
// Accepts "alg1".."alg7" (case-insensitive) and "gptt" for kAlg6.
Variant ParseVariant(std::string_view name);

// Whether the variant stops after `cutoff` positives.
bool Aborts(Variant v);

struct SvtConfig {
  Variant variant = Variant::kAlg1;
  // Total budget. Fixed-split variants divide it internally.
  double epsilon = 1.0;
  // Required for kAlg7, optional for kAlg6 (GPTT), rejected elsewhere.
  std::optional<BudgetSplit> split;
  // Ignored by kAlg5/kAlg6.
  std::size_t cutoff = 1;
  // Per-query thresholds; a single entry is broadcast to every query.
  std::vector<double> thresholds = {0.0};
  // Only meaningful for kAlg7.
  bool monotonic = false;

  static SvtConfig Fixed(Variant v, double epsilon, std::size_t cutoff,
                         std::vector<double> thresholds = {0.0});
  static SvtConfig Standard(BudgetSplit split, std::size_t cutoff,
                            bool monotonic,
                            std::vector<double> thresholds = {0.0});
  static SvtConfig Gptt(double eps1, double eps2,
                        std::vector<double> thresholds = {0.0});

  double ThresholdAt(std::size_t i) const {
    return thresholds.size() == 1 ? thresholds.front() : thresholds.at(i);
  }
};

// Throws InvalidArgument/UnsupportedCombination on an inconsistent config.
void ValidateConfig(const SvtConfig& config);

// The split a config actually runs with.
BudgetSplit ResolvedSplit(const SvtConfig& config);

struct NoiseScales {
  double threshold = 0.0;
  // 0 means no query noise (Alg5).
  double query = 0.0;
  // Laplace scale of released numeric answers (Alg7 with eps3 > 0).
  std::optional<double> numeric;
  // Scale of the threshold re-draw after a positive (Alg2 only).
  std::optional<double> redraw;
};

NoiseScales ComputeNoiseScales(const SvtConfig& config, double delta);

enum class AnswerKind { kBelow, kAbove, kNumeric };

struct Answer {
  AnswerKind kind = AnswerKind::kBelow;
  double value = 0.0;

  static Answer Below() { return {AnswerKind::kBelow, 0.0}; }
  static Answer Above() { return {AnswerKind::kAbove, 0.0}; }
  static Answer Numeric(double v) { return {AnswerKind::kNumeric, v}; }

  bool positive() const { return kind != AnswerKind::kBelow; }
  friend bool operator==(const Answer&, const Answer&) = default;
};

struct OutcomeVector {
  std::vector<Answer> answers;
  std::optional<std::size_t> abort_index;

  std::size_t positives() const;
  friend bool operator==(const OutcomeVector&, const OutcomeVector&) = default;
};

// Compact rendering: 'B' below, 'A' above, 'N' numeric.
std::string PatternString(const std::vector<Answer>& answers);

// One-query-at-a-time SVT. Draws the threshold noise on construction; every
// Feed draws that query's comparison noise from the same stream. Feeding the
// queries of a QuerySet in order with the same stream state reproduces
// RunSvt exactly. Single owner; not thread-safe.
class SvtSession {
 public:
  SvtSession(SvtConfig config, double sensitivity, Rng& rng);

  // Throws SessionClosed once the cutoff has been reached.
  Answer Feed(double true_answer, double threshold, Rng& rng);
  // Uses the configured threshold for the next query index.
  Answer Feed(double true_answer, Rng& rng);

  bool aborted() const { return aborted_; }
  std::size_t positives() const { return positives_; }
  std::size_t answered() const { return answered_; }
  double noisy_threshold() const { return rho_; }
  const NoiseScales& scales() const { return scales_; }
  const SvtConfig& config() const { return config_; }

 private:
  SvtConfig config_;
  NoiseScales scales_;
  double rho_ = 0.0;
  std::size_t positives_ = 0;
  std::size_t answered_ = 0;
  bool aborted_ = false;
};

SvtSession OpenSession(const SvtConfig& config, double sensitivity, Rng& rng);

// Runs the configured variant over every query of `qs`, stopping at abort.
OutcomeVector RunSvt(const SvtConfig& config, const QuerySet& qs, Rng& rng);

struct RetraversalResult {
  std::vector<std::size_t> chosen_indices;
  int passes = 0;
  bool hit_pass_limit = false;
};

inline constexpr int kMaxRetraversalPasses = 1000;

// Alg7 over the query list repeatedly: thresholds are raised by
// boost_sigmas * sqrt(2) * query_scale, the noisy threshold is drawn once,
// and each pass re-tests the not-yet-selected queries with fresh comparison
// noise until `cutoff` are selected. Stops early if a whole pass selects
// nothing, and after kMaxRetraversalPasses in any case.
RetraversalResult RunSvtRetraversal(const SvtConfig& config,
                                    const QuerySet& qs, double boost_sigmas,
                                    Rng& rng);

// |estimate - true_answer|: the derived query for checking whether an answer
// reconstructed from history is accurate. Feed it to a standard session so
// comparison noise is added outside the absolute value.
inline double AbsoluteErrorScore(double estimate, double true_answer) {
  return estimate > true_answer ? estimate - true_answer
                                : true_answer - estimate;
}

}  // namespace svtlab

#endif  // SVTLAB_SVT_H_
