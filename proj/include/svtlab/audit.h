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

#ifndef SVTLAB_AUDIT_H_
#define SVTLAB_AUDIT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svtlab/random.h"
#include "svtlab/svt.h"

namespace svtlab {

// A neighbouring pair abstracted to per-query answers on D and D', together
// with the output pattern whose probability is being compared.
//
// Pattern entries: Below, Above (positive, released value marginalised), or
// Numeric(a) (positive whose released value equals a; contributes a density).
struct NeighborInstance {
  std::string id;
  std::vector<double> scores_d;
  std::vector<double> scores_d_prime;
  double delta = 1.0;
  // Single entry broadcasts.
  std::vector<double> thresholds = {0.0};
  std::vector<Answer> pattern;

  std::size_t length() const { return scores_d.size(); }
  double ThresholdAt(std::size_t i) const {
    return thresholds.size() == 1 ? thresholds.front() : thresholds.at(i);
  }
};

// Throws InvalidArgument if lengths differ or |q_i(D) - q_i(D')| > delta.
void ValidateInstance(const NeighborInstance& inst);

// Throws InvalidPattern unless `pattern` is a complete output the variant can
// emit on a stream of `stream_length` queries: aborting variants either end
// on their c-th positive or answer the whole stream with fewer positives;
// non-aborting variants answer the whole stream. Numeric entries are only
// accepted for Alg3 and for Alg7 with eps3 > 0.
void ValidatePattern(const SvtConfig& config,
                     const std::vector<Answer>& pattern,
                     std::size_t stream_length);

enum class Side { kD, kDPrime };
enum class AuditMethod { kQuadrature, kMonteCarlo };
enum class Verdict { kWithinBound, kViolatesBound, kUnbounded, kNoClaim };

std::string_view MethodName(AuditMethod m);
std::string_view VerdictName(Verdict v);

// Absolute slack allowed on a claimed log-ratio bound.
inline constexpr double kBoundTolerance = 1e-6;

// log Pr[A(side) = pattern] as a one-dimensional integral over the threshold
// noise. Densities replace probabilities for Numeric entries. Returns -inf
// for impossible patterns. Throws UnsupportedVariant for Alg2, whose
// threshold is re-drawn.
double LogProbQuadrature(const SvtConfig& config, const NeighborInstance& inst,
                         Side side);

struct McEstimate {
  // Matched fraction divided by (2h)^k for k Numeric entries.
  double probability = 0.0;
  // 95% Wilson half-width in the same units; 3/n (rule of three) when no
  // run matched.
  double ci_halfwidth = 0.0;
  std::size_t hits = 0;
  std::size_t samples = 0;

  double log_probability() const;
  // One standard error implied by the half-width.
  double sigma() const { return ci_halfwidth / 1.959963984540054; }
};

inline constexpr std::size_t kMinMonteCarloSamples = 1000;

// Runs the full mechanism `samples` times and counts outputs matching the
// pattern. A Numeric(a) entry matches a released value within
// h = 0.01 * (scale of the noise on that value).
McEstimate ProbMonteCarlo(const SvtConfig& config, const NeighborInstance& inst,
                          Side side, std::size_t samples, Rng& rng);

struct AuditReport {
  std::string variant;
  std::string instance_id;
  std::size_t m = 0;
  AuditMethod method = AuditMethod::kQuadrature;
  double log_prob_d = 0.0;
  double log_prob_d_prime = 0.0;
  double log_ratio = 0.0;
  double ci_halfwidth = 0.0;
  std::optional<double> claimed_bound;
  Verdict verdict = Verdict::kNoClaim;
  std::string pattern;
};

// Applies the verdict rules: Unbounded when exactly one side has probability
// zero, otherwise |log_ratio| against claim + kBoundTolerance.
void FinalizeReport(AuditReport& report);

AuditReport AuditQuadrature(const SvtConfig& config,
                            const NeighborInstance& inst,
                            std::optional<double> claimed_bound = {});
AuditReport AuditMonteCarlo(const SvtConfig& config,
                            const NeighborInstance& inst, std::size_t samples,
                            Rng& rng, std::optional<double> claimed_bound = {});

enum class CounterexampleId { kAlg3NumericRelease, kAlg5TwoQuery, kAlg6ThresholdReuse };

std::string_view CounterexampleName(CounterexampleId id);
// Accepts "appendixA1"/"alg3", "thm2"/"alg5", "appendixA2"/"alg6".
CounterexampleId ParseCounterexample(std::string_view name);

struct Counterexample {
  NeighborInstance instance;
  SvtConfig config;
  // +inf for a zero-probability denominator.
  double expected_log_ratio = 0.0;
  // When set, expected_log_ratio is only a lower bound.
  bool lower_bound = false;
};

// Constructions that break the claimed bounds, with delta = 1 and T = 0:
//   Alg3: q(D) = 0^m 1, q(D') = 1^m 0, pattern B^m N(0), c = 1,
//         log-ratio (m-1) eps/2 exactly.
//   Alg5: q(D) = (0,1), q(D') = (1,0), pattern B A; D' probability is zero.
//   Alg6: q(D) = 0^(2m), q(D') = 1^m (-1)^m, pattern B^m A^m,
//         log-ratio >= m eps/2.
Counterexample MakeCounterexample(CounterexampleId id, std::size_t m,
                                  double epsilon);

inline constexpr std::size_t kMaxEnumeratedLength = 6;

// Every complete Below/Above output of the variant on a stream of `length`
// queries. Throws InvalidArgument above kMaxEnumeratedLength.
std::vector<std::vector<Answer>> EnumeratePatterns(const SvtConfig& config,
                                                   std::size_t length);

// q(D) = 0^l against every q(D') in {-delta, 0, +delta}^l, for
// l = 1..max_length. Patterns are left empty.
std::vector<NeighborInstance> AdversarialFamily(std::size_t max_length,
                                                double delta = 1.0);

// One instance per (instance, complete pattern) pair.
std::vector<NeighborInstance> ExpandPatterns(
    const SvtConfig& config, const std::vector<NeighborInstance>& instances);

struct BoundSummary {
  AuditReport worst;
  std::size_t audited = 0;
  std::size_t violations = 0;
  Verdict verdict = Verdict::kWithinBound;
  // Every report, in instance order.
  std::vector<AuditReport> reports;
};

// Quadrature audit of every instance (each must carry its pattern);
// reports the largest |log-ratio| against eps_claim.
BoundSummary VerifyDpBound(const SvtConfig& config,
                           const std::vector<NeighborInstance>& instances,
                           double eps_claim);

struct GrowthRow {
  std::size_t m = 0;
  double measured_log_ratio = 0.0;
  double expected_log_ratio = 0.0;
  bool lower_bound = false;
  AuditReport report;
};

std::vector<GrowthRow> RatioGrowthCurve(CounterexampleId id,
                                        const std::vector<std::size_t>& ms,
                                        double epsilon);

std::string AuditCsvHeader();
std::string AuditCsvRow(const AuditReport& report);

}  // namespace svtlab

#endif  // SVTLAB_AUDIT_H_
