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

#include "svtlab/audit.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "svtlab/errors.h"
#include "svtlab/format.h"
#include "svtlab/laplace.h"
#include "svtlab/quadrature.h"

namespace svtlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailLogMass = 40.0;
constexpr double kQuadratureTol = 1e-12;
constexpr int kScanPointsPerPiece = 64;

const std::vector<double>& SideScores(const NeighborInstance& inst,
                                      Side side) {
  return side == Side::kD ? inst.scores_d : inst.scores_d_prime;
}

bool NumericAllowed(const SvtConfig& config) {
  if (config.variant == Variant::kAlg3) return true;
  return config.variant == Variant::kAlg7 && config.split &&
         config.split->eps3 > 0.0;
}

// Log of the pattern's integrand at threshold-noise value z, split into a
// z-dependent part evaluated per point and z-independent density factors.
class PatternIntegrand {
 public:
  PatternIntegrand(const SvtConfig& config, const NeighborInstance& inst,
                   Side side)
      : scales_(ComputeNoiseScales(config, inst.delta)),
        rho_(scales_.threshold) {
    const std::vector<double>& q = SideScores(inst, side);
    const bool alg3 = config.variant == Variant::kAlg3;
    const bool noiseless = scales_.query == 0.0;
    for (std::size_t i = 0; i < inst.pattern.size(); ++i) {
      const Answer& a = inst.pattern[i];
      const double d = q[i] - inst.ThresholdAt(i);
      breakpoints_.push_back(d);
      if (a.kind == AnswerKind::kBelow) {
        // d + nu < z
        if (noiseless) {
          lower_ = std::max(lower_, d);
        } else {
          below_.push_back(d);
        }
      } else if (a.kind == AnswerKind::kNumeric && alg3) {
        // Released value a = q + nu pins nu, leaving the indicator z <= a - T.
        constant_ += LaplaceDist(scales_.query).LogPdf(a.value - q[i]);
        const double bound = a.value - inst.ThresholdAt(i);
        upper_ = std::min(upper_, bound);
        breakpoints_.push_back(bound);
      } else {
        if (a.kind == AnswerKind::kNumeric) {
          constant_ += LaplaceDist(*scales_.numeric).LogPdf(a.value - q[i]);
        }
        if (noiseless) {
          upper_ = std::min(upper_, d);
        } else {
          above_.push_back(d);
        }
      }
    }
  }

  double LogValue(double z) const {
    double s = rho_.LogPdf(z);
    if (below_.empty() && above_.empty()) return s;
    const LaplaceDist nu(scales_.query);
    for (double d : below_) s += nu.LogCdf(z - d);
    for (double d : above_) s += nu.LogSurvival(z - d);
    return s;
  }

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double constant() const { return constant_; }
  double rho_scale() const { return scales_.threshold; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }

 private:
  NoiseScales scales_;
  LaplaceDist rho_;
  std::vector<double> below_;
  std::vector<double> above_;
  std::vector<double> breakpoints_;
  double lower_ = -kInf;
  double upper_ = kInf;
  double constant_ = 0.0;
};

// log of the integral of exp(f.LogValue) over [-half_width, half_width]
// intersected with the indicator bounds; -inf if the support is empty.
double IntegrateLog(const PatternIntegrand& f, double half_width) {
  const double lo = std::max(-half_width, f.lower());
  const double hi = std::min(half_width, f.upper());
  if (!(hi > lo)) return -kInf;

  std::vector<double> cuts = {lo, hi, 0.0};
  for (double b : f.breakpoints()) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> edges;
  for (double c : cuts) {
    if (c >= lo && c <= hi) edges.push_back(c);
  }

  double shift = -kInf;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double step = (edges[p + 1] - edges[p]) / kScanPointsPerPiece;
    for (int k = 0; k <= kScanPointsPerPiece; ++k) {
      shift = std::max(shift, f.LogValue(edges[p] + k * step));
    }
  }
  if (shift == -kInf) return -kInf;

  auto g = [&f, shift](double z) { return std::exp(f.LogValue(z) - shift); };
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    total += AdaptiveSimpson(g, edges[p], edges[p + 1], kQuadratureTol).value;
  }
  if (!(total > 0.0)) return -kInf;
  return shift + std::log(total);
}

void CheckThresholds(const NeighborInstance& inst) {
  if (inst.thresholds.size() != 1 &&
      inst.thresholds.size() != inst.length()) {
    throw InvalidArgument("instance '" + inst.id + "' needs 1 or " +
                          std::to_string(inst.length()) + " thresholds");
  }
}

double WilsonHalfWidth(std::size_t hits, std::size_t n) {
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  return z / (1.0 + z2 / nn) *
         std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
}

bool Matches(const Answer& want, const Answer& got, double h) {
  switch (want.kind) {
    case AnswerKind::kBelow:
      return got.kind == AnswerKind::kBelow;
    case AnswerKind::kAbove:
      return got.positive();
    case AnswerKind::kNumeric:
      return got.kind == AnswerKind::kNumeric &&
             std::fabs(got.value - want.value) <= h;
  }
  return false;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return out;
}

void AppendPatterns(const SvtConfig& config, std::size_t length,
                    std::vector<Answer>& prefix, std::size_t positives,
                    std::vector<std::vector<Answer>>& out) {
  const bool aborts = Aborts(config.variant);
  if (aborts && positives == config.cutoff) {
    out.push_back(prefix);
    return;
  }
  if (prefix.size() == length) {
    out.push_back(prefix);
    return;
  }
  prefix.push_back(Answer::Below());
  AppendPatterns(config, length, prefix, positives, out);
  prefix.back() = Answer::Above();
  AppendPatterns(config, length, prefix, positives + 1, out);
  prefix.pop_back();
}

}  // namespace

void ValidateInstance(const NeighborInstance& inst) {
  if (!(inst.delta > 0.0) || !std::isfinite(inst.delta)) {
    throw InvalidArgument("instance sensitivity must be finite and positive");
  }
  if (inst.scores_d.size() != inst.scores_d_prime.size()) {
    throw InvalidArgument("instance '" + inst.id +
                          "': D and D' score vectors differ in length");
  }
  for (std::size_t i = 0; i < inst.length(); ++i) {
    const double a = inst.scores_d[i];
    const double b = inst.scores_d_prime[i];
    if (!std::isfinite(a) || !std::isfinite(b)) {
      throw InvalidArgument("instance scores must be finite");
    }
    if (std::fabs(a - b) > inst.delta * (1.0 + 1e-12)) {
      throw InvalidArgument("instance '" + inst.id + "': query " +
                            std::to_string(i) +
                            " moves by more than the sensitivity");
    }
  }
  CheckThresholds(inst);
}

void ValidatePattern(const SvtConfig& config,
                     const std::vector<Answer>& pattern,
                     std::size_t stream_length) {
  if (pattern.size() > stream_length) {
    throw InvalidPattern("pattern has " + std::to_string(pattern.size()) +
                         " entries for " + std::to_string(stream_length) +
                         " queries");
  }
  std::size_t positives = 0;
  for (const Answer& a : pattern) {
    if (a.kind == AnswerKind::kNumeric) {
      if (!NumericAllowed(config)) {
        throw InvalidPattern(std::string(VariantName(config.variant)) +
                             " never releases numeric answers here");
      }
      if (!std::isfinite(a.value)) {
        throw InvalidPattern("numeric pattern values must be finite");
      }
    }
    if (a.positive()) ++positives;
  }
  if (!Aborts(config.variant)) {
    if (pattern.size() != stream_length) {
      throw InvalidPattern(std::string(VariantName(config.variant)) +
                           " answers every query; pattern is incomplete");
    }
    return;
  }
  if (positives > config.cutoff) {
    throw InvalidPattern("pattern has more positives than the cutoff");
  }
  if (positives == config.cutoff) {
    if (!pattern.back().positive()) {
      throw InvalidPattern(
          "pattern continues after the mechanism has aborted");
    }
  } else if (pattern.size() != stream_length) {
    throw InvalidPattern(
        "pattern stops before the stream ends without reaching the cutoff");
  }
}

std::string_view MethodName(AuditMethod m) {
  return m == AuditMethod::kQuadrature ? "quadrature" : "montecarlo";
}

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kWithinBound: return "WithinBound";
    case Verdict::kViolatesBound: return "ViolatesBound";
    case Verdict::kUnbounded: return "Unbounded";
    case Verdict::kNoClaim: return "NoClaim";
  }
  return "unknown";
}

double LogProbQuadrature(const SvtConfig& config, const NeighborInstance& inst,
                         Side side) {
  ValidateConfig(config);
  if (config.variant == Variant::kAlg2) {
    throw UnsupportedVariant(
        "alg2 re-draws its threshold after each positive; use montecarlo");
  }
  ValidateInstance(inst);
  ValidatePattern(config, inst.pattern, inst.length());
  if (inst.pattern.empty()) return 0.0;

  const PatternIntegrand f(config, inst, side);
  const double b = f.rho_scale();
  double log_p = IntegrateLog(f, b * kTailLogMass);
  // The truncated tail is at most exp(-L/b); widen until it is negligible
  // next to the integral itself.
  if (std::isfinite(log_p) && log_p < 0.0) {
    log_p = IntegrateLog(f, b * (kTailLogMass - log_p));
  }
  return log_p + f.constant();
}

double McEstimate::log_probability() const {
  return probability > 0.0 ? std::log(probability) : -kInf;
}

McEstimate ProbMonteCarlo(const SvtConfig& config, const NeighborInstance& inst,
                          Side side, std::size_t samples, Rng& rng) {
  if (samples < kMinMonteCarloSamples) {
    throw InvalidArgument("monte carlo needs at least " +
                          std::to_string(kMinMonteCarloSamples) + " samples");
  }
  ValidateConfig(config);
  ValidateInstance(inst);
  ValidatePattern(config, inst.pattern, inst.length());

  SvtConfig run_config = config;
  run_config.thresholds = inst.thresholds;
  const NoiseScales scales = ComputeNoiseScales(run_config, inst.delta);
  const double numeric_scale =
      config.variant == Variant::kAlg3 ? scales.query
                                       : scales.numeric.value_or(0.0);
  const double h = 0.01 * numeric_scale;
  const auto numeric_count = static_cast<int>(
      std::count_if(inst.pattern.begin(), inst.pattern.end(),
                    [](const Answer& a) {
                      return a.kind == AnswerKind::kNumeric;
                    }));

  const std::vector<double>& q = SideScores(inst, side);
  McEstimate est;
  est.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    SvtSession session(run_config, inst.delta, rng);
    bool match = true;
    for (std::size_t i = 0; i < inst.pattern.size(); ++i) {
      const Answer got = session.Feed(q[i], inst.ThresholdAt(i), rng);
      if (!Matches(inst.pattern[i], got, h)) {
        match = false;
        break;
      }
    }
    if (match) ++est.hits;
  }

  const double volume = std::pow(2.0 * h, numeric_count);
  est.probability =
      static_cast<double>(est.hits) / static_cast<double>(samples) / volume;
  est.ci_halfwidth = est.hits == 0
                         ? 3.0 / static_cast<double>(samples) / volume
                         : WilsonHalfWidth(est.hits, samples) / volume;
  return est;
}

void FinalizeReport(AuditReport& report) {
  const bool zero_d = report.log_prob_d == -kInf;
  const bool zero_dp = report.log_prob_d_prime == -kInf;
  if (zero_d && zero_dp) {
    report.log_ratio = 0.0;
  } else if (zero_d || zero_dp) {
    report.log_ratio = zero_dp ? kInf : -kInf;
    report.verdict = Verdict::kUnbounded;
    return;
  } else {
    report.log_ratio = report.log_prob_d - report.log_prob_d_prime;
  }
  if (!report.claimed_bound) {
    report.verdict = Verdict::kNoClaim;
  } else if (std::fabs(report.log_ratio) <=
             *report.claimed_bound + kBoundTolerance) {
    report.verdict = Verdict::kWithinBound;
  } else {
    report.verdict = Verdict::kViolatesBound;
  }
}

namespace {

AuditReport BlankReport(const SvtConfig& config, const NeighborInstance& inst,
                        AuditMethod method, std::optional<double> claim) {
  AuditReport r;
  r.variant = std::string(VariantName(config.variant));
  r.instance_id = inst.id;
  r.m = inst.length();
  r.method = method;
  r.claimed_bound = claim;
  r.pattern = PatternString(inst.pattern);
  return r;
}

}  // namespace

AuditReport AuditQuadrature(const SvtConfig& config,
                            const NeighborInstance& inst,
                            std::optional<double> claimed_bound) {
  AuditReport r =
      BlankReport(config, inst, AuditMethod::kQuadrature, claimed_bound);
  r.log_prob_d = LogProbQuadrature(config, inst, Side::kD);
  r.log_prob_d_prime = LogProbQuadrature(config, inst, Side::kDPrime);
  FinalizeReport(r);
  return r;
}

AuditReport AuditMonteCarlo(const SvtConfig& config,
                            const NeighborInstance& inst, std::size_t samples,
                            Rng& rng, std::optional<double> claimed_bound) {
  AuditReport r =
      BlankReport(config, inst, AuditMethod::kMonteCarlo, claimed_bound);
  const McEstimate d = ProbMonteCarlo(config, inst, Side::kD, samples, rng);
  const McEstimate dp =
      ProbMonteCarlo(config, inst, Side::kDPrime, samples, rng);
  r.log_prob_d = d.log_probability();
  r.log_prob_d_prime = dp.log_probability();
  r.ci_halfwidth = std::max(d.ci_halfwidth, dp.ci_halfwidth);
  FinalizeReport(r);
  return r;
}

std::string_view CounterexampleName(CounterexampleId id) {
  switch (id) {
    case CounterexampleId::kAlg3NumericRelease: return "appendixA1";
    case CounterexampleId::kAlg5TwoQuery: return "thm2";
    case CounterexampleId::kAlg6ThresholdReuse: return "appendixA2";
  }
  return "unknown";
}

CounterexampleId ParseCounterexample(std::string_view name) {
  const std::string s = Lower(name);
  if (s == "appendixa1" || s == "alg3") return CounterexampleId::kAlg3NumericRelease;
  if (s == "thm2" || s == "alg5") return CounterexampleId::kAlg5TwoQuery;
  if (s == "appendixa2" || s == "alg6") return CounterexampleId::kAlg6ThresholdReuse;
  throw InvalidArgument("unknown counterexample '" + std::string(name) + "'");
}

Counterexample MakeCounterexample(CounterexampleId id, std::size_t m,
                                  double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("epsilon must be finite and positive");
  }
  if (m == 0 && id != CounterexampleId::kAlg5TwoQuery) {
    throw InvalidArgument("counterexample size m must be at least 1");
  }
  Counterexample cx;
  NeighborInstance& inst = cx.instance;
  inst.delta = 1.0;
  inst.thresholds = {0.0};
  switch (id) {
    case CounterexampleId::kAlg3NumericRelease:
      cx.config = SvtConfig::Fixed(Variant::kAlg3, epsilon, 1);
      inst.scores_d.assign(m, 0.0);
      inst.scores_d.push_back(1.0);
      inst.scores_d_prime.assign(m, 1.0);
      inst.scores_d_prime.push_back(0.0);
      inst.pattern.assign(m, Answer::Below());
      inst.pattern.push_back(Answer::Numeric(0.0));
      cx.expected_log_ratio = (static_cast<double>(m) - 1.0) * epsilon / 2.0;
      break;
    case CounterexampleId::kAlg5TwoQuery:
      cx.config = SvtConfig::Fixed(Variant::kAlg5, epsilon, 1);
      inst.scores_d = {0.0, 1.0};
      inst.scores_d_prime = {1.0, 0.0};
      inst.pattern = {Answer::Below(), Answer::Above()};
      cx.expected_log_ratio = kInf;
      break;
    case CounterexampleId::kAlg6ThresholdReuse:
      cx.config = SvtConfig::Fixed(Variant::kAlg6, epsilon, 1);
      inst.scores_d.assign(2 * m, 0.0);
      inst.scores_d_prime.assign(m, 1.0);
      inst.scores_d_prime.insert(inst.scores_d_prime.end(), m, -1.0);
      inst.pattern.assign(m, Answer::Below());
      inst.pattern.insert(inst.pattern.end(), m, Answer::Above());
      cx.expected_log_ratio = static_cast<double>(m) * epsilon / 2.0;
      cx.lower_bound = true;
      break;
  }
  inst.id = std::string(CounterexampleName(id)) + "-m" + std::to_string(m);
  if (id == CounterexampleId::kAlg5TwoQuery) inst.id = "thm2";
  return cx;
}

std::vector<std::vector<Answer>> EnumeratePatterns(const SvtConfig& config,
                                                   std::size_t length) {
  if (length > kMaxEnumeratedLength) {
    throw InvalidArgument("pattern enumeration is limited to length " +
                          std::to_string(kMaxEnumeratedLength));
  }
  ValidateConfig(config);
  std::vector<std::vector<Answer>> out;
  std::vector<Answer> prefix;
  AppendPatterns(config, length, prefix, 0, out);
  return out;
}

std::vector<NeighborInstance> AdversarialFamily(std::size_t max_length,
                                                double delta) {
  if (max_length > kMaxEnumeratedLength) {
    throw InvalidArgument("adversarial family is limited to length " +
                          std::to_string(kMaxEnumeratedLength));
  }
  const double steps[3] = {-delta, 0.0, delta};
  const char marks[3] = {'-', '0', '+'};
  std::vector<NeighborInstance> family;
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::size_t combos = 1;
    for (std::size_t i = 0; i < len; ++i) combos *= 3;
    for (std::size_t code = 0; code < combos; ++code) {
      NeighborInstance inst;
      inst.delta = delta;
      inst.scores_d.assign(len, 0.0);
      std::string tag;
      std::size_t rest = code;
      for (std::size_t i = 0; i < len; ++i) {
        inst.scores_d_prime.push_back(steps[rest % 3]);
        tag.push_back(marks[rest % 3]);
        rest /= 3;
      }
      inst.id = "adv" + std::to_string(len) + ":" + tag;
      family.push_back(std::move(inst));
    }
  }
  return family;
}

std::vector<NeighborInstance> ExpandPatterns(
    const SvtConfig& config, const std::vector<NeighborInstance>& instances) {
  std::vector<NeighborInstance> out;
  for (const NeighborInstance& inst : instances) {
    for (auto& pattern : EnumeratePatterns(config, inst.length())) {
      NeighborInstance copy = inst;
      copy.pattern = std::move(pattern);
      copy.id = inst.id + "/" + PatternString(copy.pattern);
      out.push_back(std::move(copy));
    }
  }
  return out;
}

BoundSummary VerifyDpBound(const SvtConfig& config,
                           const std::vector<NeighborInstance>& instances,
                           double eps_claim) {
  if (instances.empty()) throw InvalidArgument("no instances to audit");
  BoundSummary summary;
  bool have_worst = false;
  for (const NeighborInstance& inst : instances) {
    AuditReport r = AuditQuadrature(config, inst, eps_claim);
    ++summary.audited;
    if (r.verdict == Verdict::kUnbounded) {
      summary.verdict = Verdict::kUnbounded;
      ++summary.violations;
    } else if (r.verdict == Verdict::kViolatesBound) {
      if (summary.verdict != Verdict::kUnbounded) {
        summary.verdict = Verdict::kViolatesBound;
      }
      ++summary.violations;
    }
    if (!have_worst ||
        std::fabs(r.log_ratio) > std::fabs(summary.worst.log_ratio)) {
      summary.worst = r;
      have_worst = true;
    }
    summary.reports.push_back(std::move(r));
  }
  return summary;
}

std::vector<GrowthRow> RatioGrowthCurve(CounterexampleId id,
                                        const std::vector<std::size_t>& ms,
                                        double epsilon) {
  std::vector<GrowthRow> rows;
  for (std::size_t m : ms) {
    const Counterexample cx = MakeCounterexample(id, m, epsilon);
    GrowthRow row;
    row.m = m;
    row.report = AuditQuadrature(cx.config, cx.instance, epsilon);
    row.report.m = m;
    row.measured_log_ratio = row.report.log_ratio;
    row.expected_log_ratio = cx.expected_log_ratio;
    row.lower_bound = cx.lower_bound;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string AuditCsvHeader() {
  return "variant,instance_id,m,method,log_prob_d,log_prob_dprime,log_ratio,"
         "ci,verdict";
}

std::string AuditCsvRow(const AuditReport& r) {
  std::ostringstream os;
  os << r.variant << ',' << r.instance_id << ',' << r.m << ','
     << MethodName(r.method) << ',' << FormatDouble(r.log_prob_d) << ','
     << FormatDouble(r.log_prob_d_prime) << ',' << FormatDouble(r.log_ratio)
     << ',' << FormatDouble(r.ci_halfwidth) << ',' << VerdictName(r.verdict);
  return os.str();
}

}  // namespace svtlab
