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

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "svtlab/audit.h"
#include "svtlab/errors.h"

namespace svtlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double LapPdf(double x, double b) { return std::exp(-std::fabs(x) / b) / (2 * b); }
double LapCdf(double x, double b) {
  return x <= 0 ? 0.5 * std::exp(x / b) : 1 - 0.5 * std::exp(-x / b);
}

// Plain midpoint rule on a wide uniform grid, no log space, no adaptivity.
double MidpointProbability(double rho_b, double nu_b,
                           const std::vector<double>& d,
                           const std::vector<Answer>& pattern) {
  const double lo = -60 * rho_b, hi = 60 * rho_b;
  const int n = 400000;
  const double h = (hi - lo) / n;
  double sum = 0;
  for (int k = 0; k < n; ++k) {
    const double z = lo + (k + 0.5) * h;
    double f = LapPdf(z, rho_b);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      const double F = LapCdf(z - d[i], nu_b);
      f *= pattern[i].kind == AnswerKind::kBelow ? F : 1 - F;
    }
    sum += f;
  }
  return sum * h;
}

NeighborInstance Make(std::vector<double> d, std::vector<double> dp,
                      std::vector<Answer> pattern) {
  NeighborInstance inst;
  inst.id = "t";
  inst.scores_d = std::move(d);
  inst.scores_d_prime = std::move(dp);
  inst.pattern = std::move(pattern);
  return inst;
}

const Answer B = Answer::Below();
const Answer A = Answer::Above();

TEST(QuadratureTest, Alg5TwoQueryInstance) {
  for (double eps : {0.5, 1.0, 2.0}) {
    const auto cx = MakeCounterexample(CounterexampleId::kAlg5TwoQuery, 0, eps);
    const double p = std::exp(LogProbQuadrature(cx.config, cx.instance, Side::kD));
    EXPECT_NEAR(p, 0.5 * (1 - std::exp(-eps / 2)), 1e-10);
    EXPECT_EQ(LogProbQuadrature(cx.config, cx.instance, Side::kDPrime), -kInf);
  }
}

TEST(QuadratureTest, EmptyPatternHasProbabilityOne) {
  const auto inst = Make({}, {}, {});
  EXPECT_EQ(LogProbQuadrature(SvtConfig::Fixed(Variant::kAlg1, 1, 1), inst,
                              Side::kD),
            0.0);
}

TEST(QuadratureTest, AgreesWithMidpointOracle) {
  Rng pick(31);
  for (int trial = 0; trial < 30; ++trial) {
    const Variant v = trial % 3 == 0   ? Variant::kAlg1
                      : trial % 3 == 1 ? Variant::kAlg4
                                       : Variant::kAlg6;
    const std::size_t len = 1 + pick.Below(4);
    const auto config = SvtConfig::Fixed(v, 0.5 + pick.Uniform(), 2);
    std::vector<double> q(len), qp(len);
    for (std::size_t i = 0; i < len; ++i) {
      q[i] = pick.Uniform() * 4 - 2;
      qp[i] = q[i] + (pick.Uniform() * 2 - 1);
    }
    const auto patterns = EnumeratePatterns(config, len);
    auto pattern = patterns[pick.Below(patterns.size())];
    const auto inst = Make(q, qp, pattern);
    const auto s = ComputeNoiseScales(config, 1.0);
    const double oracle = MidpointProbability(s.threshold, s.query, q, pattern);
    const double got = std::exp(LogProbQuadrature(config, inst, Side::kD));
    EXPECT_NEAR(got, oracle, 1e-7 + 1e-6 * oracle) << "trial " << trial;
  }
}

TEST(QuadratureTest, NonAbortingPatternsSumToOne) {
  for (Variant v : {Variant::kAlg5, Variant::kAlg6}) {
    for (std::size_t len = 1; len <= 4; ++len) {
      const auto config = SvtConfig::Fixed(v, 1.0, 1);
      std::vector<double> q(len);
      for (std::size_t i = 0; i < len; ++i) q[i] = 0.7 * i - 1.0;
      double total = 0;
      for (const auto& p : EnumeratePatterns(config, len)) {
        total += std::exp(LogProbQuadrature(config, Make(q, q, p), Side::kD));
      }
      EXPECT_NEAR(total, 1.0, 1e-6) << VariantName(v) << " len " << len;
    }
  }
}

TEST(QuadratureTest, AbortingPatternsSumToOne) {
  const auto config = SvtConfig::Fixed(Variant::kAlg1, 1.0, 2);
  const std::vector<double> q = {0.5, -1.0, 2.0, 0.0};
  double total = 0;
  for (const auto& p : EnumeratePatterns(config, q.size())) {
    total += std::exp(LogProbQuadrature(config, Make(q, q, p), Side::kD));
  }
  EXPECT_NEAR(total, 1.0, 1e-6);
}

TEST(QuadratureTest, Alg3ClosedForm) {
  for (double eps : {0.5, 1.0}) {
    for (std::size_t m : {1, 2, 5, 8}) {
      const auto cx = MakeCounterexample(CounterexampleId::kAlg3NumericRelease, m, eps);
      const auto r = AuditQuadrature(cx.config, cx.instance, eps);
      EXPECT_NEAR(r.log_ratio, (m - 1.0) * eps / 2, 1e-6);
      EXPECT_EQ(r.ci_halfwidth, 0.0);
    }
  }
  const auto five = MakeCounterexample(CounterexampleId::kAlg3NumericRelease, 5, 1.0);
  EXPECT_DOUBLE_EQ(five.expected_log_ratio, 2.0);
}

TEST(QuadratureTest, Alg2IsRejected) {
  const auto inst = Make({0}, {1}, {B});
  EXPECT_THROW(LogProbQuadrature(SvtConfig::Fixed(Variant::kAlg2, 1, 1), inst,
                                 Side::kD),
               UnsupportedVariant);
}

TEST(QuadratureTest, Alg7NumericDensityFactor) {
  // One query, pattern N(a): density of a - q under Lap(c/eps3) times the
  // probability of the positive.
  const auto config = SvtConfig::Standard({0.25, 0.5, 0.25}, 1, false);
  const auto s = ComputeNoiseScales(config, 1.0);
  const auto above = Make({0.3}, {0.3}, {A});
  const auto numeric = Make({0.3}, {0.3}, {Answer::Numeric(1.0)});
  const double lp_above = LogProbQuadrature(config, above, Side::kD);
  const double lp_num = LogProbQuadrature(config, numeric, Side::kD);
  EXPECT_NEAR(lp_num - lp_above, std::log(LapPdf(0.7, *s.numeric)), 1e-9);
}

TEST(PatternTest, AbortStructureEnforced) {
  const auto c1 = SvtConfig::Fixed(Variant::kAlg1, 1, 1);
  EXPECT_NO_THROW(ValidatePattern(c1, {B, A}, 3));
  EXPECT_NO_THROW(ValidatePattern(c1, {B, B, B}, 3));
  EXPECT_THROW(ValidatePattern(c1, {A, B}, 3), InvalidPattern);
  EXPECT_THROW(ValidatePattern(c1, {B, B}, 3), InvalidPattern);
  EXPECT_THROW(ValidatePattern(c1, {B, B, B, B}, 3), InvalidPattern);
  const auto a5 = SvtConfig::Fixed(Variant::kAlg5, 1, 1);
  EXPECT_NO_THROW(ValidatePattern(a5, {A, A, B}, 3));
  EXPECT_THROW(ValidatePattern(a5, {A}, 3), InvalidPattern);
}

TEST(PatternTest, NumericOnlyWhereReleased) {
  const Answer n = Answer::Numeric(0.0);
  EXPECT_THROW(ValidatePattern(SvtConfig::Fixed(Variant::kAlg1, 1, 1), {n}, 1),
               InvalidPattern);
  EXPECT_NO_THROW(
      ValidatePattern(SvtConfig::Fixed(Variant::kAlg3, 1, 1), {n}, 1));
  EXPECT_THROW(ValidatePattern(SvtConfig::Standard({0.5, 0.5, 0}, 1, false),
                               {n}, 1),
               InvalidPattern);
  EXPECT_NO_THROW(ValidatePattern(
      SvtConfig::Standard({0.4, 0.4, 0.2}, 1, false), {n}, 1));
}

TEST(InstanceTest, NeighbourPromiseChecked) {
  EXPECT_THROW(ValidateInstance(Make({0}, {2}, {B})), InvalidArgument);
  EXPECT_THROW(ValidateInstance(Make({0, 1}, {0}, {B})), InvalidArgument);
  EXPECT_NO_THROW(ValidateInstance(Make({0}, {1}, {B})));
}

TEST(EnumerateTest, Counts) {
  // c = 1, length 3: A, BA, BBA, BBB.
  EXPECT_EQ(EnumeratePatterns(SvtConfig::Fixed(Variant::kAlg1, 1, 1), 3).size(),
            4u);
  EXPECT_EQ(EnumeratePatterns(SvtConfig::Fixed(Variant::kAlg6, 1, 1), 4).size(),
            16u);
  // c = 2, length 3: AA, ABA, BAA, ABB, BAB, BBA, BBB.
  EXPECT_EQ(EnumeratePatterns(SvtConfig::Fixed(Variant::kAlg1, 1, 2), 3).size(),
            7u);
  EXPECT_THROW(EnumeratePatterns(SvtConfig::Fixed(Variant::kAlg1, 1, 2), 7),
               InvalidArgument);
}

TEST(FamilyTest, SizeAndNeighbourhood) {
  const auto fam = AdversarialFamily(3);
  EXPECT_EQ(fam.size(), 3u + 9u + 27u);
  for (const auto& inst : fam) EXPECT_NO_THROW(ValidateInstance(inst));
}

TEST(ReportTest, VerdictRules) {
  AuditReport r;
  r.log_prob_d = -1.0;
  r.log_prob_d_prime = -kInf;
  r.claimed_bound = 1.0;
  FinalizeReport(r);
  EXPECT_EQ(r.verdict, Verdict::kUnbounded);
  EXPECT_EQ(r.log_ratio, kInf);

  r.log_prob_d = -1.0;
  r.log_prob_d_prime = -2.0 - 5e-7;
  FinalizeReport(r);
  EXPECT_EQ(r.verdict, Verdict::kWithinBound);

  r.log_prob_d_prime = -2.1;
  FinalizeReport(r);
  EXPECT_EQ(r.verdict, Verdict::kViolatesBound);

  r.claimed_bound.reset();
  FinalizeReport(r);
  EXPECT_EQ(r.verdict, Verdict::kNoClaim);

  r.log_prob_d = r.log_prob_d_prime = -kInf;
  FinalizeReport(r);
  EXPECT_EQ(r.log_ratio, 0.0);
}

TEST(ReportTest, CsvRow) {
  const auto cx = MakeCounterexample(CounterexampleId::kAlg5TwoQuery, 0, 1.0);
  const auto r = AuditQuadrature(cx.config, cx.instance, 1.0);
  EXPECT_EQ(AuditCsvHeader(),
            "variant,instance_id,m,method,log_prob_d,log_prob_dprime,"
            "log_ratio,ci,verdict");
  const std::string row = AuditCsvRow(r);
  EXPECT_EQ(row.rfind("alg5,thm2,2,quadrature,", 0), 0u);
  EXPECT_NE(row.find(",-inf,inf,0,Unbounded"), std::string::npos);
}

TEST(MonteCarloTest, Alg5TwoQueryBothSides) {
  const auto cx = MakeCounterexample(CounterexampleId::kAlg5TwoQuery, 0, 1.0);
  Rng rng(17);
  const auto d = ProbMonteCarlo(cx.config, cx.instance, Side::kD, 1000000, rng);
  const double truth = 0.5 * (1 - std::exp(-0.5));
  EXPECT_NEAR(d.probability, truth, 3 * d.sigma());
  const auto dp =
      ProbMonteCarlo(cx.config, cx.instance, Side::kDPrime, 1000000, rng);
  EXPECT_EQ(dp.hits, 0u);
  EXPECT_EQ(dp.probability, 0.0);
  EXPECT_EQ(dp.log_probability(), -kInf);
  EXPECT_DOUBLE_EQ(dp.ci_halfwidth, 3e-6);
}

TEST(MonteCarloTest, IdenticalSidesAgree) {
  const auto inst = Make({0.2}, {0.2}, {B});
  const auto config = SvtConfig::Fixed(Variant::kAlg1, 1, 1);
  Rng rng(3);
  const auto d = ProbMonteCarlo(config, inst, Side::kD, 200000, rng);
  const auto dp = ProbMonteCarlo(config, inst, Side::kDPrime, 200000, rng);
  EXPECT_NEAR(d.probability, dp.probability,
              3 * std::hypot(d.sigma(), dp.sigma()));
}

TEST(MonteCarloTest, Alg2AgainstSymmetricOracle) {
  // Single query, c = 1: the re-draw comes after the output is fixed, so
  // Pr[A] = Pr[q + nu >= rho] for independent Laplace draws.
  const auto inst = Make({0.5}, {0.5}, {A});
  Rng rng(8);
  const auto mc = ProbMonteCarlo(SvtConfig::Fixed(Variant::kAlg2, 1, 1), inst,
                                 Side::kD, 400000, rng);
  const auto s = ComputeNoiseScales(SvtConfig::Fixed(Variant::kAlg2, 1, 1), 1);
  const double oracle = MidpointProbability(s.threshold, s.query, {0.5}, {A});
  EXPECT_NEAR(mc.probability, oracle, 4 * mc.sigma());
}

TEST(MonteCarloTest, TooFewSamplesRejected) {
  Rng rng(1);
  EXPECT_THROW(ProbMonteCarlo(SvtConfig::Fixed(Variant::kAlg1, 1, 1),
                              Make({0}, {0}, {B}), Side::kD, 10, rng),
               InvalidArgument);
}

TEST(CounterexampleTest, Constructions) {
  const auto a3 = MakeCounterexample(CounterexampleId::kAlg3NumericRelease, 3, 1.0);
  EXPECT_EQ(a3.instance.scores_d, (std::vector<double>{0, 0, 0, 1}));
  EXPECT_EQ(a3.instance.scores_d_prime, (std::vector<double>{1, 1, 1, 0}));
  EXPECT_EQ(PatternString(a3.instance.pattern), "BBBN");
  EXPECT_EQ(a3.config.cutoff, 1u);

  const auto a6 = MakeCounterexample(CounterexampleId::kAlg6ThresholdReuse, 2, 1.0);
  EXPECT_EQ(a6.instance.scores_d_prime, (std::vector<double>{1, 1, -1, -1}));
  EXPECT_EQ(PatternString(a6.instance.pattern), "BBAA");
  EXPECT_TRUE(a6.lower_bound);

  EXPECT_EQ(ParseCounterexample("appendixA1"), CounterexampleId::kAlg3NumericRelease);
  EXPECT_EQ(ParseCounterexample("thm2"), CounterexampleId::kAlg5TwoQuery);
  EXPECT_EQ(ParseCounterexample("alg6"), CounterexampleId::kAlg6ThresholdReuse);
  EXPECT_THROW(ParseCounterexample("nope"), InvalidArgument);
}

TEST(CounterexampleTest, Alg6ExceedsBound) {
  const auto rows =
      RatioGrowthCurve(CounterexampleId::kAlg6ThresholdReuse, {2, 4}, 1.0);
  EXPECT_GE(rows[0].measured_log_ratio, 1.0 - 1e-6);
  EXPECT_GE(rows[1].measured_log_ratio, 2.0 - 1e-6);
  EXPECT_EQ(rows[1].report.verdict, Verdict::kViolatesBound);
}

TEST(CounterexampleTest, Alg3GrowthCurve) {
  const auto rows =
      RatioGrowthCurve(CounterexampleId::kAlg3NumericRelease, {1, 2, 4, 8}, 1.0);
  const double want[] = {0.0, 0.5, 1.5, 3.5};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(rows[i].measured_log_ratio, want[i], 1e-6);
  }
}

TEST(VerifyTest, Alg1HoldsOnSmallFamily) {
  const auto config = SvtConfig::Fixed(Variant::kAlg1, 1.0, 1);
  const auto s =
      VerifyDpBound(config, ExpandPatterns(config, AdversarialFamily(3)), 1.0);
  EXPECT_EQ(s.verdict, Verdict::kWithinBound);
  EXPECT_EQ(s.violations, 0u);
  EXPECT_LE(std::fabs(s.worst.log_ratio), 1.0 + 1e-6);
  EXPECT_EQ(s.reports.size(), s.audited);
}

TEST(VerifyTest, Alg5IsUnbounded) {
  const auto cx = MakeCounterexample(CounterexampleId::kAlg5TwoQuery, 0, 1.0);
  const auto s = VerifyDpBound(cx.config, {cx.instance}, 1.0);
  EXPECT_EQ(s.verdict, Verdict::kUnbounded);
}

}  // namespace
}  // namespace svtlab
