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
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "svtlab/errors.h"
#include "svtlab/laplace.h"
#include "svtlab/svt.h"

namespace svtlab {
namespace {

TEST(VariantTest, ParseRoundTrips) {
  for (Variant v : {Variant::kAlg1, Variant::kAlg2, Variant::kAlg3,
                    Variant::kAlg4, Variant::kAlg5, Variant::kAlg6,
                    Variant::kAlg7}) {
    EXPECT_EQ(ParseVariant(VariantName(v)), v);
  }
  EXPECT_EQ(ParseVariant("GPTT"), Variant::kAlg6);
  EXPECT_EQ(ParseVariant("Alg3"), Variant::kAlg3);
  EXPECT_THROW(ParseVariant("alg8"), InvalidArgument);
}

TEST(NoiseScalesTest, TableValues) {
  const double e = 1.0;
  const std::size_t c = 3;
  auto scales = [&](Variant v) {
    return ComputeNoiseScales(SvtConfig::Fixed(v, e, c), 1.0);
  };
  // eps1 = eps2 = 1/2 unless noted.
  EXPECT_DOUBLE_EQ(scales(Variant::kAlg1).threshold, 2.0);
  EXPECT_DOUBLE_EQ(scales(Variant::kAlg1).query, 12.0);
  EXPECT_DOUBLE_EQ(scales(Variant::kAlg2).threshold, 6.0);
  EXPECT_DOUBLE_EQ(scales(Variant::kAlg2).query, 12.0);
  EXPECT_DOUBLE_EQ(*scales(Variant::kAlg2).redraw, 6.0);
  EXPECT_DOUBLE_EQ(scales(Variant::kAlg3).threshold, 2.0);
  EXPECT_DOUBLE_EQ(scales(Variant::kAlg3).query, 6.0);
  EXPECT_DOUBLE_EQ(scales(Variant::kAlg4).threshold, 4.0);
  EXPECT_DOUBLE_EQ(scales(Variant::kAlg4).query, 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(scales(Variant::kAlg5).threshold, 2.0);
  EXPECT_EQ(scales(Variant::kAlg5).query, 0.0);
  EXPECT_DOUBLE_EQ(scales(Variant::kAlg6).threshold, 2.0);
  EXPECT_DOUBLE_EQ(scales(Variant::kAlg6).query, 2.0);
  EXPECT_FALSE(scales(Variant::kAlg1).numeric);
  EXPECT_FALSE(scales(Variant::kAlg1).redraw);
}

TEST(NoiseScalesTest, Alg1UnitExample) {
  const auto s = ComputeNoiseScales(SvtConfig::Fixed(Variant::kAlg1, 1, 1), 1);
  EXPECT_DOUBLE_EQ(s.threshold, 2.0);
  EXPECT_DOUBLE_EQ(s.query, 4.0);
}

TEST(NoiseScalesTest, Alg7MonotonicHalvesQueryNoise) {
  const auto general = ComputeNoiseScales(
      SvtConfig::Standard({0.5, 0.5, 0.0}, 2, false), 1.0);
  const auto mono = ComputeNoiseScales(
      SvtConfig::Standard({0.5, 0.5, 0.0}, 2, true), 1.0);
  EXPECT_DOUBLE_EQ(general.query, 8.0);
  EXPECT_DOUBLE_EQ(mono.query, 4.0);
  EXPECT_FALSE(mono.numeric);
  const auto numeric = ComputeNoiseScales(
      SvtConfig::Standard({0.25, 0.5, 0.25}, 2, false), 1.0);
  EXPECT_DOUBLE_EQ(*numeric.numeric, 8.0);
}

TEST(NoiseScalesTest, GpttUsesItsOwnSplit) {
  const auto s = ComputeNoiseScales(SvtConfig::Gptt(0.2, 0.8), 2.0);
  EXPECT_DOUBLE_EQ(s.threshold, 10.0);
  EXPECT_DOUBLE_EQ(s.query, 2.5);
}

TEST(ConfigTest, RejectsInconsistentFlags) {
  SvtConfig mono = SvtConfig::Fixed(Variant::kAlg1, 1, 1);
  mono.monotonic = true;
  EXPECT_THROW(ValidateConfig(mono), UnsupportedCombination);

  SvtConfig alg7 = SvtConfig::Fixed(Variant::kAlg7, 1, 1);
  EXPECT_THROW(ValidateConfig(alg7), InvalidArgument);

  SvtConfig bad_total = SvtConfig::Standard({0.5, 0.5, 0.0}, 1, false);
  bad_total.epsilon = 1.5;
  EXPECT_THROW(ValidateConfig(bad_total), InvalidArgument);

  SvtConfig split_on_alg1 = SvtConfig::Fixed(Variant::kAlg1, 1, 1);
  split_on_alg1.split = BudgetSplit{0.5, 0.5, 0.0};
  EXPECT_THROW(ValidateConfig(split_on_alg1), UnsupportedCombination);

  EXPECT_THROW(ValidateConfig(SvtConfig::Fixed(Variant::kAlg1, 1, 0)),
               InvalidCutoff);
  EXPECT_NO_THROW(ValidateConfig(SvtConfig::Fixed(Variant::kAlg5, 1, 0)));
}

TEST(RunSvtTest, EmptyStreamGivesEmptyOutcome) {
  Rng rng(1);
  const auto out =
      RunSvt(SvtConfig::Fixed(Variant::kAlg1, 1, 1), QuerySet({}, 1), rng);
  EXPECT_TRUE(out.answers.empty());
  EXPECT_FALSE(out.abort_index);
}

TEST(RunSvtTest, OverwhelmingMarginAbortsImmediately) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto out = RunSvt(SvtConfig::Fixed(Variant::kAlg1, 1, 1),
                            QuerySet({1e9, 1e9}, 1), rng);
    ASSERT_EQ(out.answers.size(), 1u);
    EXPECT_EQ(out.answers[0], Answer::Above());
    EXPECT_EQ(out.abort_index, 0u);
  }
}

TEST(RunSvtTest, Alg5FarBelowNeverFires) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto out = RunSvt(SvtConfig::Fixed(Variant::kAlg5, 1, 1),
                            QuerySet({-1e9, -1e9, -1e9}, 1), rng);
    ASSERT_EQ(out.answers.size(), 3u);
    for (const auto& a : out.answers) EXPECT_EQ(a, Answer::Below());
    EXPECT_FALSE(out.abort_index);
  }
}

TEST(RunSvtTest, AbortStructureOverManySeeds) {
  const QuerySet qs({0.3, -0.2, 0.9, 0.1}, 1.0);
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    Rng rng(seed);
    const auto out = RunSvt(SvtConfig::Fixed(Variant::kAlg1, 1, 2), qs, rng);
    ASSERT_LE(out.positives(), 2u);
    ASSERT_LE(out.answers.size(), 4u);
    if (out.abort_index) {
      ASSERT_EQ(out.positives(), 2u);
      ASSERT_EQ(*out.abort_index + 1, out.answers.size());
      ASSERT_TRUE(out.answers.back().positive());
    } else {
      ASSERT_EQ(out.answers.size(), 4u);
    }
  }
}

TEST(RunSvtTest, CutoffRespectedForAbortingVariants) {
  Rng pick(77);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> scores(8);
    for (double& s : scores) s = pick.Uniform() * 4 - 2;
    const std::size_t c = 1 + pick.Below(3);
    for (Variant v : {Variant::kAlg1, Variant::kAlg2, Variant::kAlg3,
                      Variant::kAlg4}) {
      Rng rng(trial);
      const auto out = RunSvt(SvtConfig::Fixed(v, 1.0, c), QuerySet(scores, 1),
                              rng);
      ASSERT_LE(out.positives(), c);
    }
    for (Variant v : {Variant::kAlg5, Variant::kAlg6}) {
      Rng rng(trial);
      const auto out = RunSvt(SvtConfig::Fixed(v, 1.0, c), QuerySet(scores, 1),
                              rng);
      ASSERT_EQ(out.answers.size(), scores.size());
    }
  }
}

TEST(RunSvtTest, Alg3ReleasesNoisyValue) {
  Rng rng(4);
  const auto out = RunSvt(SvtConfig::Fixed(Variant::kAlg3, 1, 1),
                          QuerySet({1e9}, 1), rng);
  ASSERT_EQ(out.answers.size(), 1u);
  EXPECT_EQ(out.answers[0].kind, AnswerKind::kNumeric);
  EXPECT_NEAR(out.answers[0].value, 1e9, 1e3);
  EXPECT_NE(out.answers[0].value, 1e9);
}

TEST(RunSvtTest, Alg3ValueUsesSameNoiseAsComparison) {
  // Replays the draws: rho first, then nu for the single query.
  Rng rng(12), replay(12);
  const auto config = SvtConfig::Fixed(Variant::kAlg3, 1, 1);
  const auto scales = ComputeNoiseScales(config, 1);
  const double rho = LaplaceDist(scales.threshold).Sample(replay);
  const double nu = LaplaceDist(scales.query).Sample(replay);
  const double q = rho - nu + 0.5;
  const auto out = RunSvt(config, QuerySet({q}, 1), rng);
  ASSERT_EQ(out.answers[0].kind, AnswerKind::kNumeric);
  EXPECT_DOUBLE_EQ(out.answers[0].value, q + nu);
}

TEST(RunSvtTest, Alg7Eps3ZeroMatchesAlg1) {
  Rng pick(8);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> scores(6);
    for (double& s : scores) s = pick.Uniform() * 10 - 5;
    Rng a(trial), b(trial);
    const auto alg1 =
        RunSvt(SvtConfig::Fixed(Variant::kAlg1, 1.0, 2), QuerySet(scores, 1), a);
    const auto alg7 = RunSvt(SvtConfig::Standard({0.5, 0.5, 0.0}, 2, false),
                             QuerySet(scores, 1), b);
    ASSERT_EQ(alg1, alg7);
  }
}

TEST(RunSvtTest, ThresholdShiftEquivalence) {
  Rng pick(21);
  for (Variant v : {Variant::kAlg1, Variant::kAlg2, Variant::kAlg3,
                    Variant::kAlg4, Variant::kAlg5, Variant::kAlg6}) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> q(5), t(5), shifted(5);
      for (int i = 0; i < 5; ++i) {
        q[i] = pick.Uniform() * 6 - 3;
        t[i] = pick.Uniform() * 2 - 1;
        shifted[i] = q[i] - t[i];
      }
      Rng a(trial), b(trial);
      const auto with_t =
          RunSvt(SvtConfig::Fixed(v, 1.0, 2, t), QuerySet(q, 1), a);
      const auto zero =
          RunSvt(SvtConfig::Fixed(v, 1.0, 2, {0.0}), QuerySet(shifted, 1), b);
      ASSERT_EQ(with_t.answers.size(), zero.answers.size());
      for (std::size_t i = 0; i < zero.answers.size(); ++i) {
        ASSERT_EQ(with_t.answers[i].kind, zero.answers[i].kind);
      }
    }
  }
}

TEST(RunSvtTest, ThresholdLengthChecked) {
  Rng rng(1);
  EXPECT_THROW(RunSvt(SvtConfig::Fixed(Variant::kAlg1, 1, 1, {0, 0}),
                      QuerySet({1, 2, 3}, 1), rng),
               InvalidArgument);
}

TEST(SessionTest, StreamEqualsBatch) {
  const std::vector<double> scores = {0.4, -1.0, 2.0, 0.0, 1.5, -0.3};
  for (Variant v : {Variant::kAlg1, Variant::kAlg2, Variant::kAlg4,
                    Variant::kAlg6}) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto config = SvtConfig::Fixed(v, 1.0, 2);
      Rng a(seed), b(seed);
      const auto batch = RunSvt(config, QuerySet(scores, 1), a);
      SvtSession session = OpenSession(config, 1.0, b);
      std::vector<Answer> streamed;
      for (double s : scores) {
        if (session.aborted()) break;
        streamed.push_back(session.Feed(s, b));
      }
      ASSERT_EQ(batch.answers, streamed);
    }
  }
}

TEST(SessionTest, FeedAfterAbortThrows) {
  Rng rng(3);
  SvtSession s(SvtConfig::Fixed(Variant::kAlg1, 1, 1), 1.0, rng);
  EXPECT_EQ(s.Feed(1e9, rng), Answer::Above());
  EXPECT_TRUE(s.aborted());
  EXPECT_THROW(s.Feed(0.0, rng), SessionClosed);
}

TEST(SessionTest, Alg2RedrawsThreshold) {
  Rng rng(5);
  SvtSession s(SvtConfig::Fixed(Variant::kAlg2, 1, 3), 1.0, rng);
  const double before = s.noisy_threshold();
  ASSERT_EQ(s.Feed(1e9, rng), Answer::Above());
  EXPECT_NE(s.noisy_threshold(), before);
  EXPECT_EQ(s.positives(), 1u);
  EXPECT_FALSE(s.aborted());
}

TEST(SessionTest, Alg1KeepsThreshold) {
  Rng rng(5);
  SvtSession s(SvtConfig::Fixed(Variant::kAlg1, 1, 3), 1.0, rng);
  const double before = s.noisy_threshold();
  s.Feed(1e9, rng);
  EXPECT_EQ(s.noisy_threshold(), before);
}

TEST(RetraversalTest, CertainPositivesTakeStreamOrder) {
  std::vector<double> scores(20, 1e9);
  Rng rng(1);
  const auto r = RunSvtRetraversal(
      SvtConfig::Standard({0.05, 0.05, 0.0}, 5, true), QuerySet(scores, 1), 0,
      rng);
  EXPECT_EQ(r.chosen_indices, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(r.passes, 1);
}

TEST(RetraversalTest, ExhaustsWhenCutoffEqualsStream) {
  std::vector<double> scores = {0, 1, 2, 3, 4, 5, 6, 7};
  for (double boost : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) {
    Rng rng(static_cast<std::uint64_t>(boost));
    const auto r = RunSvtRetraversal(
        SvtConfig::Standard({0.5, 0.5, 0.0}, 8, false, {-1e6}),
        QuerySet(scores, 1), boost, rng);
    std::set<std::size_t> got(r.chosen_indices.begin(), r.chosen_indices.end());
    EXPECT_EQ(got.size(), 8u);
  }
}

TEST(RetraversalTest, LaterPassesPickUpMissedQueries) {
  // Margins comparable to the noise: some queries miss on the first pass
  // and are re-tested with fresh noise.
  std::vector<double> scores(40, 0.0);
  int multi_pass = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto r = RunSvtRetraversal(
        SvtConfig::Standard({0.5, 0.5, 0.0}, 20, true), QuerySet(scores, 1),
        0.0, rng);
    EXPECT_LE(r.chosen_indices.size(), 20u);
    if (r.passes > 1) ++multi_pass;
  }
  EXPECT_GT(multi_pass, 0);
}

TEST(RetraversalTest, UnreachableThresholdTerminates) {
  std::vector<double> scores(50, 0.0);
  Rng rng(2);
  const auto r = RunSvtRetraversal(
      SvtConfig::Standard({0.5, 0.5, 0.0}, 3, true, {1e12}),
      QuerySet(scores, 1), 5.0, rng);
  EXPECT_LE(r.chosen_indices.size(), 3u);
  EXPECT_LE(r.passes, kMaxRetraversalPasses);
}

TEST(RetraversalTest, RejectsBadInput) {
  Rng rng(1);
  EXPECT_THROW(RunSvtRetraversal(SvtConfig::Fixed(Variant::kAlg1, 1, 1),
                                 QuerySet({1, 2}, 1), 0, rng),
               UnsupportedCombination);
  EXPECT_THROW(
      RunSvtRetraversal(SvtConfig::Standard({0.5, 0.5, 0.0}, 3, false),
                        QuerySet({1, 2}, 1), 0, rng),
      InvalidCutoff);
}

TEST(AbsoluteErrorTest, Values) {
  EXPECT_EQ(AbsoluteErrorScore(5, 5), 0.0);
  EXPECT_EQ(AbsoluteErrorScore(3, 7), 4.0);
  EXPECT_EQ(AbsoluteErrorScore(-2, 2), 4.0);
}

TEST(PatternStringTest, Renders) {
  EXPECT_EQ(PatternString({Answer::Below(), Answer::Above(),
                           Answer::Numeric(1.5)}),
            "BAN");
}

}  // namespace
}  // namespace svtlab
