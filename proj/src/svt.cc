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

#include "svtlab/svt.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "svtlab/errors.h"
#include "svtlab/laplace.h"

namespace svtlab {

std::string_view VariantName(Variant v) {
  switch (v) {
    case Variant::kAlg1: return "alg1";
    case Variant::kAlg2: return "alg2";
    case Variant::kAlg3: return "alg3";
    case Variant::kAlg4: return "alg4";
    case Variant::kAlg5: return "alg5";
    case Variant::kAlg6: return "alg6";
    case Variant::kAlg7: return "alg7";
  }
  return "unknown";
}

Variant ParseVariant(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "gptt") return Variant::kAlg6;
  for (Variant v : {Variant::kAlg1, Variant::kAlg2, Variant::kAlg3,
                    Variant::kAlg4, Variant::kAlg5, Variant::kAlg6,
                    Variant::kAlg7}) {
    if (lower == VariantName(v)) return v;
  }
  throw InvalidArgument("unknown SVT variant '" + std::string(name) + "'");
}

bool Aborts(Variant v) { return v != Variant::kAlg5 && v != Variant::kAlg6; }

SvtConfig SvtConfig::Fixed(Variant v, double epsilon, std::size_t cutoff,
                           std::vector<double> thresholds) {
  SvtConfig config;
  config.variant = v;
  config.epsilon = epsilon;
  config.cutoff = cutoff;
  config.thresholds = std::move(thresholds);
  return config;
}

SvtConfig SvtConfig::Standard(BudgetSplit split, std::size_t cutoff,
                              bool monotonic, std::vector<double> thresholds) {
  SvtConfig config;
  config.variant = Variant::kAlg7;
  config.epsilon = split.Total();
  config.split = split;
  config.cutoff = cutoff;
  config.monotonic = monotonic;
  config.thresholds = std::move(thresholds);
  return config;
}

SvtConfig SvtConfig::Gptt(double eps1, double eps2,
                          std::vector<double> thresholds) {
  SvtConfig config;
  config.variant = Variant::kAlg6;
  config.split = BudgetSplit{eps1, eps2, 0.0};
  config.epsilon = eps1 + eps2;
  config.thresholds = std::move(thresholds);
  return config;
}

void ValidateConfig(const SvtConfig& config) {
  if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon)) {
    throw InvalidArgument("epsilon must be finite and positive");
  }
  if (config.monotonic && config.variant != Variant::kAlg7) {
    throw UnsupportedCombination(
        "the monotonic calibration is only defined for alg7, not " +
        std::string(VariantName(config.variant)));
  }
  if (Aborts(config.variant) && config.cutoff < 1) {
    throw InvalidCutoff("cutoff must be at least 1");
  }
  if (config.thresholds.empty()) {
    throw InvalidArgument("at least one threshold is required");
  }
  for (double t : config.thresholds) {
    if (!std::isfinite(t)) throw InvalidArgument("thresholds must be finite");
  }
  if (config.split) {
    if (config.variant != Variant::kAlg6 && config.variant != Variant::kAlg7) {
      throw UnsupportedCombination(
          std::string(VariantName(config.variant)) +
          " derives its budget split internally");
    }
    MakeSplit(config.split->eps1, config.split->eps2, config.split->eps3,
              config.epsilon);
    if (config.variant == Variant::kAlg6 && config.split->eps3 != 0.0) {
      throw UnsupportedCombination("alg6 has no numeric output budget");
    }
  } else if (config.variant == Variant::kAlg7) {
    throw InvalidArgument("alg7 needs an explicit (eps1, eps2, eps3) split");
  }
}

BudgetSplit ResolvedSplit(const SvtConfig& config) {
  if (config.split) return *config.split;
  const double e = config.epsilon;
  if (config.variant == Variant::kAlg4) return BudgetSplit{e / 4, e - e / 4};
  return BudgetSplit{e / 2, e - e / 2};
}

NoiseScales ComputeNoiseScales(const SvtConfig& config, double delta) {
  ValidateConfig(config);
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidArgument("sensitivity must be finite and positive");
  }
  const BudgetSplit s = ResolvedSplit(config);
  const double c = static_cast<double>(config.cutoff);
  NoiseScales n;
  n.threshold = delta / s.eps1;
  switch (config.variant) {
    case Variant::kAlg1:
      n.query = 2 * c * delta / s.eps2;
      break;
    case Variant::kAlg2:
      n.threshold = c * delta / s.eps1;
      n.query = 2 * c * delta / s.eps2;
      n.redraw = c * delta / s.eps2;
      break;
    case Variant::kAlg3:
      n.query = c * delta / s.eps2;
      break;
    case Variant::kAlg4:
    case Variant::kAlg6:
      n.query = delta / s.eps2;
      break;
    case Variant::kAlg5:
      n.query = 0.0;
      break;
    case Variant::kAlg7:
      n.query = (config.monotonic ? 1.0 : 2.0) * c * delta / s.eps2;
      if (s.eps3 > 0.0) n.numeric = c * delta / s.eps3;
      break;
  }
  return n;
}

std::size_t OutcomeVector::positives() const {
  return static_cast<std::size_t>(
      std::count_if(answers.begin(), answers.end(),
                    [](const Answer& a) { return a.positive(); }));
}

std::string PatternString(const std::vector<Answer>& answers) {
  std::string out;
  out.reserve(answers.size());
  for (const Answer& a : answers) {
    switch (a.kind) {
      case AnswerKind::kBelow: out.push_back('B'); break;
      case AnswerKind::kAbove: out.push_back('A'); break;
      case AnswerKind::kNumeric: out.push_back('N'); break;
    }
  }
  return out;
}

SvtSession::SvtSession(SvtConfig config, double sensitivity, Rng& rng)
    : config_(std::move(config)),
      scales_(ComputeNoiseScales(config_, sensitivity)) {
  rho_ = LaplaceDist(scales_.threshold).Sample(rng);
}

Answer SvtSession::Feed(double true_answer, double threshold, Rng& rng) {
  if (aborted_) {
    throw SessionClosed("session aborted after " + std::to_string(positives_) +
                        " positive answers");
  }
  if (!std::isfinite(true_answer) || !std::isfinite(threshold)) {
    throw InvalidArgument("query answers and thresholds must be finite");
  }
  const double nu =
      scales_.query > 0.0 ? LaplaceDist(scales_.query).Sample(rng) : 0.0;
  ++answered_;
  // (q - T) + nu >= rho, so shifting q and T together is exact.
  if (!((true_answer - threshold) + nu >= rho_)) return Answer::Below();

  Answer answer = Answer::Above();
  if (config_.variant == Variant::kAlg3) {
    answer = Answer::Numeric(true_answer + nu);
  } else if (scales_.numeric) {
    answer = Answer::Numeric(true_answer +
                             LaplaceDist(*scales_.numeric).Sample(rng));
  }
  if (scales_.redraw) rho_ = LaplaceDist(*scales_.redraw).Sample(rng);
  ++positives_;
  if (Aborts(config_.variant) && positives_ >= config_.cutoff) aborted_ = true;
  return answer;
}

Answer SvtSession::Feed(double true_answer, Rng& rng) {
  return Feed(true_answer, config_.ThresholdAt(answered_), rng);
}

SvtSession OpenSession(const SvtConfig& config, double sensitivity, Rng& rng) {
  return SvtSession(config, sensitivity, rng);
}

namespace {

void CheckThresholdLength(const SvtConfig& config, std::size_t n) {
  if (config.thresholds.size() != 1 && config.thresholds.size() != n) {
    throw InvalidArgument("expected 1 or " + std::to_string(n) +
                          " thresholds, got " +
                          std::to_string(config.thresholds.size()));
  }
}

}  // namespace

OutcomeVector RunSvt(const SvtConfig& config, const QuerySet& qs, Rng& rng) {
  ValidateConfig(config);
  OutcomeVector out;
  if (qs.empty()) return out;
  CheckThresholdLength(config, qs.size());
  SvtSession session(config, qs.sensitivity(), rng);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    out.answers.push_back(session.Feed(qs.score(i), config.ThresholdAt(i), rng));
    if (session.aborted()) {
      out.abort_index = i;
      break;
    }
  }
  return out;
}

RetraversalResult RunSvtRetraversal(const SvtConfig& config,
                                    const QuerySet& qs, double boost_sigmas,
                                    Rng& rng) {
  if (config.variant != Variant::kAlg7) {
    throw UnsupportedCombination("retraversal runs on alg7 only");
  }
  if (!(boost_sigmas >= 0.0) || !std::isfinite(boost_sigmas)) {
    throw InvalidArgument("threshold boost must be finite and nonnegative");
  }
  ValidateConfig(config);
  if (config.cutoff > qs.size()) {
    throw InvalidCutoff("cutoff " + std::to_string(config.cutoff) +
                        " exceeds the " + std::to_string(qs.size()) +
                        " available queries");
  }
  CheckThresholdLength(config, qs.size());

  const NoiseScales scales = ComputeNoiseScales(config, qs.sensitivity());
  const double boost = boost_sigmas * M_SQRT2 * scales.query;
  const double rho = LaplaceDist(scales.threshold).Sample(rng);
  const LaplaceDist nu(scales.query);

  RetraversalResult result;
  std::vector<std::size_t> pending(qs.size());
  for (std::size_t i = 0; i < pending.size(); ++i) pending[i] = i;

  while (result.chosen_indices.size() < config.cutoff) {
    if (result.passes == kMaxRetraversalPasses) {
      result.hit_pass_limit = true;
      break;
    }
    ++result.passes;
    std::vector<std::size_t> still_pending;
    const std::size_t before = result.chosen_indices.size();
    for (std::size_t k = 0; k < pending.size(); ++k) {
      const std::size_t i = pending[k];
      if (result.chosen_indices.size() == config.cutoff) {
        still_pending.insert(still_pending.end(), pending.begin() + k,
                             pending.end());
        break;
      }
      const double margin = qs.score(i) - (config.ThresholdAt(i) + boost);
      if (margin + nu.Sample(rng) >= rho) {
        result.chosen_indices.push_back(i);
      } else {
        still_pending.push_back(i);
      }
    }
    pending.swap(still_pending);
    if (result.chosen_indices.size() == before) break;
  }
  return result;
}

}  // namespace svtlab
