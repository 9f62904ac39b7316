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

#include "svtlab/exponential_mechanism.h"

#include <cmath>
#include <limits>
#include <string>

#include "svtlab/errors.h"

namespace svtlab {
namespace {

void CheckEpsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("epsilon must be finite and positive");
  }
}

// log-weights, -inf for excluded entries; returns the maximum.
double LogWeights(const QuerySet& qs, double epsilon,
                  const std::set<std::size_t>& exclude,
                  std::vector<double>& out) {
  const double factor =
      qs.monotonic() ? epsilon / qs.sensitivity()
                     : epsilon / (2.0 * qs.sensitivity());
  out.assign(qs.size(), -std::numeric_limits<double>::infinity());
  double max_w = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (exclude.count(i)) continue;
    out[i] = factor * qs.score(i);
    if (out[i] > max_w) max_w = out[i];
  }
  if (max_w == -std::numeric_limits<double>::infinity()) {
    throw EmptyCandidates("every candidate index is excluded");
  }
  return max_w;
}

// Draws from unnormalised weights by inverse CDF over index order.
std::size_t DrawIndex(const std::vector<double>& weights, double total,
                      Rng& rng) {
  const double target = rng.Uniform() * total;
  double acc = 0.0;
  std::size_t last = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = i;
    if (target < acc) return i;
  }
  // Rounding left target >= acc; fall back to the last positive weight.
  return last;
}

}  // namespace

std::vector<double> EmProbabilities(const QuerySet& qs, double epsilon,
                                    const std::set<std::size_t>& exclude) {
  CheckEpsilon(epsilon);
  std::vector<double> w;
  const double max_w = LogWeights(qs, epsilon, exclude, w);
  double total = 0.0;
  for (double& x : w) {
    x = std::exp(x - max_w);
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

std::size_t EmSelectOne(const QuerySet& qs, double epsilon,
                        const std::set<std::size_t>& exclude, Rng& rng) {
  CheckEpsilon(epsilon);
  std::vector<double> w;
  const double max_w = LogWeights(qs, epsilon, exclude, w);
  double total = 0.0;
  for (double& x : w) {
    x = std::exp(x - max_w);
    total += x;
  }
  return DrawIndex(w, total, rng);
}

SelectionResult EmSelectTopC(const QuerySet& qs, double epsilon, std::size_t c,
                             Rng& rng) {
  CheckEpsilon(epsilon);
  if (c == 0 || c > qs.size()) {
    throw InvalidCutoff("cutoff " + std::to_string(c) + " not in [1, " +
                        std::to_string(qs.size()) + "]");
  }
  SelectionResult result;
  result.per_round_budget = epsilon / static_cast<double>(c);

  std::vector<double> log_w;
  LogWeights(qs, result.per_round_budget, {}, log_w);
  std::vector<bool> taken(qs.size(), false);
  std::vector<double> w(qs.size());
  for (std::size_t round = 0; round < c; ++round) {
    double max_w = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < qs.size(); ++i) {
      if (!taken[i] && log_w[i] > max_w) max_w = log_w[i];
    }
    double total = 0.0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      w[i] = taken[i] ? 0.0 : std::exp(log_w[i] - max_w);
      total += w[i];
    }
    const std::size_t pick = DrawIndex(w, total, rng);
    taken[pick] = true;
    result.chosen_indices.push_back(pick);
  }
  return result;
}

UtilityBounds ComputeUtilityBounds(int k, double beta, double epsilon) {
  if (k < 2) throw InvalidArgument("utility bounds need k >= 2");
  if (!(beta > 0.0 && beta < 1.0)) {
    throw InvalidArgument("beta must lie in (0, 1)");
  }
  CheckEpsilon(epsilon);
  UtilityBounds b;
  b.alpha_svt = 8.0 * (std::log(k) + std::log(2.0 / beta)) / epsilon;
  b.alpha_em = (std::log(k - 1.0) + std::log((1.0 - beta) / beta)) / epsilon;
  return b;
}

}  // namespace svtlab
