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

#ifndef SVTLAB_EXPONENTIAL_MECHANISM_H_
#define SVTLAB_EXPONENTIAL_MECHANISM_H_

#include <cstddef>
#include <set>
#include <vector>

#include "svtlab/query_set.h"
#include "svtlab/random.h"

namespace svtlab {

struct SelectionResult {
  std::vector<std::size_t> chosen_indices;
  double per_round_budget = 0.0;
};

// Exact selection probabilities of one EM round. Weights are
// exp(eps * q_i / (2 * delta)), or exp(eps * q_i / delta) for monotonic query
// sets; excluded indices get probability 0. Computed in log space with the
// maximum exponent subtracted, so large scores do not overflow.
// Throws EmptyCandidates if every index is excluded.
std::vector<double> EmProbabilities(const QuerySet& qs, double epsilon,
                                    const std::set<std::size_t>& exclude = {});

// One EM draw by inverse CDF over index order.
std::size_t EmSelectOne(const QuerySet& qs, double epsilon,
                        const std::set<std::size_t>& exclude, Rng& rng);

// c rounds of EM at epsilon / c each; every winner leaves the pool.
// Throws InvalidCutoff if c is 0 or exceeds the number of queries.
SelectionResult EmSelectTopC(const QuerySet& qs, double epsilon, std::size_t c,
                             Rng& rng);

struct UtilityBounds {
  double alpha_svt;
  double alpha_em;
};

// (alpha, beta)-accuracy radii for SVT (c = delta = 1) and for EM, with k
// queries. Natural logarithms.
UtilityBounds ComputeUtilityBounds(int k, double beta, double epsilon);

}  // namespace svtlab

#endif  // SVTLAB_EXPONENTIAL_MECHANISM_H_
