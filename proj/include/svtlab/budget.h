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

#ifndef SVTLAB_BUDGET_H_
#define SVTLAB_BUDGET_H_

#include <cstddef>

namespace svtlab {

// Allocation of a total budget between threshold noise (eps1), comparison
// noise on query answers (eps2) and Laplace-released numeric answers (eps3).
struct BudgetSplit {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double eps3 = 0.0;

  double Total() const { return eps1 + eps2 + eps3; }
};

// Builds a split and checks eps1 > 0, eps2 > 0, eps3 >= 0 and that the parts
// add up to `declared_total` within 1e-12. Throws InvalidArgument otherwise.
BudgetSplit MakeSplit(double eps1, double eps2, double eps3,
                      double declared_total);

// Splits `epsilon` as eps1:eps2 = 1:ratio with eps3 = 0.
BudgetSplit SplitByRatio(double epsilon, double ratio);

// Comparison-noise variance 2(delta/eps1)^2 + 2(k*c*delta/eps2)^2 where k = 2
// for general queries and k = 1 for monotonic ones.
double ComparisonVariance(double eps1, double eps2, std::size_t c,
                          double delta, bool monotonic);

// eps1:eps2 = 1:(2c)^(2/3) (general) or 1:c^(2/3) (monotonic), the minimiser
// of ComparisonVariance for a fixed eps1 + eps2. eps3 = 0.
BudgetSplit OptimizeSplit(double epsilon_for_selection, std::size_t c,
                          bool monotonic);

}  // namespace svtlab

#endif  // SVTLAB_BUDGET_H_
