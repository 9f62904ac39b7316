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

#include "svtlab/budget.h"

#include <cmath>
#include <string>

#include "svtlab/errors.h"

namespace svtlab {

BudgetSplit MakeSplit(double eps1, double eps2, double eps3,
                      double declared_total) {
  if (!(eps1 > 0.0) || !(eps2 > 0.0)) {
    throw InvalidArgument("eps1 and eps2 must be positive");
  }
  if (!(eps3 >= 0.0)) throw InvalidArgument("eps3 must be nonnegative");
  BudgetSplit split{eps1, eps2, eps3};
  if (std::fabs(split.Total() - declared_total) > 1e-12) {
    throw InvalidArgument("budget parts sum to " +
                          std::to_string(split.Total()) + ", declared " +
                          std::to_string(declared_total));
  }
  return split;
}

BudgetSplit SplitByRatio(double epsilon, double ratio) {
  if (!(epsilon > 0.0) || !(ratio > 0.0) || !std::isfinite(ratio)) {
    throw InvalidArgument("epsilon and ratio must be positive");
  }
  BudgetSplit split;
  split.eps1 = epsilon / (1.0 + ratio);
  split.eps2 = epsilon - split.eps1;
  return split;
}

double ComparisonVariance(double eps1, double eps2, std::size_t c,
                          double delta, bool monotonic) {
  const double k = monotonic ? 1.0 : 2.0;
  const double threshold_scale = delta / eps1;
  const double query_scale = k * static_cast<double>(c) * delta / eps2;
  return 2.0 * threshold_scale * threshold_scale +
         2.0 * query_scale * query_scale;
}

BudgetSplit OptimizeSplit(double epsilon_for_selection, std::size_t c,
                          bool monotonic) {
  if (!(epsilon_for_selection > 0.0)) {
    throw InvalidArgument("epsilon must be positive");
  }
  if (c == 0) throw InvalidCutoff("cutoff must be at least 1");
  const double base = monotonic ? static_cast<double>(c) : 2.0 * c;
  return SplitByRatio(epsilon_for_selection, std::cbrt(base * base));
}

}  // namespace svtlab
