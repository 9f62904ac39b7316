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

#include "svtlab/laplace.h"

#include <cmath>
#include <limits>
#include <string>

#include "svtlab/errors.h"

namespace svtlab {

LaplaceDist::LaplaceDist(double scale) : scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidArgument("Laplace scale must be finite and positive, got " +
                          std::to_string(scale));
  }
}

double LaplaceDist::Pdf(double x) const {
  return std::exp(-std::fabs(x) / scale_) / (2.0 * scale_);
}

double LaplaceDist::LogPdf(double x) const {
  return -std::fabs(x) / scale_ - std::log(2.0 * scale_);
}

double LaplaceDist::Cdf(double x) const {
  if (x <= 0.0) return 0.5 * std::exp(x / scale_);
  return 1.0 - 0.5 * std::exp(-x / scale_);
}

double LaplaceDist::LogCdf(double x) const {
  if (x <= 0.0) return x / scale_ - M_LN2;
  return std::log1p(-0.5 * std::exp(-x / scale_));
}

double LaplaceDist::LogSurvival(double x) const { return LogCdf(-x); }

double LaplaceDist::Quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    if (u == 0.0) return -std::numeric_limits<double>::infinity();
    if (u == 1.0) return std::numeric_limits<double>::infinity();
    throw InvalidArgument("Laplace quantile needs u in [0, 1]");
  }
  if (u < 0.5) return scale_ * std::log(2.0 * u);
  return -scale_ * std::log(2.0 * (1.0 - u));
}

double LaplaceDist::StdDev() const { return M_SQRT2 * scale_; }

}  // namespace svtlab
