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

#ifndef SVTLAB_LAPLACE_H_
#define SVTLAB_LAPLACE_H_

#include "svtlab/random.h"

namespace svtlab {

// Zero-centred Laplace distribution Lap(b).
class LaplaceDist {
 public:
  // Throws InvalidArgument unless scale is finite and > 0.
  explicit LaplaceDist(double scale);

  double scale() const { return scale_; }

  double Pdf(double x) const;
  double LogPdf(double x) const;
  double Cdf(double x) const;
  // log P(X <= x) and log P(X > x), accurate deep into either tail.
  double LogCdf(double x) const;
  double LogSurvival(double x) const;
  // Inverse CDF on (0, 1).
  double Quantile(double u) const;
  // One inverse-CDF draw from a single uniform.
  double Sample(Rng& rng) const { return Quantile(rng.Uniform()); }

  double Variance() const { return 2.0 * scale_ * scale_; }
  double StdDev() const;

 private:
  double scale_;
};

inline double LaplacePdf(const LaplaceDist& dist, double x) {
  return dist.Pdf(x);
}
inline double LaplaceCdf(const LaplaceDist& dist, double x) {
  return dist.Cdf(x);
}
inline double LaplaceSample(const LaplaceDist& dist, Rng& rng) {
  return dist.Sample(rng);
}

}  // namespace svtlab

#endif  // SVTLAB_LAPLACE_H_
