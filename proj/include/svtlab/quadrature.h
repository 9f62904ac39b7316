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

#ifndef SVTLAB_QUADRATURE_H_
#define SVTLAB_QUADRATURE_H_

#include <cmath>

namespace svtlab {

struct QuadratureResult {
  double value = 0.0;
  int evaluations = 0;
};

namespace internal {

template <typename F>
double SimpsonStep(F& f, double a, double fa, double b, double fb, double m,
                   double fm, double whole, double tol, int depth,
                   int& evaluations) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return SimpsonStep(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1,
                     evaluations) +
         SimpsonStep(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1,
                     evaluations);
}

}  // namespace internal

// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
// The interval is first cut into `panels` equal pieces so that narrow
// features are not skipped by the initial five-point estimate.
template <typename F>
QuadratureResult AdaptiveSimpson(F&& f, double a, double b, double tol,
                                 int panels = 16, int max_depth = 48) {
  QuadratureResult result;
  if (!(b > a)) return result;
  const double width = (b - a) / panels;
  const double panel_tol = tol / panels;
  double fa = f(a);
  ++result.evaluations;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = (p + 1 == panels) ? b : lo + width;
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    const double fb = f(hi);
    result.evaluations += 2;
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    result.value += internal::SimpsonStep(f, lo, fa, hi, fb, mid, fm, whole,
                                          panel_tol, max_depth,
                                          result.evaluations);
    fa = fb;
  }
  return result;
}

}  // namespace svtlab

#endif  // SVTLAB_QUADRATURE_H_
