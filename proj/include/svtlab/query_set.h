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

#ifndef SVTLAB_QUERY_SET_H_
#define SVTLAB_QUERY_SET_H_

#include <cstddef>
#include <utility>
#include <vector>

namespace svtlab {

// True answers q_i(D) of a batch of queries sharing one sensitivity bound.
//
// `monotonic` is the caller's promise that between neighbouring datasets all
// answers that change move in the same direction. It only affects noise
// calibration (exponential mechanism factor, Alg. 7 query noise).
class QuerySet {
 public:
  QuerySet(std::vector<double> scores, double sensitivity,
           bool monotonic = false);

  const std::vector<double>& scores() const { return scores_; }
  double score(std::size_t i) const { return scores_[i]; }
  double sensitivity() const { return sensitivity_; }
  bool monotonic() const { return monotonic_; }
  std::size_t size() const { return scores_.size(); }
  bool empty() const { return scores_.empty(); }

 private:
  std::vector<double> scores_;
  double sensitivity_;
  bool monotonic_;
};

}  // namespace svtlab

#endif  // SVTLAB_QUERY_SET_H_
