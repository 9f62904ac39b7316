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

#include "svtlab/query_set.h"

#include <cmath>

#include "svtlab/errors.h"

namespace svtlab {

QuerySet::QuerySet(std::vector<double> scores, double sensitivity,
                   bool monotonic)
    : scores_(std::move(scores)),
      sensitivity_(sensitivity),
      monotonic_(monotonic) {
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    throw InvalidArgument("sensitivity must be finite and positive");
  }
  for (double s : scores_) {
    if (!std::isfinite(s)) throw InvalidArgument("query scores must be finite");
  }
}

}  // namespace svtlab
