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

#ifndef SVTLAB_ERRORS_H_
#define SVTLAB_ERRORS_H_

#include <stdexcept>
#include <string>

namespace svtlab {

// Argument outside an operation's domain (nonpositive epsilon, bad scale...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Cutoff larger than the number of available queries.
class InvalidCutoff : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Exponential mechanism asked to choose from an empty candidate pool.
class EmptyCandidates : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Configuration flags that are individually valid but not together.
class UnsupportedCombination : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Variant cannot be evaluated by the requested audit method.
class UnsupportedVariant : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Outcome pattern that the mechanism can never emit as a complete output.
class InvalidPattern : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Query fed to a session that already aborted.
class SessionClosed : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Metric with no defined value for the given input (e.g. SER of nothing).
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Unreadable or malformed input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace svtlab

#endif  // SVTLAB_ERRORS_H_
