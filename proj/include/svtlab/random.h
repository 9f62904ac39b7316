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

#ifndef SVTLAB_RANDOM_H_
#define SVTLAB_RANDOM_H_

#include <cstdint>
#include <random>

namespace svtlab {

// Seeded random stream. Wraps mt19937_64 and converts raw words to doubles
// and bounded integers itself, so that every sample is bit-identical across
// standard library implementations (std:: distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t NextWord() { return engine_(); }

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double Uniform() {
    return (static_cast<double>(NextWord() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). Unbiased via rejection.
  std::uint64_t Below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive independent per-trial seeds from a
// plan seed and a counter.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t counter);

}  // namespace svtlab

#endif  // SVTLAB_RANDOM_H_
