// Copyright 2026 The Waylift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WAYLIFT_SAMPLING_H_
#define WAYLIFT_SAMPLING_H_

#include <random>
#include <vector>

#include "waylift/types.h"

namespace waylift {

// All randomness in the library is drawn from this engine so that a single
// 64-bit seed reproduces every corpus.
using Rng = std::mt19937_64;

// i.i.d. N(0, scale^2) raw actions.
inline RawActionSequence SampleActions(Rng& rng, int steps, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> values(static_cast<std::size_t>(steps) * kActionChannels);
  for (double& v : values) v = normal(rng);
  return RawActionSequence::FromFlat(values);
}

inline double SampleUniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace waylift

#endif  // WAYLIFT_SAMPLING_H_
