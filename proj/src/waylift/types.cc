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

#include "waylift/types.h"

#include <cmath>
#include <string>

#include "waylift/error.h"

namespace waylift {
namespace {

void CheckValues(std::span<const double> values) {
  if (values.empty() || values.size() % kActionChannels != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "action sequence needs a positive multiple of 3 values, got " +
                    std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "non-finite action at step " +
                      std::to_string(i / kActionChannels) + ", channel " +
                      std::to_string(i % kActionChannels));
    }
  }
}

}  // namespace

RawActionSequence::RawActionSequence(std::vector<RawAction> steps) {
  values_.reserve(steps.size() * kActionChannels);
  for (const RawAction& a : steps) {
    values_.push_back(a.throttle);
    values_.push_back(a.lateral);
    values_.push_back(a.brake);
  }
  CheckValues(values_);
}

RawActionSequence RawActionSequence::FromFlat(std::span<const double> values) {
  CheckValues(values);
  RawActionSequence seq;
  seq.values_.assign(values.begin(), values.end());
  return seq;
}

RawActionSequence RawActionSequence::Zeros(int steps) {
  if (steps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "action sequence needs >= 1 step");
  }
  std::vector<double> zeros(static_cast<std::size_t>(steps) * kActionChannels,
                            0.0);
  return FromFlat(zeros);
}

RawAction RawActionSequence::step(int k) const {
  return {at(k, kThrottle), at(k, kLateral), at(k, kBrake)};
}

RawActionSequence RawActionSequence::Perturbed(int k, int channel,
                                               double delta) const {
  RawActionSequence out = *this;
  out.values_[static_cast<std::size_t>(k * kActionChannels + channel)] += delta;
  return out;
}

LossWeights::LossWeights(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "loss weights are empty");
  }
  for (std::size_t k = 0; k < alpha_.size(); ++k) {
    if (!std::isfinite(alpha_[k]) || alpha_[k] < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "loss weight " + std::to_string(k) + " is negative or non-finite");
    }
    sum_ += alpha_[k];
  }
  if (!(sum_ > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "loss weights sum to zero");
  }
}

LossWeights LossWeights::Uniform(int steps) {
  return LossWeights(std::vector<double>(static_cast<std::size_t>(steps), 1.0));
}

}  // namespace waylift
