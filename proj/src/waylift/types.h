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

#ifndef WAYLIFT_TYPES_H_
#define WAYLIFT_TYPES_H_

#include <cstddef>
#include <span>
#include <vector>

namespace waylift {

// Number of raw action channels per step: throttle, lateral, brake.
inline constexpr int kActionChannels = 3;

enum Channel : int { kThrottle = 0, kLateral = 1, kBrake = 2 };

// One step of unbounded network output. `lateral` is the steering channel
// for the bicycle model and the sharpness channel for the clothoid model.
struct RawAction {
  double throttle = 0.0;
  double lateral = 0.0;
  double brake = 0.0;
};

// C_f x 3 matrix of raw actions, stored row-major (step, channel).
// Every entry is finite and there is at least one step.
class RawActionSequence {
 public:
  // Throws Error(kInvalidArgument) on an empty or non-finite sequence.
  explicit RawActionSequence(std::vector<RawAction> steps);
  static RawActionSequence FromFlat(std::span<const double> values);
  static RawActionSequence Zeros(int steps);

  int steps() const { return static_cast<int>(values_.size()) / kActionChannels; }
  RawAction step(int k) const;
  double at(int k, int channel) const {
    return values_[static_cast<std::size_t>(k * kActionChannels + channel)];
  }
  // Returns a copy with one entry shifted by `delta`.
  RawActionSequence Perturbed(int k, int channel, double delta) const;
  std::span<const double> flat() const { return values_; }

  bool operator==(const RawActionSequence&) const = default;

 private:
  RawActionSequence() = default;
  std::vector<double> values_;
};

struct Waypoint {
  double x = 0.0;  // m, ego frame
  double y = 0.0;  // m, ego frame

  bool operator==(const Waypoint&) const = default;
};

// Ego-frame waypoints w_1..w_{C_f}. Headings (rad) are recorded alongside for
// analysis and never supervised; they may be empty.
struct WaypointTrajectory {
  std::vector<Waypoint> points;
  std::vector<double> headings;

  int size() const { return static_cast<int>(points.size()); }
  bool operator==(const WaypointTrajectory&) const = default;
};

struct InitialState {
  double v0 = 0.0;      // m/s, >= 0
  double kappa0 = 0.0;  // 1/m, clothoid model only
};

struct KbmState {
  double x = 0.0;      // m
  double y = 0.0;      // m
  double theta = 0.0;  // rad, unwrapped
  double v = 0.0;      // m/s, unclamped

  bool operator==(const KbmState&) const = default;
};

// Arc-length pose plus the speed tracked across control intervals.
struct CcppState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double kappa = 0.0;  // 1/m, |kappa| <= kappa_M
  double v = 0.0;      // m/s, >= 0

  bool operator==(const CcppState&) const = default;
};

// Temporal weights alpha_k of the waypoint loss. Nonnegative with positive
// sum; throws Error(kInvalidArgument) otherwise.
class LossWeights {
 public:
  explicit LossWeights(std::vector<double> alpha);
  static LossWeights Uniform(int steps);

  int size() const { return static_cast<int>(alpha_.size()); }
  double operator[](int k) const { return alpha_[static_cast<std::size_t>(k)]; }
  double sum() const { return sum_; }

 private:
  std::vector<double> alpha_;
  double sum_ = 0.0;
};

}  // namespace waylift

#endif  // WAYLIFT_TYPES_H_
