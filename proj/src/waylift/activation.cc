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

#include "waylift/activation.h"

#include <cmath>

#include "waylift/error.h"

namespace waylift {
namespace {

void CheckFinite(const RawAction& raw) {
  if (!std::isfinite(raw.throttle) || !std::isfinite(raw.lateral) ||
      !std::isfinite(raw.brake)) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite raw action");
  }
}

// sigmoid'(x) = s (1 - s), computed as s(x) s(-x) to keep precision in the
// tails.
double SigmoidSlope(double x) { return Sigmoid(x) * Sigmoid(-x); }

double TanhSlope(double x) {
  const double t = std::tanh(x);
  return 1.0 - t * t;
}

}  // namespace

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

KbmControls ActivateKbm(const RawAction& raw, const LiftConfig& cfg) {
  CheckFinite(raw);
  return {cfg.max_accel * (Sigmoid(raw.throttle) - Sigmoid(raw.brake)),
          cfg.max_steer * std::tanh(raw.lateral)};
}

CcppControls ActivateCcpp(const RawAction& raw, const LiftConfig& cfg) {
  CheckFinite(raw);
  return {cfg.max_accel * (Sigmoid(raw.throttle) - Sigmoid(raw.brake)),
          cfg.max_sharpness * std::tanh(raw.lateral)};
}

Eigen::Matrix<double, 2, 3> ActivationJacobian(const RawAction& raw,
                                               double accel_gain,
                                               double lateral_bound) {
  Eigen::Matrix<double, 2, 3> d = Eigen::Matrix<double, 2, 3>::Zero();
  d(0, kThrottle) = accel_gain * SigmoidSlope(raw.throttle);
  d(0, kBrake) = -accel_gain * SigmoidSlope(raw.brake);
  d(1, kLateral) = lateral_bound * TanhSlope(raw.lateral);
  return d;
}

}  // namespace waylift
