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

#ifndef WAYLIFT_ACTIVATION_H_
#define WAYLIFT_ACTIVATION_H_

#include <Eigen/Core>

#include "waylift/config.h"
#include "waylift/types.h"

namespace waylift {

// Bounded physical controls for the bicycle model.
struct KbmControls {
  double accel = 0.0;  // a_lon, m/s^2, in (-a_max, a_max)
  double steer = 0.0;  // delta, rad, in (-delta_max, delta_max)
};

// Bounded physical controls for the clothoid model.
struct CcppControls {
  double accel = 0.0;      // a_lon, m/s^2, in (-a_max, a_max)
  double sharpness = 0.0;  // varsigma, 1/m^2, in (-varsigma_M, varsigma_M)
};

// Logistic function, evaluated without overflow for large |x|.
double Sigmoid(double x);

// a_lon = a_max * (sigmoid(throttle) - sigmoid(brake)),
// delta = delta_max * tanh(lateral). Non-finite input throws.
KbmControls ActivateKbm(const RawAction& raw, const LiftConfig& cfg);
// Same longitudinal channel; varsigma = varsigma_M * tanh(lateral).
CcppControls ActivateCcpp(const RawAction& raw, const LiftConfig& cfg);

// d(a_lon, lateral control) / d(throttle, lateral, brake). The lateral
// control is delta for the bicycle model and varsigma for the clothoid one.
Eigen::Matrix<double, 2, 3> ActivationJacobian(const RawAction& raw,
                                               double accel_gain,
                                               double lateral_bound);

}  // namespace waylift

#endif  // WAYLIFT_ACTIVATION_H_
