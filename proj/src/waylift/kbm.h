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

#ifndef WAYLIFT_KBM_H_
#define WAYLIFT_KBM_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "waylift/activation.h"
#include "waylift/config.h"
#include "waylift/types.h"

namespace waylift {

// Number of right-hand-side evaluations spent by a rollout; the compute
// proxy reported by the numerics harness.
struct RolloutStats {
  std::int64_t rhs_evals = 0;
};

// Kinematic bicycle model, state order (x, y, theta, v).
struct KbmDerivative {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;
  double dv = 0.0;
};

// (v cos(theta), v sin(theta), v tan(delta) / L, a_lon). Throws
// Error(kNumeric) when |delta| >= pi/2.
KbmDerivative KbmRhs(const KbmState& z, const KbmControls& u, double wheelbase);

// Semi-implicit Euler: speed, then heading with the new speed, then position
// with the new speed and heading.
KbmState StepEulerKbm(const KbmState& z, const KbmControls& u, double dt,
                      double wheelbase);

// Classical RK4 with u held constant over all four stages.
KbmState StepRk4Kbm(const KbmState& z, const KbmControls& u, double dt,
                    double wheelbase);

// Local derivatives of one step: d z' / d z and d z' / d (a_lon, delta).
struct KbmStepJacobian {
  Eigen::Matrix4d wrt_state;
  Eigen::Matrix<double, 4, 2> wrt_controls;
};

KbmStepJacobian StepEulerKbmJacobian(const KbmState& z, const KbmControls& u,
                                     double dt, double wheelbase);
KbmStepJacobian StepRk4KbmJacobian(const KbmState& z, const KbmControls& u,
                                   double dt, double wheelbase);

// States z_0..z_{C_f} of the configured scheme. Errors carry the failing
// step index.
std::vector<KbmState> RolloutKbm(const RawActionSequence& actions,
                                 const InitialState& init,
                                 const LiftConfig& cfg,
                                 RolloutStats* stats = nullptr);

// Waypoints (x_k, y_k), k = 1..C_f, with headings recorded.
WaypointTrajectory LiftKbm(const RawActionSequence& actions,
                           const InitialState& init, const LiftConfig& cfg,
                           RolloutStats* stats = nullptr);

}  // namespace waylift

#endif  // WAYLIFT_KBM_H_
