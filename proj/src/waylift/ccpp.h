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

#ifndef WAYLIFT_CCPP_H_
#define WAYLIFT_CCPP_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "waylift/activation.h"
#include "waylift/config.h"
#include "waylift/kbm.h"
#include "waylift/types.h"

namespace waylift {

// Arc-length pose of the clothoid rollout.
struct CcppPose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double kappa = 0.0;

  bool operator==(const CcppPose&) const = default;
};

// max(v + a_lon dt, 0).
double CcppSpeedUpdate(double v, double accel, double dt);

struct ArcIncrement {
  double total = 0.0;  // Delta s = v_next dt
  double step = 0.0;   // delta s = Delta s / n_int
};

ArcIncrement ArcIncrementFor(double v_next, double dt, int substeps);

// Side of a saturation: -1 below the lower bound, +1 above the upper bound,
// 0 inside or exactly on it.
int ClampSide(double value, double bound);

// Forward Euler in s: clip kappa first, then heading with the clipped
// curvature, then position with the new heading.
CcppPose SubstepEulerCcpp(const CcppPose& p, double sharpness, double ds,
                          double kappa_max);

// RK4 over (cos theta, sin theta, kappa, varsigma) with varsigma constant,
// followed by the curvature clip.
CcppPose SubstepRk4Ccpp(const CcppPose& p, double sharpness, double ds,
                        double kappa_max);

// Local derivatives of one substep. The clip passes the inner derivative
// when the unclipped curvature is inside or on the bound and zero when it is
// strictly outside.
struct CcppSubstepJacobian {
  Eigen::Matrix4d wrt_pose;
  Eigen::Vector4d wrt_sharpness;
  Eigen::Vector4d wrt_step;
};

CcppSubstepJacobian SubstepEulerCcppJacobian(const CcppPose& p,
                                             double sharpness, double ds,
                                             double kappa_max);
CcppSubstepJacobian SubstepRk4CcppJacobian(const CcppPose& p, double sharpness,
                                           double ds, double kappa_max);

// Everything a rollout saturates, in execution order. `speeds` holds the
// post-update speed of each interval, `curvatures` the curvature after each
// substep and `clamp_sides` the ClampSide of every speed update and every
// curvature clip.
struct CcppTrace {
  std::vector<double> speeds;
  std::vector<double> curvatures;
  std::vector<std::int8_t> clamp_sides;
};

// States z_0..z_{C_f}; each is the terminal substep of its interval.
std::vector<CcppState> RolloutCcpp(const RawActionSequence& actions,
                                   const InitialState& init,
                                   const LiftConfig& cfg,
                                   RolloutStats* stats = nullptr,
                                   CcppTrace* trace = nullptr);

WaypointTrajectory LiftCcpp(const RawActionSequence& actions,
                            const InitialState& init, const LiftConfig& cfg,
                            RolloutStats* stats = nullptr,
                            CcppTrace* trace = nullptr);

}  // namespace waylift

#endif  // WAYLIFT_CCPP_H_
