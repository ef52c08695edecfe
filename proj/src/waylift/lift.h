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

#ifndef WAYLIFT_LIFT_H_
#define WAYLIFT_LIFT_H_

#include "waylift/ccpp.h"
#include "waylift/config.h"
#include "waylift/kbm.h"
#include "waylift/types.h"

namespace waylift {

// Lifts raw actions to ego-frame waypoints with the analytic model named by
// cfg.model. The learned model has no analytic lift; asking for it throws
// Error(kInvalidConfig).
WaypointTrajectory Lift(const RawActionSequence& actions,
                        const InitialState& init, const LiftConfig& cfg,
                        RolloutStats* stats = nullptr);

}  // namespace waylift

#endif  // WAYLIFT_LIFT_H_
