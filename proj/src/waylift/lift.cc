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

#include "waylift/lift.h"

#include "waylift/error.h"

namespace waylift {

WaypointTrajectory Lift(const RawActionSequence& actions,
                        const InitialState& init, const LiftConfig& cfg,
                        RolloutStats* stats) {
  switch (cfg.model) {
    case Model::kKbm:
      return LiftKbm(actions, init, cfg, stats);
    case Model::kCcpp:
      return LiftCcpp(actions, init, cfg, stats);
    case Model::kMlp:
      break;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "model \"mlp\" has no analytic lift; fit an MlpLift instead");
}

}  // namespace waylift
