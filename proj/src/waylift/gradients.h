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

#ifndef WAYLIFT_GRADIENTS_H_
#define WAYLIFT_GRADIENTS_H_

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "json.hpp"
#include "waylift/config.h"
#include "waylift/types.h"

namespace waylift {

// d(waypoints) / d(raw actions), shape (2 C_f) x (3 C_f). Row 2k + c holds
// coordinate c (0 = x, 1 = y) of waypoint k + 1; column 3j + ch holds channel
// ch of action step j. Entries with j >= k + 1 are exactly zero.
using Jacobian = Eigen::MatrixXd;

inline int JacobianRow(int waypoint, int coord) { return 2 * waypoint + coord; }
inline int JacobianCol(int step, int channel) { return 3 * step + channel; }

// Exact Jacobian of the analytic lift named by cfg.model, accumulated in
// reverse over the per-step local Jacobians of activation, step and
// readout.
Jacobian LiftJacobian(const RawActionSequence& actions,
                      const InitialState& init, const LiftConfig& cfg);

struct LossAndGradient {
  double loss = 0.0;
  // C_f x 3, same layout as the action sequence.
  Eigen::MatrixXd grad;
};

// Waypoint L1 loss of the lift against `gt` and its gradient w.r.t. the raw
// actions. Uses sign(0) = 0 for the L1 subgradient.
LossAndGradient LossGradient(const RawActionSequence& actions,
                             const InitialState& init, const LiftConfig& cfg,
                             const WaypointTrajectory& gt,
                             const LossWeights& weights);

struct GradCheckReport {
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  int worst_row = 0;
  int worst_col = 0;
  double fd_step = 0.0;
  // True when some saturation changes side between the probes of any entry;
  // the lift is not differentiable there and mismatches are expected.
  bool boundary_flag = false;
};

// Relative error used by the checker: |a - b| / max(1, |a|, |b|).
double GradCheckRelError(double analytic, double numeric);

// Compares LiftJacobian with central differences entry by entry.
GradCheckReport FiniteDiffCheck(const RawActionSequence& actions,
                                const InitialState& init, const LiftConfig& cfg,
                                double fd_step = 1e-5);

nlohmann::json ReportToJson(const GradCheckReport& report);

// Randomized check over many action sequences, as run by the CLI.
struct GradCheckSuiteOptions {
  std::uint64_t seed = 0;
  int cases = 100;
  int horizon = 8;
  double fd_step = 1e-5;
  double tolerance = 1e-5;
  // When unset, cases cycle through every (model, scheme) pair with the
  // default vehicle parameters.
  std::optional<LiftConfig> config;
};

struct GradCheckSummary {
  int cases = 0;
  int flagged = 0;
  int failed = 0;
  double max_rel_err = 0.0;  // over unflagged cases
  double max_abs_err = 0.0;  // over unflagged cases
  int worst_case = -1;
  GradCheckReport worst;
  double tolerance = 0.0;

  bool passed() const { return failed == 0; }
};

GradCheckSummary RunGradCheckSuite(const GradCheckSuiteOptions& options);
nlohmann::json SummaryToJson(const GradCheckSummary& summary);

}  // namespace waylift

#endif  // WAYLIFT_GRADIENTS_H_
