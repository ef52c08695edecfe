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

// Discretization-error studies: a refined reference integrator and the
// horizon / framerate / substep sweeps built on it.

#ifndef WAYLIFT_HARNESS_H_
#define WAYLIFT_HARNESS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "waylift/config.h"
#include "waylift/types.h"

namespace waylift {

inline constexpr int kDefaultRefine = 1024;

// RK4 with the same piecewise-constant controls on a grid `refine` times
// finer than the lift's own step (dt for the bicycle model, the arc substep
// for the clothoid model). Curvature saturation is resolved exactly: a fine
// step that reaches the bound is split at the crossing.
WaypointTrajectory OracleRollout(const RawActionSequence& actions,
                                 const InitialState& init,
                                 const LiftConfig& cfg,
                                 int refine = kDefaultRefine);

struct SweepSpec {
  std::vector<int> horizons;
  std::vector<double> intervals;
  std::vector<int> substeps;
  std::vector<Scheme> schemes;
  std::vector<Model> models;
  int corpus_size = 256;
  std::uint64_t rng_seed = 0;
  // Standard deviation of the raw actions; 0 gives an all-zero corpus.
  double action_scale = 1.0;
  int refine = kDefaultRefine;
  // Vehicle parameters; dt, n_int, scheme and model come from the grid.
  LiftConfig vehicle;
};

// Throws Error(kInvalidConfig) naming the offending field.
void ValidateSweepSpec(const SweepSpec& spec);
SweepSpec SweepSpecFromJson(const nlohmann::json& doc);

struct Corpus {
  std::vector<RawActionSequence> actions;
  std::vector<InitialState> initial;

  int size() const { return static_cast<int>(actions.size()); }
};

// i.i.d. N(0, scale^2) raw actions, v0 ~ U[0, 15] m/s, kappa0 = 0.
Corpus MakeCorpus(int horizon, int size, std::uint64_t seed,
                  double action_scale = 1.0);

struct GridPoint {
  Model model = Model::kKbm;
  Scheme scheme = Scheme::kRk4;
  int horizon = 8;
  double dt = 0.5;
  int substeps = 1;
};

struct GridResult {
  // errors[i][k]: position L1 error of waypoint k + 1 for sequence i.
  std::vector<std::vector<double>> errors;
  // yaw_errors[i][k]: |heading - oracle heading|.
  std::vector<std::vector<double>> yaw_errors;
  // Right-hand-side evaluations of one candidate lift (same for every
  // sequence).
  std::int64_t rhs_evals = 0;
};

LiftConfig GridConfig(const LiftConfig& vehicle, const GridPoint& point);

// Oracle trajectories for a corpus. The reference does not depend on the
// candidate's substep count, so it is shared across n_int.
std::vector<WaypointTrajectory> OracleCorpus(const Corpus& corpus,
                                             const LiftConfig& cfg, int refine);

GridResult EvaluateGridPoint(const GridPoint& point, const LiftConfig& vehicle,
                             const Corpus& corpus,
                             const std::vector<WaypointTrajectory>& oracle);

struct ErrorRecord {
  Model model = Model::kKbm;
  Scheme scheme = Scheme::kRk4;
  int horizon = 0;
  double dt = 0.0;
  int substeps = 0;
  int k = 0;  // 1-based waypoint index
  double mean_l1 = 0.0;
  double std_l1 = 0.0;
  std::int64_t rhs_evals = 0;
  double mean_yaw = 0.0;
};

// Full grid. The bicycle model has no substeps, so its points are emitted
// once with n_int = 1. Records come out sorted by
// (model, scheme, C_f, dt, n_int, k).
std::vector<ErrorRecord> RunSweep(const SweepSpec& spec);

// The substep study: the spec restricted to the clothoid model.
std::vector<ErrorRecord> ParetoSubsteps(const SweepSpec& spec);

std::string RecordsToCsv(const std::vector<ErrorRecord>& records,
                         bool with_yaw = false);

}  // namespace waylift

#endif  // WAYLIFT_HARNESS_H_
