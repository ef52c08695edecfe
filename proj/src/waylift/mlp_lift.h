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

// Learned lifting baseline: a ReLU MLP regressing waypoints directly from
// the raw actions and the initial speed.

#ifndef WAYLIFT_MLP_LIFT_H_
#define WAYLIFT_MLP_LIFT_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "waylift/config.h"
#include "waylift/types.h"

namespace waylift {

struct MlpDataset {
  // One row per sample: flattened raw actions followed by v0.
  Eigen::MatrixXd inputs;
  // One row per sample: x_1, y_1, ..., x_C, y_C.
  Eigen::MatrixXd targets;

  int size() const { return static_cast<int>(inputs.rows()); }
};

struct MlpDataOptions {
  int horizon = 8;
  double action_scale = 0.1;  // raw actions ~ N(0, scale^2)
  double v0_min = 0.0;
  double v0_max = 15.0;
  LiftConfig lift;            // bicycle model targets
};

MlpDataset MakeMlpDataset(int n, const MlpDataOptions& options,
                          std::uint64_t seed);

struct MlpFitOptions;
struct MlpFitResult;

// Three affine layers, ReLU between them; inputs and outputs standardized
// with training-set statistics.
class MlpLift {
 public:
  MlpLift(int horizon, int hidden, std::uint64_t seed);

  int horizon() const { return horizon_; }
  int hidden() const { return static_cast<int>(b1_.size()); }

  WaypointTrajectory Predict(const RawActionSequence& actions, double v0) const;
  // Batched, in the MlpDataset layout.
  Eigen::MatrixXd PredictBatch(const Eigen::MatrixXd& inputs) const;

  nlohmann::json ToJson() const;

 private:
  friend struct MlpTrainer;
  friend MlpFitResult FitMlpLift(const MlpDataset&, const MlpFitOptions&);

  int horizon_;
  Eigen::RowVectorXd in_mean_, in_scale_, out_mean_, out_scale_;
  Eigen::MatrixXd w1_, w2_, w3_;  // (in x out) layout
  Eigen::RowVectorXd b1_, b2_, b3_;
};

struct MlpFitOptions {
  int hidden = 256;
  int epochs = 20;
  int batch_size = 128;
  double lr = 1e-2;  // Adam, cosine-decayed to 0 over the run
  std::uint64_t seed = 0;
};

struct MlpFitResult {
  MlpLift model;
  std::vector<double> epoch_losses;  // mean training loss per epoch
  double initial_loss = 0.0;         // training loss before the first update
};

// Minimizes the waypoint L1 loss in standardized output space. Throws
// Error(kDiverged) if the epoch loss increases 10 epochs in a row or turns
// non-finite.
MlpFitResult FitMlpLift(const MlpDataset& train, const MlpFitOptions& options);

// Mean per-waypoint L1 position error (meters) over a dataset.
double MlpHeldOutError(const MlpLift& model, const MlpDataset& data);

}  // namespace waylift

#endif  // WAYLIFT_MLP_LIFT_H_
