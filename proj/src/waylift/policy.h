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

// Toy imitation setup: a tiny policy emits raw actions, a lift turns them
// into waypoints, and the waypoint L1 loss is minimized by gradient descent.

#ifndef WAYLIFT_POLICY_H_
#define WAYLIFT_POLICY_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "waylift/config.h"
#include "waylift/types.h"

namespace waylift {

// Observation: v0 / 10, requested curvature / curvature_request, requested
// speed change / speed_delta, then a left / straight / right one-hot.
inline constexpr int kObsDim = 6;

// Hidden expert that turns a (curvature, speed change) request into smooth,
// bounded controls.
struct ExpertParams {
  double v0_min = 2.0;               // m/s
  double v0_max = 12.0;              // m/s
  double curvature_request = 0.05;   // |kappa*| <= this, 1/m
  double speed_delta = 3.0;          // |dv| <= this over the horizon, m/s
  double straight_band = 0.02;       // |kappa*| below this reads as straight
  double control_fraction = 0.8;     // controls stay within this * bound
};

struct ExpertRequest {
  double v0 = 0.0;
  double curvature = 0.0;
  double speed_delta = 0.0;
};

// Raw actions that realize the request under cfg's activations. For the
// clothoid model the sharpness of each interval steers kappa toward the
// request; a request beyond kappa_M simply saturates.
RawActionSequence ExpertActions(const ExpertRequest& request, int horizon,
                                const LiftConfig& cfg,
                                const ExpertParams& params);

Eigen::VectorXd ObservationFor(const ExpertRequest& request,
                               const ExpertParams& params);

struct SyntheticSample {
  Eigen::VectorXd obs;
  WaypointTrajectory gt;
  InitialState initial;
};

// Ground truth comes from the refined reference rollout of the expert's
// actions. Deterministic given the seed.
std::vector<SyntheticSample> GenerateDataset(int n, int horizon,
                                             const LiftConfig& cfg,
                                             const ExpertParams& params,
                                             std::uint64_t seed,
                                             int oracle_refine = 64);

using ChannelGain = std::array<double, kActionChannels>;

// obs -> tanh(W1 obs + b1) -> g * (W2 h + b2), reshaped to C_f x 3 raw
// actions. The fixed per-channel gain g only rescales the action head; it
// balances the very different waypoint sensitivities of the channels.
class TinyPolicy {
 public:
  TinyPolicy(int horizon, int hidden, std::uint64_t seed,
             const ChannelGain& gain = {1.0, 1.0, 1.0});

  RawActionSequence Forward(const Eigen::VectorXd& obs) const;
  // d loss / d parameters given d loss / d raw actions (C_f x 3).
  Eigen::VectorXd Backward(const Eigen::VectorXd& obs,
                           const Eigen::MatrixXd& action_grad) const;

  int horizon() const { return horizon_; }
  int hidden() const { return static_cast<int>(b1_.size()); }
  int parameter_count() const;
  // Flattened as W1 (row-major), b1, W2 (row-major), b2.
  Eigen::VectorXd Parameters() const;
  void SetParameters(const Eigen::VectorXd& params);

  nlohmann::json ToJson() const;

 private:
  int horizon_;
  ChannelGain gain_;
  Eigen::MatrixXd w1_;
  Eigen::VectorXd b1_;
  Eigen::MatrixXd w2_;
  Eigen::VectorXd b2_;
};

struct BatchLoss {
  double loss = 0.0;        // mean waypoint L1 over the batch
  Eigen::VectorXd grad;     // d loss / d parameters
};

BatchLoss PolicyLoss(const TinyPolicy& policy,
                     std::span<const SyntheticSample> batch,
                     const LiftConfig& cfg);

// One plain gradient-descent update; returns the loss before the update.
double TrainStep(TinyPolicy& policy, std::span<const SyntheticSample> batch,
                 const LiftConfig& cfg, double lr);

enum class LrSchedule { kConstant, kStep, kCosine };

struct TrainOptions {
  LiftConfig lift;
  int horizon = 8;
  int dataset_size = 64;
  int hidden = 32;
  ChannelGain channel_gain = {10.0, 0.3, 10.0};
  int steps = 500;
  double lr = 0.03;
  // Step-size schedule of the plain descent: constant, step decay (lr is
  // multiplied by lr_decay every lr_decay_every steps) or cosine (lr
  // annealed to 0 over the run).
  LrSchedule schedule = LrSchedule::kCosine;
  double lr_decay = 0.5;
  int lr_decay_every = 100;
  std::uint64_t seed = 0;
  int oracle_refine = 64;
  ExpertParams expert;
};

// Step size used for update `step` of the run.
double ScheduledLr(const TrainOptions& options, int step);

TrainOptions TrainOptionsFromJson(const nlohmann::json& doc);
nlohmann::json TrainOptionsToJson(const TrainOptions& options);

struct TrainResult {
  // losses[s] is the full-batch loss before update s; the last entry is the
  // loss after the final update.
  std::vector<double> losses;
  TinyPolicy policy;

  double ratio() const { return losses.back() / losses.front(); }
};

// Throws Error(kDiverged) when the loss turns non-finite or exceeds 100x
// its initial value.
TrainResult Train(const TrainOptions& options);

std::string LossCurveCsv(const std::vector<double>& losses);

}  // namespace waylift

#endif  // WAYLIFT_POLICY_H_
