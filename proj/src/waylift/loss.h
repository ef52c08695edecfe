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

#ifndef WAYLIFT_LOSS_H_
#define WAYLIFT_LOSS_H_

#include <span>
#include <string>
#include <vector>

#include "waylift/types.h"

namespace waylift {

// (1 / sum alpha) * sum_k alpha_k (|dx_k| + |dy_k|). Headings are ignored.
// Throws Error(kInvalidArgument) on a length mismatch.
double WaypointL1Loss(const WaypointTrajectory& pred,
                      const WaypointTrajectory& gt, const LossWeights& weights);

// Unweighted |dx_k| + |dy_k| per waypoint.
std::vector<double> PerWaypointError(const WaypointTrajectory& pred,
                                     const WaypointTrajectory& gt);

// Per-index mean and population standard deviation over a corpus of
// equal-length error profiles.
struct ErrorProfile {
  std::vector<double> mean;
  std::vector<double> stddev;
};

ErrorProfile AggregateErrorProfiles(
    const std::vector<std::vector<double>>& profiles);

// CSV with header "k,mean_l1,std_l1"; k counts waypoints from 1.
std::string ErrorProfileCsv(const ErrorProfile& profile);

// Sample Pearson correlation. Throws Error(kInvalidArgument) for mismatched
// or too-short series and Error(kNumeric) ("undefined correlation") when a
// series is constant.
double Pearson(std::span<const double> xs, std::span<const double> ys);

}  // namespace waylift

#endif  // WAYLIFT_LOSS_H_
