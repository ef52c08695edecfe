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

#include "waylift/loss.h"

#include <algorithm>
#include <cmath>

#include "waylift/csv.h"
#include "waylift/error.h"

namespace waylift {
namespace {

void CheckSameLength(const WaypointTrajectory& pred,
                     const WaypointTrajectory& gt) {
  if (pred.size() != gt.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "trajectory length mismatch: " + std::to_string(pred.size()) +
                    " vs " + std::to_string(gt.size()));
  }
}

}  // namespace

double WaypointL1Loss(const WaypointTrajectory& pred,
                      const WaypointTrajectory& gt, const LossWeights& weights) {
  CheckSameLength(pred, gt);
  if (weights.size() != pred.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "loss weights length does not match the horizon");
  }
  double total = 0.0;
  for (int k = 0; k < pred.size(); ++k) {
    total += weights[k] * (std::abs(pred.points[k].x - gt.points[k].x) +
                           std::abs(pred.points[k].y - gt.points[k].y));
  }
  return total / weights.sum();
}

std::vector<double> PerWaypointError(const WaypointTrajectory& pred,
                                     const WaypointTrajectory& gt) {
  CheckSameLength(pred, gt);
  std::vector<double> err(pred.points.size());
  for (std::size_t k = 0; k < err.size(); ++k) {
    err[k] = std::abs(pred.points[k].x - gt.points[k].x) +
             std::abs(pred.points[k].y - gt.points[k].y);
  }
  return err;
}

ErrorProfile AggregateErrorProfiles(
    const std::vector<std::vector<double>>& profiles) {
  if (profiles.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty error corpus");
  }
  const std::size_t n = profiles.front().size();
  ErrorProfile out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (const auto& p : profiles) {
    if (p.size() != n) {
      throw Error(ErrorCode::kInvalidArgument, "ragged error corpus");
    }
    for (std::size_t k = 0; k < n; ++k) out.mean[k] += p[k];
  }
  const double count = static_cast<double>(profiles.size());
  for (double& m : out.mean) m /= count;
  for (const auto& p : profiles) {
    for (std::size_t k = 0; k < n; ++k) {
      const double d = p[k] - out.mean[k];
      out.stddev[k] += d * d;
    }
  }
  for (double& s : out.stddev) s = std::sqrt(s / count);
  return out;
}

std::string ErrorProfileCsv(const ErrorProfile& profile) {
  std::string out = "k,mean_l1,std_l1\n";
  for (std::size_t k = 0; k < profile.mean.size(); ++k) {
    out += std::to_string(k + 1);
    out += ',';
    AppendDouble(out, profile.mean[k]);
    out += ',';
    AppendDouble(out, profile.stddev[k]);
    out += '\n';
  }
  return out;
}

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::kInvalidArgument, "pearson: series lengths differ");
  }
  if (xs.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "pearson: need at least 2 points");
  }
  auto constant = [](std::span<const double> s) {
    return std::all_of(s.begin(), s.end(), [&](double v) { return v == s[0]; });
  };
  if (constant(xs) || constant(ys)) {
    throw Error(ErrorCode::kNumeric, "undefined correlation: constant series");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw Error(ErrorCode::kNumeric, "undefined correlation: zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace waylift
