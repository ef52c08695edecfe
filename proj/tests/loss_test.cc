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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "waylift/error.h"
#include "test_util.h"

namespace waylift {
namespace {

using ::waylift::testing::Contains;
using ::waylift::testing::ErrorMessage;

WaypointTrajectory Traj(std::vector<Waypoint> points) {
  WaypointTrajectory t;
  t.points = std::move(points);
  return t;
}

TEST(WaypointL1LossTest, FrozenValues) {
  const WaypointTrajectory a = Traj({{1, 2}, {3, 4}});
  EXPECT_EQ(WaypointL1Loss(a, a, LossWeights::Uniform(2)), 0.0);
  EXPECT_EQ(WaypointL1Loss(Traj({{1, 2}}), Traj({{0, 0}}),
                           LossWeights::Uniform(1)),
            3.0);
  EXPECT_EQ(WaypointL1Loss(Traj({{2, 0}, {0, -4}}), Traj({{0, 0}, {0, 0}}),
                           LossWeights::Uniform(2)),
            3.0);
}

TEST(WaypointL1LossTest, RejectsMismatches) {
  EXPECT_THROW(WaypointL1Loss(Traj({{0, 0}}), Traj({{0, 0}, {1, 1}}),
                              LossWeights::Uniform(1)),
               Error);
  EXPECT_THROW(WaypointL1Loss(Traj({{0, 0}}), Traj({{0, 0}}),
                              LossWeights::Uniform(2)),
               Error);
}

TEST(WaypointL1LossTest, ExhaustiveSmallGrid) {
  // Every displacement pattern over {-1, 0, 1}^4 for C_f = 2.
  const double vals[] = {-1.0, 0.0, 1.0};
  for (double a : vals) {
    for (double b : vals) {
      for (double c : vals) {
        for (double d : vals) {
          const WaypointTrajectory gt = Traj({{0.5, -0.25}, {2.0, 1.0}});
          const WaypointTrajectory pred =
              Traj({{0.5 + a, -0.25 + b}, {2.0 + c, 1.0 + d}});
          const LossWeights w({1.0, 2.0});
          const double loss = WaypointL1Loss(pred, gt, w);
          const double expected =
              (std::abs(a) + std::abs(b) + 2.0 * (std::abs(c) + std::abs(d))) /
              3.0;
          EXPECT_DOUBLE_EQ(loss, expected);
          EXPECT_EQ(loss == 0.0, a == 0 && b == 0 && c == 0 && d == 0);
        }
      }
    }
  }
}

TEST(WaypointL1LossTest, RandomizedContract) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 3.0);
  std::uniform_real_distribution<double> pos(0.1, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const int c = 1 + i % 8;
    std::vector<Waypoint> p, g, scaled;
    std::vector<double> alpha, alpha2;
    const double s = pos(rng), r = pos(rng);
    for (int k = 0; k < c; ++k) {
      g.push_back({n(rng), n(rng)});
      const Waypoint e{n(rng), n(rng)};
      p.push_back({g.back().x + e.x, g.back().y + e.y});
      scaled.push_back({g.back().x + s * e.x, g.back().y + s * e.y});
      alpha.push_back(pos(rng));
      alpha2.push_back(r * alpha.back());
    }
    const LossWeights w(alpha), w2(alpha2);
    const double loss = WaypointL1Loss(Traj(p), Traj(g), w);
    ASSERT_GT(loss, 0.0);
    ASSERT_EQ(WaypointL1Loss(Traj(g), Traj(g), w), 0.0);
    ASSERT_NEAR(WaypointL1Loss(Traj(scaled), Traj(g), w), s * loss,
                1e-12 * (1 + s * loss));
    ASSERT_NEAR(WaypointL1Loss(Traj(p), Traj(g), w2), loss, 1e-12 * (1 + loss));
  }
}

TEST(PerWaypointErrorTest, Locality) {
  const WaypointTrajectory gt = Traj({{0, 0}, {1, 1}, {2, 2}});
  EXPECT_EQ(PerWaypointError(gt, gt), std::vector<double>(3, 0.0));
  const std::vector<double> e = PerWaypointError(Traj({{0, 0}, {1.5, 0}, {2, 2}}), gt);
  EXPECT_EQ(e, (std::vector<double>{0.0, 1.5, 0.0}));
}

TEST(AggregateErrorProfilesTest, MeanAndPopulationStd) {
  const ErrorProfile p = AggregateErrorProfiles({{1.0, 0.0}, {3.0, 0.0}, {5.0, 3.0}});
  EXPECT_DOUBLE_EQ(p.mean[0], 3.0);
  EXPECT_DOUBLE_EQ(p.mean[1], 1.0);
  EXPECT_DOUBLE_EQ(p.stddev[0], std::sqrt(8.0 / 3.0));
  EXPECT_DOUBLE_EQ(p.stddev[1], std::sqrt(2.0));
  EXPECT_EQ(ErrorProfileCsv(p).rfind("k,mean_l1,std_l1\n1,3,", 0), 0u);
  EXPECT_THROW(AggregateErrorProfiles({}), Error);
  EXPECT_THROW(AggregateErrorProfiles({{1.0}, {1.0, 2.0}}), Error);
}

TEST(PearsonTest, ConstructedSeries) {
  const std::vector<double> xs = {0.3, -1.2, 4.5, 2.2, 0.0, 9.1, -3.3};
  std::vector<double> neg, aff;
  for (double x : xs) {
    neg.push_back(-x);
    aff.push_back(2.5 * x + 7.0);
  }
  EXPECT_NEAR(Pearson(xs, xs), 1.0, 1e-12);
  EXPECT_NEAR(Pearson(xs, neg), -1.0, 1e-12);
  EXPECT_NEAR(Pearson(xs, aff), 1.0, 1e-12);
  const std::vector<double> ys = {1.0, 0.2, -0.4, 3.0, 2.0, 0.5, 0.1};
  std::vector<double> ys_aff;
  for (double y : ys) ys_aff.push_back(0.01 * y - 40.0);
  EXPECT_NEAR(Pearson(xs, ys), Pearson(aff, ys_aff), 1e-12);
}

TEST(PearsonTest, UndefinedForConstantSeries) {
  const std::vector<double> xs = {1.0, 2.0, 3.0}, flat = {2.0, 2.0, 2.0};
  EXPECT_TRUE(Contains(ErrorMessage([&] { Pearson(xs, flat); }),
                       "undefined correlation"));
  const std::vector<double> one = {1.0};
  EXPECT_THROW(Pearson(one, one), Error);
  const std::vector<double> two = {1.0, 2.0};
  EXPECT_THROW(Pearson(xs, two), Error);
}

}  // namespace
}  // namespace waylift
