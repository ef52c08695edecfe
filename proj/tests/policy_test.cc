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

#include "waylift/policy.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "waylift/ccpp.h"
#include "waylift/harness.h"
#include "waylift/lift.h"
#include "test_util.h"

namespace waylift {
namespace {

using ::waylift::testing::Defaults;

TEST(ExpertTest, ZeroRequestDrivesStraight) {
  for (Model model : {Model::kKbm, Model::kCcpp}) {
    const LiftConfig cfg = Defaults(model);
    const RawActionSequence a =
        ExpertActions({10.0, 0.0, 0.0}, 8, cfg, ExpertParams{});
    const WaypointTrajectory t = OracleRollout(a, {10.0, 0.0}, cfg, 64);
    for (int k = 0; k < 8; ++k) {
      EXPECT_NEAR(t.points[k].x, 5.0 * (k + 1), 1e-9);
      EXPECT_NEAR(t.points[k].y, 0.0, 1e-12);
    }
  }
}

TEST(ExpertTest, CurvatureBeyondTheBoundSaturates) {
  const LiftConfig cfg = Defaults(Model::kCcpp, Scheme::kRk4);
  const RawActionSequence a =
      ExpertActions({10.0, 0.6, 0.0}, 8, cfg, ExpertParams{});
  CcppTrace trace;
  LiftCcpp(a, {10.0, 0.0}, cfg, nullptr, &trace);
  EXPECT_EQ(trace.curvatures.back(), cfg.max_curvature);

  // The reference rollout turns at exactly kappa_M once saturated.
  const WaypointTrajectory gt = OracleRollout(a, {10.0, 0.0}, cfg, 64);
  LiftConfig loose = cfg;
  loose.max_curvature = 10.0;
  const WaypointTrajectory free = OracleRollout(a, {10.0, 0.0}, loose, 64);
  const double ds = 10.0 * cfg.dt;
  EXPECT_NEAR(gt.headings[7] - gt.headings[6], cfg.max_curvature * ds, 1e-9);
  EXPECT_GT(free.headings[7] - free.headings[6], cfg.max_curvature * ds);
}

TEST(GenerateDatasetTest, DeterministicGivenTheSeed) {
  const LiftConfig cfg = Defaults(Model::kKbm);
  const auto a = GenerateDataset(6, 8, cfg, ExpertParams{}, 42);
  const auto b = GenerateDataset(6, 8, cfg, ExpertParams{}, 42);
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].obs, b[i].obs);
    EXPECT_EQ(a[i].gt, b[i].gt);
    EXPECT_EQ(a[i].obs.size(), kObsDim);
    EXPECT_EQ(a[i].gt.size(), 8);
  }
  EXPECT_NE(GenerateDataset(1, 8, cfg, ExpertParams{}, 43)[0].gt, a[0].gt);
}

// Policy with small random output weights so every path is exercised.
TinyPolicy RandomPolicy(std::uint64_t seed) {
  TinyPolicy p(8, 16, seed, {2.0, 0.5, 2.0});
  Eigen::VectorXd params = p.Parameters();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 0.1);
  for (Eigen::Index i = 0; i < params.size(); ++i) params(i) += n(rng);
  p.SetParameters(params);
  return p;
}

TEST(PolicyLossTest, ParameterGradientMatchesFiniteDifferences) {
  for (Model model : {Model::kKbm, Model::kCcpp}) {
    const LiftConfig cfg = Defaults(model);
    const auto data = GenerateDataset(4, 8, cfg, ExpertParams{}, 1);
    TinyPolicy p = RandomPolicy(3);
    const BatchLoss bl = PolicyLoss(p, data, cfg);
    const Eigen::VectorXd theta = p.Parameters();
    const double h = 1e-5;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < theta.size(); i += 7) {
      Eigen::VectorXd up = theta, down = theta;
      up(i) += h;
      down(i) -= h;
      p.SetParameters(up);
      const double lu = PolicyLoss(p, data, cfg).loss;
      p.SetParameters(down);
      const double ld = PolicyLoss(p, data, cfg).loss;
      const double fd = (lu - ld) / (2 * h);
      worst = std::max(worst, std::abs(fd - bl.grad(i)) /
                                  std::max({1.0, std::abs(fd), std::abs(bl.grad(i))}));
    }
    p.SetParameters(theta);
    EXPECT_LT(worst, 1e-4) << ModelName(model);
  }
}

TEST(TrainStepTest, ZeroLearningRateKeepsParameters) {
  const LiftConfig cfg = Defaults(Model::kKbm);
  const auto data = GenerateDataset(3, 8, cfg, ExpertParams{}, 2);
  TinyPolicy p = RandomPolicy(4);
  const Eigen::VectorXd before = p.Parameters();
  const double loss = TrainStep(p, data, cfg, 0.0);
  EXPECT_EQ(p.Parameters(), before);
  EXPECT_EQ(loss, PolicyLoss(p, data, cfg).loss);
  EXPECT_THROW(TrainStep(p, data, cfg, -1.0), Error);
}

TEST(TrainStepTest, SmallStepDecreasesASingleSampleLoss) {
  for (Model model : {Model::kKbm, Model::kCcpp}) {
    const LiftConfig cfg = Defaults(model);
    const auto data = GenerateDataset(1, 8, cfg, ExpertParams{}, 5);
    bool decreased = false;
    for (double lr : {1e-3, 1e-4, 1e-5, 1e-6}) {
      TinyPolicy p = RandomPolicy(6);
      const double before = TrainStep(p, data, cfg, lr);
      if (PolicyLoss(p, data, cfg).loss < before) {
        decreased = true;
        break;
      }
    }
    EXPECT_TRUE(decreased) << ModelName(model);
  }
}

TEST(TinyPolicyTest, ZeroHeadStartsFromZeroActions) {
  const TinyPolicy p(8, 32, 0);
  const RawActionSequence a = p.Forward(Eigen::VectorXd::Ones(kObsDim));
  EXPECT_EQ(a, RawActionSequence::Zeros(8));
  EXPECT_EQ(p.parameter_count(), p.Parameters().size());
}

TEST(TrainTest, DeterministicAndFlatAtZeroLr) {
  TrainOptions o;
  o.steps = 15;
  o.dataset_size = 8;
  const TrainResult a = Train(o), b = Train(o);
  EXPECT_EQ(a.losses, b.losses);
  EXPECT_EQ(a.losses.size(), 16u);
  EXPECT_LT(a.losses.back(), a.losses.front());

  o.lr = 0.0;
  const TrainResult flat = Train(o);
  for (double l : flat.losses) EXPECT_EQ(l, flat.losses.front());
  EXPECT_EQ(LossCurveCsv({1.0, 0.5}), "step,loss\n0,1\n1,0.5\n");
}

TEST(TrainOptionsTest, JsonRoundTripAndValidation) {
  TrainOptions o;
  o.lift = Defaults(Model::kCcpp);
  o.channel_gain = {10.0, 0.03, 10.0};
  o.lr = 0.05;
  o.seed = 11;
  const TrainOptions back = TrainOptionsFromJson(TrainOptionsToJson(o));
  EXPECT_EQ(back.lift, o.lift);
  EXPECT_EQ(back.channel_gain, o.channel_gain);
  EXPECT_EQ(back.lr, 0.05);
  EXPECT_EQ(back.seed, 11u);
  EXPECT_EQ(back.schedule, LrSchedule::kCosine);

  EXPECT_THROW(TrainOptionsFromJson({{"learning_rate", 0.1}}), Error);
  EXPECT_THROW(TrainOptionsFromJson({{"lr", -0.1}}), Error);
  EXPECT_THROW(TrainOptionsFromJson({{"schedule", "linear"}}), Error);
}

TEST(ScheduledLrTest, CosineAnnealsToZero) {
  TrainOptions o;
  o.lr = 0.1;
  o.steps = 100;
  EXPECT_DOUBLE_EQ(ScheduledLr(o, 0), 0.1);
  EXPECT_NEAR(ScheduledLr(o, 50), 0.05, 1e-15);
  o.schedule = LrSchedule::kStep;
  o.lr_decay = 0.5;
  o.lr_decay_every = 10;
  EXPECT_DOUBLE_EQ(ScheduledLr(o, 25), 0.025);
  o.schedule = LrSchedule::kConstant;
  EXPECT_EQ(ScheduledLr(o, 99), 0.1);
}

}  // namespace
}  // namespace waylift
