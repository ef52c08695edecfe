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

#include <cmath>
#include <limits>
#include <string>

#include <gtest/gtest.h>

#include "waylift/config.h"
#include "waylift/csv.h"
#include "waylift/error.h"
#include "waylift/types.h"
#include "test_util.h"

namespace waylift {
namespace {

using ::waylift::testing::Contains;
using ::waylift::testing::Defaults;
using ::waylift::testing::ErrorMessage;

TEST(ValidateConfigTest, AcceptsDefaults) {
  const LiftConfig cfg = Defaults();
  EXPECT_EQ(ValidateConfig(cfg), cfg);
}

TEST(ValidateConfigTest, NamesTheViolatedBound) {
  LiftConfig cfg = Defaults();
  cfg.dt = 0.0;
  ErrorCode code{};
  EXPECT_TRUE(Contains(ErrorMessage([&] { ValidateConfig(cfg); }, &code),
                       "nonpositive interval"));
  EXPECT_EQ(code, ErrorCode::kInvalidConfig);

  cfg = Defaults();
  cfg.substeps = 0;
  EXPECT_TRUE(Contains(ErrorMessage([&] { ValidateConfig(cfg); }),
                       "zero substeps"));

  cfg = Defaults();
  cfg.max_steer = 1.6;
  EXPECT_TRUE(Contains(ErrorMessage([&] { ValidateConfig(cfg); }),
                       "delta_max"));

  cfg = Defaults();
  cfg.max_curvature = std::numeric_limits<double>::quiet_NaN();
  EXPECT_TRUE(Contains(ErrorMessage([&] { ValidateConfig(cfg); }), "kappa_M"));
}

// Any config either passes or is rejected with exactly one named field.
TEST(ValidateConfigTest, IsTotal) {
  const double values[] = {-1.0, 0.0, 0.3, 2.0,
                           std::numeric_limits<double>::infinity()};
  for (double dt : values) {
    for (double steer : values) {
      for (int n : {-1, 0, 1, 5}) {
        LiftConfig cfg = Defaults();
        cfg.dt = dt;
        cfg.max_steer = steer;
        cfg.substeps = n;
        const bool ok = std::isfinite(dt) && dt > 0.0 && std::isfinite(steer) &&
                        steer > 0.0 && steer < M_PI / 2 && n >= 1;
        const std::string msg = ErrorMessage([&] { ValidateConfig(cfg); });
        EXPECT_EQ(msg.empty(), ok) << dt << " " << steer << " " << n;
        if (!ok) {
          EXPECT_EQ(msg.rfind("invalid config: ", 0), 0u) << msg;
        }
      }
    }
  }
}

TEST(ConfigJsonTest, RoundTrips) {
  LiftConfig cfg = Defaults();
  cfg.scheme = Scheme::kEuler;
  cfg.model = Model::kCcpp;
  EXPECT_EQ(ConfigFromJson(ConfigToJson(cfg)), cfg);
}

TEST(ConfigJsonTest, RejectsUnknownAndMissingKeys) {
  nlohmann::json doc = ConfigToJson(Defaults());
  doc["wheel_base"] = 2.9;
  EXPECT_TRUE(Contains(ErrorMessage([&] { ConfigFromJson(doc); }),
                       "wheel_base"));

  doc = ConfigToJson(Defaults());
  doc.erase("sigma_M");
  EXPECT_TRUE(Contains(ErrorMessage([&] { ConfigFromJson(doc); }), "sigma_M"));

  doc = ConfigToJson(Defaults());
  doc["scheme"] = "rk45";
  EXPECT_TRUE(Contains(ErrorMessage([&] { ConfigFromJson(doc); }), "scheme"));
}

TEST(ConfigJsonTest, MalformedTextIsAParseError) {
  ErrorCode code{};
  const std::string msg =
      ErrorMessage([] { ParseJson("{\"dt\": 0.5,"); }, &code);
  EXPECT_EQ(code, ErrorCode::kParse);
  EXPECT_TRUE(Contains(msg, "malformed JSON"));
}

TEST(SetupJsonTest, ReadsInitialState) {
  nlohmann::json doc = ConfigToJson(Defaults());
  doc["initial_state"] = {{"v0", 3.5}, {"kappa0", 0.1}};
  const LiftSetup setup = SetupFromJson(doc);
  EXPECT_EQ(setup.initial.v0, 3.5);
  EXPECT_EQ(setup.initial.kappa0, 0.1);
  EXPECT_EQ(setup.config, Defaults());
}

TEST(InitTest, KbmAnchorsAtOrigin) {
  for (double v0 : {10.0, 0.0, 3.7}) {
    EXPECT_EQ(InitKbm({v0, 0.0}), (KbmState{0.0, 0.0, 0.0, v0}));
  }
  EXPECT_THROW(InitKbm({std::nan(""), 0.0}), Error);
}

TEST(InitTest, CcppBoundIsInclusive) {
  const LiftConfig cfg = Defaults();
  EXPECT_EQ(InitCcpp({10.0, 0.0}, cfg), (CcppState{0, 0, 0, 0, 10.0}));
  EXPECT_EQ(InitCcpp({5.0, 0.4}, cfg).kappa, 0.4);
  EXPECT_EQ(InitCcpp({5.0, -0.4}, cfg).kappa, -0.4);
  EXPECT_THROW(InitCcpp({5.0, 0.5}, cfg), Error);
  EXPECT_THROW(InitCcpp({-1.0, 0.0}, cfg), Error);
}

TEST(RawActionSequenceTest, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(RawActionSequence(std::vector<RawAction>{}), Error);
  EXPECT_THROW(RawActionSequence({{0.0, std::nan(""), 0.0}}), Error);
  const double flat[] = {1, 2, 3, 4, 5, 6};
  const RawActionSequence a = RawActionSequence::FromFlat(flat);
  EXPECT_EQ(a.steps(), 2);
  EXPECT_EQ(a.at(1, kLateral), 5.0);
  EXPECT_EQ(a.Perturbed(1, kBrake, 0.5).at(1, kBrake), 6.5);
  const double ragged[] = {1, 2};
  EXPECT_THROW(RawActionSequence::FromFlat(ragged), Error);
}

TEST(LossWeightsTest, RejectsNegativeAndZeroSum) {
  EXPECT_THROW(LossWeights({1.0, -0.5}), Error);
  EXPECT_THROW(LossWeights({0.0, 0.0}), Error);
  EXPECT_EQ(LossWeights::Uniform(4).sum(), 4.0);
}

TEST(CsvTest, ActionsRoundTripExactly) {
  const double flat[] = {0.1, -2.5e-7, 3.0, 1.0 / 3.0, -0.0, 12345.678};
  const RawActionSequence a = RawActionSequence::FromFlat(flat);
  const std::string csv = ActionsToCsv(a);
  EXPECT_EQ(csv.rfind("k,tau,lat,brake\n", 0), 0u);
  EXPECT_EQ(ParseActionsCsv(csv), a);
}

TEST(CsvTest, RejectsBadRows) {
  EXPECT_THROW(ParseActionsCsv("k,tau,lat,brake\n0,1,2\n"), Error);
  EXPECT_THROW(ParseActionsCsv("k,tau,lat,brake\n0,1,x,2\n"), Error);
  EXPECT_THROW(ParseActionsCsv("k,tau,lat,brake\n"), Error);
  EXPECT_THROW(ParseActionsCsv("a,b,c,d\n0,1,2,3\n"), Error);
}

TEST(CsvTest, TrajectoryHasOneBasedIndexAndOptionalHeading) {
  WaypointTrajectory t;
  t.points = {{5.0, 0.0}, {10.0, 0.25}};
  EXPECT_EQ(TrajectoryToCsv(t), "k,x,y\n1,5,0\n2,10,0.25\n");
  t.headings = {0.0, 0.5};
  EXPECT_EQ(TrajectoryToCsv(t), "k,x,y,theta\n1,5,0,0\n2,10,0.25,0.5\n");
}

}  // namespace
}  // namespace waylift
