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

#include "waylift/activation.h"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "waylift/error.h"
#include "test_util.h"

namespace waylift {
namespace {

using ::waylift::testing::Defaults;

TEST(ActivateKbmTest, FrozenValues) {
  const LiftConfig cfg = Defaults();
  const KbmControls zero = ActivateKbm({0.0, 0.0, 0.0}, cfg);
  EXPECT_EQ(zero.accel, 0.0);
  EXPECT_EQ(zero.steer, 0.0);
  // Values from tests/oracles/derive_values.py.
  EXPECT_NEAR(ActivateKbm({0.0, std::atanh(0.5), 0.0}, cfg).steer,
              0.29999999999999993, 1e-15);
  EXPECT_NEAR(ActivateKbm({10.0, 0.0, -10.0}, cfg).accel, 0.9999092042625952,
              1e-15);
}

TEST(ActivateCcppTest, FrozenValues) {
  const LiftConfig cfg = Defaults(Model::kCcpp);
  const CcppControls zero = ActivateCcpp({0.0, 0.0, 0.0}, cfg);
  EXPECT_EQ(zero.accel, 0.0);
  EXPECT_EQ(zero.sharpness, 0.0);
  EXPECT_NEAR(ActivateCcpp({0.0, -20.0, 0.0}, cfg).sharpness, -0.1, 1e-15);
  EXPECT_EQ(ActivateCcpp({5.0, 0.0, 5.0}, cfg).accel, 0.0);
}

TEST(ActivationTest, RejectsNonFinite) {
  const LiftConfig cfg = Defaults();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(ActivateKbm({inf, 0.0, 0.0}, cfg), Error);
  EXPECT_THROW(ActivateCcpp({0.0, std::nan(""), 0.0}, cfg), Error);
}

TEST(ActivationTest, RangeSymmetryAndMonotonicity) {
  LiftConfig cfg = Defaults();
  cfg.max_accel = 2.0;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> wide(0.0, 5.0);
  for (int i = 0; i < 5000; ++i) {
    const double t = wide(rng), s = wide(rng), b = wide(rng);
    const KbmControls k = ActivateKbm({t, s, b}, cfg);
    const CcppControls c = ActivateCcpp({t, s, b}, cfg);
    ASSERT_LE(std::abs(k.accel), cfg.max_accel);
    ASSERT_LT(std::abs(k.steer), cfg.max_steer);
    ASSERT_LT(std::abs(c.sharpness), cfg.max_sharpness);

    // Odd lateral channel, antisymmetric throttle/brake swap.
    EXPECT_EQ(ActivateKbm({t, -s, b}, cfg).steer, -k.steer);
    EXPECT_EQ(ActivateCcpp({t, -s, b}, cfg).sharpness, -c.sharpness);
    EXPECT_EQ(ActivateKbm({b, s, t}, cfg).accel, -k.accel);

    // Strict monotonicity where the sigmoids are not saturated.
    const double h = 1e-3;
    if (std::abs(t) < 20 && std::abs(b) < 20 && std::abs(s) < 10) {
      EXPECT_GT(ActivateKbm({t + h, s, b}, cfg).accel, k.accel);
      EXPECT_LT(ActivateKbm({t, s, b + h}, cfg).accel, k.accel);
      EXPECT_GT(ActivateKbm({t, s + h, b}, cfg).steer, k.steer);
      EXPECT_GT(ActivateCcpp({t, s + h, b}, cfg).sharpness, c.sharpness);
    }
  }
  // Moderate inputs never attain the bounds.
  EXPECT_LT(ActivateKbm({15.0, 15.0, -15.0}, cfg).accel, cfg.max_accel);
  EXPECT_LT(ActivateKbm({0.0, 5.0, 0.0}, cfg).steer, cfg.max_steer);
}

TEST(ActivationJacobianTest, MatchesCentralDifferences) {
  const LiftConfig cfg = Defaults();
  const RawAction raw{0.3, -0.7, 1.1};
  const auto jac = ActivationJacobian(raw, cfg.max_accel, cfg.max_steer);
  const double h = 1e-6;
  for (int c = 0; c < 3; ++c) {
    RawAction up = raw, down = raw;
    (&up.throttle)[c] += h;
    (&down.throttle)[c] -= h;
    const KbmControls a = ActivateKbm(up, cfg), b = ActivateKbm(down, cfg);
    EXPECT_NEAR(jac(0, c), (a.accel - b.accel) / (2 * h), 1e-9);
    EXPECT_NEAR(jac(1, c), (a.steer - b.steer) / (2 * h), 1e-9);
  }
}

}  // namespace
}  // namespace waylift
