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

#include "waylift/kbm.h"

#include <cmath>
#include <numbers>
#include <string>

#include "waylift/error.h"

namespace waylift {
namespace {

using Vec4 = Eigen::Vector4d;
// Tangent of a 4-state w.r.t. (x0, y0, theta0, v0, a_lon, delta).
using Tangent = Eigen::Matrix<double, 4, 6>;

Vec4 ToVec(const KbmState& z) { return {z.x, z.y, z.theta, z.v}; }
KbmState FromVec(const Vec4& v) { return {v(0), v(1), v(2), v(3)}; }

void CheckSteer(double steer) {
  if (!(std::abs(steer) < std::numbers::pi / 2)) {
    throw Error(ErrorCode::kNumeric,
                "steering angle " + std::to_string(steer) +
                    " at or beyond pi/2 (tangent singularity)");
  }
}

Vec4 Field(const Vec4& z, const KbmControls& u, double tan_steer,
           double wheelbase) {
  return {z(3) * std::cos(z(2)), z(3) * std::sin(z(2)),
          z(3) * tan_steer / wheelbase, u.accel};
}

// d field / d (state, controls) at z.
Tangent FieldJacobian(const Vec4& z, double tan_steer, double sec2_steer,
                      double wheelbase) {
  const double c = std::cos(z(2));
  const double s = std::sin(z(2));
  Tangent j = Tangent::Zero();
  j(0, 2) = -z(3) * s;
  j(0, 3) = c;
  j(1, 2) = z(3) * c;
  j(1, 3) = s;
  j(2, 3) = tan_steer / wheelbase;
  j(2, 5) = z(3) * sec2_steer / wheelbase;
  j(3, 4) = 1.0;
  return j;
}

// Chain rule through one field evaluation: d K / d p given d Z / d p.
Tangent StageTangent(const Vec4& z, const Tangent& dz, double tan_steer,
                     double sec2_steer, double wheelbase) {
  const Tangent j = FieldJacobian(z, tan_steer, sec2_steer, wheelbase);
  Tangent out = j.leftCols<4>() * dz;
  out.rightCols<2>() += j.rightCols<2>();
  return out;
}

}  // namespace

KbmDerivative KbmRhs(const KbmState& z, const KbmControls& u,
                     double wheelbase) {
  CheckSteer(u.steer);
  const Vec4 f = Field(ToVec(z), u, std::tan(u.steer), wheelbase);
  return {f(0), f(1), f(2), f(3)};
}

KbmState StepEulerKbm(const KbmState& z, const KbmControls& u, double dt,
                      double wheelbase) {
  CheckSteer(u.steer);
  KbmState next;
  next.v = z.v + u.accel * dt;
  next.theta = z.theta + next.v / wheelbase * std::tan(u.steer) * dt;
  next.x = z.x + next.v * std::cos(next.theta) * dt;
  next.y = z.y + next.v * std::sin(next.theta) * dt;
  return next;
}

KbmState StepRk4Kbm(const KbmState& z, const KbmControls& u, double dt,
                    double wheelbase) {
  CheckSteer(u.steer);
  const double t = std::tan(u.steer);
  const Vec4 z0 = ToVec(z);
  const Vec4 k1 = Field(z0, u, t, wheelbase);
  const Vec4 k2 = Field(z0 + 0.5 * dt * k1, u, t, wheelbase);
  const Vec4 k3 = Field(z0 + 0.5 * dt * k2, u, t, wheelbase);
  const Vec4 k4 = Field(z0 + dt * k3, u, t, wheelbase);
  return FromVec(z0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

KbmStepJacobian StepEulerKbmJacobian(const KbmState& z, const KbmControls& u,
                                     double dt, double wheelbase) {
  CheckSteer(u.steer);
  const double t = std::tan(u.steer);
  const double sec2 = 1.0 + t * t;
  const KbmState n = StepEulerKbm(z, u, dt, wheelbase);
  const double c = std::cos(n.theta);
  const double s = std::sin(n.theta);

  using Row = Eigen::Matrix<double, 1, 6>;
  Row dv = Row::Zero();
  dv(3) = 1.0;
  dv(4) = dt;
  Row dtheta = Row::Zero();
  dtheta(2) = 1.0;
  dtheta += t * dt / wheelbase * dv;
  dtheta(5) += n.v * dt * sec2 / wheelbase;
  Row dx = Row::Zero();
  dx(0) = 1.0;
  dx += c * dt * dv - n.v * s * dt * dtheta;
  Row dy = Row::Zero();
  dy(1) = 1.0;
  dy += s * dt * dv + n.v * c * dt * dtheta;

  Tangent full;
  full << dx, dy, dtheta, dv;
  return {full.leftCols<4>(), full.rightCols<2>()};
}

KbmStepJacobian StepRk4KbmJacobian(const KbmState& z, const KbmControls& u,
                                   double dt, double wheelbase) {
  CheckSteer(u.steer);
  const double t = std::tan(u.steer);
  const double sec2 = 1.0 + t * t;
  const Vec4 z0 = ToVec(z);
  Tangent d0 = Tangent::Zero();
  d0.leftCols<4>().setIdentity();

  const Vec4 k1 = Field(z0, u, t, wheelbase);
  const Tangent dk1 = StageTangent(z0, d0, t, sec2, wheelbase);
  const Vec4 z2 = z0 + 0.5 * dt * k1;
  const Vec4 k2 = Field(z2, u, t, wheelbase);
  const Tangent dk2 = StageTangent(z2, d0 + 0.5 * dt * dk1, t, sec2, wheelbase);
  const Vec4 z3 = z0 + 0.5 * dt * k2;
  const Vec4 k3 = Field(z3, u, t, wheelbase);
  const Tangent dk3 = StageTangent(z3, d0 + 0.5 * dt * dk2, t, sec2, wheelbase);
  const Vec4 z4 = z0 + dt * k3;
  const Tangent dk4 = StageTangent(z4, d0 + dt * dk3, t, sec2, wheelbase);

  const Tangent full = d0 + dt / 6.0 * (dk1 + 2.0 * dk2 + 2.0 * dk3 + dk4);
  return {full.leftCols<4>(), full.rightCols<2>()};
}

std::vector<KbmState> RolloutKbm(const RawActionSequence& actions,
                                 const InitialState& init,
                                 const LiftConfig& cfg, RolloutStats* stats) {
  ValidateConfig(cfg);
  std::vector<KbmState> states;
  states.reserve(static_cast<std::size_t>(actions.steps()) + 1);
  states.push_back(InitKbm(init));
  const std::int64_t evals_per_step = cfg.scheme == Scheme::kRk4 ? 4 : 1;
  for (int k = 0; k < actions.steps(); ++k) {
    try {
      const KbmControls u = ActivateKbm(actions.step(k), cfg);
      const KbmState& z = states.back();
      states.push_back(cfg.scheme == Scheme::kRk4
                           ? StepRk4Kbm(z, u, cfg.dt, cfg.wheelbase)
                           : StepEulerKbm(z, u, cfg.dt, cfg.wheelbase));
    } catch (const Error& e) {
      throw Error(e.code(), "kbm step " + std::to_string(k) + ": " + e.what());
    }
    if (stats != nullptr) stats->rhs_evals += evals_per_step;
  }
  return states;
}

WaypointTrajectory LiftKbm(const RawActionSequence& actions,
                           const InitialState& init, const LiftConfig& cfg,
                           RolloutStats* stats) {
  const std::vector<KbmState> states = RolloutKbm(actions, init, cfg, stats);
  WaypointTrajectory out;
  out.points.reserve(states.size() - 1);
  out.headings.reserve(states.size() - 1);
  for (std::size_t k = 1; k < states.size(); ++k) {
    out.points.push_back({states[k].x, states[k].y});
    out.headings.push_back(states[k].theta);
  }
  return out;
}

}  // namespace waylift
