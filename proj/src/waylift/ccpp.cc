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

#include "waylift/ccpp.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "waylift/error.h"

namespace waylift {
namespace {

using Vec4 = Eigen::Vector4d;
// Tangent of a pose w.r.t. (x0, y0, theta0, kappa0, varsigma, ds).
using Tangent = Eigen::Matrix<double, 4, 6>;

Vec4 ToVec(const CcppPose& p) { return {p.x, p.y, p.theta, p.kappa}; }
CcppPose FromVec(const Vec4& v) { return {v(0), v(1), v(2), v(3)}; }

Vec4 Field(const Vec4& p, double sharpness) {
  return {std::cos(p(2)), std::sin(p(2)), p(3), sharpness};
}

Tangent StageTangent(const Vec4& p, const Tangent& dp) {
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  j(0, 2) = -std::sin(p(2));
  j(1, 2) = std::cos(p(2));
  j(2, 3) = 1.0;
  Tangent out = j * dp;
  out(3, 4) += 1.0;  // d varsigma / d varsigma
  return out;
}

struct Rk4Stages {
  Vec4 start;
  Vec4 k1, k2, k3, k4;
  Vec4 unclipped;
};

Rk4Stages RunRk4(const CcppPose& p, double sharpness, double ds) {
  Rk4Stages s;
  s.start = ToVec(p);
  s.k1 = Field(s.start, sharpness);
  s.k2 = Field(s.start + 0.5 * ds * s.k1, sharpness);
  s.k3 = Field(s.start + 0.5 * ds * s.k2, sharpness);
  s.k4 = Field(s.start + ds * s.k3, sharpness);
  s.unclipped = s.start + ds / 6.0 * (s.k1 + 2.0 * s.k2 + 2.0 * s.k3 + s.k4);
  return s;
}

double ClipDerivative(double unclipped, double bound) {
  return ClampSide(unclipped, bound) == 0 ? 1.0 : 0.0;
}

bool Finite(const CcppPose& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.theta) &&
         std::isfinite(p.kappa);
}

}  // namespace

double CcppSpeedUpdate(double v, double accel, double dt) {
  return std::max(v + accel * dt, 0.0);
}

ArcIncrement ArcIncrementFor(double v_next, double dt, int substeps) {
  const double total = v_next * dt;
  return {total, total / substeps};
}

int ClampSide(double value, double bound) {
  if (value > bound) return 1;
  if (value < -bound) return -1;
  return 0;
}

CcppPose SubstepEulerCcpp(const CcppPose& p, double sharpness, double ds,
                          double kappa_max) {
  CcppPose n;
  n.kappa = std::clamp(p.kappa + sharpness * ds, -kappa_max, kappa_max);
  n.theta = p.theta + n.kappa * ds;
  n.x = p.x + std::cos(n.theta) * ds;
  n.y = p.y + std::sin(n.theta) * ds;
  return n;
}

CcppPose SubstepRk4Ccpp(const CcppPose& p, double sharpness, double ds,
                        double kappa_max) {
  CcppPose n = FromVec(RunRk4(p, sharpness, ds).unclipped);
  n.kappa = std::clamp(n.kappa, -kappa_max, kappa_max);
  return n;
}

CcppSubstepJacobian SubstepEulerCcppJacobian(const CcppPose& p,
                                             double sharpness, double ds,
                                             double kappa_max) {
  const double pre = p.kappa + sharpness * ds;
  const double gate = ClipDerivative(pre, kappa_max);
  const CcppPose n = SubstepEulerCcpp(p, sharpness, ds, kappa_max);
  const double c = std::cos(n.theta);
  const double s = std::sin(n.theta);

  using Row = Eigen::Matrix<double, 1, 6>;
  Row dkappa = Row::Zero();
  dkappa(3) = gate;
  dkappa(4) = gate * ds;
  dkappa(5) = gate * sharpness;
  Row dtheta = Row::Zero();
  dtheta(2) = 1.0;
  dtheta += ds * dkappa;
  dtheta(5) += n.kappa;
  Row dx = Row::Zero();
  dx(0) = 1.0;
  dx += -s * ds * dtheta;
  dx(5) += c;
  Row dy = Row::Zero();
  dy(1) = 1.0;
  dy += c * ds * dtheta;
  dy(5) += s;

  Tangent full;
  full << dx, dy, dtheta, dkappa;
  return {full.leftCols<4>(), full.col(4), full.col(5)};
}

CcppSubstepJacobian SubstepRk4CcppJacobian(const CcppPose& p, double sharpness,
                                           double ds, double kappa_max) {
  const Rk4Stages st = RunRk4(p, sharpness, ds);
  Tangent d0 = Tangent::Zero();
  d0.leftCols<4>().setIdentity();

  const Tangent dk1 = StageTangent(st.start, d0);
  Tangent dz2 = d0 + 0.5 * ds * dk1;
  dz2.col(5) += 0.5 * st.k1;
  const Tangent dk2 = StageTangent(st.start + 0.5 * ds * st.k1, dz2);
  Tangent dz3 = d0 + 0.5 * ds * dk2;
  dz3.col(5) += 0.5 * st.k2;
  const Tangent dk3 = StageTangent(st.start + 0.5 * ds * st.k2, dz3);
  Tangent dz4 = d0 + ds * dk3;
  dz4.col(5) += st.k3;
  const Tangent dk4 = StageTangent(st.start + ds * st.k3, dz4);

  Tangent full = d0 + ds / 6.0 * (dk1 + 2.0 * dk2 + 2.0 * dk3 + dk4);
  full.col(5) += (st.k1 + 2.0 * st.k2 + 2.0 * st.k3 + st.k4) / 6.0;
  full.row(3) *= ClipDerivative(st.unclipped(3), kappa_max);
  return {full.leftCols<4>(), full.col(4), full.col(5)};
}

std::vector<CcppState> RolloutCcpp(const RawActionSequence& actions,
                                   const InitialState& init,
                                   const LiftConfig& cfg, RolloutStats* stats,
                                   CcppTrace* trace) {
  ValidateConfig(cfg);
  std::vector<CcppState> states;
  states.reserve(static_cast<std::size_t>(actions.steps()) + 1);
  states.push_back(InitCcpp(init, cfg));
  const bool rk4 = cfg.scheme == Scheme::kRk4;

  for (int k = 0; k < actions.steps(); ++k) {
    CcppControls u;
    try {
      u = ActivateCcpp(actions.step(k), cfg);
    } catch (const Error& e) {
      throw Error(e.code(), "ccpp interval " + std::to_string(k) + ": " + e.what());
    }
    const CcppState& z = states.back();
    const double unclamped_v = z.v + u.accel * cfg.dt;
    const double v_next = CcppSpeedUpdate(z.v, u.accel, cfg.dt);
    const ArcIncrement arc = ArcIncrementFor(v_next, cfg.dt, cfg.substeps);
    if (trace != nullptr) {
      trace->speeds.push_back(v_next);
      trace->clamp_sides.push_back(
          static_cast<std::int8_t>(unclamped_v < 0.0 ? -1 : 0));
    }

    CcppPose pose{z.x, z.y, z.theta, z.kappa};
    for (int j = 0; j < cfg.substeps; ++j) {
      if (trace != nullptr) {
        const double pre = rk4 ? RunRk4(pose, u.sharpness, arc.step).unclipped(3)
                               : pose.kappa + u.sharpness * arc.step;
        trace->clamp_sides.push_back(
            static_cast<std::int8_t>(ClampSide(pre, cfg.max_curvature)));
      }
      pose = rk4 ? SubstepRk4Ccpp(pose, u.sharpness, arc.step, cfg.max_curvature)
                 : SubstepEulerCcpp(pose, u.sharpness, arc.step,
                                    cfg.max_curvature);
      if (!Finite(pose)) {
        throw Error(ErrorCode::kNumeric, "ccpp interval " + std::to_string(k) +
                                             ", substep " + std::to_string(j) +
                                             ": non-finite pose");
      }
      if (trace != nullptr) trace->curvatures.push_back(pose.kappa);
    }
    if (stats != nullptr) {
      stats->rhs_evals += static_cast<std::int64_t>(cfg.substeps) * (rk4 ? 4 : 1);
    }
    states.push_back({pose.x, pose.y, pose.theta, pose.kappa, v_next});
  }
  return states;
}

WaypointTrajectory LiftCcpp(const RawActionSequence& actions,
                            const InitialState& init, const LiftConfig& cfg,
                            RolloutStats* stats, CcppTrace* trace) {
  const std::vector<CcppState> states =
      RolloutCcpp(actions, init, cfg, stats, trace);
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
