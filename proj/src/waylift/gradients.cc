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

#include "waylift/gradients.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "waylift/activation.h"
#include "waylift/ccpp.h"
#include "waylift/error.h"
#include "waylift/kbm.h"
#include "waylift/lift.h"
#include "waylift/loss.h"
#include "waylift/sampling.h"

namespace waylift {
namespace {

// Local derivatives of one lifted step z_{j+1} = T(z_j, a_j).
struct StepLinearization {
  Eigen::MatrixXd wrt_state;   // n x n
  Eigen::MatrixXd wrt_action;  // n x 3
};

std::vector<StepLinearization> LinearizeKbm(const RawActionSequence& actions,
                                            const InitialState& init,
                                            const LiftConfig& cfg) {
  const std::vector<KbmState> states = RolloutKbm(actions, init, cfg);
  std::vector<StepLinearization> steps;
  steps.reserve(static_cast<std::size_t>(actions.steps()));
  for (int j = 0; j < actions.steps(); ++j) {
    const RawAction raw = actions.step(j);
    const KbmControls u = ActivateKbm(raw, cfg);
    const KbmStepJacobian local =
        cfg.scheme == Scheme::kRk4
            ? StepRk4KbmJacobian(states[j], u, cfg.dt, cfg.wheelbase)
            : StepEulerKbmJacobian(states[j], u, cfg.dt, cfg.wheelbase);
    const auto act = ActivationJacobian(raw, cfg.max_accel, cfg.max_steer);
    steps.push_back({local.wrt_state, local.wrt_controls * act});
  }
  return steps;
}

// Clothoid interval map on (x, y, theta, kappa, v). The pose tangent is kept
// w.r.t. (x, y, theta, kappa, v, a_lon, varsigma) across the substeps.
std::vector<StepLinearization> LinearizeCcpp(const RawActionSequence& actions,
                                             const InitialState& init,
                                             const LiftConfig& cfg) {
  using Row7 = Eigen::Matrix<double, 1, 7>;
  using Tangent7 = Eigen::Matrix<double, 4, 7>;
  const std::vector<CcppState> states = RolloutCcpp(actions, init, cfg);
  const bool rk4 = cfg.scheme == Scheme::kRk4;
  std::vector<StepLinearization> steps;
  steps.reserve(static_cast<std::size_t>(actions.steps()));

  for (int j = 0; j < actions.steps(); ++j) {
    const RawAction raw = actions.step(j);
    const CcppControls u = ActivateCcpp(raw, cfg);
    const CcppState& z = states[j];

    const double v_next = CcppSpeedUpdate(z.v, u.accel, cfg.dt);
    const double speed_gate = z.v + u.accel * cfg.dt < 0.0 ? 0.0 : 1.0;
    Row7 dv_next = Row7::Zero();
    dv_next(4) = speed_gate;
    dv_next(5) = speed_gate * cfg.dt;
    const Row7 dds = cfg.dt / cfg.substeps * dv_next;
    const double ds = ArcIncrementFor(v_next, cfg.dt, cfg.substeps).step;

    Tangent7 dpose = Tangent7::Zero();
    dpose.leftCols<4>().setIdentity();
    CcppPose pose{z.x, z.y, z.theta, z.kappa};
    for (int s = 0; s < cfg.substeps; ++s) {
      const CcppSubstepJacobian local =
          rk4 ? SubstepRk4CcppJacobian(pose, u.sharpness, ds, cfg.max_curvature)
              : SubstepEulerCcppJacobian(pose, u.sharpness, ds,
                                         cfg.max_curvature);
      Tangent7 next = local.wrt_pose * dpose + local.wrt_step * dds;
      next.col(6) += local.wrt_sharpness;
      dpose = next;
      pose = rk4 ? SubstepRk4Ccpp(pose, u.sharpness, ds, cfg.max_curvature)
                 : SubstepEulerCcpp(pose, u.sharpness, ds, cfg.max_curvature);
    }

    Eigen::Matrix<double, 5, 7> full;
    full.topRows<4>() = dpose;
    full.row(4) = dv_next;
    const auto act = ActivationJacobian(raw, cfg.max_accel, cfg.max_sharpness);
    steps.push_back({full.leftCols<5>(), full.rightCols<2>() * act});
  }
  return steps;
}

Jacobian Accumulate(const std::vector<StepLinearization>& steps) {
  const int horizon = static_cast<int>(steps.size());
  Jacobian jac = Jacobian::Zero(2 * horizon, 3 * horizon);
  const int n = static_cast<int>(steps.front().wrt_state.rows());
  for (int k = 0; k < horizon; ++k) {
    for (int coord = 0; coord < 2; ++coord) {
      // Adjoint of waypoint k+1 coordinate `coord`, propagated backwards.
      Eigen::RowVectorXd adjoint = Eigen::RowVectorXd::Zero(n);
      adjoint(coord) = 1.0;
      for (int j = k; j >= 0; --j) {
        jac.block(JacobianRow(k, coord), JacobianCol(j, 0), 1, 3) =
            adjoint * steps[j].wrt_action;
        adjoint = adjoint * steps[j].wrt_state;
      }
    }
  }
  return jac;
}

std::vector<std::int8_t> ClampPattern(const RawActionSequence& actions,
                                      const InitialState& init,
                                      const LiftConfig& cfg) {
  if (cfg.model != Model::kCcpp) return {};
  CcppTrace trace;
  RolloutCcpp(actions, init, cfg, nullptr, &trace);
  return trace.clamp_sides;
}

nlohmann::json FiniteOrNull(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
}

}  // namespace

Jacobian LiftJacobian(const RawActionSequence& actions,
                      const InitialState& init, const LiftConfig& cfg) {
  ValidateConfig(cfg);
  switch (cfg.model) {
    case Model::kKbm:
      return Accumulate(LinearizeKbm(actions, init, cfg));
    case Model::kCcpp:
      return Accumulate(LinearizeCcpp(actions, init, cfg));
    case Model::kMlp:
      break;
  }
  throw Error(ErrorCode::kInvalidConfig,
              "analytic Jacobian requires model kbm or ccpp");
}

LossAndGradient LossGradient(const RawActionSequence& actions,
                             const InitialState& init, const LiftConfig& cfg,
                             const WaypointTrajectory& gt,
                             const LossWeights& weights) {
  const WaypointTrajectory pred = Lift(actions, init, cfg);
  LossAndGradient out;
  out.loss = WaypointL1Loss(pred, gt, weights);

  const int horizon = actions.steps();
  Eigen::VectorXd upstream(2 * horizon);
  auto sign = [](double e) { return static_cast<double>((e > 0.0) - (e < 0.0)); };
  for (int k = 0; k < horizon; ++k) {
    const double scale = weights[k] / weights.sum();
    upstream(JacobianRow(k, 0)) = scale * sign(pred.points[k].x - gt.points[k].x);
    upstream(JacobianRow(k, 1)) = scale * sign(pred.points[k].y - gt.points[k].y);
  }
  const Eigen::VectorXd flat =
      LiftJacobian(actions, init, cfg).transpose() * upstream;
  out.grad = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 3,
                                            Eigen::RowMajor>>(flat.data(),
                                                              horizon, 3);
  return out;
}

double GradCheckRelError(double analytic, double numeric) {
  const double scale = std::max({1.0, std::abs(analytic), std::abs(numeric)});
  return std::abs(analytic - numeric) / scale;
}

GradCheckReport FiniteDiffCheck(const RawActionSequence& actions,
                                const InitialState& init, const LiftConfig& cfg,
                                double fd_step) {
  if (!(fd_step > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fd_step must be positive");
  }
  const Jacobian jac = LiftJacobian(actions, init, cfg);
  const auto base_pattern = ClampPattern(actions, init, cfg);
  GradCheckReport report;
  report.fd_step = fd_step;

  for (int j = 0; j < actions.steps(); ++j) {
    for (int ch = 0; ch < kActionChannels; ++ch) {
      const RawActionSequence plus = actions.Perturbed(j, ch, fd_step);
      const RawActionSequence minus = actions.Perturbed(j, ch, -fd_step);
      if (ClampPattern(plus, init, cfg) != base_pattern ||
          ClampPattern(minus, init, cfg) != base_pattern) {
        report.boundary_flag = true;
      }
      const WaypointTrajectory up = Lift(plus, init, cfg);
      const WaypointTrajectory down = Lift(minus, init, cfg);
      for (int k = 0; k < actions.steps(); ++k) {
        const double fd[2] = {
            (up.points[k].x - down.points[k].x) / (2.0 * fd_step),
            (up.points[k].y - down.points[k].y) / (2.0 * fd_step)};
        for (int coord = 0; coord < 2; ++coord) {
          const int row = JacobianRow(k, coord);
          const int col = JacobianCol(j, ch);
          const double analytic = jac(row, col);
          const double abs_err = std::abs(analytic - fd[coord]);
          const double rel_err = GradCheckRelError(analytic, fd[coord]);
          report.max_abs_err = std::max(report.max_abs_err, abs_err);
          if (rel_err > report.max_rel_err) {
            report.max_rel_err = rel_err;
            report.worst_row = row;
            report.worst_col = col;
          }
        }
      }
    }
  }
  return report;
}

nlohmann::json ReportToJson(const GradCheckReport& report) {
  return {{"max_abs_err", FiniteOrNull(report.max_abs_err)},
          {"max_rel_err", FiniteOrNull(report.max_rel_err)},
          {"worst_entry", {report.worst_row, report.worst_col}},
          {"fd_step", report.fd_step},
          {"boundary_flag", report.boundary_flag}};
}

GradCheckSummary RunGradCheckSuite(const GradCheckSuiteOptions& options) {
  if (options.cases < 1) {
    throw Error(ErrorCode::kInvalidArgument, "grad check needs >= 1 case");
  }
  if (options.horizon < 1) {
    throw Error(ErrorCode::kInvalidArgument, "grad check needs horizon >= 1");
  }
  static constexpr Model kModels[] = {Model::kKbm, Model::kCcpp};
  static constexpr Scheme kSchemes[] = {Scheme::kEuler, Scheme::kRk4};

  Rng rng(options.seed);
  GradCheckSummary summary;
  summary.tolerance = options.tolerance;
  for (int c = 0; c < options.cases; ++c) {
    LiftConfig cfg;
    if (options.config) {
      cfg = *options.config;
    } else {
      cfg.model = kModels[(c / 2) % 2];
      cfg.scheme = kSchemes[c % 2];
    }
    const RawActionSequence actions = SampleActions(rng, options.horizon);
    const InitialState init{SampleUniform(rng, 0.0, 15.0), 0.0};
    const GradCheckReport report =
        FiniteDiffCheck(actions, init, cfg, options.fd_step);
    ++summary.cases;
    if (report.boundary_flag) {
      ++summary.flagged;
      continue;
    }
    if (!(report.max_rel_err < options.tolerance)) ++summary.failed;
    summary.max_abs_err = std::max(summary.max_abs_err, report.max_abs_err);
    if (summary.worst_case < 0 || report.max_rel_err > summary.max_rel_err) {
      summary.max_rel_err = report.max_rel_err;
      summary.worst_case = c;
      summary.worst = report;
    }
  }
  return summary;
}

nlohmann::json SummaryToJson(const GradCheckSummary& summary) {
  nlohmann::json doc = {{"cases", summary.cases},
                        {"boundary_flagged", summary.flagged},
                        {"failed", summary.failed},
                        {"tolerance", summary.tolerance},
                        {"max_rel_err", FiniteOrNull(summary.max_rel_err)},
                        {"max_abs_err", FiniteOrNull(summary.max_abs_err)},
                        {"passed", summary.passed()}};
  if (summary.worst_case >= 0) {
    doc["worst_case"] = summary.worst_case;
    doc["worst_report"] = ReportToJson(summary.worst);
  }
  return doc;
}

}  // namespace waylift
