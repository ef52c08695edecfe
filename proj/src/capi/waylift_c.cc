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

#include "waylift/waylift.h"

#include <algorithm>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "waylift/config.h"
#include "waylift/csv.h"
#include "waylift/error.h"
#include "waylift/gradients.h"
#include "waylift/harness.h"
#include "waylift/lift.h"
#include "waylift/policy.h"

struct waylift_buffer {
  std::string text;
};

struct waylift_setup {
  waylift::LiftSetup setup;
};

struct waylift_actions {
  waylift::RawActionSequence actions;
};

struct waylift_trajectory {
  waylift::WaypointTrajectory traj;
};

struct waylift_train_result {
  waylift::TrainOptions options;
  waylift::TrainResult result;
};

namespace {

thread_local std::string last_error;

waylift_status Fail(waylift_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

waylift_status FromCode(waylift::ErrorCode code) {
  switch (code) {
    case waylift::ErrorCode::kInvalidArgument:
      return WAYLIFT_ERR_INVALID_ARGUMENT;
    case waylift::ErrorCode::kInvalidConfig:
      return WAYLIFT_ERR_INVALID_CONFIG;
    case waylift::ErrorCode::kParse:
      return WAYLIFT_ERR_PARSE;
    case waylift::ErrorCode::kNumeric:
      return WAYLIFT_ERR_NUMERIC;
    case waylift::ErrorCode::kDiverged:
      return WAYLIFT_ERR_DIVERGED;
  }
  return WAYLIFT_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
waylift_status Guard(Body&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const waylift::Error& e) {
    return Fail(FromCode(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(WAYLIFT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(WAYLIFT_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(WAYLIFT_ERR_INTERNAL, "unknown error");
  }
}

#define WAYLIFT_REQUIRE(ptr)                                           \
  do {                                                                 \
    if ((ptr) == nullptr) {                                            \
      return Fail(WAYLIFT_ERR_INVALID_ARGUMENT, #ptr " must not be NULL"); \
    }                                                                  \
  } while (0)

waylift_status Emit(std::string text, waylift_buffer** out) {
  *out = new waylift_buffer{std::move(text)};
  return WAYLIFT_OK;
}

waylift_status CopyOut(const std::vector<double>& values, double* dst,
                       size_t capacity) {
  if (capacity < values.size()) {
    return Fail(WAYLIFT_ERR_INSUFFICIENT_BUFFER,
                "buffer holds " + std::to_string(capacity) + " values, need " +
                    std::to_string(values.size()));
  }
  std::copy(values.begin(), values.end(), dst);
  return WAYLIFT_OK;
}

}  // namespace

extern "C" {

const char* waylift_version(void) { return "0.1.0"; }

const char* waylift_status_name(waylift_status status) {
  switch (status) {
    case WAYLIFT_OK:
      return "ok";
    case WAYLIFT_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case WAYLIFT_ERR_INVALID_CONFIG:
      return "invalid config";
    case WAYLIFT_ERR_PARSE:
      return "parse error";
    case WAYLIFT_ERR_NUMERIC:
      return "numeric error";
    case WAYLIFT_ERR_DIVERGED:
      return "diverged";
    case WAYLIFT_ERR_INSUFFICIENT_BUFFER:
      return "insufficient buffer";
    case WAYLIFT_ERR_CHECK_FAILED:
      return "check failed";
    case WAYLIFT_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* waylift_last_error(void) { return last_error.c_str(); }

const char* waylift_buffer_data(const waylift_buffer* buf) {
  return buf == nullptr ? "" : buf->text.c_str();
}

size_t waylift_buffer_size(const waylift_buffer* buf) {
  return buf == nullptr ? 0 : buf->text.size();
}

void waylift_buffer_free(waylift_buffer* buf) { delete buf; }

waylift_status waylift_setup_from_json(const char* json, waylift_setup** out) {
  WAYLIFT_REQUIRE(json);
  WAYLIFT_REQUIRE(out);
  return Guard([&] {
    *out = new waylift_setup{waylift::SetupFromJson(waylift::ParseJson(json))};
    return WAYLIFT_OK;
  });
}

waylift_status waylift_setup_to_json(const waylift_setup* setup,
                                     waylift_buffer** out) {
  WAYLIFT_REQUIRE(setup);
  WAYLIFT_REQUIRE(out);
  return Guard([&] { return Emit(waylift::SetupToJson(setup->setup).dump(2), out); });
}

void waylift_setup_free(waylift_setup* setup) { delete setup; }

waylift_status waylift_actions_from_array(const double* values, size_t steps,
                                          waylift_actions** out) {
  WAYLIFT_REQUIRE(values);
  WAYLIFT_REQUIRE(out);
  return Guard([&] {
    *out = new waylift_actions{waylift::RawActionSequence::FromFlat(
        {values, steps * waylift::kActionChannels})};
    return WAYLIFT_OK;
  });
}

waylift_status waylift_actions_from_csv(const char* csv,
                                        waylift_actions** out) {
  WAYLIFT_REQUIRE(csv);
  WAYLIFT_REQUIRE(out);
  return Guard([&] {
    *out = new waylift_actions{waylift::ParseActionsCsv(csv)};
    return WAYLIFT_OK;
  });
}

size_t waylift_actions_steps(const waylift_actions* actions) {
  return actions == nullptr ? 0 : static_cast<size_t>(actions->actions.steps());
}

void waylift_actions_free(waylift_actions* actions) { delete actions; }

waylift_status waylift_lift(const waylift_setup* setup,
                            const waylift_actions* actions,
                            waylift_trajectory** out) {
  WAYLIFT_REQUIRE(setup);
  WAYLIFT_REQUIRE(actions);
  WAYLIFT_REQUIRE(out);
  return Guard([&] {
    *out = new waylift_trajectory{waylift::Lift(
        actions->actions, setup->setup.initial, setup->setup.config)};
    return WAYLIFT_OK;
  });
}

size_t waylift_trajectory_size(const waylift_trajectory* traj) {
  return traj == nullptr ? 0 : traj->traj.points.size();
}

waylift_status waylift_trajectory_points(const waylift_trajectory* traj,
                                         double* xy, size_t capacity) {
  WAYLIFT_REQUIRE(traj);
  WAYLIFT_REQUIRE(xy);
  std::vector<double> flat;
  flat.reserve(2 * traj->traj.points.size());
  for (const waylift::Waypoint& p : traj->traj.points) {
    flat.push_back(p.x);
    flat.push_back(p.y);
  }
  return CopyOut(flat, xy, capacity);
}

waylift_status waylift_trajectory_headings(const waylift_trajectory* traj,
                                           double* theta, size_t capacity) {
  WAYLIFT_REQUIRE(traj);
  WAYLIFT_REQUIRE(theta);
  return CopyOut(traj->traj.headings, theta, capacity);
}

waylift_status waylift_trajectory_to_csv(const waylift_trajectory* traj,
                                         int with_heading,
                                         waylift_buffer** out) {
  WAYLIFT_REQUIRE(traj);
  WAYLIFT_REQUIRE(out);
  return Guard([&] {
    waylift::WaypointTrajectory copy = traj->traj;
    if (!with_heading) copy.headings.clear();
    return Emit(waylift::TrajectoryToCsv(copy), out);
  });
}

void waylift_trajectory_free(waylift_trajectory* traj) { delete traj; }

waylift_status waylift_jacobian(const waylift_setup* setup,
                                const waylift_actions* actions,
                                double* jacobian, size_t capacity) {
  WAYLIFT_REQUIRE(setup);
  WAYLIFT_REQUIRE(actions);
  WAYLIFT_REQUIRE(jacobian);
  return Guard([&] {
    const waylift::Jacobian jac = waylift::LiftJacobian(
        actions->actions, setup->setup.initial, setup->setup.config);
    std::vector<double> flat;
    flat.reserve(static_cast<size_t>(jac.size()));
    for (Eigen::Index r = 0; r < jac.rows(); ++r) {
      for (Eigen::Index c = 0; c < jac.cols(); ++c) flat.push_back(jac(r, c));
    }
    return CopyOut(flat, jacobian, capacity);
  });
}

waylift_status waylift_loss_grad(const waylift_setup* setup,
                                 const waylift_actions* actions,
                                 const double* gt_xy, const double* weights,
                                 double* loss, double* grad,
                                 size_t grad_capacity) {
  WAYLIFT_REQUIRE(setup);
  WAYLIFT_REQUIRE(actions);
  WAYLIFT_REQUIRE(gt_xy);
  WAYLIFT_REQUIRE(loss);
  WAYLIFT_REQUIRE(grad);
  return Guard([&] {
    const int steps = actions->actions.steps();
    waylift::WaypointTrajectory gt;
    for (int k = 0; k < steps; ++k) gt.points.push_back({gt_xy[2 * k], gt_xy[2 * k + 1]});
    const waylift::LossWeights w =
        weights == nullptr
            ? waylift::LossWeights::Uniform(steps)
            : waylift::LossWeights(std::vector<double>(weights, weights + steps));
    const waylift::LossAndGradient lg = waylift::LossGradient(
        actions->actions, setup->setup.initial, setup->setup.config, gt, w);
    std::vector<double> flat;
    for (int k = 0; k < steps; ++k) {
      for (int c = 0; c < waylift::kActionChannels; ++c) flat.push_back(lg.grad(k, c));
    }
    const waylift_status status = CopyOut(flat, grad, grad_capacity);
    if (status == WAYLIFT_OK) *loss = lg.loss;
    return status;
  });
}

waylift_status waylift_gradcheck(const waylift_setup* setup,
                                 const waylift_actions* actions,
                                 double fd_step, waylift_buffer** report) {
  WAYLIFT_REQUIRE(setup);
  WAYLIFT_REQUIRE(actions);
  WAYLIFT_REQUIRE(report);
  return Guard([&] {
    const waylift::GradCheckReport r = waylift::FiniteDiffCheck(
        actions->actions, setup->setup.initial, setup->setup.config, fd_step);
    return Emit(waylift::ReportToJson(r).dump(2), report);
  });
}

waylift_status waylift_gradcheck_random(const waylift_setup* setup,
                                        uint64_t seed, int cases, int horizon,
                                        double fd_step, double tolerance,
                                        waylift_buffer** summary) {
  WAYLIFT_REQUIRE(summary);
  return Guard([&] {
    waylift::GradCheckSuiteOptions options;
    options.seed = seed;
    options.cases = cases;
    options.horizon = horizon;
    options.fd_step = fd_step;
    options.tolerance = tolerance;
    if (setup != nullptr) options.config = setup->setup.config;
    const waylift::GradCheckSummary s = waylift::RunGradCheckSuite(options);
    Emit(waylift::SummaryToJson(s).dump(2), summary);
    if (!s.passed()) {
      return Fail(WAYLIFT_ERR_CHECK_FAILED,
                  std::to_string(s.failed) + " of " + std::to_string(s.cases) +
                      " cases exceeded the tolerance");
    }
    return WAYLIFT_OK;
  });
}

waylift_status waylift_sweep(const char* spec_json,
                             const uint64_t* seed_override, int substeps_only,
                             int with_yaw, waylift_buffer** csv) {
  WAYLIFT_REQUIRE(spec_json);
  WAYLIFT_REQUIRE(csv);
  return Guard([&] {
    waylift::SweepSpec spec =
        waylift::SweepSpecFromJson(waylift::ParseJson(spec_json));
    if (seed_override != nullptr) spec.rng_seed = *seed_override;
    const std::vector<waylift::ErrorRecord> records =
        substeps_only ? waylift::ParetoSubsteps(spec) : waylift::RunSweep(spec);
    return Emit(waylift::RecordsToCsv(records, with_yaw != 0), csv);
  });
}

waylift_status waylift_train(const char* config_json,
                             const uint64_t* seed_override,
                             waylift_train_result** out) {
  WAYLIFT_REQUIRE(out);
  return Guard([&] {
    waylift::TrainOptions options =
        config_json == nullptr
            ? waylift::TrainOptions{}
            : waylift::TrainOptionsFromJson(waylift::ParseJson(config_json));
    if (seed_override != nullptr) options.seed = *seed_override;
    *out = new waylift_train_result{options, waylift::Train(options)};
    return WAYLIFT_OK;
  });
}

size_t waylift_train_loss_count(const waylift_train_result* r) {
  return r == nullptr ? 0 : r->result.losses.size();
}

waylift_status waylift_train_losses(const waylift_train_result* r,
                                    double* losses, size_t capacity) {
  WAYLIFT_REQUIRE(r);
  WAYLIFT_REQUIRE(losses);
  return CopyOut(r->result.losses, losses, capacity);
}

double waylift_train_ratio(const waylift_train_result* r) {
  return r == nullptr ? 0.0 : r->result.ratio();
}

waylift_status waylift_train_loss_csv(const waylift_train_result* r,
                                      waylift_buffer** out) {
  WAYLIFT_REQUIRE(r);
  WAYLIFT_REQUIRE(out);
  return Guard([&] { return Emit(waylift::LossCurveCsv(r->result.losses), out); });
}

waylift_status waylift_train_params_json(const waylift_train_result* r,
                                         waylift_buffer** out) {
  WAYLIFT_REQUIRE(r);
  WAYLIFT_REQUIRE(out);
  return Guard([&] {
    nlohmann::json doc = {{"options", waylift::TrainOptionsToJson(r->options)},
                          {"policy", r->result.policy.ToJson()},
                          {"initial_loss", r->result.losses.front()},
                          {"final_loss", r->result.losses.back()}};
    return Emit(doc.dump(2), out);
  });
}

void waylift_train_result_free(waylift_train_result* r) { delete r; }

}  // extern "C"
