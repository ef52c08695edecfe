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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "waylift/ccpp.h"
#include "waylift/csv.h"
#include "waylift/error.h"
#include "waylift/gradients.h"
#include "waylift/harness.h"
#include "waylift/sampling.h"

namespace waylift {
namespace {

using nlohmann::json;
using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>;

constexpr std::uint64_t kPolicySeedMix = 0x9e3779b97f4a7c15ULL;

// Raw throttle / brake pair with a_max (s(tau) - s(beta)) = accel.
void SetLongitudinal(double accel, double gain, RawAction& raw) {
  raw.throttle = 2.0 * std::atanh(accel / gain);
  raw.brake = -raw.throttle;
}

double Number(const json& doc, const char* key, double fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_number()) {
    throw Error(ErrorCode::kParse,
                std::string("field \"") + key + "\" must be a number");
  }
  return it->get<double>();
}

int Integer(const json& doc, const char* key, int fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_number_integer()) {
    throw Error(ErrorCode::kParse,
                std::string("field \"") + key + "\" must be an integer");
  }
  return it->get<int>();
}

void RejectUnknown(const json& doc, const std::set<std::string>& keys,
                   const char* what) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParse, std::string(what) + " must be a JSON object");
  }
  for (const auto& item : doc.items()) {
    if (!keys.contains(item.key())) {
      throw Error(ErrorCode::kParse,
                  std::string(what) + ": unknown key \"" + item.key() + "\"");
    }
  }
}

[[noreturn]] void RejectOption(const std::string& what) {
  throw Error(ErrorCode::kInvalidConfig, "invalid train config: " + what);
}

void ValidateOptions(const TrainOptions& o) {
  ValidateConfig(o.lift);
  if (o.lift.model == Model::kMlp) RejectOption("lift model must be kbm or ccpp");
  if (o.horizon < 1) RejectOption("horizon must be >= 1");
  if (o.dataset_size < 1) RejectOption("dataset_size must be >= 1");
  if (o.hidden < 1) RejectOption("hidden must be >= 1");
  for (double g : o.channel_gain) {
    if (!(g > 0.0) || !std::isfinite(g)) RejectOption("channel_gain must be > 0");
  }
  if (o.steps < 0) RejectOption("steps must be >= 0");
  if (!(o.lr >= 0.0) || !std::isfinite(o.lr)) RejectOption("lr must be >= 0");
  if (!(o.lr_decay > 0.0)) RejectOption("lr_decay must be > 0");
  if (o.lr_decay_every < 1) RejectOption("lr_decay_every must be >= 1");
  const ExpertParams& e = o.expert;
  if (!(e.v0_min >= 0.0) || !(e.v0_max >= e.v0_min)) {
    RejectOption("expert v0 range must satisfy 0 <= v0_min <= v0_max");
  }
  if (!(e.curvature_request >= 0.0)) RejectOption("curvature_request < 0");
  if (!(e.speed_delta >= 0.0)) RejectOption("speed_delta < 0");
  if (!(e.control_fraction > 0.0 && e.control_fraction < 1.0)) {
    RejectOption("control_fraction must lie in (0, 1)");
  }
}

}  // namespace

RawActionSequence ExpertActions(const ExpertRequest& request, int horizon,
                                const LiftConfig& cfg,
                                const ExpertParams& params) {
  const double f = params.control_fraction;
  const double accel =
      std::clamp(request.speed_delta / (horizon * cfg.dt), -f * cfg.max_accel,
                 f * cfg.max_accel);
  std::vector<RawAction> steps(static_cast<std::size_t>(horizon));
  for (RawAction& raw : steps) SetLongitudinal(accel, cfg.max_accel, raw);

  if (cfg.model == Model::kKbm) {
    const double steer = std::clamp(std::atan(request.curvature * cfg.wheelbase),
                                    -f * cfg.max_steer, f * cfg.max_steer);
    for (RawAction& raw : steps) raw.lateral = std::atanh(steer / cfg.max_steer);
    return RawActionSequence(std::move(steps));
  }

  double v = request.v0;
  double kappa = 0.0;
  const double limit = f * cfg.max_sharpness;
  for (RawAction& raw : steps) {
    v = CcppSpeedUpdate(v, accel, cfg.dt);
    const double ds = v * cfg.dt;
    const double sharpness =
        ds > 0.0 ? std::clamp((request.curvature - kappa) / ds, -limit, limit)
                 : 0.0;
    raw.lateral = std::atanh(sharpness / cfg.max_sharpness);
    kappa = std::clamp(kappa + sharpness * ds, -cfg.max_curvature,
                       cfg.max_curvature);
  }
  return RawActionSequence(std::move(steps));
}

Eigen::VectorXd ObservationFor(const ExpertRequest& request,
                               const ExpertParams& params) {
  Eigen::VectorXd obs = Eigen::VectorXd::Zero(kObsDim);
  obs(0) = request.v0 / 10.0;
  obs(1) = params.curvature_request > 0.0
               ? request.curvature / params.curvature_request
               : 0.0;
  obs(2) = params.speed_delta > 0.0 ? request.speed_delta / params.speed_delta
                                    : 0.0;
  if (request.curvature > params.straight_band) {
    obs(3) = 1.0;
  } else if (request.curvature < -params.straight_band) {
    obs(5) = 1.0;
  } else {
    obs(4) = 1.0;
  }
  return obs;
}

std::vector<SyntheticSample> GenerateDataset(int n, int horizon,
                                             const LiftConfig& cfg,
                                             const ExpertParams& params,
                                             std::uint64_t seed,
                                             int oracle_refine) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "dataset size must be >= 1");
  if (horizon < 1) throw Error(ErrorCode::kInvalidArgument, "horizon must be >= 1");
  Rng rng(seed);
  std::vector<SyntheticSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ExpertRequest req;
    req.v0 = SampleUniform(rng, params.v0_min, params.v0_max);
    req.curvature =
        SampleUniform(rng, -params.curvature_request, params.curvature_request);
    const double slow = std::min(params.speed_delta, 0.5 * req.v0);
    req.speed_delta = SampleUniform(rng, -slow, params.speed_delta);
    const RawActionSequence actions = ExpertActions(req, horizon, cfg, params);
    SyntheticSample sample;
    sample.obs = ObservationFor(req, params);
    sample.initial = {req.v0, 0.0};
    sample.gt = OracleRollout(actions, sample.initial, cfg, oracle_refine);
    out.push_back(std::move(sample));
  }
  return out;
}

TinyPolicy::TinyPolicy(int horizon, int hidden, std::uint64_t seed,
                       const ChannelGain& gain)
    : horizon_(horizon), gain_(gain) {
  if (horizon < 1 || hidden < 1) {
    throw Error(ErrorCode::kInvalidArgument, "policy needs horizon, hidden >= 1");
  }
  for (double g : gain_) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw Error(ErrorCode::kInvalidArgument, "channel gains must be > 0");
    }
  }
  Rng rng(seed ^ kPolicySeedMix);
  const int out = horizon * kActionChannels;
  std::normal_distribution<double> in_dist(0.0, 1.0 / std::sqrt(kObsDim));
  w1_.resize(hidden, kObsDim);
  for (Eigen::Index r = 0; r < w1_.rows(); ++r) {
    for (Eigen::Index c = 0; c < w1_.cols(); ++c) w1_(r, c) = in_dist(rng);
  }
  b1_ = Eigen::VectorXd::Zero(hidden);
  // Zero action head: training starts from the all-zero action sequence.
  w2_ = Eigen::MatrixXd::Zero(out, hidden);
  b2_ = Eigen::VectorXd::Zero(out);
}

RawActionSequence TinyPolicy::Forward(const Eigen::VectorXd& obs) const {
  const Eigen::VectorXd h = (w1_ * obs + b1_).array().tanh().matrix();
  Eigen::VectorXd out = w2_ * h + b2_;
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) *= gain_[i % kActionChannels];
  return RawActionSequence::FromFlat({out.data(), static_cast<std::size_t>(out.size())});
}

Eigen::VectorXd TinyPolicy::Backward(const Eigen::VectorXd& obs,
                                     const Eigen::MatrixXd& action_grad) const {
  const Eigen::VectorXd h = (w1_ * obs + b1_).array().tanh().matrix();
  Eigen::VectorXd g(w2_.rows());
  for (int k = 0; k < horizon_; ++k) {
    for (int c = 0; c < kActionChannels; ++c) {
      g(k * kActionChannels + c) = gain_[c] * action_grad(k, c);
    }
  }
  const Eigen::VectorXd dz =
      ((w2_.transpose() * g).array() * (1.0 - h.array().square())).matrix();

  Eigen::VectorXd grad(parameter_count());
  Eigen::Index at = 0;
  auto put = [&](const auto& block) {
    const RowMajor rm = block;
    grad.segment(at, rm.size()) =
        Eigen::Map<const Eigen::VectorXd>(rm.data(), rm.size());
    at += rm.size();
  };
  put(dz * obs.transpose());
  put(dz);
  put(g * h.transpose());
  put(g);
  return grad;
}

int TinyPolicy::parameter_count() const {
  return static_cast<int>(w1_.size() + b1_.size() + w2_.size() + b2_.size());
}

Eigen::VectorXd TinyPolicy::Parameters() const {
  Eigen::VectorXd p(parameter_count());
  Eigen::Index at = 0;
  auto put = [&](const auto& block) {
    const RowMajor rm = block;
    p.segment(at, rm.size()) =
        Eigen::Map<const Eigen::VectorXd>(rm.data(), rm.size());
    at += rm.size();
  };
  put(w1_);
  put(b1_);
  put(w2_);
  put(b2_);
  return p;
}

void TinyPolicy::SetParameters(const Eigen::VectorXd& params) {
  if (params.size() != parameter_count()) {
    throw Error(ErrorCode::kInvalidArgument, "parameter vector has wrong size");
  }
  Eigen::Index at = 0;
  auto take = [&](auto& block) {
    RowMajor rm(block.rows(), block.cols());
    rm = Eigen::Map<const RowMajor>(params.data() + at, block.rows(),
                                    block.cols());
    block = rm;
    at += rm.size();
  };
  take(w1_);
  take(b1_);
  take(w2_);
  take(b2_);
}

json TinyPolicy::ToJson() const {
  auto matrix = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  auto vector = [](const Eigen::VectorXd& v) {
    return json(std::vector<double>(v.data(), v.data() + v.size()));
  };
  return {{"horizon", horizon_},
          {"hidden", hidden()},
          {"channel_gain", gain_},
          {"W1", matrix(w1_)},
          {"b1", vector(b1_)},
          {"W2", matrix(w2_)},
          {"b2", vector(b2_)}};
}

BatchLoss PolicyLoss(const TinyPolicy& policy,
                     std::span<const SyntheticSample> batch,
                     const LiftConfig& cfg) {
  if (batch.empty()) throw Error(ErrorCode::kInvalidArgument, "empty batch");
  BatchLoss out;
  out.grad = Eigen::VectorXd::Zero(policy.parameter_count());
  const LossWeights weights = LossWeights::Uniform(policy.horizon());
  for (const SyntheticSample& s : batch) {
    const RawActionSequence actions = policy.Forward(s.obs);
    const LossAndGradient lg =
        LossGradient(actions, s.initial, cfg, s.gt, weights);
    out.loss += lg.loss;
    out.grad += policy.Backward(s.obs, lg.grad);
  }
  const double n = static_cast<double>(batch.size());
  out.loss /= n;
  out.grad /= n;
  return out;
}

double TrainStep(TinyPolicy& policy, std::span<const SyntheticSample> batch,
                 const LiftConfig& cfg, double lr) {
  if (!(lr >= 0.0) || !std::isfinite(lr)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be >= 0");
  }
  const BatchLoss bl = PolicyLoss(policy, batch, cfg);
  if (!std::isfinite(bl.loss) || !bl.grad.allFinite()) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "non-finite loss or gradient (loss " << bl.loss
       << ", parameter norm " << policy.Parameters().norm() << ")";
    throw Error(ErrorCode::kDiverged, os.str());
  }
  if (lr > 0.0) policy.SetParameters(policy.Parameters() - lr * bl.grad);
  return bl.loss;
}

TrainOptions TrainOptionsFromJson(const json& doc) {
  RejectUnknown(doc,
                {"lift", "horizon", "dataset_size", "hidden", "channel_gain", "steps", "lr",
                 "schedule", "lr_decay", "lr_decay_every", "seed", "oracle_refine",
                 "expert"},
                "train config");
  TrainOptions o;
  if (auto it = doc.find("lift"); it != doc.end()) o.lift = ConfigFromJson(*it);
  o.horizon = Integer(doc, "horizon", o.horizon);
  o.dataset_size = Integer(doc, "dataset_size", o.dataset_size);
  o.hidden = Integer(doc, "hidden", o.hidden);
  if (auto it = doc.find("channel_gain"); it != doc.end()) {
    if (!it->is_array() || it->size() != kActionChannels) {
      throw Error(ErrorCode::kParse,
                  "field \"channel_gain\" must be a list of 3 numbers");
    }
    for (int c = 0; c < kActionChannels; ++c) {
      if (!(*it)[c].is_number()) {
        throw Error(ErrorCode::kParse,
                    "field \"channel_gain\" must be a list of 3 numbers");
      }
      o.channel_gain[c] = (*it)[c].get<double>();
    }
  }
  o.steps = Integer(doc, "steps", o.steps);
  o.lr = Number(doc, "lr", o.lr);
  if (auto it = doc.find("schedule"); it != doc.end()) {
    const std::string name = it->is_string() ? it->get<std::string>() : "";
    if (name == "constant") {
      o.schedule = LrSchedule::kConstant;
    } else if (name == "step") {
      o.schedule = LrSchedule::kStep;
    } else if (name == "cosine") {
      o.schedule = LrSchedule::kCosine;
    } else {
      throw Error(ErrorCode::kParse,
                  "field \"schedule\": expected \"constant\", \"step\" or "
                  "\"cosine\"");
    }
  }
  o.lr_decay = Number(doc, "lr_decay", o.lr_decay);
  o.lr_decay_every = Integer(doc, "lr_decay_every", o.lr_decay_every);
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_integer() ||
        (!it->is_number_unsigned() && it->get<std::int64_t>() < 0)) {
      throw Error(ErrorCode::kParse,
                  "field \"seed\" must be a nonnegative integer");
    }
    o.seed = it->get<std::uint64_t>();
  }
  o.oracle_refine = Integer(doc, "oracle_refine", o.oracle_refine);
  if (auto it = doc.find("expert"); it != doc.end()) {
    RejectUnknown(*it,
                  {"v0_min", "v0_max", "curvature_request", "speed_delta",
                   "straight_band", "control_fraction"},
                  "expert");
    ExpertParams& e = o.expert;
    e.v0_min = Number(*it, "v0_min", e.v0_min);
    e.v0_max = Number(*it, "v0_max", e.v0_max);
    e.curvature_request = Number(*it, "curvature_request", e.curvature_request);
    e.speed_delta = Number(*it, "speed_delta", e.speed_delta);
    e.straight_band = Number(*it, "straight_band", e.straight_band);
    e.control_fraction = Number(*it, "control_fraction", e.control_fraction);
  }
  ValidateOptions(o);
  return o;
}

json TrainOptionsToJson(const TrainOptions& o) {
  const ExpertParams& e = o.expert;
  return {{"lift", ConfigToJson(o.lift)},
          {"horizon", o.horizon},
          {"dataset_size", o.dataset_size},
          {"hidden", o.hidden},
          {"channel_gain", o.channel_gain},
          {"steps", o.steps},
          {"lr", o.lr},
          {"schedule", o.schedule == LrSchedule::kConstant
                           ? "constant"
                           : (o.schedule == LrSchedule::kStep ? "step" : "cosine")},
          {"lr_decay", o.lr_decay},
          {"lr_decay_every", o.lr_decay_every},
          {"seed", o.seed},
          {"oracle_refine", o.oracle_refine},
          {"expert",
           {{"v0_min", e.v0_min},
            {"v0_max", e.v0_max},
            {"curvature_request", e.curvature_request},
            {"speed_delta", e.speed_delta},
            {"straight_band", e.straight_band},
            {"control_fraction", e.control_fraction}}}};
}

double ScheduledLr(const TrainOptions& options, int step) {
  switch (options.schedule) {
    case LrSchedule::kConstant:
      break;
    case LrSchedule::kStep:
      return options.lr *
             std::pow(options.lr_decay, step / options.lr_decay_every);
    case LrSchedule::kCosine:
      return options.lr * 0.5 *
             (1.0 + std::cos(std::numbers::pi * step / std::max(options.steps, 1)));
  }
  return options.lr;
}

TrainResult Train(const TrainOptions& options) {
  ValidateOptions(options);
  const std::vector<SyntheticSample> data =
      GenerateDataset(options.dataset_size, options.horizon, options.lift,
                      options.expert, options.seed, options.oracle_refine);
  TrainResult result{{}, TinyPolicy(options.horizon, options.hidden, options.seed,
                                        options.channel_gain)};
  result.losses.reserve(static_cast<std::size_t>(options.steps) + 1);

  auto check = [&](double loss, int step) {
    if (!std::isfinite(loss) ||
        (!result.losses.empty() && loss > 100.0 * result.losses.front())) {
      std::ostringstream os;
      os.imbue(std::locale::classic());
      os << "training diverged at step " << step << ": loss " << loss;
      if (!result.losses.empty()) os << " (initial " << result.losses.front() << ")";
      throw Error(ErrorCode::kDiverged, os.str());
    }
  };

  for (int s = 0; s < options.steps; ++s) {
    const double lr = ScheduledLr(options, s);
    double loss = 0.0;
    try {
      loss = TrainStep(result.policy, data, options.lift, lr);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDiverged) throw;
      throw Error(ErrorCode::kDiverged,
                  "step " + std::to_string(s) + ": " + e.what());
    }
    check(loss, s);
    result.losses.push_back(loss);
  }
  const double final_loss = PolicyLoss(result.policy, data, options.lift).loss;
  check(final_loss, options.steps);
  result.losses.push_back(final_loss);
  return result;
}

std::string LossCurveCsv(const std::vector<double>& losses) {
  std::string out = "step,loss\n";
  for (std::size_t s = 0; s < losses.size(); ++s) {
    out += std::to_string(s);
    out += ',';
    AppendDouble(out, losses[s]);
    out += '\n';
  }
  return out;
}

}  // namespace waylift
