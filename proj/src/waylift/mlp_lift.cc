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

#include "waylift/mlp_lift.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "waylift/error.h"
#include "waylift/kbm.h"
#include "waylift/sampling.h"

namespace waylift {
namespace {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;

void Gaussian(Rng& rng, double stddev, MatrixXd& m) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = dist(rng);
  }
}

MatrixXd Relu(const MatrixXd& m) { return m.cwiseMax(0.0); }

// Adam moment buffers for one tensor.
struct AdamSlot {
  MatrixXd m, v;

  explicit AdamSlot(const MatrixXd& like)
      : m(MatrixXd::Zero(like.rows(), like.cols())),
        v(MatrixXd::Zero(like.rows(), like.cols())) {}

  template <typename Param>
  void Update(Param& param, const MatrixXd& grad, double lr, int t) {
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
    m = kBeta1 * m + (1.0 - kBeta1) * grad;
    v = kBeta2 * v + (1.0 - kBeta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(kBeta1, t);
    const double c2 = 1.0 - std::pow(kBeta2, t);
    param -= (lr * (m / c1).array() / ((v / c2).array().sqrt() + kEps)).matrix();
  }
};

}  // namespace

struct MlpTrainer {
  static void Standardize(MlpLift& model, const MlpDataset& data) {
    auto stats = [](const MatrixXd& m, RowVectorXd& mean, RowVectorXd& scale) {
      mean = m.colwise().mean();
      scale = ((m.rowwise() - mean).cwiseAbs2().colwise().mean()).cwiseSqrt();
      for (Eigen::Index i = 0; i < scale.size(); ++i) {
        if (!(scale(i) > 1e-12)) scale(i) = 1.0;
      }
    };
    stats(data.inputs, model.in_mean_, model.in_scale_);
    stats(data.targets, model.out_mean_, model.out_scale_);
  }

  static MatrixXd NormalizedInputs(const MlpLift& model, const MatrixXd& x) {
    return (x.rowwise() - model.in_mean_).array().rowwise() /
           model.in_scale_.array();
  }

  static MatrixXd NormalizedTargets(const MlpLift& model, const MatrixXd& y) {
    return (y.rowwise() - model.out_mean_).array().rowwise() /
           model.out_scale_.array();
  }

  static MatrixXd ForwardNormalized(const MlpLift& model, const MatrixXd& x) {
    const MatrixXd h1 = Relu((x * model.w1_).rowwise() + model.b1_);
    const MatrixXd h2 = Relu((h1 * model.w2_).rowwise() + model.b2_);
    return (h2 * model.w3_).rowwise() + model.b3_;
  }

  static double NormalizedLoss(const MlpLift& model, const MatrixXd& x,
                               const MatrixXd& y) {
    return (ForwardNormalized(model, x) - y).cwiseAbs().mean();
  }
};

MlpDataset MakeMlpDataset(int n, const MlpDataOptions& options,
                          std::uint64_t seed) {
  if (n < 1 || options.horizon < 1) {
    throw Error(ErrorCode::kInvalidArgument, "MLP dataset needs n, horizon >= 1");
  }
  if (!(options.action_scale > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "action_scale must be > 0");
  }
  LiftConfig cfg = options.lift;
  cfg.model = Model::kKbm;
  Rng rng(seed);
  const int c = options.horizon;
  MlpDataset data{MatrixXd(n, c * kActionChannels + 1), MatrixXd(n, 2 * c)};
  for (int i = 0; i < n; ++i) {
    const RawActionSequence actions = SampleActions(rng, c, options.action_scale);
    const double v0 = SampleUniform(rng, options.v0_min, options.v0_max);
    const WaypointTrajectory traj = LiftKbm(actions, {v0, 0.0}, cfg);
    const auto flat = actions.flat();
    for (std::size_t j = 0; j < flat.size(); ++j) {
      data.inputs(i, static_cast<Eigen::Index>(j)) = flat[j];
    }
    data.inputs(i, c * kActionChannels) = v0;
    for (int k = 0; k < c; ++k) {
      data.targets(i, 2 * k) = traj.points[k].x;
      data.targets(i, 2 * k + 1) = traj.points[k].y;
    }
  }
  return data;
}

MlpLift::MlpLift(int horizon, int hidden, std::uint64_t seed)
    : horizon_(horizon) {
  if (horizon < 1 || hidden < 1) {
    throw Error(ErrorCode::kInvalidArgument, "MLP needs horizon, hidden >= 1");
  }
  const int in = horizon * kActionChannels + 1;
  const int out = 2 * horizon;
  Rng rng(seed);
  w1_.resize(in, hidden);
  w2_.resize(hidden, hidden);
  w3_.resize(hidden, out);
  Gaussian(rng, std::sqrt(2.0 / in), w1_);
  Gaussian(rng, std::sqrt(2.0 / hidden), w2_);
  Gaussian(rng, std::sqrt(1.0 / hidden), w3_);
  b1_ = RowVectorXd::Zero(hidden);
  b2_ = RowVectorXd::Zero(hidden);
  b3_ = RowVectorXd::Zero(out);
  in_mean_ = RowVectorXd::Zero(in);
  in_scale_ = RowVectorXd::Ones(in);
  out_mean_ = RowVectorXd::Zero(out);
  out_scale_ = RowVectorXd::Ones(out);
}

MatrixXd MlpLift::PredictBatch(const MatrixXd& inputs) const {
  if (inputs.cols() != w1_.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "MLP input width mismatch");
  }
  const MatrixXd z = MlpTrainer::ForwardNormalized(
      *this, MlpTrainer::NormalizedInputs(*this, inputs));
  return (z.array().rowwise() * out_scale_.array()).matrix().rowwise() +
         out_mean_;
}

WaypointTrajectory MlpLift::Predict(const RawActionSequence& actions,
                                    double v0) const {
  if (actions.steps() != horizon_) {
    throw Error(ErrorCode::kInvalidArgument, "MLP horizon mismatch");
  }
  MatrixXd x(1, w1_.rows());
  const auto flat = actions.flat();
  for (std::size_t j = 0; j < flat.size(); ++j) {
    x(0, static_cast<Eigen::Index>(j)) = flat[j];
  }
  x(0, x.cols() - 1) = v0;
  const MatrixXd y = PredictBatch(x);
  WaypointTrajectory out;
  for (int k = 0; k < horizon_; ++k) out.points.push_back({y(0, 2 * k), y(0, 2 * k + 1)});
  return out;
}

nlohmann::json MlpLift::ToJson() const {
  auto rows = [](const MatrixXd& m) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      out.push_back(std::vector<double>(m.cols()));
      for (Eigen::Index c = 0; c < m.cols(); ++c) out.back()[c] = m(r, c);
    }
    return out;
  };
  auto vec = [](const RowVectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  return {{"horizon", horizon_}, {"hidden", hidden()},
          {"in_mean", vec(in_mean_)}, {"in_scale", vec(in_scale_)},
          {"out_mean", vec(out_mean_)}, {"out_scale", vec(out_scale_)},
          {"W1", rows(w1_)}, {"b1", vec(b1_)},
          {"W2", rows(w2_)}, {"b2", vec(b2_)},
          {"W3", rows(w3_)}, {"b3", vec(b3_)}};
}

MlpFitResult FitMlpLift(const MlpDataset& train, const MlpFitOptions& options) {
  if (train.size() < 1) throw Error(ErrorCode::kInvalidArgument, "empty dataset");
  if (options.epochs < 1 || options.batch_size < 1 || !(options.lr > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "MLP fit needs epochs, batch_size >= 1 and lr > 0");
  }
  const int horizon = static_cast<int>(train.targets.cols()) / 2;
  MlpFitResult result{MlpLift(horizon, options.hidden, options.seed), {}, 0.0};
  MlpLift& model = result.model;
  MlpTrainer::Standardize(model, train);
  const MatrixXd x = MlpTrainer::NormalizedInputs(model, train.inputs);
  const MatrixXd y = MlpTrainer::NormalizedTargets(model, train.targets);
  result.initial_loss = MlpTrainer::NormalizedLoss(model, x, y);

  AdamSlot s_w1(model.w1_), s_b1(model.b1_), s_w2(model.w2_), s_b2(model.b2_),
      s_w3(model.w3_), s_b3(model.b3_);
  Rng rng(options.seed + 1);
  std::vector<int> order(static_cast<std::size_t>(train.size()));
  std::iota(order.begin(), order.end(), 0);
  const int batches = (train.size() + options.batch_size - 1) / options.batch_size;
  const int total_steps = batches * options.epochs;
  int t = 0;
  int rising = 0;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (int b = 0; b < batches; ++b) {
      const int lo = b * options.batch_size;
      const int n = std::min(options.batch_size, train.size() - lo);
      MatrixXd xb(n, x.cols()), yb(n, y.cols());
      for (int i = 0; i < n; ++i) {
        xb.row(i) = x.row(order[lo + i]);
        yb.row(i) = y.row(order[lo + i]);
      }
      const MatrixXd z1 = (xb * model.w1_).rowwise() + model.b1_;
      const MatrixXd h1 = Relu(z1);
      const MatrixXd z2 = (h1 * model.w2_).rowwise() + model.b2_;
      const MatrixXd h2 = Relu(z2);
      const MatrixXd out = (h2 * model.w3_).rowwise() + model.b3_;
      const MatrixXd diff = out - yb;
      epoch_loss += diff.cwiseAbs().mean() * n;

      const MatrixXd g3 = diff.unaryExpr([](double d) {
        return static_cast<double>((d > 0.0) - (d < 0.0));
      }) / static_cast<double>(diff.size());
      const MatrixXd g2 = ((g3 * model.w3_.transpose()).array() *
                           (z2.array() > 0.0).cast<double>())
                              .matrix();
      const MatrixXd g1 = ((g2 * model.w2_.transpose()).array() *
                           (z1.array() > 0.0).cast<double>())
                              .matrix();

      ++t;
      const double lr = options.lr * 0.5 *
                        (1.0 + std::cos(std::numbers::pi * (t - 1) / total_steps));
      s_w3.Update(model.w3_, h2.transpose() * g3, lr, t);
      s_b3.Update(model.b3_, g3.colwise().sum(), lr, t);
      s_w2.Update(model.w2_, h1.transpose() * g2, lr, t);
      s_b2.Update(model.b2_, g2.colwise().sum(), lr, t);
      s_w1.Update(model.w1_, xb.transpose() * g1, lr, t);
      s_b1.Update(model.b1_, g1.colwise().sum(), lr, t);
    }
    epoch_loss /= train.size();
    if (!std::isfinite(epoch_loss)) {
      throw Error(ErrorCode::kDiverged,
                  "MLP fit: non-finite loss at epoch " + std::to_string(epoch));
    }
    if (!result.epoch_losses.empty() && epoch_loss > result.epoch_losses.back()) {
      if (++rising >= 10) {
        throw Error(ErrorCode::kDiverged,
                    "MLP fit: loss rose 10 epochs in a row (epoch " +
                        std::to_string(epoch) + ")");
      }
    } else {
      rising = 0;
    }
    result.epoch_losses.push_back(epoch_loss);
  }
  return result;
}

double MlpHeldOutError(const MlpLift& model, const MlpDataset& data) {
  const MatrixXd pred = model.PredictBatch(data.inputs);
  // Sum |dx| + |dy| per waypoint, averaged over samples and waypoints.
  return (pred - data.targets).cwiseAbs().sum() /
         (static_cast<double>(data.size()) * model.horizon());
}

}  // namespace waylift
