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

#include "waylift/harness.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "waylift/activation.h"
#include "waylift/ccpp.h"
#include "waylift/csv.h"
#include "waylift/error.h"
#include "waylift/kbm.h"
#include "waylift/lift.h"
#include "waylift/loss.h"
#include "waylift/sampling.h"

namespace waylift {
namespace {

using nlohmann::json;

WaypointTrajectory OracleKbm(const RawActionSequence& actions,
                             const InitialState& init, const LiftConfig& cfg,
                             int refine) {
  KbmState z = InitKbm(init);
  const double h = cfg.dt / refine;
  WaypointTrajectory out;
  for (int k = 0; k < actions.steps(); ++k) {
    const KbmControls u = ActivateKbm(actions.step(k), cfg);
    for (int i = 0; i < refine; ++i) z = StepRk4Kbm(z, u, h, cfg.wheelbase);
    out.points.push_back({z.x, z.y});
    out.headings.push_back(z.theta);
  }
  return out;
}

// One fine clothoid step of length h with curvature held inside
// [-kappa_max, kappa_max]. Curvature and heading are polynomial in arc
// length, so splitting at the saturation point keeps RK4 at full order.
CcppPose FineClothoidStep(const CcppPose& p, double sharpness, double h,
                          double kappa_max) {
  const int side = sharpness > 0.0 ? 1 : (sharpness < 0.0 ? -1 : 0);
  if (side == 0) return SubstepRk4Ccpp(p, 0.0, h, kappa_max);
  const double bound = side * kappa_max;
  const double room = (bound - p.kappa) / sharpness;  // arc to saturation
  if (room <= 0.0) return SubstepRk4Ccpp(p, 0.0, h, kappa_max);
  if (room >= h) return SubstepRk4Ccpp(p, sharpness, h, kappa_max);
  CcppPose mid = SubstepRk4Ccpp(p, sharpness, room, kappa_max);
  mid.kappa = bound;
  return SubstepRk4Ccpp(mid, 0.0, h - room, kappa_max);
}

WaypointTrajectory OracleCcpp(const RawActionSequence& actions,
                              const InitialState& init, const LiftConfig& cfg,
                              int refine) {
  const CcppState z0 = InitCcpp(init, cfg);
  CcppPose pose{z0.x, z0.y, z0.theta, z0.kappa};
  double v = z0.v;
  const int fine_steps = cfg.substeps * refine;
  WaypointTrajectory out;
  for (int k = 0; k < actions.steps(); ++k) {
    const CcppControls u = ActivateCcpp(actions.step(k), cfg);
    v = CcppSpeedUpdate(v, u.accel, cfg.dt);
    const double h = ArcIncrementFor(v, cfg.dt, fine_steps).step;
    for (int i = 0; i < fine_steps; ++i) {
      pose = FineClothoidStep(pose, u.sharpness, h, cfg.max_curvature);
    }
    out.points.push_back({pose.x, pose.y});
    out.headings.push_back(pose.theta);
  }
  return out;
}

std::vector<GridPoint> ExpandGrid(const SweepSpec& spec) {
  std::vector<GridPoint> grid;
  for (Model model : spec.models) {
    for (Scheme scheme : spec.schemes) {
      for (int horizon : spec.horizons) {
        for (double dt : spec.intervals) {
          if (model == Model::kKbm) {
            grid.push_back({model, scheme, horizon, dt, 1});
            continue;
          }
          for (int n : spec.substeps) {
            grid.push_back({model, scheme, horizon, dt, n});
          }
        }
      }
    }
  }
  std::sort(grid.begin(), grid.end(), [](const GridPoint& a, const GridPoint& b) {
    return std::tie(a.model, a.scheme, a.horizon, a.dt, a.substeps) <
           std::tie(b.model, b.scheme, b.horizon, b.dt, b.substeps);
  });
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](const GridPoint& a, const GridPoint& b) {
                           return std::tie(a.model, a.scheme, a.horizon, a.dt,
                                           a.substeps) ==
                                  std::tie(b.model, b.scheme, b.horizon, b.dt,
                                           b.substeps);
                         }),
             grid.end());
  return grid;
}

template <typename T>
std::vector<T> ListField(const json& doc, const char* key,
                         T (*convert)(const json&, const char*)) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw Error(ErrorCode::kParse, std::string("sweep spec: missing field \"") +
                                       key + "\"");
  }
  if (!it->is_array()) {
    throw Error(ErrorCode::kParse,
                std::string("sweep spec: field \"") + key + "\" must be a list");
  }
  std::vector<T> out;
  for (const json& item : *it) out.push_back(convert(item, key));
  return out;
}

int ToInt(const json& v, const char* key) {
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kParse, std::string("sweep spec: field \"") + key +
                                       "\" must hold integers");
  }
  return v.get<int>();
}

double ToDouble(const json& v, const char* key) {
  if (!v.is_number()) {
    throw Error(ErrorCode::kParse, std::string("sweep spec: field \"") + key +
                                       "\" must hold numbers");
  }
  return v.get<double>();
}

Scheme ToScheme(const json& v, const char* key) {
  if (!v.is_string()) {
    throw Error(ErrorCode::kParse, std::string("sweep spec: field \"") + key +
                                       "\" must hold strings");
  }
  return ParseScheme(v.get<std::string>());
}

Model ToModel(const json& v, const char* key) {
  if (!v.is_string()) {
    throw Error(ErrorCode::kParse, std::string("sweep spec: field \"") + key +
                                       "\" must hold strings");
  }
  return ParseModel(v.get<std::string>());
}

[[noreturn]] void RejectSpec(const std::string& what) {
  throw Error(ErrorCode::kInvalidConfig, "invalid sweep spec: " + what);
}

}  // namespace

WaypointTrajectory OracleRollout(const RawActionSequence& actions,
                                 const InitialState& init,
                                 const LiftConfig& cfg, int refine) {
  ValidateConfig(cfg);
  if (refine < 64) {
    throw Error(ErrorCode::kInvalidArgument,
                "oracle refine must be >= 64 (got " + std::to_string(refine) +
                    ")");
  }
  switch (cfg.model) {
    case Model::kKbm:
      return OracleKbm(actions, init, cfg, refine);
    case Model::kCcpp:
      return OracleCcpp(actions, init, cfg, refine);
    case Model::kMlp:
      break;
  }
  throw Error(ErrorCode::kInvalidConfig, "oracle requires model kbm or ccpp");
}

void ValidateSweepSpec(const SweepSpec& spec) {
  if (spec.horizons.empty()) RejectSpec("horizons is empty");
  if (spec.intervals.empty()) RejectSpec("intervals is empty");
  if (spec.substeps.empty()) RejectSpec("substeps is empty");
  if (spec.schemes.empty()) RejectSpec("schemes is empty");
  if (spec.models.empty()) RejectSpec("models is empty");
  if (spec.corpus_size < 1) RejectSpec("corpus_size must be >= 1");
  if (!(spec.action_scale >= 0.0) || !std::isfinite(spec.action_scale)) {
    RejectSpec("action_scale must be finite and >= 0");
  }
  if (spec.refine < 64) RejectSpec("refine must be >= 64");
  for (int h : spec.horizons) {
    if (h < 1) RejectSpec("horizons must be >= 1");
  }
  for (Model m : spec.models) {
    if (m == Model::kMlp) RejectSpec("models may only contain kbm and ccpp");
  }
  for (double dt : spec.intervals) {
    LiftConfig probe = spec.vehicle;
    probe.dt = dt;
    ValidateConfig(probe);
  }
  for (int n : spec.substeps) {
    LiftConfig probe = spec.vehicle;
    probe.substeps = n;
    ValidateConfig(probe);
  }
  ValidateConfig(spec.vehicle);
}

SweepSpec SweepSpecFromJson(const json& doc) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParse, "sweep spec must be a JSON object");
  }
  static const std::set<std::string> kKeys = {
      "horizons",     "intervals", "substeps", "schemes", "models",
      "corpus_size",  "rng_seed",  "action_scale", "refine", "vehicle"};
  for (const auto& item : doc.items()) {
    if (!kKeys.contains(item.key())) {
      throw Error(ErrorCode::kParse,
                  "sweep spec: unknown key \"" + item.key() + "\"");
    }
  }
  SweepSpec spec;
  spec.horizons = ListField<int>(doc, "horizons", ToInt);
  spec.intervals = ListField<double>(doc, "intervals", ToDouble);
  spec.substeps = ListField<int>(doc, "substeps", ToInt);
  spec.schemes = ListField<Scheme>(doc, "schemes", ToScheme);
  spec.models = ListField<Model>(doc, "models", ToModel);
  if (auto it = doc.find("corpus_size"); it != doc.end()) {
    spec.corpus_size = ToInt(*it, "corpus_size");
  }
  if (auto it = doc.find("rng_seed"); it != doc.end()) {
    if (!it->is_number_integer() ||
        (!it->is_number_unsigned() && it->get<std::int64_t>() < 0)) {
      throw Error(ErrorCode::kParse,
                  "sweep spec: field \"rng_seed\" must be a nonnegative integer");
    }
    spec.rng_seed = it->get<std::uint64_t>();
  }
  if (auto it = doc.find("action_scale"); it != doc.end()) {
    spec.action_scale = ToDouble(*it, "action_scale");
  }
  if (auto it = doc.find("refine"); it != doc.end()) {
    spec.refine = ToInt(*it, "refine");
  }
  if (auto it = doc.find("vehicle"); it != doc.end()) {
    json full = ConfigToJson(spec.vehicle);
    if (!it->is_object()) {
      throw Error(ErrorCode::kParse, "sweep spec: \"vehicle\" must be an object");
    }
    for (const auto& item : it->items()) {
      static const std::set<std::string> kVehicle = {"L", "delta_max", "a_max",
                                                     "kappa_M", "sigma_M"};
      if (!kVehicle.contains(item.key())) {
        throw Error(ErrorCode::kParse,
                    "sweep spec: unknown vehicle key \"" + item.key() + "\"");
      }
      full[item.key()] = item.value();
    }
    spec.vehicle = ConfigFromJson(full);
  }
  ValidateSweepSpec(spec);
  return spec;
}

Corpus MakeCorpus(int horizon, int size, std::uint64_t seed,
                  double action_scale) {
  if (horizon < 1 || size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "corpus needs horizon, size >= 1");
  }
  Rng rng(seed);
  Corpus corpus;
  for (int i = 0; i < size; ++i) {
    corpus.actions.push_back(action_scale > 0.0
                                 ? SampleActions(rng, horizon, action_scale)
                                 : RawActionSequence::Zeros(horizon));
    corpus.initial.push_back({SampleUniform(rng, 0.0, 15.0), 0.0});
  }
  return corpus;
}

LiftConfig GridConfig(const LiftConfig& vehicle, const GridPoint& point) {
  LiftConfig cfg = vehicle;
  cfg.model = point.model;
  cfg.scheme = point.scheme;
  cfg.dt = point.dt;
  cfg.substeps = point.substeps;
  return ValidateConfig(cfg);
}

std::vector<WaypointTrajectory> OracleCorpus(const Corpus& corpus,
                                             const LiftConfig& cfg, int refine) {
  LiftConfig reference = cfg;
  reference.substeps = 1;
  std::vector<WaypointTrajectory> out;
  out.reserve(corpus.actions.size());
  for (int i = 0; i < corpus.size(); ++i) {
    out.push_back(
        OracleRollout(corpus.actions[i], corpus.initial[i], reference, refine));
  }
  return out;
}

GridResult EvaluateGridPoint(const GridPoint& point, const LiftConfig& vehicle,
                             const Corpus& corpus,
                             const std::vector<WaypointTrajectory>& oracle) {
  const LiftConfig cfg = GridConfig(vehicle, point);
  GridResult result;
  for (int i = 0; i < corpus.size(); ++i) {
    RolloutStats stats;
    const WaypointTrajectory traj =
        Lift(corpus.actions[i], corpus.initial[i], cfg, &stats);
    result.errors.push_back(PerWaypointError(traj, oracle[i]));
    std::vector<double> yaw(traj.headings.size());
    for (std::size_t k = 0; k < yaw.size(); ++k) {
      yaw[k] = std::abs(traj.headings[k] - oracle[i].headings[k]);
    }
    result.yaw_errors.push_back(std::move(yaw));
    result.rhs_evals = stats.rhs_evals;
  }
  return result;
}

std::vector<ErrorRecord> RunSweep(const SweepSpec& spec) {
  ValidateSweepSpec(spec);
  std::map<int, Corpus> corpora;
  std::map<std::tuple<Model, int, double>, std::vector<WaypointTrajectory>>
      oracles;
  std::vector<ErrorRecord> records;
  for (const GridPoint& point : ExpandGrid(spec)) {
    auto [corpus_it, fresh] = corpora.try_emplace(point.horizon);
    if (fresh) {
      corpus_it->second = MakeCorpus(point.horizon, spec.corpus_size,
                                     spec.rng_seed, spec.action_scale);
    }
    const Corpus& corpus = corpus_it->second;
    const auto key = std::make_tuple(point.model, point.horizon, point.dt);
    auto oracle_it = oracles.find(key);
    if (oracle_it == oracles.end()) {
      oracle_it =
          oracles
              .emplace(key, OracleCorpus(corpus, GridConfig(spec.vehicle, point),
                                         spec.refine))
              .first;
    }
    const GridResult result =
        EvaluateGridPoint(point, spec.vehicle, corpus, oracle_it->second);
    const ErrorProfile profile = AggregateErrorProfiles(result.errors);
    const ErrorProfile yaw = AggregateErrorProfiles(result.yaw_errors);
    for (int k = 0; k < point.horizon; ++k) {
      records.push_back({point.model, point.scheme, point.horizon, point.dt,
                         point.substeps, k + 1, profile.mean[k],
                         profile.stddev[k], result.rhs_evals, yaw.mean[k]});
    }
  }
  return records;
}

std::vector<ErrorRecord> ParetoSubsteps(const SweepSpec& spec) {
  if (std::find(spec.models.begin(), spec.models.end(), Model::kCcpp) ==
      spec.models.end()) {
    RejectSpec("substep study requires \"ccpp\" in models");
  }
  SweepSpec restricted = spec;
  restricted.models = {Model::kCcpp};
  return RunSweep(restricted);
}

std::string RecordsToCsv(const std::vector<ErrorRecord>& records,
                         bool with_yaw) {
  std::string out = "model,scheme,cf,dt,n_int,k,mean_l1,std_l1,rhs_evals";
  out += with_yaw ? ",mean_yaw\n" : "\n";
  for (const ErrorRecord& r : records) {
    out += ModelName(r.model);
    out += ',';
    out += SchemeName(r.scheme);
    out += ',' + std::to_string(r.horizon) + ',';
    AppendDouble(out, r.dt);
    out += ',' + std::to_string(r.substeps) + ',' + std::to_string(r.k) + ',';
    AppendDouble(out, r.mean_l1);
    out += ',';
    AppendDouble(out, r.std_l1);
    out += ',' + std::to_string(r.rhs_evals);
    if (with_yaw) {
      out += ',';
      AppendDouble(out, r.mean_yaw);
    }
    out += '\n';
  }
  return out;
}

}  // namespace waylift
