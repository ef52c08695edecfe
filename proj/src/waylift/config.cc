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

#include "waylift/config.h"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "waylift/error.h"

namespace waylift {
namespace {

using nlohmann::json;

constexpr const char* kConfigKeys[] = {"dt",      "L",       "delta_max",
                                       "a_max",   "kappa_M", "sigma_M",
                                       "n_int",   "scheme",  "model"};

[[noreturn]] void Reject(const std::string& field, const std::string& why,
                         double got) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "invalid config: " << field << ": " << why << " (got " << got << ")";
  throw Error(ErrorCode::kInvalidConfig, os.str());
}

void RequirePositive(const char* field, double value, const char* why) {
  if (!std::isfinite(value) || !(value > 0.0)) Reject(field, why, value);
}

void RejectUnknownKeys(const json& doc, std::set<std::string> allowed,
                       const char* what) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParse, std::string(what) + " must be a JSON object");
  }
  for (const auto& item : doc.items()) {
    if (!allowed.contains(item.key())) {
      throw Error(ErrorCode::kParse,
                  std::string(what) + ": unknown key \"" + item.key() + "\"");
    }
  }
}

const json& Field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw Error(ErrorCode::kParse, std::string("missing field \"") + key + "\"");
  }
  return *it;
}

double NumberField(const json& doc, const char* key) {
  const json& v = Field(doc, key);
  if (!v.is_number()) {
    throw Error(ErrorCode::kParse,
                std::string("field \"") + key + "\" must be a number");
  }
  return v.get<double>();
}

int IntegerField(const json& doc, const char* key) {
  const json& v = Field(doc, key);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kParse,
                std::string("field \"") + key + "\" must be an integer");
  }
  return v.get<int>();
}

std::string StringField(const json& doc, const char* key) {
  const json& v = Field(doc, key);
  if (!v.is_string()) {
    throw Error(ErrorCode::kParse,
                std::string("field \"") + key + "\" must be a string");
  }
  return v.get<std::string>();
}

}  // namespace

std::string_view SchemeName(Scheme scheme) {
  return scheme == Scheme::kEuler ? "euler" : "rk4";
}

std::string_view ModelName(Model model) {
  switch (model) {
    case Model::kKbm:
      return "kbm";
    case Model::kCcpp:
      return "ccpp";
    case Model::kMlp:
      return "mlp";
  }
  return "unknown";
}

Scheme ParseScheme(std::string_view name) {
  if (name == "euler") return Scheme::kEuler;
  if (name == "rk4") return Scheme::kRk4;
  throw Error(ErrorCode::kParse,
              "field \"scheme\": expected \"euler\" or \"rk4\", got \"" +
                  std::string(name) + "\"");
}

Model ParseModel(std::string_view name) {
  if (name == "kbm") return Model::kKbm;
  if (name == "ccpp") return Model::kCcpp;
  if (name == "mlp") return Model::kMlp;
  throw Error(ErrorCode::kParse,
              "field \"model\": expected \"kbm\", \"ccpp\" or \"mlp\", got \"" +
                  std::string(name) + "\"");
}

const LiftConfig& ValidateConfig(const LiftConfig& cfg) {
  RequirePositive("dt", cfg.dt, "nonpositive interval");
  RequirePositive("L", cfg.wheelbase, "nonpositive wheelbase");
  if (!std::isfinite(cfg.max_steer) || !(cfg.max_steer > 0.0) ||
      !(cfg.max_steer < std::numbers::pi / 2)) {
    Reject("delta_max", "steering limit outside (0, pi/2)", cfg.max_steer);
  }
  RequirePositive("a_max", cfg.max_accel, "nonpositive longitudinal gain");
  RequirePositive("kappa_M", cfg.max_curvature, "nonpositive curvature bound");
  RequirePositive("sigma_M", cfg.max_sharpness, "nonpositive sharpness bound");
  if (cfg.substeps == 0) Reject("n_int", "zero substeps", 0);
  if (cfg.substeps < 0) Reject("n_int", "negative substeps", cfg.substeps);
  return cfg;
}

json ConfigToJson(const LiftConfig& cfg) {
  return json{{"dt", cfg.dt},
              {"L", cfg.wheelbase},
              {"delta_max", cfg.max_steer},
              {"a_max", cfg.max_accel},
              {"kappa_M", cfg.max_curvature},
              {"sigma_M", cfg.max_sharpness},
              {"n_int", cfg.substeps},
              {"scheme", SchemeName(cfg.scheme)},
              {"model", ModelName(cfg.model)}};
}

LiftConfig ConfigFromJson(const json& doc) {
  RejectUnknownKeys(doc, {std::begin(kConfigKeys), std::end(kConfigKeys)},
                    "lift config");
  LiftConfig cfg;
  cfg.dt = NumberField(doc, "dt");
  cfg.wheelbase = NumberField(doc, "L");
  cfg.max_steer = NumberField(doc, "delta_max");
  cfg.max_accel = NumberField(doc, "a_max");
  cfg.max_curvature = NumberField(doc, "kappa_M");
  cfg.max_sharpness = NumberField(doc, "sigma_M");
  cfg.substeps = IntegerField(doc, "n_int");
  cfg.scheme = ParseScheme(StringField(doc, "scheme"));
  cfg.model = ParseModel(StringField(doc, "model"));
  return ValidateConfig(cfg);
}

LiftSetup SetupFromJson(const json& doc) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParse, "lift config must be a JSON object");
  }
  json config_part = doc;
  LiftSetup setup;
  if (auto it = doc.find("initial_state"); it != doc.end()) {
    RejectUnknownKeys(*it, {"v0", "kappa0"}, "initial_state");
    if (it->contains("v0")) setup.initial.v0 = NumberField(*it, "v0");
    if (it->contains("kappa0")) setup.initial.kappa0 = NumberField(*it, "kappa0");
    config_part.erase("initial_state");
  }
  setup.config = ConfigFromJson(config_part);
  // Validates the initial state against the config.
  if (setup.config.model == Model::kCcpp) {
    InitCcpp(setup.initial, setup.config);
  } else {
    InitKbm(setup.initial);
  }
  return setup;
}

json SetupToJson(const LiftSetup& setup) {
  json doc = ConfigToJson(setup.config);
  doc["initial_state"] = {{"v0", setup.initial.v0},
                          {"kappa0", setup.initial.kappa0}};
  return doc;
}

json ParseJson(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
  }
}

KbmState InitKbm(const InitialState& s) {
  if (!std::isfinite(s.v0)) {
    throw Error(ErrorCode::kInvalidArgument, "initial speed v0 is not finite");
  }
  return {0.0, 0.0, 0.0, s.v0};
}

CcppState InitCcpp(const InitialState& s, const LiftConfig& cfg) {
  if (!std::isfinite(s.v0) || s.v0 < 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "initial speed v0 must be finite and nonnegative");
  }
  if (!std::isfinite(s.kappa0) || std::abs(s.kappa0) > cfg.max_curvature) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "initial curvature kappa0 = " << s.kappa0 << " exceeds kappa_M = "
       << cfg.max_curvature;
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
  return {0.0, 0.0, 0.0, s.kappa0, s.v0};
}

}  // namespace waylift
