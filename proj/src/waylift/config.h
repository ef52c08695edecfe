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

#ifndef WAYLIFT_CONFIG_H_
#define WAYLIFT_CONFIG_H_

#include <string>
#include <string_view>

#include "json.hpp"
#include "waylift/types.h"

namespace waylift {

enum class Scheme { kEuler, kRk4 };
enum class Model { kKbm, kCcpp, kMlp };

std::string_view SchemeName(Scheme scheme);
std::string_view ModelName(Model model);
Scheme ParseScheme(std::string_view name);
Model ParseModel(std::string_view name);

// Physical and numerical parameters of a lifting operator. Defaults are the
// reference vehicle: 2 Hz control, 2.9 m wheelbase, 0.6 rad steering limit,
// unit longitudinal gain, kappa_M = 0.4 1/m, sharpness bound 0.1 1/m^2 and
// five arc-length substeps.
struct LiftConfig {
  double dt = 0.5;             // control interval, s
  double wheelbase = 2.9;      // L, m
  double max_steer = 0.6;      // delta_max, rad, in (0, pi/2)
  double max_accel = 1.0;      // a_max, m/s^2
  double max_curvature = 0.4;  // kappa_M, 1/m
  double max_sharpness = 0.1;  // varsigma_M, 1/m^2
  int substeps = 5;            // n_int, clothoid model only
  Scheme scheme = Scheme::kRk4;
  Model model = Model::kKbm;

  bool operator==(const LiftConfig&) const = default;
};

// Returns `cfg` unchanged if every bound holds. Otherwise throws
// Error(kInvalidConfig) naming the first violated field, checked in
// declaration order.
const LiftConfig& ValidateConfig(const LiftConfig& cfg);

// JSON with keys dt, L, delta_max, a_max, kappa_M, sigma_M, n_int, scheme,
// model. All keys are required and unknown keys are rejected.
nlohmann::json ConfigToJson(const LiftConfig& cfg);
LiftConfig ConfigFromJson(const nlohmann::json& doc);

// A config together with the initial state to lift from. The JSON form is a
// LiftConfig document with an optional "initial_state": {"v0", "kappa0"}.
struct LiftSetup {
  LiftConfig config;
  InitialState initial{10.0, 0.0};
};

LiftSetup SetupFromJson(const nlohmann::json& doc);
nlohmann::json SetupToJson(const LiftSetup& setup);
// Parses text; malformed JSON raises Error(kParse).
nlohmann::json ParseJson(std::string_view text);

KbmState InitKbm(const InitialState& s);
CcppState InitCcpp(const InitialState& s, const LiftConfig& cfg);

}  // namespace waylift

#endif  // WAYLIFT_CONFIG_H_
