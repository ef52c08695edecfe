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

// Command-line front end. Data goes to files (and the gradcheck summary to
// stdout); diagnostics go to stderr.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "waylift/waylift.h"

namespace fs = std::filesystem;

namespace {

// Releases a C handle on scope exit.
template <typename T, void (*Free)(T*)>
struct Owned {
  T* ptr = nullptr;
  Owned() = default;
  Owned(const Owned&) = delete;
  Owned& operator=(const Owned&) = delete;
  ~Owned() { Free(ptr); }
};

using Buffer = Owned<waylift_buffer, waylift_buffer_free>;
using Setup = Owned<waylift_setup, waylift_setup_free>;
using Actions = Owned<waylift_actions, waylift_actions_free>;
using Trajectory = Owned<waylift_trajectory, waylift_trajectory_free>;
using TrainResult = Owned<waylift_train_result, waylift_train_result_free>;

struct Failure {
  std::string message;
};

void Check(waylift_status status, const std::string& context) {
  if (status == WAYLIFT_OK) return;
  throw Failure{context + ": " + waylift_status_name(status) + ": " +
                waylift_last_error()};
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"cannot read " + path.string()};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Failure{"cannot write " + path.string()};
}

std::string_view View(const Buffer& b) {
  return {waylift_buffer_data(b.ptr), waylift_buffer_size(b.ptr)};
}

// --- lift ---

struct LiftArgs {
  std::string config;
  std::string actions;
  std::string out;
  bool heading = false;
};

void LiftOne(const waylift_setup* setup, const fs::path& in,
             const fs::path& out, bool heading) {
  Actions actions;
  Check(waylift_actions_from_csv(ReadFile(in).c_str(), &actions.ptr),
        in.string());
  Trajectory traj;
  Check(waylift_lift(setup, actions.ptr, &traj.ptr), in.string());
  Buffer csv;
  Check(waylift_trajectory_to_csv(traj.ptr, heading ? 1 : 0, &csv.ptr),
        in.string());
  WriteFile(out, View(csv));
}

int RunLift(const LiftArgs& args) {
  Setup setup;
  Check(waylift_setup_from_json(ReadFile(args.config).c_str(), &setup.ptr),
        args.config);
  if (!fs::is_directory(args.actions)) {
    LiftOne(setup.ptr, args.actions, args.out, args.heading);
    return 0;
  }
  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(args.actions)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      inputs.push_back(entry.path());
    }
  }
  std::sort(inputs.begin(), inputs.end());
  if (inputs.empty()) throw Failure{"no .csv files in " + args.actions};
  fs::create_directories(args.out);
  for (const fs::path& in : inputs) {
    LiftOne(setup.ptr, in, fs::path(args.out) / in.filename(), args.heading);
  }
  std::cerr << "lifted " << inputs.size() << " sequences into " << args.out
            << "\n";
  return 0;
}

// --- gradcheck ---

struct GradcheckArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int cases = 100;
  int horizon = 8;
  double fd_step = 1e-5;
  double tol = 1e-5;
};

int RunGradcheck(const GradcheckArgs& args) {
  Setup setup;
  if (!args.config.empty()) {
    Check(waylift_setup_from_json(ReadFile(args.config).c_str(), &setup.ptr),
          args.config);
  }
  Buffer summary;
  const waylift_status status =
      waylift_gradcheck_random(setup.ptr, args.seed, args.cases, args.horizon,
                               args.fd_step, args.tol, &summary.ptr);
  if (status != WAYLIFT_OK && status != WAYLIFT_ERR_CHECK_FAILED) {
    Check(status, "gradcheck");
  }
  std::cout << View(summary) << "\n";
  if (!args.out.empty()) WriteFile(args.out, std::string(View(summary)) + "\n");
  if (status == WAYLIFT_ERR_CHECK_FAILED) {
    std::cerr << "gradcheck failed: " << waylift_last_error() << "\n";
    return 1;
  }
  return 0;
}

// --- sweep / pareto ---

struct SweepArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool yaw = false;
};

int RunSweep(const SweepArgs& args, bool substeps_only) {
  Buffer csv;
  const std::uint64_t* seed = args.seed ? &*args.seed : nullptr;
  Check(waylift_sweep(ReadFile(args.config).c_str(), seed,
                      substeps_only ? 1 : 0, args.yaw ? 1 : 0, &csv.ptr),
        args.config);
  WriteFile(args.out, View(csv));
  return 0;
}

// --- train ---

struct TrainArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

int RunTrain(const TrainArgs& args) {
  const std::string config =
      args.config.empty() ? std::string("{}") : ReadFile(args.config);
  TrainResult result;
  const std::uint64_t* seed = args.seed ? &*args.seed : nullptr;
  Check(waylift_train(config.c_str(), seed, &result.ptr), "train");
  Buffer curve;
  Check(waylift_train_loss_csv(result.ptr, &curve.ptr), "train");
  Buffer params;
  Check(waylift_train_params_json(result.ptr, &params.ptr), "train");
  const fs::path dir(args.out);
  fs::create_directories(dir);
  WriteFile(dir / "loss_curve.csv", View(curve));
  WriteFile(dir / "params.json", std::string(View(params)) + "\n");
  std::cout << "final/initial loss ratio: " << waylift_train_ratio(result.ptr)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"waylift: lift raw driving actions into waypoints"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(waylift_version()));

  LiftArgs lift;
  CLI::App* lift_cmd = app.add_subcommand("lift", "Lift action CSV(s) to waypoint CSV(s)");
  lift_cmd->add_option("--config", lift.config, "Lift config JSON")->required()->check(CLI::ExistingFile);
  lift_cmd->add_option("--actions", lift.actions, "Action CSV file or directory of CSVs")->required()->check(CLI::ExistingPath);
  lift_cmd->add_option("--out", lift.out, "Output CSV file (or directory in batch mode)")->required();
  lift_cmd->add_flag("--heading", lift.heading, "Also write the theta column");

  GradcheckArgs grad;
  CLI::App* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference check of the Jacobian");
  grad_cmd->add_option("--config", grad.config, "Lift config JSON (default: cycle over all models and schemes)")->check(CLI::ExistingFile);
  grad_cmd->add_option("--seed", grad.seed, "RNG seed")->capture_default_str();
  grad_cmd->add_option("--cases", grad.cases, "Number of random sequences")->check(CLI::PositiveNumber)->capture_default_str();
  grad_cmd->add_option("--horizon", grad.horizon, "Steps per sequence")->check(CLI::PositiveNumber)->capture_default_str();
  grad_cmd->add_option("--fd-step", grad.fd_step, "Central-difference step")->check(CLI::PositiveNumber)->capture_default_str();
  grad_cmd->add_option("--tol", grad.tol, "Max relative error")->check(CLI::PositiveNumber)->capture_default_str();
  grad_cmd->add_option("--out", grad.out, "Also write the JSON summary here");

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Horizon / framerate / integrator error sweep");
  SweepArgs pareto;
  CLI::App* pareto_cmd = app.add_subcommand("pareto", "Substep accuracy vs. compute study (clothoid model)");
  for (auto [cmd, args] : {std::pair{sweep_cmd, &sweep}, std::pair{pareto_cmd, &pareto}}) {
    cmd->add_option("--config,--spec", args->config, "Sweep spec JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", args->out, "Output CSV")->required();
    cmd->add_option("--seed", args->seed, "Override the spec's rng_seed");
    cmd->add_flag("--with-yaw", args->yaw, "Append a mean_yaw column");
  }

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Toy imitation training through a lift");
  train_cmd->add_option("--config", train.config, "Train config JSON (default: built-in demo)")->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train.out, "Output directory")->required();
  train_cmd->add_option("--seed", train.seed, "Override the config's seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*lift_cmd) return RunLift(lift);
    if (*grad_cmd) return RunGradcheck(grad);
    if (*sweep_cmd) return RunSweep(sweep, false);
    if (*pareto_cmd) return RunSweep(pareto, true);
    if (*train_cmd) return RunTrain(train);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
