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

// Runs the waylift binary as a subprocess.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("waylift_cli_") + info->name() + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunResult Run(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string(WAYLIFT_CLI_PATH) + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  fs::path Path(const std::string& name) const { return dir_ / name; }

  fs::path dir_;
};

const std::string kConfigDir = WAYLIFT_CONFIG_DIR;

std::string ZeroActions(int steps) {
  std::string csv = "k,tau,lat,brake\n";
  for (int k = 0; k < steps; ++k) csv += std::to_string(k) + ",0,0,0\n";
  return csv;
}

TEST_F(CliTest, LiftWritesAStraightLine) {
  Spit(Path("a.csv"), ZeroActions(8));
  const RunResult r = Run("lift --config " + kConfigDir + "/kbm.json --actions " +
                          Path("a.csv").string() + " --out " +
                          Path("w.csv").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(Slurp(Path("w.csv")),
            "k,x,y\n1,5,0\n2,10,0\n3,15,0\n4,20,0\n5,25,0\n6,30,0\n7,35,0\n"
            "8,40,0\n");
}

TEST_F(CliTest, LiftBatchDirectory) {
  fs::create_directories(Path("in"));
  Spit(Path("in") / "a.csv", ZeroActions(2));
  Spit(Path("in") / "b.csv", ZeroActions(3));
  const RunResult r = Run("lift --heading --config " + kConfigDir +
                          "/ccpp.json --actions " + Path("in").string() +
                          " --out " + Path("out").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(Slurp(Path("out") / "a.csv"), "k,x,y,theta\n1,5,0,0\n2,10,0,0\n");
  EXPECT_TRUE(fs::exists(Path("out") / "b.csv"));
}

TEST_F(CliTest, LiftRejectsBadConfigs) {
  Spit(Path("a.csv"), ZeroActions(2));
  const std::string tail = " --actions " + Path("a.csv").string() + " --out " +
                           Path("w.csv").string();

  Spit(Path("bad.json"), "{\"dt\": 0.5, \"L\": }");
  RunResult r = Run("lift --config " + Path("bad.json").string() + tail);
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find("malformed JSON"), std::string::npos) << r.err;

  Spit(Path("typo.json"),
       R"({"dt": 0.5, "L": 2.9, "delta_max": 0.6, "a_max": 1.0,
           "kappa_M": 0.4, "sigma_m": 0.1, "n_int": 5, "scheme": "rk4",
           "model": "kbm"})");
  r = Run("lift --config " + Path("typo.json").string() + tail);
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find("sigma_m"), std::string::npos) << r.err;

  Spit(Path("kappa.json"),
       R"({"dt": 0.5, "L": 2.9, "delta_max": 0.6, "a_max": 1.0,
           "kappa_M": 0.4, "sigma_M": 0.1, "n_int": 5, "scheme": "rk4",
           "model": "ccpp", "initial_state": {"v0": 5.0, "kappa0": 0.5}})");
  r = Run("lift --config " + Path("kappa.json").string() + tail);
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find("kappa0"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(Path("w.csv")));
}

TEST_F(CliTest, GradcheckPassesAndFailsOnAbsurdTolerance) {
  RunResult r = Run("gradcheck --cases 20");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("\"max_rel_err\""), std::string::npos) << r.out;

  r = Run("gradcheck --cases 20 --tol 1e-14");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.out.find("\"failed\""), std::string::npos) << r.out;
  EXPECT_NE(r.err, "");

  r = Run("gradcheck --cases 0");
  EXPECT_NE(r.exit_code, 0);
  EXPECT_EQ(r.out, "");
}

TEST_F(CliTest, SweepIsByteIdenticalAndValidatesTheSpec) {
  Spit(Path("spec.json"),
       R"({"horizons": [8], "intervals": [0.1, 0.5], "substeps": [1, 2],
           "schemes": ["euler", "rk4"], "models": ["kbm", "ccpp"],
           "corpus_size": 8, "rng_seed": 0, "refine": 64})");
  const std::string spec = Path("spec.json").string();
  ASSERT_EQ(Run("sweep --config " + spec + " --out " + Path("a.csv").string())
                .exit_code,
            0);
  ASSERT_EQ(Run("sweep --config " + spec + " --out " + Path("b.csv").string())
                .exit_code,
            0);
  const std::string a = Slurp(Path("a.csv"));
  EXPECT_EQ(a, Slurp(Path("b.csv")));
  EXPECT_EQ(a.rfind("model,scheme,cf,dt,n_int,k,mean_l1,std_l1,rhs_evals\n", 0),
            0u);

  ASSERT_EQ(Run("pareto --spec " + spec + " --out " + Path("p.csv").string())
                .exit_code,
            0);
  EXPECT_EQ(Slurp(Path("p.csv")).find("\nkbm,"), std::string::npos);

  Spit(Path("empty.json"),
       R"({"horizons": [8], "intervals": [], "substeps": [1],
           "schemes": ["rk4"], "models": ["kbm"], "corpus_size": 8,
           "rng_seed": 0})");
  const RunResult r = Run("sweep --config " + Path("empty.json").string() +
                          " --out " + Path("c.csv").string());
  EXPECT_NE(r.exit_code, 0);
  EXPECT_NE(r.err.find("intervals"), std::string::npos) << r.err;
}

TEST_F(CliTest, TrainWritesCurveAndIsDeterministic) {
  Spit(Path("t.json"), R"({"steps": 10, "dataset_size": 4})");
  const std::string cfg = Path("t.json").string();
  RunResult r = Run("train --config " + cfg + " --out " + Path("r1").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("final/initial loss ratio:"), std::string::npos);
  ASSERT_EQ(Run("train --config " + cfg + " --out " + Path("r2").string())
                .exit_code,
            0);
  const std::string curve = Slurp(Path("r1") / "loss_curve.csv");
  EXPECT_EQ(curve.rfind("step,loss\n0,", 0), 0u);
  EXPECT_EQ(curve, Slurp(Path("r2") / "loss_curve.csv"));
  EXPECT_EQ(Slurp(Path("r1") / "params.json"),
            Slurp(Path("r2") / "params.json"));

  Spit(Path("flat.json"), R"({"steps": 5, "dataset_size": 4, "lr": 0})");
  r = Run("train --config " + Path("flat.json").string() + " --out " +
          Path("r3").string());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::istringstream lines(Slurp(Path("r3") / "loss_curve.csv"));
  std::string line, first;
  std::getline(lines, line);  // header
  int rows = 0;
  while (std::getline(lines, line)) {
    const std::string loss = line.substr(line.find(',') + 1);
    if (first.empty()) first = loss;
    EXPECT_EQ(loss, first);
    ++rows;
  }
  EXPECT_EQ(rows, 6);
}

TEST_F(CliTest, UnknownSubcommandIsAUsageError) {
  EXPECT_NE(Run("frobnicate").exit_code, 0);
  EXPECT_NE(Run("").exit_code, 0);
}

}  // namespace
