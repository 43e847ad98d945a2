// Copyright 2026 The stageig Authors
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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "stageig.hpp"
#include "stageig/io.hpp"

namespace stageig {
namespace {

namespace fs = std::filesystem;
using io::json;

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + STAGEIG_CLI_PATH + "' " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string fixture(const std::string& name) { return std::string(STAGEIG_FIXTURE_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("stageig_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, VerifyFixturesPass) {
  for (const char* name : {"p3_cover.json", "c4_uniform.json", "kagome_quotient.json",
                           "random12_nonreversible.json"}) {
    auto r = run("verify --input " + fixture(name));
    EXPECT_EQ(r.status, 0) << name;
    auto j = json::parse(r.out);
    EXPECT_TRUE(j["pass"].get<bool>()) << name;
    EXPECT_EQ(j["pairs"], j["expected"]) << name;
  }
}

TEST_F(CliTest, VerifyMismatchExitsOne) {
  auto r = run("verify -i " + fixture("random12_nonreversible.json"), "STAGEIG_TOL=1e-30");
  EXPECT_EQ(r.status, 1);
  EXPECT_FALSE(json::parse(r.out)["pass"].get<bool>());
}

TEST_F(CliTest, SchemaErrorsExitTwo) {
  EXPECT_EQ(run("validate -i " + write("a.json", "{oops")).status, 2);
  EXPECT_EQ(run("validate -i " + write("b.json", R"({"m": 1, "edges": [[0, 0]]})")).status, 2);
  EXPECT_EQ(run("validate -i " + write("c.json", R"({"m": 1, "n": 1, "edges": [[0, 0]]})")).status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("validate").status, 2);
}

TEST_F(CliTest, ValidationErrorsExitThree) {
  auto bad = write("cover.json", R"({"vertices": 3, "edges": [[0, 1], [1, 2]],
                                     "t1": [[0, 1], [2]], "t2": [[0], [2]], "theta": 1.0})");
  EXPECT_EQ(run("validate -i " + bad).status, 3);
  EXPECT_EQ(run("validate -i " + fixture("c4_uniform.json") + " --theta 3.5").status, 3);
  EXPECT_EQ(run("evolve -i " + fixture("c4_uniform.json") + " --steps 2 --seed-vertex 9").status, 3);
  EXPECT_EQ(run("kagome --patch 0 0 --patch-size 3").status, 3);
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(run("--help").status, 0); }

TEST_F(CliTest, Validate) {
  auto r = run("validate -i " + fixture("c4_uniform.json"));
  ASSERT_EQ(r.status, 0);
  auto j = json::parse(r.out);
  EXPECT_TRUE(j["valid"].get<bool>());
  EXPECT_EQ(j["nu"], 4);
  EXPECT_EQ(j["betti_number"], 1);
  EXPECT_TRUE(j["reversibility"]["reversible"].get<bool>());
}

TEST_F(CliTest, EvolveZeroSteps) {
  auto r = run("evolve -i " + fixture("c4_uniform.json") + " --steps 0 --seed-vertex 2");
  ASSERT_EQ(r.status, 0);
  auto dist = json::parse(r.out)["distributions"];
  ASSERT_EQ(dist.size(), 1u);
  EXPECT_EQ(dist[0], json({0.0, 0.0, 1.0, 0.0}));
}

TEST_F(CliTest, EvolveFromInitialFile) {
  auto init = write("init.json", "[[1, 0], [0, 1], [0, 0], [0, 0]]");
  auto r = run("evolve -i " + fixture("c4_uniform.json") + " --steps 3 --initial " + init);
  ASSERT_EQ(r.status, 0);
  auto dist = json::parse(r.out)["distributions"];
  ASSERT_EQ(dist.size(), 4u);
  EXPECT_NEAR(dist[0][0].get<double>(), 0.5, 1e-15);
  for (const auto& p : dist) {
    double total = 0.0;
    for (const auto& x : p) total += x.get<double>();
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  EXPECT_EQ(run("evolve -i " + fixture("c4_uniform.json") + " --initial " + init + " --seed-vertex 0").status, 2);
}

TEST_F(CliTest, KagomeBandCsv) {
  const fs::path out = dir_ / "bands.csv";
  const double theta = 1.5708;
  ASSERT_EQ(run("kagome --theta 1.5708 --grid 16 --out " + out.string()).status, 0);
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,l,angle_plus,angle_minus,flat_angle,band_residual,flat_residual");
  int rows = 0;
  const double flat = unit_angle(-cis(-2.0 * theta));
  while (std::getline(in, line)) {
    std::vector<double> cols;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cols.push_back(std::stod(cell));
    ASSERT_EQ(cols.size(), 7u);
    EXPECT_NEAR(circle_distance(cols[4], flat), 0.0, 1e-12);
    EXPECT_LT(cols[5], 1e-10);
    EXPECT_LT(cols[6], 1e-10);
    ++rows;
  }
  EXPECT_EQ(rows, 256);
}

TEST_F(CliTest, KagomePatch) {
  for (const char* theta : {"0.785398163397448", "1.5707963267948966"}) {
    auto r = run(std::string("kagome --theta ") + theta + " --patch 0 0");
    ASSERT_EQ(r.status, 0);
    auto j = json::parse(r.out);
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_LT(j["residual"].get<double>(), 1e-9);
  }
}

TEST_F(CliTest, OutputsAreByteIdentical) {
  for (const std::string args :
       {"eigenbasis -i " + fixture("random12_nonreversible.json"),
        "spectrum -i " + fixture("p3_cover.json") + " --format csv",
        "eigenbasis -i " + fixture("kagome_quotient.json") + " --format csv",
        std::string("kagome --grid 8")}) {
    auto first = run(args);
    auto second = run(args);
    ASSERT_EQ(first.status, 0) << args;
    EXPECT_FALSE(first.out.empty());
    EXPECT_EQ(first.out, second.out) << args;
  }
}

TEST_F(CliTest, EigenbasisJson) {
  auto r = run("eigenbasis -i " + fixture("random12_nonreversible.json"));
  ASSERT_EQ(r.status, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["pairs"].size(), 12u);
  EXPECT_LT(j["max_residual"].get<double>(), 1e-9);
}

TEST_F(CliTest, DumpOperators) {
  const fs::path ops = dir_ / "ops";
  ASSERT_EQ(run("spectrum -i " + fixture("c4_uniform.json") + " --dump-operators " + ops.string()).status, 0);
  for (const char* name : {"A", "B", "H_A", "H_B", "U", "T", "Lambda", "L"}) {
    EXPECT_TRUE(fs::exists(ops / (std::string(name) + ".json"))) << name;
  }
  auto U = json::parse(slurp(ops / "U.json"));
  ASSERT_TRUE(U.is_array());
  EXPECT_EQ(U.size(), 4u);
}

}  // namespace
}  // namespace stageig
