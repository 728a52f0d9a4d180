// Drives the huygens executable end to end.

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli_runner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using cli::run;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("huygens_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string read(const std::string& name) {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  std::string path(const std::string& name) { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, CapacityDefaults) {
  const auto r = run("capacity");
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["causal_class"], "B5_StrictTimelike");
  EXPECT_EQ(j["method"], "ClosedForm");
  EXPECT_GT(j["C"].get<double>(), 0.0);
  for (const char* key : {"I_delta", "I_theta", "S2", "err_est", "warnings"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST_F(CliTest, CapacitySpacelike) {
  const auto cfg = write("b1.cfg", "separation.value = 0.9\n");
  const auto r = run("capacity --config " + cfg);
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["causal_class"], "B1_Spacelike");
  EXPECT_EQ(j["C"].get<double>(), 0.0);
}

TEST_F(CliTest, MalformedConfigExitsTwo) {
  const auto cfg = write("bad.cfg", "cosmology = matter\nalice.omega = fast\n");
  const auto r = run("capacity --config " + cfg, true);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("line 2"), std::string::npos) << r.out;
  EXPECT_EQ(run("capacity --config " + path("missing.cfg")).status, 2);
  EXPECT_EQ(run("capacity --bogus-flag").status, 2);
}

TEST_F(CliTest, CapacityCsvMatchesSinglePointSweep) {
  const auto cfg = write("one.cfg",
                         "cosmology = matter\nsweep.variable = T_iB\nsweep.min = 2\n"
                         "sweep.max = 2\nsweep.points = 1\n");
  const auto sweep = run("sweep --config " + cfg);
  const auto cap = run("capacity --format csv --config " + cfg);
  ASSERT_EQ(sweep.status, 0);
  ASSERT_EQ(cap.status, 0);
  // Identical apart from the sweep_value column.
  auto body = [](const std::string& s) {
    const auto last = s.substr(s.rfind('\n', s.size() - 2) + 1);
    return last.substr(last.find(','));
  };
  EXPECT_EQ(body(sweep.out), body(cap.out));
}

TEST_F(CliTest, TimingRecord) {
  const auto r = run("timing");
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  const double mr = j["matter"]["T_min_comoving"], lr = j["lambda"]["T_min_comoving"];
  const double mp = j["matter"]["T_min_proper"], lp = j["lambda"]["T_min_proper"];
  EXPECT_NEAR(mr, 1.3177, 1e-3);
  EXPECT_NEAR(lr, 1.3799, 1e-3);
  EXPECT_NEAR(mp, 1.1050, 1e-3);
  EXPECT_NEAR(lp, 1.08213, 1e-4);
  EXPECT_LT(mp, mr);
  EXPECT_LT(lp, lr);
  EXPECT_EQ(j["samples"]["t"].size(), j["samples"]["a_lambda"].size());
}

TEST_F(CliTest, TimingUnreachableIsNull) {
  const auto cfg = write("far.cfg", "separation.value = 1.5\n");
  const auto r = run("timing --config " + cfg);
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["lambda"]["T_min_comoving"].is_null());
  EXPECT_TRUE(j["lambda"]["unreachable"].contains("T_min_comoving"));
  EXPECT_FALSE(j["matter"]["T_min_comoving"].is_null());
}

TEST_F(CliTest, SweepDeterministicAcrossThreads) {
  const auto cfg = write("sweep.cfg",
                         "cosmology = matter\nsweep.variable = T_iB\nsweep.min = 1\n"
                         "sweep.max = 10\nsweep.points = 120\n");
  ASSERT_EQ(run("sweep --config " + cfg + " --out " + path("t1a.csv"), false, "HUYGENS_THREADS=1").status, 0);
  ASSERT_EQ(run("sweep --config " + cfg + " --out " + path("t1b.csv"), false, "HUYGENS_THREADS=1").status, 0);
  ASSERT_EQ(run("sweep --config " + cfg + " --out " + path("t8.csv"), false, "HUYGENS_THREADS=8").status, 0);
  const auto a = read("t1a.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, read("t1b.csv"));
  EXPECT_EQ(a, read("t8.csv"));
}

TEST_F(CliTest, SweepJson) {
  const auto cfg = write("sweep.cfg", "sweep.variable = R\nsweep.min = 0.1\nsweep.max = 0.9\nsweep.points = 5\n");
  const auto r = run("sweep --format json --config " + cfg);
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["rows"].size(), 5u);
  EXPECT_EQ(j["rows"][4]["causal_class"], "B1_Spacelike");
}

TEST_F(CliTest, SweepWithoutSpecIsConfigError) {
  EXPECT_EQ(run("sweep").status, 2);
}

TEST_F(CliTest, VerifyFast) {
  const auto r = run("verify --fast", true);
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("closed_form_grid"), std::string::npos);
  EXPECT_NE(r.out.find("[SKIP] commutator_reconstruction"), std::string::npos);
}

TEST_F(CliTest, VerifyInjectedFaultFails) {
  const auto r = run("verify --fast --inject-prefactor 81", true);
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("check failed: capacity_prefactor"), std::string::npos) << r.out;
}
