#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "fconc/field_io.hpp"

namespace fconc::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fconc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
    return path(name);
  }

  std::string sampled(const std::string& name, double lo, double hi, int n, double (*f)(double)) const {
    std::ostringstream ss;
    ss.precision(17);
    ss << "x,value\n";
    for (int i = 0; i < n; ++i) {
      const double x = lo + (hi - lo) * i / (n - 1);
      ss << x << "," << f(x) << "\n";
    }
    return write(name, ss.str());
  }

  fs::path dir_;
};

TEST_F(CliTest, CheckGaussianHalfLogPasses) {
  const std::string g = sampled("gauss.csv", -2, 2, 201, [](double x) { return std::exp(-x * x); });
  const Outcome r = run({"check", "--transform", "logpower:alpha=0.5", "--field", g});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_EQ(j["report"]["verdict"], "certified_on_samples");
}

TEST_F(CliTest, CheckViolationExitsOne) {
  // 1 + x^2 is not concave, so Phi_1 fails
  const std::string g = sampled("cup.csv", -1, 1, 41, [](double x) { return 1 + x * x; });
  const Outcome r = run({"check", "--transform", "power:p=1", "--field", g});
  EXPECT_EQ(r.code, kExitFail);
  EXPECT_FALSE(json::parse(r.out)["report"]["witnesses"].empty());
}

TEST_F(CliTest, MissingFieldIsUsageErrorNamingFile) {
  const Outcome r = run({"check", "--transform", "power:p=7", "--field", path("unknown.csv")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("unknown.csv"), std::string::npos) << r.err;
}

TEST_F(CliTest, BadInputsAreUsageErrors) {
  const std::string g = sampled("g.csv", -1, 1, 21, [](double x) { return std::exp(-x * x); });
  EXPECT_EQ(run({"check", "--transform", "power:q=1", "--field", g}).code, kExitUsage);
  EXPECT_EQ(run({"check", "--field", g}).code, kExitUsage);
  EXPECT_EQ(run({"check", "--transform", "power:p=0", "--field", g, "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"mean", "--transform", "power:p=0", "--a", "1", "--b", "2", "--mu", "2"}).code, kExitUsage);
  const std::string bad = write("bad.csv", "x,value\n0,1\n1,oops\n");
  const Outcome r = run({"check", "--transform", "power:p=0", "--field", bad});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("bad.csv"), std::string::npos) << r.err;
  EXPECT_EQ(run({"harness", "run", "T9.9"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
}

TEST_F(CliTest, MeanMatchesGeometricMean) {
  const Outcome r = run({"mean", "--transform", "power:p=0", "--a", "1", "--b", "4"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  EXPECT_NEAR(json::parse(r.out)["mean"].get<double>(), 2.0, 1e-14);
}

TEST_F(CliTest, ScreenRefutesPowerOne) {
  EXPECT_EQ(run({"screen", "--transform", "power:p=1"}).code, kExitFail);
  EXPECT_EQ(run({"screen", "--transform", "power:p=0"}).code, kExitPass);
}

TEST_F(CliTest, EvolveThenCheckRoundTrip) {
  const std::string box =
      sampled("box.csv", 0, 1, 101, [](double x) { return x >= 0.3 && x <= 0.7 ? 1.0 : 0.0; });
  const Outcome e = run({"evolve", "--field", box, "--dt", "1e-4", "--t", "0.01", "--t", "0.1", "--out", path("ev.csv")});
  ASSERT_EQ(e.code, kExitPass) << e.err;
  const std::string csv = path("ev_t=0.1.csv");
  const std::string side = path("ev_t=0.1.json");
  ASSERT_TRUE(fs::exists(path("ev_t=0.01.csv")));
  ASSERT_TRUE(fs::exists(csv));
  const json meta = json::parse(slurp(side));
  EXPECT_DOUBLE_EQ(meta["time"].get<double>(), 0.1);
  EXPECT_EQ(meta["domain"]["kind"], "interval");

  // the sidecar serves as the domain, and re-emitting the field is lossless
  const Outcome c = run({"check", "--transform", "logpower:alpha=0.5", "--field", csv, "--domain", side, "--value-floor",
                     "1e-10", "--out", path("check.json")});
  EXPECT_EQ(c.code, kExitPass) << c.err;
  EXPECT_EQ(json::parse(slurp(path("check.json")))["field"], csv);

  std::ifstream in(csv, std::ios::binary);
  EXPECT_EQ(field_to_csv(read_field_csv(in, std::nullopt, csv)), slurp(csv));

  const Outcome e2 = run({"evolve", "--field", csv, "--domain", side, "--dt", "1e-4", "--t", "0.2", "--out", path("again.csv")});
  ASSERT_EQ(e2.code, kExitPass) << e2.err;
  const Outcome e3 = run({"evolve", "--field", csv, "--domain", side, "--dt", "1e-4", "--t", "0.2", "--out", path("again2.csv")});
  ASSERT_EQ(e3.code, kExitPass);
  EXPECT_EQ(slurp(path("again.csv")), slurp(path("again2.csv")));
  for (const auto& entry : fs::directory_iterator(dir_))
    EXPECT_EQ(entry.path().string().find(".tmp."), std::string::npos) << entry.path();
}

TEST_F(CliTest, EigenOnInterval) {
  const Outcome r = run({"eigen", "--domain", R"({"kind":"interval","lo":0,"hi":1,"h":0.005})", "--transform",
                     "logpower:alpha=0.5", "--value-floor", "1e-12", "--out", path("phi.csv")});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["eigenvalue"].get<double>(), M_PI * M_PI, 0.005 * M_PI * M_PI);
  EXPECT_TRUE(fs::exists(path("phi.csv")));
  EXPECT_TRUE(fs::exists(path("phi.json")));
}

TEST_F(CliTest, HarnessListAndRun) {
  const Outcome l = run({"harness", "list"});
  ASSERT_EQ(l.code, kExitPass);
  EXPECT_EQ(json::parse(l.out).size(), 14u);

  const Outcome r = run({"harness", "run", "L4.1", "--transform", "power:p=1"});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_EQ(rep["experiment_id"], "L4.1");
  EXPECT_EQ(rep["verdict"], "pass");
  EXPECT_EQ(rep["config_echo"]["transforms"], json::array({"power:p=1"}));

  // flags that an experiment has no use for are rejected, not ignored
  EXPECT_EQ(run({"harness", "run", "S42-limit", "--transform", "power:p=0"}).code, kExitUsage);
  EXPECT_EQ(run({"harness", "run", "CONJ5", "--out", path("c.json")}).code, kExitPass);
  EXPECT_EQ(json::parse(slurp(path("c.json")))["verdict"], "report_only");
}

TEST_F(CliTest, HarnessConfigMergesBeforeFlags) {
  const std::string cfg = write("cfg.json", R"({"k": [1], "tolerance": 1e-6})");
  const Outcome r = run({"harness", "run", "L4.1", "--config", cfg, "--tolerance", "1e-8", "--seed", "5"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_EQ(rep["config_echo"]["k"], json::array({1.0}));
  EXPECT_EQ(rep["config_echo"]["tolerance"], 1e-8);
  EXPECT_EQ(rep["seed"], 5);

  const std::string unknown = write("unk.json", R"({"kk": [1]})");
  const Outcome u = run({"harness", "run", "L4.1", "--config", unknown});
  EXPECT_EQ(u.code, kExitUsage);
  EXPECT_NE(u.err.find("kk"), std::string::npos) << u.err;

  const std::string flags = write("flags.json", R"({"transform": "power:p=0", "a": 1, "b": 9})");
  const Outcome m = run({"mean", "--config", flags, "--b", "4"});
  ASSERT_EQ(m.code, kExitPass) << m.err;
  EXPECT_NEAR(json::parse(m.out)["mean"].get<double>(), 2.0, 1e-14);
  EXPECT_EQ(run({"mean", "--config", write("x.json", R"({"field": "a.csv"})")}).code, kExitUsage);
}

TEST_F(CliTest, HarnessGridSpacingOverride) {
  const Outcome r = run({"harness", "run", "P4.2", "--h", "0.005", "--t", "0.01", "--t", "0.1"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const json echo = json::parse(r.out)["config_echo"];
  EXPECT_EQ(echo["domain"]["h"], 0.005);
  EXPECT_EQ(echo["t"].size(), 2u);
}

TEST_F(CliTest, AuditPowerTransform) {
  const Outcome r = run({"audit", "--transform", "power:p=0.5", "--samples", "200"});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  EXPECT_EQ(json::parse(r.out)["n_samples"], 200);
}

}  // namespace
}  // namespace fconc::cli
