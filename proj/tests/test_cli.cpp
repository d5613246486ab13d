#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

using json = nlohmann::json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

/// Runs the tool with stderr folded into stdout.
Outcome run(const std::string& args) {
  const std::string cmd = std::string(CMGTOOL_PATH) + " " + args + " 2>&1";
  Outcome r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("cmgtool_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

const std::string two_points = R"({"n":2,"r":1,"lambda":[0,1],"alpha":[0,0],"vrow":[[1],[1]],"wcol":[[-1,-1]]})";

}  // namespace

TEST(Cli, TauSuitePasses) {
  const Outcome r = run("verify --suite tau");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("criterion 14: PASS"), std::string::npos) << r.out;
}

TEST(Cli, InjectedSignErrorFailsActionSuite) {
  const Outcome r = run("verify --suite action --inject gform-sign");
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("criterion  4: FAIL"), std::string::npos) << r.out;
}

TEST(Cli, VerifyIsDeterministicBySeed) {
  const std::string a = temp_file("rep_a.json", ""), b = temp_file("rep_b.json", "");
  run("verify --suite tau --suite lattice --seed 7 --json-out " + a);
  run("verify --suite tau --suite lattice --seed 7 --json-out " + b);
  json ja = json::parse(std::ifstream(a)), jb = json::parse(std::ifstream(b));
  // timings differ between runs
  auto strip = [](json& j) {
    for (auto& c : j["criteria"]) c.erase("seconds");
  };
  strip(ja);
  strip(jb);
  EXPECT_EQ(ja, jb);
}

TEST(Cli, MomentOfTwoPointExampleVanishes) {
  const Outcome r = run("point moment --point '" + two_points + "'");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(json::parse(r.out)["on_fiber"].get<bool>());
}

TEST(Cli, BispectralInvolutionTwiceIsIdentity) {
  const Outcome once = run("point b --point '" + two_points + "'");
  ASSERT_EQ(once.code, 0) << once.out;
  const Outcome twice = run("point b --point @" + temp_file("b1.json", once.out));
  ASSERT_EQ(twice.code, 0) << twice.out;
  const Outcome orig = run("point new --point '" + two_points + "'");
  EXPECT_EQ(json::parse(twice.out), json::parse(orig.out));
}

TEST(Cli, CanonicalizeRescaledPoint) {
  const std::string scaled = R"({"n":2,"r":1,"lambda":[1,0],"alpha":[0,0],"vrow":[[2],[1]],"wcol":[[[-1,2],-1]]})";
  const Outcome a = run("point canon --point '" + scaled + "'");
  const Outcome b = run("point canon --point '" + two_points + "'");
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(json::parse(a.out), json::parse(b.out));
}

TEST(Cli, BakerSinglePoint) {
  const std::string p = R"({"n":1,"r":1,"lambda":[0],"alpha":[0],"vrow":[[1]],"wcol":[[-1]]})";
  const Outcome ok = run("baker --point '" + p + "' --x 1");
  EXPECT_EQ(ok.code, 0) << ok.out;
  const Outcome outside = run("baker --point '" + p + "' --x 0");
  EXPECT_EQ(outside.code, 1);
  EXPECT_EQ(json::parse(outside.out)["error"], "OutsideBigCell");
}

TEST(Cli, TauValue) {
  const Outcome r = run("tau 1 0 1 0");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(json::parse(r.out)["tau"], json::array({"-11", "1", "0", "1"}));
}

TEST(Cli, MalformedInputIsParseError) {
  const Outcome r = run("point b --point '{bad'");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.out)["error"], "ParseError");
  EXPECT_EQ(run("no-such-command").code, 2);
}
