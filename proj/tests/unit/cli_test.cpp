#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polytheta_cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "polytheta");
  args.push_back("--catalog");
  args.push_back(POLYTHETA_TEST_CATALOG_DIR);
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = polytheta::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, ExpandPrintsCoefficients) {
  auto r = run({"expand", "phi(q)^2", "--order", "6"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("5:8"), std::string::npos) << r.out;
}

TEST(Cli, ParseErrorIsUsage) {
  auto r = run({"expand", "phi(q) * psy(q)"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("^^^"), std::string::npos) << r.err;
}

TEST(Cli, UniversalVerdicts) {
  EXPECT_EQ(run({"universal", "p3 + p3 + p3", "--bound", "5000"}).code, 0);
  auto r = run({"universal", "2p4 + 2p4 + 2p4 + 2p4", "--bound", "1000"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("1"), std::string::npos);
}

TEST(Cli, EquivWitness) {
  auto r = run({"equiv", "p3", "p4", "--bound", "100"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("3"), std::string::npos) << r.out;
  EXPECT_EQ(run({"equiv", "p3", "p6", "--bound", "2000"}).code, 0);
}

TEST(Cli, VerifyKeysAndUnknownKey) {
  EXPECT_EQ(run({"verify", "Q1", "Q2", "--order", "300", "--bound", "2000"}).code, 0);
  EXPECT_EQ(run({"verify", "no-such-key"}).code, 2);
}

TEST(Cli, ReportFormatIsJson) {
  auto r = run({"--format", "report", "universal", "p5 + p5 + p5", "--bound", "500"});
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], "polytheta-report/1");
  EXPECT_EQ(j["config"]["bound"], 500);
  ASSERT_FALSE(j["records"].empty());
  EXPECT_TRUE(j["records"][0].contains("status"));

  auto batch = run({"--format", "report", "run", "--kind", "identity", "--order", "200"});
  EXPECT_EQ(batch.code, 0) << batch.err;
  auto b = nlohmann::json::parse(batch.out);
  EXPECT_EQ(b["records"].size(), 13u);
  EXPECT_TRUE(b.contains("summary"));
}

TEST(Cli, ReproduceRejectsUnknownTheorem) {
  EXPECT_EQ(run({"reproduce", "thm9.9"}).code, 2);
}

TEST(Cli, BadOptionsAreUsage) {
  EXPECT_EQ(run({"expand", "phi(q)", "--order", "1"}).code, 2);
  EXPECT_EQ(run({"--format", "xml", "expand", "phi(q)"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}
