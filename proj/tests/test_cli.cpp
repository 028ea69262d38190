#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Result {
  int code;
  std::string out;
};

Result sh(const std::string& args, bool with_stderr = false) {
  const std::string cmd = std::string(PODFB_CLI) + " " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  while (auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const char* name) { return std::string(PODFB_DATA) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

} // namespace

TEST(Cli, FeedbackVcg) {
  const auto r = sh("feedback " + data("zvcg.json") + " --policy vcg --json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["discounts_micro"], (nlohmann::json{"0", "10000000", "10000000"}));
  EXPECT_EQ(j["raises_micro"], (nlohmann::json{"10000000", "0", "0"}));
  EXPECT_EQ(j["optimal_value_micro"], 20000000);
}

TEST(Cli, FeedbackCoreTable) {
  const auto r = sh("feedback " + data("zvcg.json") + " --policy core");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("a1  loser  discount 0.000000  raise 10.000000"), std::string::npos);
  EXPECT_NE(r.out.find("a2  winner  discount 5.000000  raise 0.000000"), std::string::npos);
  EXPECT_NE(r.out.find("optimal value: 20.000000"), std::string::npos);
}

TEST(Cli, MissingFileIsAnInputError) {
  const auto r = sh("feedback /nonexistent/instance.json", true);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("cannot read"), std::string::npos);
  EXPECT_EQ(sh("feedback " + data("zvcg.json") + " --policy nope").code, 2);
  EXPECT_EQ(sh("").code, 2);
  EXPECT_EQ(sh("simulate").code, 2);
}

TEST(Cli, SimulateZvcg) {
  auto j = nlohmann::json::parse(sh("simulate " + data("zvcg.json") + " --policy vcg --init values --epsilon 1").out);
  EXPECT_EQ(j["outcome"], "cycled");
  EXPECT_EQ(j["matched_round"], 2);
  j = nlohmann::json::parse(sh("simulate " + data("zvcg.json") + " --policy bicore --init values").out);
  EXPECT_EQ(j["outcome"], "converged");
  EXPECT_EQ(j["rounds"].size(), 2u);
}

TEST(Cli, SimulateWritesTraceAndCsv) {
  const std::string prefix = ::testing::TempDir() + "podfb_sim";
  const auto r = sh("simulate " + data("zvcg.json") + " --policy core --epsilon 1 --out " + prefix);
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("converged after 3 rounds"), std::string::npos);
  const auto csv = slurp(prefix + ".csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "round,agent,bid_micro,status");
  EXPECT_NE(csv.find("2,a2,5000001,winner"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(slurp(prefix + ".json"))["version"], 1);
}

TEST(Cli, SimulateIsDeterministic) {
  const std::string args = "simulate --params " + data("params.json") + " --index 5 --policy bicore --init random --seed 7";
  const auto a = sh(args);
  const auto b = sh(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, sh("simulate --params " + data("params.json") + " --index 5 --policy bicore --init random --seed 8").out);
}

TEST(Cli, BatchAndGenerate) {
  const auto a = sh("batch " + data("params.json") + " --instances 5 --policies core,bicore");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 7);
  EXPECT_EQ(a.out, sh("batch " + data("params.json") + " --instances 5 --policies core,bicore --jobs 3").out);
  EXPECT_EQ(sh("batch " + data("params.json") + " --policies core,nope").code, 2);

  const auto g = sh("generate " + data("params.json") + " --index 4");
  ASSERT_EQ(g.code, 0);
  EXPECT_EQ(nlohmann::json::parse(g.out)["agents"].size() >= 3, true);
  const auto many = nlohmann::json::parse(sh("generate " + data("params.json") + " --count 3").out);
  EXPECT_EQ(many.size(), 3u);
}

TEST(Cli, Verify) {
  const auto r = sh("verify --instances 8");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}
