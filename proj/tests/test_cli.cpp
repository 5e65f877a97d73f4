#include <gtest/gtest.h>

#include <cstdio>
#include <sstream>
#include <sys/wait.h>

#include "cli.hpp"

using commutant::cli::Json;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "commutant");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = commutant::cli::main_with_args(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

Json run_json(std::vector<std::string> args, int expect = 0) {
  const auto r = run(std::move(args));
  EXPECT_EQ(r.code, expect) << r.out;
  return Json::parse(r.out);
}

}  // namespace

TEST(Cli, ExponentReportsFraction) {
  const auto j = run_json({"exponent", "--N", "8", "--D", "6", "--L", "1"});
  EXPECT_EQ(j["rows"][0]["exponent"], "16/3");
  EXPECT_EQ(j["version"], commutant::kVersion);
  EXPECT_EQ(run_json({"exponent", "--N", "18", "--D", "12", "--L", "4/2"})["rows"][0]["exponent"], "21/2");
  EXPECT_EQ(run_json({"exponent", "--N", "9", "--D", "6", "--L", "1.5"})["rows"][0]["L"], "3/2");
}

TEST(Cli, FibreOverZeroIsCommutingCount) {
  const auto j = run_json({"fibre", "--n", "2", "--p", "3", "--M", "0"});
  EXPECT_EQ(j["rows"][0]["count"], 945);
  EXPECT_TRUE(j["checks"][0]["passed"]);
}

TEST(Cli, CountInteger) {
  const auto j = run_json({"count-integer", "--n", "2", "--T", "1"});
  EXPECT_EQ(j["rows"][0]["count"], 817);
  EXPECT_EQ(j["checks"][0]["status"], "exact");
  EXPECT_EQ(j["summary"]["upper_exponent"], "16/3");
}

TEST(Cli, EverySubcommandRuns) {
  const std::vector<std::vector<std::string>> cases{
      {"congruence", "--n", "2", "--T", "1", "--p", "2,3"},
      {"expsum", "--n", "2", "--p", "3", "--A", "0,1,0,0", "--B", "0,0,1,0"},
      {"lemma-exp", "--n", "2", "--p", "3"},
      {"classes", "--n", "2", "--p", "3"},
      {"sigma", "--n", "2", "--p", "3", "--M", "0,1,0,0"},
      {"lvm", "--n", "2", "--p", "3", "--V", "0,0,0,1", "--M", "0,1,0,0"},
      {"e-avg", "--n", "3", "--p", "3", "--M", "0,0,0,1,0,0,0,0,0"},
      {"aux-avg", "--n", "2", "--p", "3", "--M", "0,1,0,0"},
      {"main-lem", "--n", "2", "--p", "3"},
      {"kcomb", "--p", "5", "--x", "1,4,0,0"},
      {"poisson", "--n", "1", "--T", "2", "--p", "5", "--U", "0"},
      {"optimize-p", "--n", "2", "--T", "10"},
      {"strata-probe", "--n", "2", "--p", "2"}};
  for (const auto& c : cases) {
    const auto j = run_json(c);
    EXPECT_EQ(j["status"], "ok") << c[0];
    EXPECT_FALSE(j["rows"].empty()) << c[0];
    for (const auto& ch : j["checks"]) EXPECT_TRUE(ch["passed"]) << c[0] << " " << ch.dump();
  }
}

TEST(Cli, ValuesInReports) {
  EXPECT_EQ(run_json({"lvm", "--p", "3", "--V", "0,0,0,1", "--M", "0,1,0,0"})["rows"][0]["L"], "1/2");
  EXPECT_EQ(run_json({"optimize-p", "--n", "2", "--T", "10"})["rows"][0]["p"], 23);
  EXPECT_EQ(run_json({"expsum", "--p", "3", "--A", "0,1,0,0", "--B", "0,0,1,0"})["summary"]["integer_value"], -27);
  const auto k = run_json({"kcomb", "--p", "5", "--x", "1,4,0", "--k", "1"});
  EXPECT_EQ(k["rows"][0]["indices"], "0");
}

TEST(Cli, CsvFormat) {
  const auto r = run({"count-integer", "--n", "1", "--T", "1,2", "--format", "csv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# version: "), std::string::npos);
  EXPECT_NE(r.out.find("\nT,count,lower_bound,upper_curve,slope\n1,9,9,"), std::string::npos);
  EXPECT_NE(r.out.find("\n2,25,25,"), std::string::npos);
}

TEST(Cli, BudgetErrorExitsThree) {
  const auto j = run_json({"count-integer", "--n", "2", "--T", "3", "--budget", "100"}, 3);
  EXPECT_EQ(j["status"], "budget_error");
  EXPECT_EQ(j["errors"][0]["kind"], "budget");
  run_json({"classes", "--n", "4", "--p", "5"}, 3);
}

TEST(Cli, SampleModeNeedsSeed) {
  run_json({"lemma-exp", "--p", "3", "--mode", "sample"}, 1);
  run_json({"lemma-exp", "--p", "3", "--mode", "sample", "--seed", "1", "--samples", "50"});
}

TEST(Cli, ByteIdenticalAcrossThreadCounts) {
  for (const auto& c : std::vector<std::vector<std::string>>{
           {"lemma-exp", "--p", "5", "--mode", "sample", "--seed", "77", "--samples", "400"},
           {"count-integer", "--n", "2", "--T", "1,2"},
           {"main-lem", "--p", "3", "--format", "csv"}}) {
    auto a = c, b = c;
    a.insert(a.end(), {"--threads", "1"});
    b.insert(b.end(), {"--threads", "4"});
    EXPECT_EQ(run(a).out, run(b).out) << c[0];
  }
}

TEST(Cli, BinaryExitCodes) {
  auto status = [](const std::string& args) {
    const int s = std::system((std::string(COMMUTANT_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  EXPECT_EQ(status("exponent --N 8 --D 6 --L 1"), 0);
  EXPECT_EQ(status("count-integer --n 2 --T 3 --budget 10"), 3);
  EXPECT_NE(status("no-such-command"), 0);
}
