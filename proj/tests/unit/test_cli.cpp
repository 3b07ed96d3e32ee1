#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mchcli/cli.hpp"

using std::numbers::pi;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mchlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = mch::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string without_timestamp(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::string kept;
  while (std::getline(in, line)) {
    if (line.rfind("# timestamp", 0) == 0) continue;
    kept += line + '\n';
  }
  return kept;
}

}  // namespace

TEST(ParseLength, AcceptsPiForms) {
  using mch::cli::parse_length;
  EXPECT_DOUBLE_EQ(parse_length("6pi"), 6 * pi);
  EXPECT_DOUBLE_EQ(parse_length("pi"), pi);
  EXPECT_DOUBLE_EQ(parse_length("2*pi"), 2 * pi);
  EXPECT_DOUBLE_EQ(parse_length("18.85"), 18.85);
  EXPECT_THROW(parse_length("six"), std::invalid_argument);
  EXPECT_THROW(parse_length(""), std::invalid_argument);
}

TEST(Cli, WaveJson) {
  const Invocation r = invoke({"wave", "--k", "0.5", "--L", "6pi"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["provenance"]["command"], "wave");
  EXPECT_TRUE(j["wave"].contains("c"));
}

TEST(Cli, WaveOutsideDomainExitsOne) {
  const Invocation r = invoke({"wave", "--k", "0.9", "--L", "3.14159"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("discriminant"), std::string::npos);
}

TEST(Cli, UnknownFlagIsUsageError) {
  EXPECT_EQ(invoke({"wave", "--bogus", "1"}).code, 64);
  EXPECT_EQ(invoke({"nosuch"}).code, 64);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(invoke({"--help"}).code, 0); }

TEST(Cli, ScanCsvAndSummary) {
  const Invocation r =
      invoke({"scan", "--k-min", "0.01", "--k-max", "0.2", "--L-min", "3pi", "--L-max", "6pi",
              "--nk", "3", "--nL", "3", "--threads", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("k,L,I,valid,dA_dk,dc_dk,dV_dk,dF_dk"), std::string::npos);
  EXPECT_NE(r.err.find("max I = "), std::string::npos);
}

TEST(Cli, ScanDeterministic) {
  const std::vector<std::string> args = {"scan", "--nk", "3", "--nL", "2", "--k-min", "0.05",
                                         "--k-max", "0.8", "--L-min", "6pi", "--L-max", "10pi"};
  const Invocation a = invoke(args);
  const Invocation b = invoke(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(without_timestamp(a.out), without_timestamp(b.out));
}

TEST(Cli, OutDirectoryReceivesArtifact) {
  const auto dir = std::filesystem::temp_directory_path() / "mchlab_cli_test";
  std::filesystem::remove_all(dir);
  const Invocation r = invoke({"wave", "--out", dir.string(), "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(dir / "wave.csv");
  ASSERT_TRUE(f.good());
  std::string first;
  std::getline(f, first);
  EXPECT_EQ(first.rfind("# tool", 0), 0u);
  std::filesystem::remove_all(dir);
}

TEST(Cli, ConstantSpectrum) {
  const Invocation r = invoke({"spectrum", "--constant", "--L", "2pi", "--n", "32"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["n_neg"], 1);
  EXPECT_EQ(j["z_dim"], 2);
}

TEST(Cli, CheckSingleCriterion) {
  const Invocation r = invoke({"check", "--only", "1"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.rfind("PASS [1]", 0), 0u) << r.out;
}
