#include "app.hpp"
#include "commands.hpp"
#include "config.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace wavemap;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content = "") {
  const auto path = (std::filesystem::temp_directory_path() / name).string();
  if (!content.empty()) std::ofstream(path) << content;
  return path;
}

json error_of(const Result& r) {
  const auto line = r.err.substr(0, r.err.find('\n'));
  return json::parse(line);
}

}  // namespace

TEST(Cli, EmitConfigShowsDefaults) {
  const auto r = run({"--emit-config", "spectrum"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["command"], "spectrum");
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["grid"]["size"], 2048);
  EXPECT_EQ(j["tolerances"]["ode_rel"], 1e-12);
  // the emitted configuration is accepted back
  const auto path = temp_file("wavemap_cli_emitted.json", r.out);
  const auto again = run({"--config", path, "--emit-config"});
  EXPECT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(again.out, r.out);
}

TEST(Cli, FlagsOverrideConfig) {
  const auto path = temp_file("wavemap_cli_prec.json", R"({"command": "spectrum", "n": 2, "tolerances": {"ode_rel": 1e-10}})");
  const auto r = run({"--config", path, "--emit-config", "spectrum", "--n", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["n"], 3);
  EXPECT_EQ(j["tolerances"]["ode_rel"], 1e-10);
  EXPECT_EQ(j["tolerances"]["ode_abs"], 1e-14);
}

TEST(Cli, UnknownKeysRejected) {
  for (const char* text : {R"({"command": "spectrum", "nn": 2})", R"({"grid": {"size": 512, "sise": 3}})",
                           R"({"tolerances": {"ode_rel": "tight"}})", R"({"schema_version": 7})", "[1]"}) {
    const auto path = temp_file("wavemap_cli_strict.json", text);
    const auto r = run({"--config", path, "spectrum"});
    EXPECT_EQ(r.code, 2) << text;
    EXPECT_EQ(error_of(r)["kind"], "error") << text;
    EXPECT_TRUE(r.out.empty());
  }
}

TEST(Cli, InvalidValuesExitTwo) {
  for (std::vector<std::string> args : {std::vector<std::string>{"spectrum", "--n", "-1"},
                                        {"spectrum", "--ell", "0"},
                                        {"evolve", "--grid", "64"},
                                        {"spectrum", "--format", "xml"},
                                        {"spectrum", "--bogus"},
                                        {"frobnicate"},
                                        {}}) {
    const auto r = run(args);
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(error_of(r)["error"], "invalid_argument");
  }
}

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verify-table1"), std::string::npos);
}

TEST(Cli, MissingProfileFileIsAnIoFailure) {
  const auto r = run({"spectrum", "--n", "1", "--profile", "/nonexistent/profile.json"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(error_of(r)["error"], "io");
}

TEST(Cli, ProfileFeedsSpectrum) {
  const auto path = temp_file("wavemap_cli_profile.json");
  const auto p = run({"profile", "--n", "1", "-o", path});
  ASSERT_EQ(p.code, 0) << p.err;
  const auto s = run({"spectrum", "--n", "1", "--profile", path, "--mu-max", "100"});
  ASSERT_EQ(s.code, 0) << s.err;
  const json j = json::parse(s.out);
  ASSERT_EQ(j["records"].size(), 1u);
  EXPECT_NEAR(j["records"][0]["mu"].get<double>(), 5.333625, 5e-7);
  std::filesystem::remove(path);
}

TEST(Cli, InftySpectrumIsDeterministic) {
  const auto a = run({"spectrum-infty", "--count", "2", "--format", "csv"});
  const auto b = run({"spectrum-infty", "--count", "2", "--format", "csv"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "n,ell,j,lambda,mu,residual");
  EXPECT_NE(a.out.find("inf,1,2,"), std::string::npos);
}

TEST(Cli, EvolveRandomData) {
  const std::vector<std::string> args{"evolve", "--n", "0", "--seed", "random", "--grid", "256",
                                      "--sigma-max", "0.5", "--format", "csv"};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "sigma,h_norm,energy,rate");
  auto other = args;
  other.insert(other.end(), {"--random-seed", "2"});
  EXPECT_NE(run(other).out, a.out);
}

TEST(Cli, PrintedDigits) {
  EXPECT_DOUBLE_EQ(cli::half_unit("5.333625"), 5e-7);
  EXPECT_DOUBLE_EQ(cli::half_unit("625"), 0.5);
  EXPECT_DOUBLE_EQ(cli::half_unit("57.6"), 0.05);
  EXPECT_EQ(cli::round_like(624.4206, "625"), "624");
  EXPECT_EQ(cli::round_like(5.30412, "5.304"), "5.304");
  EXPECT_EQ(cli::printed_table1().size(), 12u);
}

TEST(Cli, CommandNames) {
  for (auto c : {cli::Command::profile, cli::Command::spectrum, cli::Command::spectrum_infty, cli::Command::evolve,
                 cli::Command::verify_table1}) {
    EXPECT_EQ(cli::command_from_string(cli::to_string(c)), c);
  }
  EXPECT_THROW(cli::command_from_string("nope"), InvalidArgument);
}
