#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rlab/json_io.hpp"
#include "rlab_cli/cli.hpp"

using namespace rlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
};

bool has_code(const std::string& err, const std::string& code) {
  return err.rfind("error: code=" + code + " message=\"", 0) == 0 && err.back() == '\n';
}

}  // namespace

TEST_F(CliTest, RearrangeFixture) {
  const auto in = write("in.json", R"({"space":{"weights":["0.2","0.3","0.5"]},"functions":{"f":["3","-1","2"]}})");
  const auto r = run({"rearrange", "--input", in});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const Json j = parse_json(r.out);
  EXPECT_EQ(j["segments"], parse_json(R"([["3","0.2"],["2","0.5"],["1","0.3"]])"));
  EXPECT_EQ(r.out, dump_canonical(j));
}

TEST_F(CliTest, DecomposeRoundTrip) {
  const auto in = write("g.json", R"({"space":{"weights":["1/4","1/4","1/4","1/4"]},"functions":{"g":["3","1","-2","-2"]}})");
  const auto r = run({"decompose", "--input", in});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto d = decomposition_from_json(parse_json(r.out), DiscreteSpace<Rational>::uniform(4));
  ASSERT_EQ(d.blocks.size(), 2u);
  EXPECT_EQ(d.blocks[1].a, Rational(2));
}

TEST_F(CliTest, DecomposeRejectsNonZeroMean) {
  const auto in = write("g.json", R"({"space":{"weights":["0.5","0.5"]},"functions":{"g":["1","0"]}})");
  const auto r = run({"decompose", "--input", in});
  EXPECT_EQ(r.code, cli::kPreconditionError);
  EXPECT_TRUE(has_code(r.err, "not_zero_mean")) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, InvalidSpaceAndMissingFunction) {
  const auto bad = write("bad.json", R"({"space":{"weights":["0.5","0.4"]},"functions":{"f":["1","0"]}})");
  const auto r = run({"rearrange", "--input", bad});
  EXPECT_EQ(r.code, cli::kPreconditionError);
  EXPECT_TRUE(has_code(r.err, "invalid_space")) << r.err;

  const auto ok = write("ok.json", R"({"space":{"weights":["0.5","0.5"]},"functions":{"f":["1","0"]}})");
  const auto m = run({"rearrange", "--input", ok, "--function", "q"});
  EXPECT_EQ(m.code, cli::kUsageError);
  EXPECT_TRUE(has_code(m.err, "invalid_input")) << m.err;

  const auto missing = run({"rearrange", "--input", path("nope.json")});
  EXPECT_EQ(missing.code, cli::kUsageError);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsageError);
  const auto r = run({"verify", "--suite", "thm99"});
  EXPECT_EQ(r.code, cli::kUsageError);
  EXPECT_TRUE(has_code(r.err, "invalid_flag")) << r.err;
  EXPECT_EQ(run({"verify", "--suite", "thm32", "--bogus"}).code, cli::kUsageError);
  EXPECT_EQ(run({"verify", "--suite", "thm41", "--exponents", "1,2,2,3,2", "--mode", "float"}).code, cli::kUsageError);
  const auto inexact = run({"verify", "--suite", "thm41", "--exponents", "1,2,2,2,2", "--mode", "exact", "--trials", "5"});
  EXPECT_EQ(inexact.code, cli::kUsageError);
  EXPECT_TRUE(has_code(inexact.err, "inexact_operation")) << inexact.err;
}

TEST_F(CliTest, PreconditionErrors) {
  const auto r = run({"verify", "--suite", "thm43", "--weights", "random", "--trials", "5"});
  EXPECT_EQ(r.code, cli::kPreconditionError);
  EXPECT_TRUE(has_code(r.err, "non_equal_atom_space")) << r.err;
  const auto l = run({"landscape", "--target", "thm41", "--atoms", "3"});
  EXPECT_EQ(l.code, cli::kPreconditionError);
  EXPECT_TRUE(has_code(l.err, "too_many_free_parameters")) << l.err;
}

TEST_F(CliTest, VerifyReportAndOutFile) {
  const auto r = run({"verify", "--suite", "thm32", "--trials", "1000", "--atoms", "4", "--seed", "7", "--mode", "exact"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const Json j = parse_json(r.out);
  EXPECT_EQ(j["suite"], "thm32");
  EXPECT_TRUE(j["violations"].empty());
  EXPECT_GE(parse_rational(j["min_gap"].get<std::string>()), Rational(0));

  const auto file = path("report.json");
  const auto w = run({"verify", "--suite", "thm32", "--trials", "1000", "--atoms", "4", "--seed", "7", "--mode", "exact",
                      "--out", file, "--threads", "2"});
  ASSERT_EQ(w.code, cli::kOk) << w.err;
  EXPECT_EQ(slurp(file), r.out);
}

TEST_F(CliTest, VerifyAtomRange) {
  const auto r = run({"verify", "--suite", "rearrange", "--trials", "50", "--atoms", "3..5", "--mode", "float"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const Json j = parse_json(r.out);
  EXPECT_EQ(j["config"]["atoms_min"], 3);
  EXPECT_EQ(j["config"]["atoms_max"], 5);
  EXPECT_EQ(run({"verify", "--suite", "rearrange", "--atoms", "5..3"}).code, cli::kUsageError);
}

TEST_F(CliTest, VerifyWithNormFile) {
  const auto norm = write("norm.json", R"({"kind":"lorentz","phi":[["0","0"],["1/4","1/2"],["1","1"]]})");
  const auto r = run({"verify", "--suite", "thm43", "--trials", "200", "--norm", "@" + norm, "--mode", "exact"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_EQ(parse_json(r.out)["config"]["norm"]["kind"], "lorentz");
  const auto bad = run({"verify", "--suite", "thm43", "--norm", "{\"kind\":\"weird\"}"});
  EXPECT_EQ(bad.code, cli::kUsageError);
}

TEST_F(CliTest, SearchAndLandscape) {
  const auto s = run({"search", "--target", "thm32-ratio", "--atoms", "2", "--iters", "500", "--seed", "1"});
  ASSERT_EQ(s.code, cli::kOk) << s.err;
  const Json j = parse_json(s.out);
  EXPECT_GE(std::stod(j["best_ratio"].get<std::string>()), 1 - 1e-6);

  const auto l = run({"landscape", "--target", "thm41", "--grid", "11"});
  ASSERT_EQ(l.code, cli::kOk) << l.err;
  EXPECT_EQ(l.out.rfind("param1,param2,lhs,rhs,ratio\n", 0), 0u);
  EXPECT_EQ(std::count(l.out.begin(), l.out.end(), '\n'), 12);
}

TEST_F(CliTest, OutputIsByteStable) {
  const std::vector<std::string> args{"search", "--target", "thm43", "--atoms", "3", "--iters", "100", "--restarts", "2"};
  EXPECT_EQ(run(args).out, run(args).out);
  std::vector<std::string> threaded = args;
  threaded.insert(threaded.end(), {"--threads", "2"});
  EXPECT_EQ(run(threaded).out, run(args).out);
}

TEST_F(CliTest, HelpExitsCleanly) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("verify"), std::string::npos);
}
