#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gadget_forge/cli.hpp"
#include "gadget_forge/conformance.hpp"

using namespace gadget_forge;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gf_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    example_ = write("example.o3s", "c example\np o3s 5 2\n1 2 3 0\n1 -4 5 0\n");
    unsat_ = write("unsat.o3s", "p o3s 1 1\n1 1 1 0\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::string example_, unsat_;
};

}  // namespace

TEST_F(CliTest, SolveExitCodes) {
  const Result sat = run_cli({"solve", example_});
  EXPECT_EQ(sat.code, 0);
  EXPECT_EQ(sat.out, "SAT 00100\n");
  const Result unsat = run_cli({"solve", unsat_});
  EXPECT_EQ(unsat.code, 1);
  EXPECT_EQ(unsat.out, "UNSAT\n");
}

TEST_F(CliTest, ErrorsExitTwoWithMessage) {
  const Result missing = run_cli({"solve", (dir_ / "nope.o3s").string()});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("cannot open"), std::string::npos);

  const Result bad = run_cli({"solve", write("bad.o3s", "p o3s 2 1\n1 2 0\n")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos);

  EXPECT_EQ(run_cli({"solve", example_, "--bogus"}).code, 2);
  EXPECT_EQ(run_cli({"reduce", example_, "--target", "z"}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"gen", "--n", "2", "--m", "1"}).code, 2);
  EXPECT_EQ(run_cli({"simulate", write("f.json", "{not json"), "--x0", "1"}).code, 2);
}

TEST_F(CliTest, Help) {
  const Result r = run_cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verify"), std::string::npos);
}

TEST_F(CliTest, GenEchoesSeedAndIsReproducible) {
  const Result a = run_cli({"gen", "--n", "6", "--m", "4", "--seed", "17"});
  const Result b = run_cli({"gen", "--n", "6", "--m", "4", "--seed", "17"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("c seed 17\n", 0), 0u);
  EXPECT_EQ(parse_instance(a.out), random_instance(6, 4, 17));
}

TEST_F(CliTest, ReduceIsByteStable) {
  const std::string out1 = (dir_ / "v1.json").string(), out2 = (dir_ / "v2.json").string();
  EXPECT_EQ(run_cli({"reduce", example_, "--target", "V", "--out", out1}).code, 0);
  EXPECT_EQ(run_cli({"reduce", example_, "--target", "V", "--out", out2}).code, 0);
  EXPECT_EQ(slurp(out1), slurp(out2));
  const Json j = Json::parse(slurp(out1));
  EXPECT_EQ(polynomial_from_json(j.at("potential")), build_V(parse_instance(slurp(example_))));
}

TEST_F(CliTest, ReduceEveryTarget) {
  const Instance inst = parse_instance(slurp(example_));
  const VectorField f = gradient_descent_field(build_V(inst));
  for (const char* t : {"t", "th", "V", "thm1", "a", "b", "c", "d", "e", "f", "g", "h", "i"}) {
    const Result r = run_cli({"reduce", example_, "--target", t});
    ASSERT_EQ(r.code, 0) << t << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j.at("target"), t);
  }
  EXPECT_EQ(field_from_json(Json::parse(run_cli({"reduce", example_, "--target", "e"}).out)),
            with_quartic_drift(f));
  EXPECT_EQ(field_from_json(Json::parse(run_cli({"reduce", example_, "--target", "i"}).out)), f);
  const Json h = Json::parse(run_cli({"reduce", example_, "--target", "h"}).out);
  EXPECT_EQ(h.at("polytope").at("kind"), "Polytope");
  const Json b = Json::parse(run_cli({"reduce", example_, "--target", "b"}).out);
  EXPECT_EQ(b.at("set").at("kind"), "SemialgebraicSet");
  EXPECT_EQ(field_from_json(b), neg_identity_field(6));
}

TEST_F(CliTest, SimulateWritesCsvAndOutcome) {
  const std::string field = (dir_ / "c.json").string();
  ASSERT_EQ(run_cli({"reduce", example_, "--target", "c", "--out", field}).code, 0);
  const std::string csv = (dir_ / "traj.csv").string();
  const Result r = run_cli({"simulate", field, "--x0", "0,0.5,0,0.5,0.5,0.5", "--tmax", "5",
                            "--out", csv});
  EXPECT_EQ(r.code, 0) << r.err;
  const std::string text = slurp(csv);
  EXPECT_EQ(text.rfind("t,x1,x2,x3,x4,x5,x6\n", 0), 0u);
  const Json outcome = Json::parse(slurp(csv + ".outcome.json"));
  EXPECT_EQ(outcome.at("outcome"), "Stationary");

  const Result to_stdout = run_cli({"simulate", field, "--x0", "0.1,0,0,0,0,0.1", "--tmax", "1"});
  EXPECT_EQ(to_stdout.code, 0);
  EXPECT_EQ(Json::parse(to_stdout.err).at("outcome"), "BoundedUndecided");

  EXPECT_EQ(run_cli({"simulate", field, "--x0", "1,2"}).code, 2);
  EXPECT_EQ(run_cli({"simulate", field, "--x0", "1,a,0,0,0,0"}).code, 2);
}

TEST_F(CliTest, VerifyAndReport) {
  const std::string suite = (dir_ / "suite.json").string();
  const Result r = run_cli({"verify", example_, "--part", "d", "--seed", "3", "--samples", "20",
                            "--out", suite});
  EXPECT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(slurp(suite));
  EXPECT_EQ(j.at("config").at("seed"), 3);
  ASSERT_EQ(j.at("parts").size(), 1u);
  EXPECT_EQ(j.at("parts")[0].at("observed"), "pass");
  EXPECT_EQ(j.at("fail_cells"), 0);

  const Result rep = run_cli({"report", suite});
  EXPECT_EQ(rep.code, 0);
  EXPECT_NE(rep.out.find("oracle: SAT"), std::string::npos);
  EXPECT_NE(rep.out.find("pass"), std::string::npos);
}

TEST_F(CliTest, VerifyExitCodeTracksFailCells) {
  Json suite = Json::parse(run_cli({"verify", unsat_, "--part", "g", "--samples", "10"}).out);
  EXPECT_EQ(suite.at("fail_cells"), 0);
  EXPECT_EQ(run_cli({"verify", unsat_, "--part", "g", "--samples", "10"}).code, 0);
  EXPECT_EQ(run_cli({"verify", unsat_, "--part", "q"}).code, 2);
}
