#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cremona/algebra/text.hpp"
#include "cremona/cli/app.hpp"

using namespace cremona;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "cremona");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string model_path(const std::string& name) { return std::string(CREMONA_SOURCE_DIR) + "/models/" + name; }

const std::vector<std::string> kWp{"--system", "wp", "--param", "a=1/2"};
const std::vector<std::string> kJacobi{"--system", "jacobi", "--param", "k=1/5", "--x0", "0,1,1"};

std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST(Cli, IntegrateWpAcrossPoles) {
  auto r = run(cat({"integrate"}, cat(kWp, {"--x0", "1,2", "--dt", "0.01", "--steps", "1200", "--mode", "float"})));
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 1202u);
  EXPECT_EQ(rows[0], "step,t,x,y");
  for (std::size_t k = 1; k < rows.size(); ++k) {
    auto cells = cli::detail::split(rows[k], ',');
    ASSERT_EQ(cells.size(), 4u);
    EXPECT_TRUE(std::isfinite(std::stod(cells[2])) && std::isfinite(std::stod(cells[3]))) << rows[k];
  }
}

TEST(Cli, IntegrateZeroSteps) {
  auto r = run(cat({"integrate"}, cat(kWp, {"--x0", "1,2", "--dt", "0.01", "--steps", "0"})));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "step,t,x,y\n0,0,1,2\n");
}

TEST(Cli, ExactRunReversesToInput) {
  auto fwd = run(cat({"integrate"}, cat(kWp, {"--x0", "1,2", "--dt", "1/100", "--steps", "4", "--mode", "exact"})));
  ASSERT_EQ(fwd.code, 0) << fwd.err;
  auto last = cli::detail::split(lines(fwd.out).back(), ',');
  auto back = run(cat({"integrate"}, cat(kWp, {"--x0", last[2] + "," + last[3], "--dt", "-1/100", "--steps", "4",
                                                "--mode", "exact"})));
  ASSERT_EQ(back.code, 0) << back.err;
  auto end = cli::detail::split(lines(back.out).back(), ',');
  EXPECT_EQ(end[2], "1");
  EXPECT_EQ(end[3], "2");
}

TEST(Cli, ExactRunStopsOnExceptionalLocus) {
  // x' = x^2 from x = 1 with dt = 1 divides by 1 - dt*x = 0
  auto r = run({"integrate", "--system", "riccati", "--x0", "1", "--dt", "1", "--steps", "3", "--mode", "exact"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(lines(r.out).size(), 2u);
  EXPECT_NE(r.err.find("exceptional-locus"), std::string::npos);
}

TEST(Cli, FindStepsWpPeriodFive) {
  auto r = run(cat({"find-steps"}, cat(kWp, {"--x0", "1,2", "--n", "5"})));
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["roots"].size(), 1u);
  EXPECT_NEAR(j["roots"][0]["value"].get<double>(), 6.908, 0.002);
  EXPECT_EQ(j["roots"][0]["minimal_period"], 5);
  EXPECT_TRUE(j["roots"][0]["verified"].get<bool>());
  const auto lo = algebra::parse_rational(j["roots"][0]["lo"].get<std::string>());
  const auto hi = algebra::parse_rational(j["roots"][0]["hi"].get<std::string>());
  EXPECT_LE(hi - lo, algebra::Rational(1, 10000));
}

TEST(Cli, FindStepsPeriodTwoIsEmpty) {
  auto r = run(cat({"find-steps"}, cat(kWp, {"--x0", "1,2", "--n", "2"})));
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(r.out)["roots"].empty());
}

TEST(Cli, FindStepsJacobi) {
  auto r = run(cat({"find-steps"}, cat(kJacobi, {"--n", "4"})));
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["roots"].size(), 1u);
  EXPECT_NEAR(j["roots"][0]["value"].get<double>(), 2.041, 0.02);
}

TEST(Cli, FindStepsTableCsv) {
  auto r = run(cat({"find-steps"}, cat(kWp, {"--x0", "1,2", "--n", "2..10", "--range", "0,10", "--format", "csv"})));
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string want =
      "n,steps,minimal_periods\n"
      "2,,\n3,,\n4,1.074,4\n5,6.908,5\n6,,\n7,0.556 5.870 7.759,7 7 7\n8,0.535 1.074 6.843,8 4 8\n"
      "9,0.504 9.187,9 9\n10,0.471 0.559 6.777 6.908,10 10 10 5\n";
  EXPECT_EQ(r.out, want);
}

TEST(Cli, EquiperiodicFiveParsesBack) {
  auto r = run(cat({"equiperiodic"}, cat(kWp, {"--n", "5"})));
  ASSERT_EQ(r.code, 0) << r.err;
  auto l = lines(r.out);
  ASSERT_EQ(l.size(), 1u);
  ASSERT_EQ(l[0].rfind("F5 = ", 0), 0u);
  auto map = scheme::build_map(scheme::polarize(model::builtin_system("wp")));
  auto f = algebra::parse_poly(l[0].substr(5), map.table());
  EXPECT_EQ(f, equiperiodic::equiperiodic_polynomial(map, 5).F);
}

TEST(Cli, DegreeTable) {
  auto r = run(cat({"equiperiodic"}, cat(kWp, {"--n", "4..10", "--degrees-only"})));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "n,degree\n4,0\n5,3\n6,3\n7,6\n8,6\n9,9\n10,12\n");
}

TEST(Cli, CurveSamples) {
  auto args = cat({"equiperiodic"}, cat(kWp, {"--n", "5", "--sample", "--fix-dt", "1", "--box", "-3,3,-3,3"}));
  auto r = run(args);
  ASSERT_EQ(r.code, 0) << r.err;
  auto l = lines(r.out);
  EXPECT_EQ(l[0], "x,y");
  EXPECT_GT(l.size(), 100u);
  auto threaded = run(cat(args, {"--threads", "4"}));
  EXPECT_EQ(threaded.out, r.out);
}

TEST(Cli, EmptyCurveIsReported) {
  auto r = run(cat({"equiperiodic"}, cat(kWp, {"--n", "4", "--sample", "--fix-dt", "1"})));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("EmptyCurve"), std::string::npos);
}

TEST(Cli, TransitionTableWithLimit) {
  auto r = run(cat({"transition-table"}, cat(kJacobi, {"--n", "3..9", "--with-limit", "--threads", "3"})));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "n,n_dt_min\n3,10.827\n4,8.164\n5,7.379\n6,7.022\n7,6.827\n8,6.706\n9,6.627\ninf,6.347\n");
}

TEST(Cli, TransitionRowsAgreeWithFindSteps) {
  auto table = lines(run(cat({"transition-table"}, cat(kJacobi, {"--n", "3..6"}))).out);
  auto found = nlohmann::json::parse(run(cat({"find-steps"}, cat(kJacobi, {"--n", "3..6"}))).out);
  ASSERT_EQ(table.size(), 5u);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& f = found[i];
    const double product = f["n"].get<double>() * f["roots"][0]["value"].get<double>();
    EXPECT_EQ(table[i + 1], std::to_string(f["n"].get<int>()) + "," + cli::detail::fixed3(product));
  }
}

TEST(Cli, VerifyPeriod) {
  auto ok = run(cat({"verify-period"}, cat(kWp, {"--x0", "1,2", "--n", "5", "--near", "6.9", "--exact-check"})));
  ASSERT_EQ(ok.code, 0) << ok.err;
  auto j = nlohmann::json::parse(ok.out);
  EXPECT_EQ(j["exact_check"], "passed");
  EXPECT_LT(j["residual"].get<double>(), 1e-6);
  auto bad = run(cat({"verify-period"}, cat(kWp, {"--x0", "1,2", "--n", "5", "--dt", "6.8"})));
  EXPECT_EQ(bad.code, 3);
  EXPECT_FALSE(nlohmann::json::parse(bad.out)["passed"].get<bool>());
}

TEST(Cli, ModelFileMatchesBuiltin) {
  auto a = run({"find-steps", "--model-file", model_path("wp.model"), "--x0", "1,2", "--n", "7", "--format", "csv"});
  auto b = run(cat({"find-steps"}, cat(kWp, {"--x0", "1,2", "--n", "7", "--format", "csv"})));
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto m = run({"print-map", "--model-file", model_path("lotka_volterra.model")});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_EQ(lines(m.out).size(), 2u);
}

TEST(Cli, OutputFileAndDeterminism) {
  const auto path = std::filesystem::temp_directory_path() / "cremona_cli_test.json";
  auto args = cat({"find-steps"}, cat(kWp, {"--x0", "1,2", "--n", "7..8"}));
  auto direct = run(args);
  auto threaded = run(cat(args, {"--threads", "4"}));
  EXPECT_EQ(direct.out, threaded.out);
  auto filed = run(cat(args, {"--out", path.string()}));
  ASSERT_EQ(filed.code, 0);
  EXPECT_TRUE(filed.out.empty());
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), direct.out);
  std::filesystem::remove(path);
}

TEST(Cli, PrintMapRoundTrips) {
  auto r = run({"print-map", "--system", "jacobi"});
  ASSERT_EQ(r.code, 0);
  auto map = scheme::build_map(scheme::polarize(model::builtin_system("jacobi")));
  auto comps = scheme::parse_map(r.out, map.table(), map.system().state_names());
  for (std::size_t i = 0; i < comps.size(); ++i) EXPECT_EQ(comps[i], map.components()[i]);
}

TEST(Cli, ExitCodes) {
  struct Case {
    std::vector<std::string> args;
    int code;
  };
  const std::vector<Case> cases{
      {{}, 2},
      {{"find-steps", "--system", "nope", "--x0", "1", "--n", "2"}, 2},
      {{"find-steps", "--system", "wp", "--param", "a=0.5", "--x0", "1,2", "--n", "2"}, 2},
      {{"find-steps", "--system", "wp", "--param", "z=1", "--x0", "1,2", "--n", "2"}, 2},
      {{"find-steps", "--system", "wp", "--x0", "1,2"}, 2},
      {{"find-steps", "--system", "wp", "--x0", "1,2,3", "--n", "2"}, 2},
      {{"find-steps", "--system", "wp", "--x0", "1,2", "--n", "0"}, 2},
      {{"find-steps", "--system", "wp", "--x0", "1,2", "--n", "3", "--range", "5,1"}, 2},
      {{"find-steps", "--system", "wp", "--x0", "1,2", "--n", "3", "--format", "poly-text"}, 2},
      {{"find-steps", "--system", "jacobi", "--scheme", "literal", "--x0", "0,1,1", "--n", "3"}, 2},
      {{"find-steps", "--system", "wp", "--model-file", "x.model", "--x0", "1,2", "--n", "3"}, 2},
      {{"find-steps", "--model-file", "/nonexistent.model", "--x0", "1,2", "--n", "3"}, 2},
      {{"equiperiodic", "--system", "wp", "--x0", "1,2", "--n", "5"}, 2},
      {{"equiperiodic", "--system", "wp", "--n", "5", "--sample"}, 2},
      {{"integrate", "--system", "wp", "--x0", "1,2", "--steps", "3"}, 2},
      {{"integrate", "--system", "wp", "--x0", "1,2", "--dt", "1/10", "--steps", "3", "--mode", "exact",
        "--skip-on-pole"},
       2},
      {{"transition-table", "--system", "wp", "--x0", "1,2", "--with-limit"}, 2},
      {{"verify-period", "--system", "wp", "--x0", "1,2", "--n", "5"}, 2},
      {{"equiperiodic", "--system", "wp", "--n", "8", "--term-budget", "100"}, 4},
      {{"find-steps", "--system", "riccati", "--x0", "0", "--n", "2"}, 2},
  };
  for (const auto& c : cases) {
    auto r = run(c.args);
    std::string joined;
    for (const auto& a : c.args) joined += a + " ";
    EXPECT_EQ(r.code, c.code) << joined << "\n" << r.err;
    if (r.code != 0) {
      EXPECT_FALSE(r.err.empty()) << joined;
      EXPECT_TRUE(r.out.empty()) << joined;
    }
  }
}

TEST(Cli, HelpExitsZero) {
  auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("find-steps"), std::string::npos);
}
