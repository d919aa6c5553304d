#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "flowlab/cli/scenarios.hpp"

using namespace flowlab;
using namespace flowlab::cli;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string err;
  fs::path dir;
};

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("flowlab_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Runs the executable on a config written into a fresh directory.
CliRun run_cli(const std::string& name, const std::string& scenario, const std::string& config,
               const std::string& extra = "", const std::string& env = "") {
  CliRun r;
  r.dir = scratch(name);
  std::ofstream(r.dir / "config.json") << config;
  const std::string cmd = env + " " + FLOWLAB_CLI_PATH + " " + scenario + " --config " + (r.dir / "config.json").string() +
                          " --out " + (r.dir / "out").string() + " " + extra + " > " + (r.dir / "stdout").string() +
                          " 2> " + (r.dir / "stderr").string();
  const int status = std::system(cmd.c_str());
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(r.dir / "stderr");
  return r;
}

std::vector<std::vector<std::string>> read_csv(const CliRun& r, const std::string& scenario) {
  return parse_csv(slurp(r.dir / "out" / (scenario + ".csv")));
}

Json read_summary(const CliRun& r, const std::string& scenario) {
  return Json::parse(slurp(r.dir / "out" / (scenario + ".json")));
}

}  // namespace

TEST(Report, ShortestFormattingRoundTrips) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> E(-300, 300);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::ldexp(U(rng), E(rng));
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e-300), "1e-300");
}

TEST(Report, SingleRecordRoundTripsThroughFiles) {
  const auto dir = scratch("roundtrip");
  Table t;
  t.columns = {"t", "tau", "theta", "dtheta_dt", "termA", "termB", "termC", "residual"};
  const std::vector<double> row{0.1, 0.9, 2.0 / 3.0, -M_PI, -1e-17, 5e-324, 0.0, 1.0 / 7.0};
  t.add({row[0], row[1], row[2], row[3], row[4], row[5], row[6], row[7]});
  const auto paths = emit_report(t, Json{{"pass", true}}, dir, "records");
  const auto cells = parse_csv(slurp(paths.csv));
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0], t.columns);
  ASSERT_EQ(cells[1].size(), row.size());
  for (std::size_t c = 0; c < row.size(); ++c) EXPECT_EQ(parse_double(cells[1][c]), row[c]);
  EXPECT_TRUE(Json::parse(slurp(paths.json))["pass"].get<bool>());
}

TEST(Report, EmptyRecordListIsAValidationError) {
  Table t;
  t.columns = {"t"};
  try {
    emit_report(t, Json::object(), scratch("empty"), "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
  }
  EXPECT_THROW(t.add({1.0, 2.0}), Error);
}

TEST(Config, RangesTypesAndUnknownKeys) {
  ConfigReader r(Json{{"dt", -1.0}});
  EXPECT_THROW(r.positive("dt", 1e-4), Error);
  ConfigReader a(Json{{"n", 1.5}});
  EXPECT_THROW(a.integer("n", 64, 8, 4096), Error);
  ConfigReader b(Json{{"q_mode", "sideways"}});
  EXPECT_THROW(b.choice("q_mode", "ricci", {"ricci", "static"}), Error);
  ConfigReader c(Json{{"typo", 1}});
  c.number("dt", 1e-4, 0.0, 1.0);
  EXPECT_THROW(c.finish(), Error);
  ConfigReader d(Json::object());
  EXPECT_EQ(d.number("dt", 1e-4, 0.0, 1.0), 1e-4);
  EXPECT_EQ(d.resolved()["dt"].get<double>(), 1e-4);
}

TEST(Config, ExitCodesFollowErrorKinds) {
  EXPECT_EQ(exit_code(ErrorKind::Validation), 2);
  EXPECT_EQ(exit_code(ErrorKind::InvalidTimeOrdering), 2);
  for (auto k : {ErrorKind::BlowUp, ErrorKind::Instability, ErrorKind::PositivityLoss, ErrorKind::CurveCollapse})
    EXPECT_EQ(exit_code(k), 3);
  EXPECT_EQ(exit_code(ErrorKind::IoError), 1);
}

TEST(Scenarios, IdentitySummaryListsEveryCheck) {
  const auto res = run_scenario("verify-identities", Json{{"dim", 2}, {"points", 14}, {"metrics", 7}}, 5);
  EXPECT_EQ(res.table.rows.size(), 14u * identity_check_names().size());
  ASSERT_TRUE(res.summary.contains("checks"));
  EXPECT_EQ(res.summary["checks"].size(), 7u);
  for (const auto& name : identity_check_names()) EXPECT_TRUE(res.summary["checks"].contains(name)) << name;
  EXPECT_EQ(res.summary["seed"].get<std::uint64_t>(), 5u);
  EXPECT_EQ(res.summary["config"]["metrics"].get<int>(), 7);
}

TEST(Scenarios, ConfigMustMatchScenario) {
  EXPECT_THROW(run_scenario("solitons", Json{{"scenario", "harnack"}}, 0), Error);
  EXPECT_THROW(run_scenario("nonsense", Json::object(), 0), Error);
}

TEST(Scenarios, HarnackClosedFormsOnEveryBackground) {
  for (const char* bg : {"backward_sphere", "round_sphere", "cigar", "flat"}) {
    const auto res = run_scenario("harnack", Json{{"background", bg}, {"t1", 0.2}, {"samples", 16}}, 9);
    EXPECT_TRUE(res.summary["pass"].get<bool>()) << bg;
    EXPECT_LE(res.summary["max_residual"].get<double>(), 1e-10) << bg;
  }
}

TEST(Scenarios, SolitonSignContract) {
  const auto res = run_scenario("solitons", Json{{"samples", 1000}}, 11);
  EXPECT_EQ(res.summary["violations"].get<int>(), 0);
  EXPECT_GT(res.summary["shrinking_at_T_max"].get<int>(), 0);
}

TEST(Executable, IdentityExampleDimThree) {
  const auto r = run_cli("identities", "verify-identities", R"({"dim": 3, "points": 200, "seed": 7})");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = read_csv(r, "verify-identities");
  ASSERT_EQ(csv.size(), 1 + 200 * 7u);
  EXPECT_EQ(csv[0], (std::vector<std::string>{"check_name", "dim", "point_index", "residual"}));
  for (std::size_t i = 1; i < csv.size(); ++i) {
    EXPECT_EQ(csv[i][1], "3");
    EXPECT_LE(parse_double(csv[i][3]), 1e-7) << csv[i][0] << " at point " << csv[i][2];
  }
  const auto s = read_summary(r, "verify-identities");
  EXPECT_TRUE(s["pass"].get<bool>());
  EXPECT_EQ(s["seed"].get<std::uint64_t>(), 7u);
  EXPECT_EQ(s["checks"].size(), 7u);
}

TEST(Executable, MonotonicitySphereSolitonExample) {
  const auto r = run_cli("sphere", "monotonicity", R"({"background": "round_sphere", "q_mode": "ricci", "rho0": 1.4142135623730951})");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = read_csv(r, "monotonicity");
  EXPECT_EQ(csv[0], (std::vector<std::string>{"t", "tau", "theta", "dtheta_dt", "termA", "termB", "termC", "residual"}));
  ASSERT_GT(csv.size(), 3u);
  for (std::size_t i = 1; i < csv.size(); ++i) {
    EXPECT_LE(std::abs(parse_double(csv[i][5])), 1e-8);
    EXPECT_LE(parse_double(csv[i][3]), 0.0);
  }
  const auto s = read_summary(r, "monotonicity");
  EXPECT_DOUBLE_EQ(s["config"]["T"].get<double>(), 1.0);  // defaults to T_max
}

TEST(Executable, StabilityViolationExitsTwo) {
  const auto r = run_cli("unstable", "run-flow", R"({"n": 64, "dt": 0.01})");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("stability bound"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(r.dir / "out" / "run-flow.csv"));
}

TEST(Executable, EmptyRecordListExitsTwo) {
  const auto r = run_cli("empty", "solitons", R"({"samples": 0})");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("empty record list"), std::string::npos) << r.err;
}

TEST(Executable, SchemaErrorsExitTwo) {
  EXPECT_EQ(run_cli("unknown", "solitons", R"({"samplez": 3})").code, 2);
  EXPECT_EQ(run_cli("notjson", "solitons", "{samples: 3").code, 2);
  EXPECT_EQ(run_cli("range", "run-flow", R"({"n": 2})").code, 2);
  EXPECT_EQ(run_cli("scenario", "run-flow", R"({"scenario": "harnack"})").code, 2);
  EXPECT_EQ(run_cli("badname", "no-such-scenario", "{}").code, 2);
}

TEST(Executable, CurveCollapseExitsThreeWithTime) {
  // a latitude at pi/4 on the backward sphere reaches the pole near t = 0.5
  const auto r = run_cli("collapse", "monotonicity",
                         R"({"q_mode": "backward_ricci", "u": "curvature", "rho0": 1, "T": 2, "t1": 1, "record_dt": 0.01})");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("CurveCollapse"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("failing time 0.5"), std::string::npos) << r.err;
}

TEST(Executable, DeterministicGivenSeed) {
  const std::string cfg = R"({"dim": 2, "points": 40, "metrics": 4})";
  const auto a = run_cli("det_a", "verify-identities", cfg, "--seed 123");
  const auto b = run_cli("det_b", "verify-identities", cfg, "--seed 123", "FLOWLAB_THREADS=3");
  const auto c = run_cli("det_c", "verify-identities", cfg, "--seed 124");
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  ASSERT_EQ(c.code, 0);
  const auto csv = [](const CliRun& r) { return slurp(r.dir / "out" / "verify-identities.csv"); };
  EXPECT_EQ(csv(a), csv(b));
  EXPECT_NE(csv(a), csv(c));

  const std::string flow = R"({"n": 32, "t1": 0.02, "dt": 0.0005, "audit_points": 3})";
  const auto f1 = run_cli("det_f1", "run-flow", flow, "--seed 1");
  const auto f2 = run_cli("det_f2", "run-flow", flow, "--seed 1", "FLOWLAB_THREADS=2");
  ASSERT_EQ(f1.code, 0) << f1.err;
  ASSERT_EQ(f2.code, 0) << f2.err;
  EXPECT_EQ(slurp(f1.dir / "out" / "run-flow.csv"), slurp(f2.dir / "out" / "run-flow.csv"));
  // summaries differ only in the echoed output directory
  auto j1 = read_summary(f1, "run-flow"), j2 = read_summary(f2, "run-flow");
  j1["config"].erase("output");
  j2["config"].erase("output");
  EXPECT_EQ(j1.dump(), j2.dump());
}

TEST(Executable, SummaryEchoesResolvedConfig) {
  const auto r = run_cli("echo", "run-flow", R"({"n": 32, "t1": 0.01, "dt": 0.0005, "seed": 4})");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto s = read_summary(r, "run-flow");
  const auto& c = s["config"];
  for (const char* key : {"n", "phi_mean", "phi_sin", "phi_cos", "u_amplitude", "q_mode", "k_mode", "T", "t0", "t1", "dt",
                          "snapshot_stride", "tau_min", "audit_points", "tolerance", "scenario", "seed", "output"})
    EXPECT_TRUE(c.contains(key)) << key;
  EXPECT_EQ(c["seed"].get<std::uint64_t>(), 4u);
  EXPECT_EQ(c["q_mode"].get<std::string>(), "ricci");
  for (const char* key : {"max_residual", "mean_residual", "pass", "seed"}) EXPECT_TRUE(s.contains(key)) << key;
  const auto csv = read_csv(r, "run-flow");
  EXPECT_EQ(csv[0], (std::vector<std::string>{"t", "min_phi", "max_phi", "max_abs_R", "mass"}));
}

TEST(Executable, HarnackCsvColumns) {
  const auto r = run_cli("harnack", "harnack", R"({"background": "backward_sphere", "samples": 5})", "--seed 2");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = read_csv(r, "harnack");
  EXPECT_EQ(csv[0], (std::vector<std::string>{"t", "point_x", "point_y", "kind", "value"}));
  EXPECT_EQ(csv.size(), 1 + 5 * 3u);
  for (std::size_t i = 1; i < csv.size(); ++i)
    if (csv[i][3] == "dim2_harnack") EXPECT_GT(parse_double(csv[i][4]), 0.0);
}
