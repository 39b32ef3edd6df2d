#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "entswitch/report.hpp"
#include "support.hpp"

using namespace entswitch;
using entswitch::report::Json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "entswitch_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(cli::exit_code_for(ErrorKind::InvalidParams), 2);
  EXPECT_EQ(cli::exit_code_for(ErrorKind::UnstableRegime), 2);
  EXPECT_EQ(cli::exit_code_for(ErrorKind::ConfigInvalid), 2);
  EXPECT_EQ(cli::exit_code_for(ErrorKind::CertificationFailed), 3);
  EXPECT_EQ(cli::exit_code_for(ErrorKind::NoConvergence), 3);
  EXPECT_EQ(cli::exit_code_for(ErrorKind::TailBoundViolated), 3);
}

TEST(Analytic, TextAndJson) {
  const auto t = invoke({"analytic", "--k", "5", "--n", "3", "--q", "0.8"});
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("capacity 1.33333333333"), std::string::npos);
  const auto j = invoke({"analytic", "--k", "5", "--n", "3", "--q", "0.8", "--format", "json"});
  ASSERT_EQ(j.code, 0);
  const auto doc = Json::parse(j.out);
  EXPECT_NEAR(doc.at("capacity").get<double>(), 4.0 / 3.0, 1e-15);
  EXPECT_EQ(doc.at("expected_qubits").get<double>(), 2.5);
  EXPECT_EQ(doc.at("manifest").at("subcommand"), "analytic");
  EXPECT_EQ(doc.at("manifest").at("parameters").at("q"), "0.8");
}

TEST(Analytic, RejectsUnstableAndBadArguments) {
  const auto r = invoke({"analytic", "--k", "3", "--n", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unstable: k must exceed n"), std::string::npos);
  EXPECT_EQ(invoke({"analytic", "--k", "5", "--n", "3", "--q", "2"}).code, 2);
  EXPECT_EQ(invoke({"analytic", "--k", "five"}).code, 2);
  EXPECT_EQ(invoke({"analytic", "--format", "yaml"}).code, 2);
  EXPECT_EQ(invoke({"nosuch"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
}

TEST(Help, ExitsZero) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("solve"), std::string::npos);
  EXPECT_EQ(invoke({"solve", "--help"}).code, 0);
}

TEST(Drift, CertifiesStableAndFailsAtCriticality) {
  const auto ok = invoke({"drift", "--k", "5", "--n", "3", "--alpha", "0.25", "--format", "json"});
  ASSERT_EQ(ok.code, 0);
  const auto doc = Json::parse(ok.out);
  EXPECT_TRUE(doc.at("certified").get<bool>());
  EXPECT_NEAR(doc.at("strata").at(0).at("C_j").get<double>(), -4.0, 1e-12);
  const auto crit = invoke({"drift", "--k", "4", "--n", "4"});
  EXPECT_EQ(crit.code, 3);
  EXPECT_NE(crit.out.find("instability_conditions hold"), std::string::npos);
  EXPECT_EQ(invoke({"drift", "--k", "5", "--n", "3", "--alpha", "0.25", "--b", "0"}).code, 2);
  EXPECT_EQ(invoke({"drift", "--k", "5", "--n", "3", "--alpha", "0.6"}).code, 2);
}

TEST(Solve, JsonAndSweep) {
  const auto r = invoke({"solve", "--k", "5", "--n", "3", "--B", "30", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto row = Json::parse(r.out).at("rows").at(0);
  EXPECT_NEAR(row.at("pi_R0").get<double>(), 5.0 / 9.0, 1e-6);
  const auto s = invoke({"solve", "--k", "5", "--n", "3", "--sweep", "10,20", "--format", "csv"});
  ASSERT_EQ(s.code, 0);
  const auto rows = report::parse_solve_csv(s.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].B, 20);
  EXPECT_EQ(invoke({"solve", "--k", "5", "--n", "3", "--B", "2"}).code, 2);
  EXPECT_EQ(invoke({"solve", "--k", "4", "--n", "3", "--B", "30", "--max-sweeps", "5"}).code, 3);
}

TEST(Solve, DumpPiWritesCsvAndManifest) {
  const auto path = scratch("pi.csv");
  fs::remove(path);
  const auto r = invoke({"solve", "--k", "5", "--n", "3", "--B", "5", "--dump-pi", path.string()});
  ASSERT_EQ(r.code, 0);
  const auto body = slurp(path);
  EXPECT_EQ(body.rfind("x1,x2,pi\n", 0), 0u);
  EXPECT_TRUE(fs::exists(path.string() + ".manifest.json"));
}

TEST(Sweep, CsvParsesBack) {
  const auto r = invoke({"sweep", "--kmin", "3", "--kmax", "100"});
  ASSERT_EQ(r.code, 0);
  const auto cells = report::parse_sweep_csv(r.out);
  bool found = false;
  for (const auto& c : cells)
    if (c.k == 100 && c.n == 20) {
      EXPECT_EQ(c.expected_qubits, 11.875);
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(Identities, SmallGridPasses) {
  const auto r = invoke({"identities", "--grid", "small", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto doc = Json::parse(r.out);
  EXPECT_TRUE(doc.at("ok").get<bool>());
  EXPECT_LE(doc.at("max_residual").get<double>(), 1e-9);
  // An impossible tolerance turns the same run into a tolerance failure.
  EXPECT_EQ(invoke({"identities", "--grid", "small", "--tol", "1e-300"}).code, 3);
}

TEST(Simulate, SeedFromEnvironmentAndFlagPrecedence) {
  const std::vector<std::string> base{"simulate", "--k", "5", "--n", "3", "--steps", "20000", "--format", "json"};
  setenv("ENTSWITCH_SEED", "77", 1);
  const auto env = Json::parse(invoke(base).out);
  unsetenv("ENTSWITCH_SEED");
  EXPECT_EQ(env.at("seed").get<std::uint64_t>(), 77u);
  EXPECT_EQ(env.at("manifest").at("seed").get<std::uint64_t>(), 77u);
  auto flagged = base;
  flagged.insert(flagged.end(), {"--seed", "77"});
  EXPECT_EQ(Json::parse(invoke(flagged).out).at("attempts"), env.at("attempts"));
}

TEST(Simulate, EmbeddedAndProbe) {
  const auto e = invoke({"simulate", "--k", "4", "--n", "3", "--steps", "50000", "--embedded", "--format", "csv"});
  ASSERT_EQ(e.code, 0);
  EXPECT_EQ(e.out.rfind("j,excursion_mean,psi_j,count\n", 0), 0u);
  EXPECT_EQ(invoke({"simulate", "--k", "3", "--n", "3", "--steps", "1000", "--embedded"}).code, 2);
  const auto p = invoke({"simulate", "--k", "3", "--n", "3", "--probe", "--horizons", "10,100", "--replications", "8",
                      "--format", "json"});
  ASSERT_EQ(p.code, 0);
  EXPECT_EQ(Json::parse(p.out).at("rows").size(), 2u);
  EXPECT_EQ(invoke({"simulate", "--k", "5", "--n", "3", "--probe", "--horizons", "10"}).code, 2);
  EXPECT_EQ(invoke({"simulate", "--k", "5", "--n", "3", "--probe", "--embedded"}).code, 2);
}

TEST(Config, FileFillsDefaultsAndFlagsWin) {
  const auto path = scratch("run.cfg");
  std::ofstream(path) << "k=5\nn=3\nq=0.5\nformat=json\n";
  const auto from_file = invoke({"analytic", "--config", path.string()});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_NEAR(Json::parse(from_file.out).at("capacity").get<double>(), 5.0 / 9.0 * 3.0 * 0.5, 1e-15);
  const auto overridden = invoke({"analytic", "--config", path.string(), "--q", "1"});
  ASSERT_EQ(overridden.code, 0);
  EXPECT_EQ(Json::parse(overridden.out).at("q").get<double>(), 1.0);

  std::ofstream(path) << "bogus=1\n";
  EXPECT_EQ(invoke({"analytic", "--config", path.string()}).code, 2);
  EXPECT_EQ(invoke({"analytic", "--config", (scratch("missing.cfg")).string()}).code, 2);
}

TEST(Config, BooleanFlags) {
  const auto path = scratch("emb.cfg");
  std::ofstream(path) << "k=4\nn=3\nsteps=20000\nembedded=true\nformat=csv\n";
  const auto r = invoke({"simulate", "--config", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("j,excursion_mean", 0), 0u);
}

TEST(Output, FileAndManifestCompanion) {
  const auto path = scratch("analytic.json");
  fs::remove(path);
  const auto r = invoke({"analytic", "--k", "6", "--n", "4", "--format", "json", "--out", path.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("wrote"), std::string::npos);
  const auto doc = Json::parse(slurp(path));
  EXPECT_EQ(doc.at("expected_qubits").get<double>(), 4.5);
  const auto m = report::manifest_from_json(Json::parse(slurp(path.string() + ".manifest.json")));
  EXPECT_EQ(m.subcommand, "analytic");
  ASSERT_EQ(m.outputs.size(), 1u);
  EXPECT_EQ(m.outputs[0], path.string());
  EXPECT_EQ(m.parameters.at("k"), "6");
}
