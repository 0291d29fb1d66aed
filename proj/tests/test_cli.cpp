#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::current_path() / "cli_work";

int run(const std::string& args) {
  const std::string cmd = std::string(SPHWHITTLE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
  fs::create_directories(kWork);
  const fs::path p = kWork / name;
  std::ofstream(p) << text;
  return p;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST(Cli, SimulateThenEstimateRecoversExactSpectrum) {
  const auto cfg = write_file("exact.json", R"({
    "model": {"type": "power_law", "g0": 2, "alpha0": 3},
    "L": 1000, "sampler": "exact", "box": {"alpha_min": 2.01, "alpha_max": 8}
  })");
  const fs::path out = kWork / "exact";
  ASSERT_EQ(run("simulate --config " + q(cfg) + " --out " + q(out)), 0);
  ASSERT_TRUE(fs::exists(out / "spectrum.csv"));
  ASSERT_EQ(run("estimate --config " + q(cfg) + " --input " + q(out / "spectrum.csv") + " --out " + q(out)), 0);
  const auto j = nlohmann::json::parse(slurp(out / "estimate.json"));
  EXPECT_NEAR(j["alpha_hat"].get<double>(), 3.0, 1e-6);
  EXPECT_NEAR(j["g_hat"].get<double>(), 2.0, 1e-5);
  EXPECT_EQ(j["config"]["L"], 1000);
}

TEST(Cli, MonteCarloOutputIndependentOfThreads) {
  const auto cfg = write_file("mc.json", R"({
    "model": {"type": "kappa", "g0": 2, "alpha0": 3, "kappa": 1},
    "L": 400, "replications": 40, "seed": 7
  })");
  const fs::path a = kWork / "mc1", b = kWork / "mc4";
  ASSERT_EQ(run("mc --config " + q(cfg) + " --threads 1 --out " + q(a)), 0);
  ASSERT_EQ(run("mc --config " + q(cfg) + " --threads 4 --out " + q(b)), 0);
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
  EXPECT_EQ(slurp(a / "samples.csv"), slurp(b / "samples.csv"));
  const auto j = nlohmann::json::parse(slurp(a / "report.json"));
  EXPECT_EQ(j["replications"], 40);
  EXPECT_EQ(j["config"]["seed"], 7);
}

TEST(Cli, SeedOverride) {
  const auto cfg = write_file("seed.json", R"({
    "model": {"type": "power_law", "g0": 2, "alpha0": 3}, "L": 100, "seed": 1
  })");
  const fs::path a = kWork / "seed_a", b = kWork / "seed_b";
  ASSERT_EQ(run("simulate --config " + q(cfg) + " --seed 5 --out " + q(a)), 0);
  ASSERT_EQ(run("simulate --config " + q(cfg) + " --out " + q(b)), 0);
  EXPECT_NE(slurp(a / "spectrum.csv"), slurp(b / "spectrum.csv"));
}

TEST(Cli, OracleTable) {
  const auto cfg = write_file("oracle.json", R"({"L": [100000], "s": [0], "narrow_s": [0]})");
  const fs::path out = kWork / "oracle";
  ASSERT_EQ(run("oracle --config " + q(cfg) + " --out " + q(out)), 0);
  std::istringstream rows(slurp(out / "oracle.csv"));
  std::string line;
  std::getline(rows, line);
  EXPECT_EQ(line, "L,s,g,z_over_limit,target");
  std::getline(rows, line);
  EXPECT_EQ(line.rfind("100000,0,,", 0), 0u) << line;
  const double ratio = std::stod(line.substr(10, line.find(',', 10) - 10));
  EXPECT_NEAR(ratio, 1.0, 0.01);
  EXPECT_TRUE(fs::exists(out / "k_factor.csv"));
  EXPECT_TRUE(fs::exists(out / "u_limit.csv"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("mc --config " + q(kWork / "missing.json")), 1);
  const auto bad = write_file("bad.json", R"({"model": {"type": "power_law", "g0": -2, "alpha0": 3}, "L": 100})");
  EXPECT_EQ(run("simulate --config " + q(bad) + " --out " + q(kWork / "bad")), 1);

  // every replication lands on the boundary: a numerical failure
  const auto edge = write_file("edge.json", R"({
    "model": {"type": "power_law", "g0": 2, "alpha0": 8},
    "L": 200, "replications": 3, "box": {"alpha_min": 2.01, "alpha_max": 4}
  })");
  EXPECT_EQ(run("mc --config " + q(edge) + " --out " + q(kWork / "edge")), 2);
}
