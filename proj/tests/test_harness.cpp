#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "singspec/harness/harness.hpp"

using namespace singspec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("singspec_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(SINGSPEC_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("registry") {
  const std::set<std::string> expected{
      "gs-1d-tv", "sv-family-ua", "haar-basis", "ramp-rof", "scale-single", "scale-interval", "exact-recovery-clean",
      "exact-recovery-noisy-cosine", "iss-clean", "iss-noisy", "showalter", "bias-bounds", "rayleigh-failure",
      "l1-ground-state", "group-lasso-gs", "lowrank-gs", "pointmass-gs", "infconv-gs", "aniso-2d-sv"};
  std::set<std::string> ids;
  for (const auto& e : experiment_registry()) {
    ids.insert(e.id);
    CHECK_FALSE(e.anchor.empty());
  }
  CHECK(ids == expected);
  CHECK_THROWS_AS(run_experiment({"no-such-id", {}, {}, 42}), UnknownExperiment);
  CHECK_THROWS_AS(run_experiment({"ramp-rof", {{"bogus", "1"}}, {}, 42}), std::invalid_argument);
  CHECK_THROWS_AS(run_experiment({"ramp-rof", {{"alpha", "-1"}}, {}, 42}), std::invalid_argument);
}

TEST_CASE("every assertion names an anchor") {
  for (const char* id : {"ramp-rof", "haar-basis", "rayleigh-failure", "pointmass-gs"}) {
    const ExperimentReport r = run_experiment({id, {}, {}, 42});
    CHECK(r.pass());
    REQUIRE_FALSE(r.rows.empty());
    for (const auto& row : r.rows) CHECK_FALSE(row.anchor.empty());
  }
}

TEST_CASE("ramp-rof table row") {
  const ExperimentReport r = run_experiment({"ramp-rof", {{"n", "1024"}, {"alpha", "1/18"}}, {}, 42});
  REQUIRE(r.table.size() == 1);
  CHECK(r.table[0][3] == doctest::Approx(1.0 / 18).epsilon(1e-3));
}

TEST_CASE("report files and determinism") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  run_experiment({"bias-bounds", {{"trials", "20"}}, a, 7});
  run_experiment({"bias-bounds", {{"trials", "20"}}, b, 7});
  CHECK(slurp(a / "table.csv") == slurp(b / "table.csv"));
  CHECK_FALSE(slurp(a / "table.csv").empty());

  const auto j = nlohmann::json::parse(slurp(a / "report.json"));
  CHECK(j["id"] == "bias-bounds");
  CHECK(j.contains("timing"));
  for (const auto& row : j["anchors"]) {
    for (const char* key : {"assertion", "anchor", "pass", "lhs", "rhs", "tol"}) CHECK(row.contains(key));
  }

  const fs::path c = scratch("det_c");
  run_experiment({"ramp-rof", {}, c, 42});
  CHECK(fs::exists(c / "solution.dat"));
  std::ifstream dat(c / "solution.dat");
  double x, y;
  int lines = 0;
  while (dat >> x >> y) ++lines;
  CHECK(lines == 1024);
}

TEST_CASE("config precedence") {
  const fs::path d = scratch("config");
  std::ofstream(d / "cfg.json") << R"({"params": {"alpha": 0.1, "n": 256}, "seed": 9})";
  ExperimentSpec spec{"ramp-rof", {{"alpha", "1/18"}}, {}, 42};
  merge_config_file(spec, d / "cfg.json");
  CHECK(spec.params.at("alpha") == "1/18");
  CHECK(spec.params.at("n") == "256");
  CHECK(spec.seed == 9);
  std::ofstream(d / "bad.json") << "{not json";
  CHECK_THROWS_AS(merge_config_file(spec, d / "bad.json"), std::invalid_argument);
}

TEST_CASE("seed from the environment") {
  ::unsetenv("SINGSPEC_SEED");
  CHECK(default_seed() == 42);
  ::setenv("SINGSPEC_SEED", "1234", 1);
  CHECK(default_seed() == 1234);
  ::unsetenv("SINGSPEC_SEED");
}

TEST_CASE("cli exit codes") {
  const fs::path d = scratch("cli");
  const fs::path log = d / "log.txt";
  CHECK(run_cli("reproduce no-such-id", log) == 2);
  CHECK(run_cli("frobnicate", log) == 2);
  CHECK(run_cli("solve --reg tv", log) == 2);
  CHECK(run_cli("list", log) == 0);
  CHECK(slurp(log).find("iss-noisy") != std::string::npos);

  CHECK(run_cli("reproduce gs-1d-tv --out " + (d / "out").string(), log) == 0);
  CHECK(slurp(log).find("lambda0 = 2") != std::string::npos);

  // u^{1/4} sampled on 1024 cells
  {
    std::ofstream f(d / "ua_0.25.csv");
    f.precision(17);
    for (int i = 0; i < 1024; ++i) f << (i < 256 ? -std::sqrt(3.0) : 1.0 / std::sqrt(3.0)) << "\n";
  }
  CHECK(run_cli("verify --reg tv --input " + (d / "ua_0.25.csv").string(), log) == 0);
  CHECK(slurp(log).find("2.3094") != std::string::npos);

  {
    std::ofstream f(d / "sine.txt");
    for (int i = 0; i < 256; ++i) f << std::sin(2 * 3.141592653589793 * (i + 0.5) / 256) << "\n";
  }
  CHECK(run_cli("verify --reg tv --input " + (d / "sine.txt").string(), log) == 1);

  CHECK(run_cli("solve --reg tv --alpha 0.25 --input " + (d / "ua_0.25.csv").string() + " --out " +
                    (d / "solve").string(),
                log) == 0);
  CHECK(fs::exists(d / "solve" / "solution.txt"));

  {
    std::ofstream m(d / "M.txt");
    m << "1 0 0.5\n0 1 0.5\n";
    std::ofstream f(d / "f.txt");
    f << "1\n-0.5\n";
  }
  CHECK(run_cli("solve --op matrix:" + (d / "M.txt").string() + " --reg l1 --alpha 0.1 --input " +
                    (d / "f.txt").string(),
                log) == 0);
  CHECK(run_cli("reproduce ramp-rof --param alpha=notanumber", log) == 2);
  CHECK(run_cli("reproduce ramp-rof --param alpha", log) == 2);
}
