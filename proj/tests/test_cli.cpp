#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include "atvgarch/io.hpp"

namespace fs = std::filesystem;
using namespace atvgarch;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "atvgarch_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(ATVGARCH_CLI) + " " + args + " > " +
                          (kRoot / "stdout.txt").string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path dir(const std::string& name) {
  const fs::path p = kRoot / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

nlohmann::json load_json(const fs::path& p) { return nlohmann::json::parse(read_text(p)); }

}  // namespace

TEST_CASE("simulate writes a reproducible series and manifest") {
  fs::create_directories(kRoot);
  const fs::path a = dir("sim_a"), b = dir("sim_b");
  REQUIRE(run("simulate --dgp DGP3 --T 3000 --seed 5 --out-dir " + a.string()) == 0);
  REQUIRE(run("simulate --dgp DGP3 --T 3000 --seed 5 --out-dir " + b.string()) == 0);
  const CsvTable t = read_csv(a / "series.csv");
  CHECK(t.rows.size() == 3000);
  CHECK(t.header == std::vector<std::string>{"t", "time", "x", "h_true"});
  CHECK(read_text(a / "series.csv") == read_text(b / "series.csv"));

  const auto m = load_json(a / "manifest.json");
  CHECK(m["subcommand"] == "simulate");
  CHECK(m["seed"] == 5);
  CHECK(m["theta"]["transitions"][0]["gamma"].get<double>() == 46.0);
  CHECK(m["theta"]["transitions"][0]["c"][0].get<double>() == 0.5);

  SUBCASE("rerun reproduces the output") {
    const fs::path r = dir("sim_rerun");
    REQUIRE(run("rerun --manifest " + (a / "manifest.json").string() + " --out-dir " + r.string()) == 0);
    CHECK(read_text(r / "series.csv") == read_text(a / "series.csv"));
  }
  SUBCASE("fit reads it back") {
    const fs::path f = dir("fit");
    REQUIRE(run("fit --model garch --input " + (a / "series.csv").string() + " --out-dir " + f.string()) == 0);
    const auto j = load_json(f / "fit.json");
    CHECK(j["converged"] == true);
    CHECK(read_csv(f / "fitted.csv").rows.size() == 3000);
  }
}

TEST_CASE("malformed input exits with the input error status") {
  fs::create_directories(kRoot);
  const fs::path d = dir("bad");
  std::ofstream(d / "bad.csv") << "x\n0.1\n0.2\nfoo\n0.3\n";
  CHECK(run("fit --model garch --input " + (d / "bad.csv").string() + " --out-dir " + d.string()) == 4);
  CHECK(read_text(kRoot / "stdout.txt").find("line 4") != std::string::npos);
  CHECK(run("fit --model garch --input " + (d / "missing.csv").string()) == 4);
}

TEST_CASE("config files feed options and reject unknown keys") {
  fs::create_directories(kRoot);
  const fs::path d = dir("cfg");
  std::ofstream(d / "good.cfg") << "dgp = DGP1\nT = 400\nseed = 3\n";
  REQUIRE(run("simulate --config " + (d / "good.cfg").string() + " --T 350 --out-dir " + d.string()) == 0);
  CHECK(read_csv(d / "series.csv").rows.size() == 350);
  CHECK(load_json(d / "manifest.json")["seed"] == 3);

  std::ofstream(d / "bad.cfg") << "dgp = DGP1\nbogus = 1\n";
  CHECK(run("simulate --config " + (d / "bad.cfg").string() + " --out-dir " + d.string()) == 2);
  CHECK(read_text(kRoot / "stdout.txt").find(":2") != std::string::npos);
  CHECK(run("simulate --no-such-flag") == 2);
}

TEST_CASE("transition curves and the moment boundary") {
  fs::create_directories(kRoot);
  const fs::path d = dir("curves");
  REQUIRE(run("transition-curve --transition 20,0.3,0.7:-1 --grid 101 --out-dir " + d.string()) == 0);
  const auto g = read_csv(d / "transition_curve.csv").numeric("g");
  REQUIRE(g.size() == 101);
  CHECK(g[50] > g[0]);
  CHECK(g[50] > g[100]);
  for (std::size_t i = 1; i <= 50; ++i) CHECK(g[i] >= g[i - 1]);
  for (std::size_t i = 51; i <= 100; ++i) CHECK(g[i] <= g[i - 1]);

  REQUIRE(run("moment-region --resolution 51 --out-dir " + d.string()) == 0);
  const CsvTable b = read_csv(d / "moment_boundary.csv");
  const auto a1 = b.numeric("alpha1"), b1 = b.numeric("beta1");
  CHECK(a1.front() == 0.0);
  CHECK(b1.front() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < a1.size(); ++i) CHECK(b1[i] < b1[i - 1]);
  CHECK(read_csv(d / "moment_grid.csv").rows.size() == 51 * 51);
}
