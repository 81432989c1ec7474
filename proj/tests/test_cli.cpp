#include <catch2/catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  nlohmann::json report;
};

// Runs the CLI with the report written to a scratch directory.
Run run(const std::string& args, const std::string& command) {
  const fs::path dir = fs::temp_directory_path() / ("resbdy_cli_" + command);
  fs::remove_all(dir);
  const std::string cmd =
      std::string(RESBDY_CLI) + " " + args + " --out " + dir.string() + " > /dev/null 2> /dev/null";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(dir / (command + ".json"));
  if (in) r.report = nlohmann::json::parse(in);
  fs::remove_all(dir);
  return r;
}

}  // namespace

TEST_CASE("resist on a triangle network file", "[cli]") {
  const fs::path spec = fs::temp_directory_path() / "resbdy_triangle.json";
  std::ofstream(spec) << R"({"edges": [[0,1,1],[1,2,1],[0,2,1]], "origin": 0})";
  auto r = run("resist --network " + spec.string() + " --x 1 --y 2", "resist");
  CHECK(r.code == 0);
  REQUIRE(r.report.is_object());
  CHECK(r.report["schema"] == "1");
  CHECK(r.report["command"] == "resist");
  CHECK(r.report["pass"] == true);
  CHECK(r.report["result"]["value"].get<double>() == Catch::Approx(2.0 / 3.0));
  CHECK(r.report["config"]["seed"] == 1);
  CHECK(r.report["config"]["network_spec"]["edges"].size() == 3);
}

TEST_CASE("resistance does not depend on the radius schedule", "[cli]") {
  auto r = run("resist --network half-line --alpha 2 --x 1 --schedule linear:1:1:60 --compare-schedule linear:2:3:30",
               "resist");
  CHECK(r.code == 0);
  CHECK(r.report["result"]["independence"]["agree"] == true);
  CHECK(r.report["result"]["value"].get<double>() == Catch::Approx(0.5));
}

TEST_CASE("unknown flags and bad values are usage errors", "[cli]") {
  CHECK(run("resist --network triangle --bogus 1", "resist").code == 1);
  CHECK(run("no-such-command", "x").code == 1);
  CHECK(run("resist --network no-such-network", "resist").code == 1);
  CHECK(run("resist --network triangle --tol-limit -1", "resist").code == 1);
  CHECK(run("wiener --check nothing", "wiener").code == 1);
}

TEST_CASE("failed checks exit with status two", "[cli]") {
  auto r = run("paths --network ladder --alpha 5 --beta 0.9 --radii 64,128 --horizon 40 --expect equivalent", "paths");
  CHECK(r.code == 2);
  CHECK(r.report["pass"] == false);
  CHECK(r.report["result"]["verdict"] == "inequivalent");
}

TEST_CASE("ladder and walk reports", "[cli]") {
  auto l = run("ladder --alpha 5 --beta 0.9 --N 50", "ladder");
  CHECK(l.code == 0);
  CHECK(l.report["result"]["u1"].get<double>() == 0.2);
  auto w = run("walk --network path-3 --start 1 --target 2 --trials 20000", "walk");
  CHECK(w.code == 0);
  CHECK(w.report["result"]["reference"].get<double>() == Catch::Approx(0.5));
}

TEST_CASE("reports are byte identical for identical configs", "[cli]") {
  auto a = run("wiener --check minlos --N 5 --samples 2000 --seed 4", "wiener");
  auto b = run("wiener --check minlos --N 5 --samples 2000 --seed 4", "wiener");
  CHECK(a.code == 0);
  CHECK(a.report.dump() == b.report.dump());
  CHECK(a.report["config"]["seed"] == 4);
}
