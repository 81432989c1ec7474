// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "resbdy/suites.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>

using namespace resbdy;

namespace {

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<std::vector<CheckResult>()> run;
};

NamedNetwork named(const std::string& name) { return {name, preset(name)}; }

std::vector<NamedNetwork> finite_five() {
  return {named("path-5"), named("triangle"), named("star-4"), named("grid-4x4"),
          {"ladder-ball-6", ladder_ball(5.0, 0.9, 6)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::uint64_t seed = 20240601;
  std::string report_path = "acceptance_report.json";
  std::vector<int> only;
  app.add_option("--seed", seed, "seed for every Monte Carlo and random-input check");
  app.add_option("--report", report_path, "JSON report path");
  app.add_option("--only", only, "criteria to run");
  CLI11_PARSE(app, argc, argv);

  const auto ladder = NamedNetwork{"ladder(5,0.9)", NetworkGenerator::ladder(5.0, 0.9)};
  const auto ladder1 = NamedNetwork{"ladder(5,1)", NetworkGenerator::ladder(5.0, 1.0)};
  const auto z1 = NamedNetwork{"Z^1", NetworkGenerator::lattice(1)};
  const auto half = NamedNetwork{"half-line(2)", NetworkGenerator::half_line(2.0)};
  const auto tree = NamedNetwork{"binary-tree", NetworkGenerator::binary_tree()};

  std::vector<Criterion> criteria = {
      {1, "reproducing kernel", 5, [&] { return std::vector{check_reproducing(finite_five(), 50, seed)}; }},
      {2, "gauss-green on finite networks", 5, [&] { return std::vector{check_gauss_green(finite_five(), 100, seed)}; }},
      {3, "gram-schmidt identities", 30, [&] { return std::vector{check_onb(ladder, 30), check_onb(z1, 30)}; }},
      {4, "royden decomposition", 60,
       [&] { return std::vector{check_royden(ladder, true), check_royden(z1, false), check_royden(half, false)}; }},
      {5, "ladder recursion", 1, [&] { return std::vector{check_ladder(5.0, 0.9, 200)}; }},
      {6, "wiener / minlos", 30, [&] { return std::vector{check_wiener(30, 100000, seed)}; }},
      {7, "resistance as expectation", 30,
       [&] { return std::vector{check_resistance_mc({named("triangle"), named("path-5")}, 100000, seed)}; }},
      {8, "boundary representation", 120, [&] { return std::vector{check_boundary(5.0, 0.9, 30, 40, 100000, seed)}; }},
      {9, "path boundary", 60,
       [&] {
         return std::vector{check_paths(ladder, "x-rail", "y-rail", {256, 512}, 200, false),
                            check_paths(ladder1, "x-rail", "y-rail", {1024, 2048, 4096, 8192}, 200, true)};
       }},
      {10, "walk hitting probabilities", 30,
       [&] { return std::vector{check_walk({named("path-5"), named("triangle")}, 100000, seed)}; }},
      {11, "transience triage", 60,
       [&] {
         return std::vector{check_transience(tree, true), check_transience(half, true), check_transience(z1, false)};
       }},
  };

  nlohmann::json report = nlohmann::json::array();
  bool all = true;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    std::vector<CheckResult> parts;
    std::string error;
    try {
      parts = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = error.empty() && secs < c.limit_seconds;
    for (const auto& p : parts) pass = pass && p.pass;
    all = all && pass;
    std::printf("[%s] %2d %s (%.2f s, limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                c.limit_seconds);
    for (const auto& p : parts)
      std::printf("       %s %s: %s\n", p.pass ? "ok  " : "FAIL", p.name.c_str(), p.summary.c_str());
    if (!error.empty()) std::printf("       error: %s\n", error.c_str());
    std::fflush(stdout);
    nlohmann::json j = {{"criterion", c.id}, {"title", c.title}, {"pass", pass},
                        {"seconds", secs},   {"limit_seconds", c.limit_seconds}};
    nlohmann::json pj = nlohmann::json::array();
    for (const auto& p : parts) pj.push_back(p.to_json());
    j["checks"] = pj;
    if (!error.empty()) j["error"] = error;
    report.push_back(j);
  }
  std::ofstream(report_path) << report.dump(2) << "\n";
  return all ? 0 : 1;
}
