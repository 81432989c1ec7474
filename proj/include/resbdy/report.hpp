#pragma once

#include "resbdy/network.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>

namespace resbdy {

struct RunConfig {
  std::string network = "path-5";  // file path, inline JSON, preset or family name
  double alpha = 5.0;
  double beta = 0.9;
  int dim = 1;
  std::string schedule;  // empty: family default
  double tol_limit = 1e-8;
  double harm_tol = 1e-6;
  double path_tol = 1e-4;
  double separation_tol = 1e-2;
  double degeneracy_tol = 1e-12;
  double divergence_threshold = 1e6;
  double residual_tol = 1e-12;
  Index N = 30;
  Index samples = 100000;
  std::uint64_t seed = 1;
  std::string out_dir;
  std::string format = "json";

  // Positive tolerances and counts; throws UsageError otherwise.
  void validate() const;
  NetworkGenerator generator() const;
  nlohmann::json to_json() const;
};

// {"schema": "1", "command", "config", "pass", "result"}.
nlohmann::json make_report(const std::string& command, const RunConfig& cfg, bool pass, nlohmann::json result);

// Writes the report to stdout and, when out_dir is set, to out_dir/<name>.
void emit(const RunConfig& cfg, const std::string& name, const nlohmann::json& report);
void emit_text(const RunConfig& cfg, const std::string& name, const std::string& text);

}  // namespace resbdy
