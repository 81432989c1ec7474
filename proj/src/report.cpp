#include "resbdy/report.hpp"
#include "resbdy/errors.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace resbdy {

void RunConfig::validate() const {
  for (double t : {tol_limit, harm_tol, path_tol, separation_tol, degeneracy_tol, divergence_threshold, residual_tol})
    if (!(t > 0.0)) throw Error(ErrorCode::UsageError, "tolerances must be positive");
  if (N < 1) throw Error(ErrorCode::UsageError, "N must be >= 1");
  if (samples < 1) throw Error(ErrorCode::UsageError, "samples must be >= 1");
  if (format != "json" && format != "csv") throw Error(ErrorCode::UsageError, "format must be json or csv");
}

NetworkGenerator RunConfig::generator() const {
  nlohmann::json spec;
  if (std::filesystem::is_regular_file(network)) {
    std::ifstream in(network);
    try {
      spec = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::UsageError, network + ": " + e.what());
    }
  } else if (!network.empty() && (network[0] == '{' || network[0] == '[' || network[0] == '"')) {
    try {
      spec = nlohmann::json::parse(network);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::UsageError, std::string("inline network: ") + e.what());
    }
  } else if (network == "ladder") {
    spec = {{"family", "ladder"}, {"params", {{"alpha", alpha}, {"beta", beta}}}};
  } else if (network == "geometric-half-line" || network == "half-line") {
    spec = {{"family", "geometric-half-line"}, {"params", {{"alpha", alpha}}}};
  } else if (network == "lattice" || network == "Z1" || network == "Zd") {
    spec = {{"family", "lattice"}, {"params", {{"d", dim}}}};
  } else if (network == "binary-tree" || network == "tree") {
    spec = {{"family", "binary-tree"}};
  } else {
    spec = network;
  }
  return NetworkGenerator::from_json(spec);
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json net;
  try {
    net = generator().to_json();
  } catch (const Error&) {
    net = nullptr;
  }
  return {{"network", network},
          {"network_spec", net},
          {"alpha", alpha},
          {"beta", beta},
          {"dim", dim},
          {"schedule", schedule},
          {"tol_limit", tol_limit},
          {"harm_tol", harm_tol},
          {"path_tol", path_tol},
          {"separation_tol", separation_tol},
          {"degeneracy_tol", degeneracy_tol},
          {"divergence_threshold", divergence_threshold},
          {"residual_tol", residual_tol},
          {"N", N},
          {"samples", samples},
          {"seed", seed},
          {"out_dir", out_dir},
          {"format", format}};
}

nlohmann::json make_report(const std::string& command, const RunConfig& cfg, bool pass, nlohmann::json result) {
  return {{"schema", "1"}, {"command", command}, {"config", cfg.to_json()}, {"pass", pass}, {"result", std::move(result)}};
}

void emit_text(const RunConfig& cfg, const std::string& name, const std::string& text) {
  if (cfg.out_dir.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream out(std::filesystem::path(cfg.out_dir) / name);
  out << text;
  std::cout << (std::filesystem::path(cfg.out_dir) / name).string() << "\n";
}

void emit(const RunConfig& cfg, const std::string& name, const nlohmann::json& report) {
  emit_text(cfg, name, report.dump(2) + "\n");
}

}  // namespace resbdy
