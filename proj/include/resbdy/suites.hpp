#pragma once

#include "resbdy/network.hpp"
#include "resbdy/solver.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace resbdy {

struct NamedNetwork {
  std::string name;
  NetworkGenerator gen;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string summary;
  nlohmann::json detail;
  double seconds = 0.0;
  nlohmann::json to_json() const;
};

// Finite network of the ladder ball of the given radius, labelled by internal
// index.
NetworkGenerator ladder_ball(double alpha, double beta, Index radius);

// A finite network as an explicit edge list, labelled by internal index.
NetworkGenerator finite_generator(const Network& net);

// G_r as a network in itself; finite generators are returned unchanged.
NetworkGenerator ball_generator(const NetworkGenerator& gen, Index radius);

// Default test vertex: the rail vertex x_1 on the ladder, the first
// enumerated vertex elsewhere.
Index default_vertex(const NetworkGenerator& gen);

// <v_x, u> = u(x) - u(o) for every x and `samples` random u on finite networks.
CheckResult check_reproducing(const std::vector<NamedNetwork>& nets, int samples, std::uint64_t seed,
                              double tol = 1e-9);

// energy(u, v) = sum u Delta v for random pairs; the interior plus boundary
// split on every prefix window must reproduce the window energy.
CheckResult check_gauss_green(const std::vector<NamedNetwork>& nets, int pairs, std::uint64_t seed,
                              double tol = 1e-10);

CheckResult check_onb(const NamedNetwork& net, Index N, const SolverOptions& sopt = {}, double tol = 1e-7);

// Harm nontrivial (energy(h_x) > 1e-3) or trivial (<= 1e-6) depending on
// expect_nontrivial; without an expectation only the split identities count.
CheckResult check_royden(const NamedNetwork& net, std::optional<bool> expect_nontrivial, double harm_tol = 1e-6,
                         double pythagoras_tol = 1e-6, const SolverOptions& sopt = {});

CheckResult check_ladder(double alpha, double beta, Index N, double residual_tol = 1e-9, double tol_limit = 1e-8);

CheckResult check_wiener(Index N, Index S, std::uint64_t seed, int count = 10);

CheckResult check_resistance_mc(const std::vector<NamedNetwork>& nets, Index S, std::uint64_t seed,
                                double abs_floor = 1e-2);

// Boundary sums at x = x_1 on levels 1..levels and the boundary integral at
// x = x_2 with an N-term ONB.
CheckResult check_boundary(double alpha, double beta, Index levels, Index N, Index S, std::uint64_t seed,
                           double tol = 1e-3);

CheckResult check_paths(const NamedNetwork& net, const std::string& a, const std::string& b,
                        const std::vector<Index>& radii, Index horizon, bool expect_equivalent,
                        double path_tol = 1e-4, double separation_tol = 1e-2);

CheckResult check_walk(const std::vector<NamedNetwork>& nets, Index trials, std::uint64_t seed);

CheckResult check_transience(const NamedNetwork& net, bool expect_transient, const SolverOptions& sopt = {});

}  // namespace resbdy
