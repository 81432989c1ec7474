#pragma once

#include "resbdy/network.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <utility>
#include <vector>

namespace resbdy {

struct WalkConfig {
  Index max_steps = 1000000;
  Index trials = 100000;
  std::uint64_t seed = 1;
  unsigned streams = 16;
};

// p(x, y) = c_xy / c(x) over the neighbors of x.
std::vector<std::pair<Index, double>> transition_probabilities(const Network& net, Index x);

struct HittingResult {
  double estimate = 0.0;
  double stderr_ = 0.0;
  Index hits = 0;
  Index absorbed = 0;
  Index unabsorbed = 0;
  nlohmann::json to_json() const;
};

// Monte Carlo estimate of P_start[tau_target < tau_other] for the walk on a
// finite network. Trials that exhaust max_steps are counted separately and
// excluded from the estimate.
HittingResult hitting_probability_mc(const Network& net, Index start, Index target, Index other,
                                     const WalkConfig& cfg);

// G_k^W as a finite network: window [0, n) of the host with its boundary
// shorted into one vertex. map[v] is the index of window vertex v.
std::pair<Network, std::vector<Index>> wired_network(const Network& host, Index n);

}  // namespace resbdy
