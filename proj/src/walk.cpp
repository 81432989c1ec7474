#include "resbdy/walk.hpp"

#include <cmath>
#include <map>
#include <random>
#include <thread>

namespace resbdy {

std::vector<std::pair<Index, double>> transition_probabilities(const Network& net, Index x) {
  if (x < 0 || x >= net.size()) throw Error(ErrorCode::InvalidParameters, "vertex outside network");
  const Graph& g = net.graph();
  const double cx = net.total(x);
  if (!(cx > 0.0) || g.neighbors(x).empty()) throw Error(ErrorCode::IsolatedVertex, "vertex " + std::to_string(x));
  std::vector<std::pair<Index, double>> out;
  for (Index s = g.slot_begin(x); s < g.slot_end(x); ++s) out.emplace_back(g.slot_target(s), net.slot_conductance(s) / cx);
  return out;
}

HittingResult hitting_probability_mc(const Network& net, Index start, Index target, Index other,
                                     const WalkConfig& cfg) {
  const Index n = net.size();
  if (start < 0 || start >= n || target < 0 || target >= n || other < 0 || other >= n)
    throw Error(ErrorCode::InvalidParameters, "vertex outside network");
  if (cfg.trials < 1) throw Error(ErrorCode::InvalidParameters, "trials must be >= 1");
  const Graph& g = net.graph();
  // Cumulative transition tables.
  std::vector<double> cum(static_cast<std::size_t>(g.slot_end(n - 1)));
  for (Index v = 0; v < n; ++v) {
    double acc = 0.0;
    for (Index s = g.slot_begin(v); s < g.slot_end(v); ++s) {
      acc += net.slot_conductance(s) / net.total(v);
      cum[s] = acc;
    }
    if (g.slot_end(v) > g.slot_begin(v)) cum[g.slot_end(v) - 1] = 1.0;
  }
  const unsigned streams = std::max(1u, cfg.streams);
  std::vector<Index> hits(streams, 0), absorbed(streams, 0), unabsorbed(streams, 0);
  const unsigned workers = std::min<unsigned>(worker_count(), streams);
  auto run = [&](unsigned first) {
    for (unsigned b = first; b < streams; b += workers) {
      Index lo = cfg.trials * b / streams, hi = cfg.trials * (b + 1) / streams;
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed & 0xffffffffu), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(b), 0x77616c6bu};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (Index t = lo; t < hi; ++t) {
        Index v = start;
        Index steps = 0;
        while (v != target && v != other && steps < cfg.max_steps) {
          double r = unif(rng);
          Index s0 = g.slot_begin(v), s1 = g.slot_end(v);
          Index s = std::lower_bound(cum.begin() + s0, cum.begin() + s1, r) - cum.begin();
          if (s >= s1) s = s1 - 1;
          v = g.slot_target(s);
          ++steps;
        }
        if (v == target) {
          ++hits[b];
          ++absorbed[b];
        } else if (v == other) {
          ++absorbed[b];
        } else {
          ++unabsorbed[b];
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();
  HittingResult r;
  for (unsigned b = 0; b < streams; ++b) {
    r.hits += hits[b];
    r.absorbed += absorbed[b];
    r.unabsorbed += unabsorbed[b];
  }
  if (r.absorbed == 0) throw Error(ErrorCode::WalkBudgetExceeded, "no trial was absorbed");
  const double p = static_cast<double>(r.hits) / static_cast<double>(r.absorbed);
  r.estimate = p;
  r.stderr_ = std::sqrt(p * (1.0 - p) / static_cast<double>(r.absorbed));
  return r;
}

nlohmann::json HittingResult::to_json() const {
  return {{"estimate", estimate}, {"stderr", stderr_}, {"hits", hits}, {"absorbed", absorbed}, {"unabsorbed", unabsorbed}};
}

std::pair<Network, std::vector<Index>> wired_network(const Network& host, Index n) {
  const Graph& g = host.graph();
  std::vector<char> bd(static_cast<std::size_t>(n), 0);
  bool any = false;
  for (Index v = 0; v < n; ++v) {
    auto nb = g.neighbors(v);
    if (!nb.empty() && nb.back() >= n) bd[v] = any = true;
  }
  const std::int64_t aux = n;
  std::vector<EdgeSpec> edges;
  std::map<std::pair<std::int64_t, std::int64_t>, double> merged;
  for (Index v = 0; v < n; ++v)
    for (Index s = g.slot_begin(v); s < g.slot_end(v); ++s) {
      Index w = g.slot_target(s);
      if (w >= n || w <= v) continue;
      std::int64_t a = bd[v] ? aux : v, b = bd[w] ? aux : w;
      if (a == b) continue;
      merged[std::minmax(a, b)] += host.slot_conductance(s);
    }
  for (auto& [k, c] : merged) edges.push_back({k.first, k.second, c});
  Network net = build_finite<double>(edges, 0);
  std::vector<Index> map(static_cast<std::size_t>(n));
  for (Index v = 0; v < n; ++v) map[v] = *net.graph().index_of(bd[v] ? aux : v);
  (void)any;
  return {std::move(net), std::move(map)};
}

}  // namespace resbdy
