#include "resbdy/suites.hpp"
#include "resbdy/boundary.hpp"
#include "resbdy/ladder.hpp"
#include "resbdy/onb.hpp"
#include "resbdy/royden.hpp"
#include "resbdy/walk.hpp"
#include "resbdy/wiener.hpp"

#include <chrono>
#include <random>
#include <sstream>

namespace resbdy {

namespace {

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_;
};

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

Vec<double> random_potential(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Vec<double> u(n);
  for (Index i = 0; i < n; ++i) u[i] = uni(rng);
  return u;
}

// Whole finite network as a single saturated level.
Exhaustion<double> finite_exhaustion(const NetworkGenerator& gen) {
  return make_exhaustion<double>(gen, default_schedule(gen));
}

}  // namespace

nlohmann::json CheckResult::to_json() const {
  return {{"name", name}, {"pass", pass}, {"summary", summary}, {"detail", detail}};
}

NetworkGenerator finite_generator(const Network& net) {
  std::vector<EdgeSpec> edges;
  for (auto& [u, v, c] : net.edges()) edges.push_back({u, v, c});
  return NetworkGenerator::finite(std::move(edges), 0);
}

NetworkGenerator ball_generator(const NetworkGenerator& gen, Index radius) {
  if (gen.is_finite()) return gen;
  return finite_generator(generate_ball<double>(gen, radius));
}

NetworkGenerator ladder_ball(double alpha, double beta, Index radius) {
  return ball_generator(NetworkGenerator::ladder(alpha, beta), radius);
}

Index default_vertex(const NetworkGenerator& gen) {
  if (gen.family == Family::Ladder) return ladder_x(1);
  Graph g = materialize(gen, 2);
  return enumerate_vertices(g).at(0);
}

CheckResult check_reproducing(const std::vector<NamedNetwork>& nets, int samples, std::uint64_t seed, double tol) {
  Stopwatch sw;
  CheckResult r;
  r.name = "reproducing-kernel";
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  nlohmann::json per = nlohmann::json::object();
  for (const auto& nn : nets) {
    auto ex = finite_exhaustion(nn.gen);
    const auto& net = ex.network();
    double w = 0.0;
    for (Index x = 1; x < net.size(); ++x) {
      auto k = energy_kernel(ex, x, BoundaryCondition::Free);
      if (!k.report.converged) throw Error(ErrorCode::NotConverged, nn.name + ": kernel at " + std::to_string(x));
      for (int s = 0; s < samples; ++s) {
        Vec<double> u = random_potential(net.size(), rng);
        double lhs = energy(net, k.values, u);
        double dev = std::abs(lhs - (u[x] - u[0])) / (1.0 + std::sqrt(energy(net, u)));
        w = std::max(w, dev);
      }
    }
    per[nn.name] = w;
    worst = std::max(worst, w);
  }
  r.pass = worst <= tol;
  r.summary = "max |<v_x,u> - (u(x)-u(o))| / (1+|u|) = " + sci(worst) + " (tol " + sci(tol) + ")";
  r.detail = {{"max_scaled_deviation", worst}, {"per_network", per}, {"samples_per_vertex", samples}};
  r.seconds = sw.seconds();
  return r;
}

CheckResult check_gauss_green(const std::vector<NamedNetwork>& nets, int pairs, std::uint64_t seed, double tol) {
  Stopwatch sw;
  CheckResult r;
  r.name = "gauss-green";
  std::mt19937_64 rng(seed);
  double worst = 0.0, worst_level = 0.0;
  nlohmann::json per = nlohmann::json::object();
  for (const auto& nn : nets) {
    auto ex = finite_exhaustion(nn.gen);
    const auto& net = ex.network();
    std::vector<Index> sizes;
    for (Index s : ex.sizes)
      if (sizes.empty() || s != sizes.back()) sizes.push_back(s);
    double w = 0.0, wl = 0.0;
    for (int p = 0; p < pairs; ++p) {
      Vec<double> u = random_potential(net.size(), rng), v = random_potential(net.size(), rng);
      auto rep = gauss_green_verify(net, u, v, sizes);
      const auto& full = rep.levels.back();
      if (full.size == net.size()) w = std::max(w, full.deviation);
      wl = std::max(wl, rep.max_level_deviation);
    }
    per[nn.name] = {{"full_network_deviation", w}, {"max_level_deviation", wl}};
    worst = std::max(worst, w);
    worst_level = std::max(worst_level, wl);
  }
  r.pass = worst <= tol && worst_level <= tol;
  r.summary = "max |E(u,v) - sum u Lap v| = " + sci(worst) + ", per-window split " + sci(worst_level) + " (tol " +
              sci(tol) + ")";
  r.detail = {{"max_deviation", worst}, {"max_level_deviation", worst_level}, {"per_network", per}, {"pairs", pairs}};
  r.seconds = sw.seconds();
  return r;
}

CheckResult check_onb(const NamedNetwork& nn, Index N, const SolverOptions& sopt, double tol) {
  Stopwatch sw;
  CheckResult r;
  r.name = "gram-schmidt:" + nn.name;
  auto sched = default_schedule(nn.gen);
  const Precision prec = precision_for(nn.gen, sched.expand().back());
  OnbIdentityReport id = with_precision(prec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(nn.gen, sched);
    auto b = build_onb(ex, N, sopt, OnbOptions{}, prec.name());
    if (!b.batch.all_converged()) throw Error(ErrorCode::NotConverged, nn.name + ": kernels for the ONB");
    return onb_identities(b.onb);
  });
  r.pass = id.m_vs_laplacian <= tol && id.e_vs_evaluation <= tol && id.eet_vs_gram <= tol && id.kronecker <= tol &&
           id.orthonormality <= 1e-9;
  r.summary = "N=" + std::to_string(N) + " M " + sci(id.m_vs_laplacian) + ", E " + sci(id.e_vs_evaluation) +
              ", EE^T-V " + sci(id.eet_vs_gram) + ", kronecker " + sci(id.kronecker) + ", orthonormality " +
              sci(id.orthonormality);
  r.detail = id.to_json();
  r.detail["precision"] = prec.name();
  r.seconds = sw.seconds();
  return r;
}

CheckResult check_royden(const NamedNetwork& nn, std::optional<bool> expect_nontrivial, double harm_tol, double pythagoras_tol,
                         const SolverOptions& sopt) {
  Stopwatch sw;
  CheckResult r;
  r.name = "royden:" + nn.name;
  const Index x = default_vertex(nn.gen);
  // Recurrence triage first: on a recurrent network Harm is trivial.
  auto msched = default_schedule(nn.gen, true);
  const Precision mprec = precision_for(nn.gen, msched.expand().back());
  auto [transience, mono] = with_precision(mprec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(nn.gen, msched);
    auto m = monopole(ex, 0, sopt, mprec.name());
    return std::make_pair(m.transience, m.report.to_json());
  });
  RoydenOptions ropt{sopt, harm_tol};
  auto sched = default_schedule(nn.gen);
  const Precision prec = precision_for(nn.gen, sched.expand().back());
  nlohmann::json split = with_precision(prec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(nn.gen, sched);
    auto s = royden_split(ex, {x}, ropt, transience, prec.name());
    return s.front().to_json();
  });
  const double eh = split["energy_h"].get<double>();
  const double pyth = split["pythagoras_rel"].get<double>();
  const double res = split["harm_residual_max"].get<double>();
  const bool conv_v = split["report_v"]["converged"].get<bool>();
  bool ok = pyth <= pythagoras_tol && res <= harm_tol && conv_v;
  if (expect_nontrivial == true) ok = ok && split["converged"].get<bool>() && eh > 1e-3;
  if (expect_nontrivial == false) ok = ok && eh <= 1e-6;
  r.pass = ok;
  r.summary = "x=" + std::to_string(x) + " energy(h) " + sci(eh) + ", pythagoras " + sci(pyth) + ", max|Lap h| " +
              sci(res) + ", triage " + transience_name(transience);
  r.detail = {{"split", split}, {"triage", transience_name(transience)}, {"monopole", mono}, {"precision", prec.name()}};
  r.seconds = sw.seconds();
  return r;
}

CheckResult check_ladder(double alpha, double beta, Index N, double residual_tol, double tol_limit) {
  Stopwatch sw;
  CheckResult r;
  r.name = "ladder-recursion";
  auto lh = ladder_harmonic(alpha, beta, N);
  auto en = ladder_energy(lh, tol_limit);
  auto bd = du_bound_check(lh);
  const bool u1 = static_cast<double>(lh.u[1]) == 1.0 / alpha;
  bool increasing = true;
  for (auto d : lh.du) increasing = increasing && d > 0.0L;
  const double res = lh.max_residual();
  r.pass = u1 && res <= residual_tol && increasing && en.converged && bd.violations == 0;
  r.summary = "u(1)=1/alpha " + std::string(u1 ? "yes" : "no") + ", max residual " + sci(res) + ", du>0 " +
              (increasing ? "yes" : "no") + ", energy " + (en.converged ? "converged" : "not converged") + " (" +
              std::to_string(en.total.back()) + "), du bound violations " + std::to_string(bd.violations);
  r.detail = {{"u1", static_cast<double>(lh.u[1])},
              {"u2", static_cast<double>(lh.u[2])},
              {"max_residual", res},
              {"strictly_increasing", increasing},
              {"energy", en.to_json()},
              {"bound_violations", bd.violations},
              {"bound_worst_ratio", bd.worst_ratio}};
  r.seconds = sw.seconds();
  return r;
}

CheckResult check_wiener(Index N, Index S, std::uint64_t seed, int count) {
  Stopwatch sw;
  CheckResult r;
  r.name = "wiener-minlos";
  auto ens = sample_ensemble(N, S, seed);
  std::mt19937_64 rng(seed ^ 0x75u);
  std::normal_distribution<double> normal(0.0, 1.0);
  int fails = 0;
  nlohmann::json cases = nlohmann::json::array();
  for (int c = 0; c < count; ++c) {
    Vec<double> u(N);
    for (Index n = 0; n < N; ++n) u[n] = normal(rng) / std::sqrt(static_cast<double>(N));
    auto mn = minlos_check(u, ens);
    auto m2 = moment_check(u, ens, 1);
    auto m4 = normalized_moment_check(u, ens, 2);
    auto o1 = odd_moment_check(u, ens, 1);
    auto o3 = odd_moment_check(u, ens, 3);
    bool ok = mn.pass && m2.pass && m4.pass && o1.pass && o3.pass;
    if (!ok) ++fails;
    cases.push_back({{"norm2", u.squaredNorm()},
                     {"minlos", mn.to_json()},
                     {"second", m2.to_json()},
                     {"fourth_normalized", m4.to_json()},
                     {"first", o1.to_json()},
                     {"third", o3.to_json()},
                     {"pass", ok}});
  }
  r.pass = fails == 0;
  r.summary = std::to_string(count - fails) + "/" + std::to_string(count) +
              " random u pass Minlos, second, fourth and odd moments within 4 stderr (S=" + std::to_string(S) + ")";
  r.detail = {{"N", N}, {"S", S}, {"seed", seed}, {"cases", cases}};
  r.seconds = sw.seconds();
  return r;
}

CheckResult check_resistance_mc(const std::vector<NamedNetwork>& nets, Index S, std::uint64_t seed, double abs_floor) {
  Stopwatch sw;
  CheckResult r;
  r.name = "resistance-mc";
  int total = 0, fails = 0;
  nlohmann::json per = nlohmann::json::object();
  for (const auto& nn : nets) {
    auto ex = finite_exhaustion(nn.gen);
    const auto& net = ex.network();
    const Index N = net.size() - 1;
    auto b = build_onb(ex, N);
    auto ens = sample_ensemble(N, S, seed);
    std::vector<Vec<double>> coef(static_cast<std::size_t>(net.size()));
    coef[0] = Vec<double>::Zero(N);
    for (Index i = 0; i < N; ++i) coef[b.onb.points[i]] = coefficients(b.onb, b.onb.kernels.col(i));
    nlohmann::json pairs = nlohmann::json::array();
    for (Index x = 0; x < net.size(); ++x)
      for (Index y = x + 1; y < net.size(); ++y) {
        double target = effective_resistance(ex, x, y, BoundaryCondition::Free).value;
        auto mc = resistance_via_expectation(coef[x], coef[y], ens, target, abs_floor);
        ++total;
        if (!(mc.square_pass && mc.exp_pass)) ++fails;
        auto j = mc.to_json();
        j["x"] = x;
        j["y"] = y;
        pairs.push_back(j);
      }
    per[nn.name] = pairs;
  }
  r.pass = fails == 0;
  r.summary = std::to_string(total - fails) + "/" + std::to_string(total) +
              " pairs: square and exponential forms within max(4 stderr, " + sci(abs_floor) + ") of R^F";
  r.detail = {{"S", S}, {"seed", seed}, {"per_network", per}};
  r.seconds = sw.seconds();
  return r;
}

CheckResult check_boundary(double alpha, double beta, Index levels, Index N, Index S, std::uint64_t seed, double tol) {
  Stopwatch sw;
  CheckResult r;
  r.name = "boundary-representation";
  const auto gen = NetworkGenerator::ladder(alpha, beta);
  // Boundary sums of the explicit harmonic function at x_1.
  auto bsched = RadiusSchedule::linear(1, 1, levels);
  const Precision bprec = precision_for(gen, levels);
  auto [bsum, hsum] = with_precision(bprec, [&](auto tag) {
    using S_ = typename decltype(tag)::type;
    auto ex = make_exhaustion<S_>(gen, bsched);
    const Index cols = ex.network().size() / 2 - 1;
    Vec<S_> u = ladder_values<S_>(alpha, beta, cols);
    auto rep = boundary_sum_harmonic(ex, u, ladder_x(1));
    // The harmonic kernel itself as u.
    auto split = royden_split(ex, {ladder_x(1)}, RoydenOptions{});
    Vec<S_> h = Vec<S_>::Zero(ex.network().size());
    h.head(split.front().h.size()) = split.front().h;
    auto small = make_exhaustion<S_>(gen, RadiusSchedule::linear(1, 1, split.front().radius));
    nlohmann::json hj;
    try {
      hj = boundary_sum_harmonic(small, Vec<S_>(h.head(small.network().size())), ladder_x(1)).to_json();
    } catch (const Error& e) {
      hj = {{"error", e.what()}};
    }
    hj["energy_h"] = to_double(split.front().energy_h);
    return std::make_pair(rep, hj);
  });
  const bool sum_ok = std::abs(bsum.final_deviation) <= tol;

  // Boundary integral at x_2 in ONB coordinates.
  const Index x2 = ladder_x(2);
  auto sched = default_schedule(gen);
  const Precision prec = precision_for(gen, sched.expand().back());
  auto lh = ladder_harmonic(alpha, beta, 400);
  auto le = ladder_energy(lh);
  struct Coefs {
    Vec<double> u, h;
    double energy_h = 0.0;
    double target = 0.0;
    Index radius = 0;
  };
  Coefs cf = with_precision(prec, [&](auto tag) {
    using S_ = typename decltype(tag)::type;
    auto ex = make_exhaustion<S_>(gen, sched);
    auto b = build_onb(ex, N, SolverOptions{}, OnbOptions{}, prec.name());
    auto split = royden_split(ex, {x2}, RoydenOptions{});
    const Index cols = ex.network().size() / 2 - 1;
    Vec<S_> u = ladder_values<S_>(alpha, beta, cols);
    Coefs c;
    c.u = coefficients(b.onb, u);
    c.h = coefficients(b.onb, split.front().h);
    c.energy_h = to_double(split.front().energy_h);
    c.target = to_double(S_(u[x2] - u[0]));
    c.radius = split.front().radius;
    return c;
  });
  auto ens = sample_ensemble(N, S, seed);
  auto bi = boundary_integral_check(cf.u, cf.h, ens, cf.target, le.total.back(), cf.energy_h);
  r.pass = sum_ok && bi.pass;
  r.summary = "boundary sum at level " + std::to_string(levels) + ": deviation from 1/alpha " +
              sci(bsum.final_deviation) + " (tol " + sci(tol) + "); boundary integral at x_2: |est - target| " +
              sci(std::abs(bi.estimate - bi.target)) + " vs 4 stderr + tail " + sci(4 * bi.stderr_ + bi.tail_bound);
  r.detail = {{"boundary_sum", bsum.to_json()},
              {"boundary_sum_of_h", hsum},
              {"boundary_integral", bi.to_json()},
              {"onb_N", N},
              {"kernel_radius", cf.radius},
              {"energy_u", le.total.back()},
              {"energy_h", cf.energy_h},
              {"coeff_norm_u2", cf.u.squaredNorm()},
              {"coeff_norm_h2", cf.h.squaredNorm()}};
  r.seconds = sw.seconds();
  return r;
}

CheckResult check_paths(const NamedNetwork& nn, const std::string& a, const std::string& b,
                        const std::vector<Index>& radii, Index horizon, bool expect_equivalent, double path_tol,
                        double separation_tol) {
  Stopwatch sw;
  CheckResult r;
  r.name = "paths:" + nn.name;
  auto pa = path_for(nn.gen, a), pb = path_for(nn.gen, b);
  Graph g = materialize(nn.gen, horizon + 1);
  if (!check_path(g, pa, horizon) || !check_path(g, pb, horizon))
    throw Error(ErrorCode::InvalidParameters, "path is not a path to infinity up to the horizon");
  auto probes = compute_probes(nn.gen, radii, pa, pb, horizon);
  auto rep = path_equivalence(probes, path_tol, separation_tol);
  const Equivalence want = expect_equivalent ? Equivalence::Equivalent : Equivalence::Inequivalent;
  r.pass = rep.verdict == want;
  if (!expect_equivalent) r.pass = r.pass && rep.certified_by == "h_x1";
  std::string gaps;
  for (std::size_t i = 0; i < probes.names.size(); ++i)
    gaps += (i ? ", " : "") + probes.names[i] + " " + sci(rep.horizon_gaps[i].back());
  r.summary = a + " vs " + b + ": " + equivalence_name(rep.verdict) +
              (rep.certified_by.empty() ? "" : " (certified by " + rep.certified_by + ")") + "; gaps at horizon " +
              std::to_string(horizon) + ": " + gaps;
  r.detail = rep.to_json();
  r.seconds = sw.seconds();
  return r;
}

CheckResult check_walk(const std::vector<NamedNetwork>& nets, Index trials, std::uint64_t seed) {
  Stopwatch sw;
  CheckResult r;
  r.name = "walk-hitting";
  int total = 0, fails = 0;
  nlohmann::json per = nlohmann::json::object();
  WalkConfig cfg;
  cfg.trials = trials;
  cfg.seed = seed;
  for (const auto& nn : nets) {
    auto ex = finite_exhaustion(nn.gen);
    const auto& net = ex.network();
    nlohmann::json rows = nlohmann::json::array();
    for (Index x = 1; x < net.size(); ++x) {
      auto k = energy_kernel(ex, x, BoundaryCondition::Free);
      const double R = k.values[x];
      for (Index y = 0; y < net.size(); ++y) {
        auto h = hitting_probability_mc(net, y, x, 0, cfg);
        const double ref = k.values[y] / R;
        const bool ok = std::abs(h.estimate - ref) <= 4.0 * h.stderr_ || std::abs(h.estimate - ref) < 1e-12;
        ++total;
        if (!ok) ++fails;
        auto j = h.to_json();
        j["start"] = y;
        j["target"] = x;
        j["reference"] = ref;
        j["pass"] = ok;
        rows.push_back(j);
      }
    }
    per[nn.name] = rows;
  }
  r.pass = fails == 0;
  r.summary = std::to_string(total - fails) + "/" + std::to_string(total) +
              " (start, target) pairs within 4 stderr of v_x(y)/R(o,x) at " + std::to_string(trials) + " trials";
  r.detail = {{"trials", trials}, {"seed", seed}, {"per_network", per}};
  r.seconds = sw.seconds();
  return r;
}

CheckResult check_transience(const NamedNetwork& nn, bool expect_transient, const SolverOptions& sopt) {
  Stopwatch sw;
  CheckResult r;
  r.name = "transience:" + nn.name;
  auto sched = default_schedule(nn.gen, true);
  const Precision prec = precision_for(nn.gen, sched.expand().back());
  auto [t, rep] = with_precision(prec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(nn.gen, sched);
    auto m = monopole(ex, 0, sopt, prec.name());
    return std::make_pair(m.transience, m.report);
  });
  r.pass = t == (expect_transient ? Transience::Transient : Transience::Recurrent);
  const double last = rep.values.empty() ? NAN : rep.values.back();
  r.summary = std::string(transience_name(t)) + " by rule " + rep.stopping_rule + " after " +
              std::to_string(rep.values.size()) + " levels, energy(w_o) " +
              (rep.converged ? "-> " + std::to_string(rep.limit) : "= " + std::to_string(last));
  r.detail = rep.to_json();
  r.seconds = sw.seconds();
  return r;
}

}  // namespace resbdy
