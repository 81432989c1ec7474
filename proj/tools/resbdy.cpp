// resbdy: command-line front end. Reports are JSON on stdout (or files under
// --out); exit 0 on pass, 2 on a failed check, 1 on usage or solver errors.

#include "resbdy/boundary.hpp"
#include "resbdy/ladder.hpp"
#include "resbdy/onb.hpp"
#include "resbdy/report.hpp"
#include "resbdy/royden.hpp"
#include "resbdy/suites.hpp"
#include "resbdy/walk.hpp"
#include "resbdy/wiener.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>

using namespace resbdy;
using nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kUsage = 1;
constexpr int kFail = 2;

struct Args {
  RunConfig cfg;
  std::string x, y, start, target;
  std::string bc = "free";
  std::string compare_schedule;
  Index radius = 3;
  Index levels = 30;
  Index trials = 100000;
  std::string check;
  std::string path_a, path_b;
  std::vector<Index> radii;
  Index horizon = 200;
  std::string expect;
  int pairs = 10;
  double tol = 1e-3;
  std::string u_source;
};

SolverOptions solver_options(const RunConfig& c) { return {c.tol_limit, c.divergence_threshold, c.residual_tol}; }

RoydenOptions royden_options(const RunConfig& c) { return {solver_options(c), c.harm_tol}; }

RadiusSchedule schedule_for(const RunConfig& c, const NetworkGenerator& gen, bool monopole = false) {
  return c.schedule.empty() ? default_schedule(gen, monopole) : RadiusSchedule::parse(c.schedule);
}

BoundaryCondition parse_bc(const std::string& s) {
  if (s == "free") return BoundaryCondition::Free;
  if (s == "wired") return BoundaryCondition::Wired;
  throw Error(ErrorCode::UsageError, "--bc must be free or wired");
}

Index vertex_arg(const NetworkGenerator& gen, const Graph& g, const std::string& text, Index fallback) {
  return text.empty() ? fallback : parse_vertex(gen, g, text);
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class S>
json vertex_values(const NetworkGenerator& gen, const Graph& g, const Vec<S>& v, Index radius) {
  json out = json::array();
  const Index n = std::min<Index>(v.size(), g.ball_size(radius));
  for (Index i = 0; i < n; ++i) out.push_back({{"vertex", vertex_name(gen, g, i)}, {"value", to_double(v[i])}});
  return out;
}

std::string levels_csv(const ConvergenceReport& r) {
  std::string s = "radius,size,value,log10_defect,residual\n";
  for (std::size_t i = 0; i < r.values.size(); ++i)
    s += std::to_string(r.radii[i]) + "," + std::to_string(r.sizes[i]) + "," + num(r.values[i]) + "," +
         num(r.log10_defect[i]) + "," + num(r.residuals[i]) + "\n";
  return s;
}

template <class S>
std::string matrix_csv(const Mat<S>& m) {
  std::string s;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) s += (j ? "," : "") + num(to_double(S(m(i, j))));
    s += "\n";
  }
  return s;
}

// JSON report, plus CSV tables when writing to a directory or when --format
// csv asks for them on stdout.
int finish(const Args& a, const std::string& command, bool pass, json result,
           const std::vector<std::pair<std::string, std::string>>& tables = {}) {
  const auto report = make_report(command, a.cfg, pass, std::move(result));
  if (!a.cfg.out_dir.empty()) {
    emit(a.cfg, command + ".json", report);
    for (const auto& [name, text] : tables) emit_text(a.cfg, name, text);
  } else if (a.cfg.format == "csv" && !tables.empty()) {
    for (const auto& [name, text] : tables) std::cout << (tables.size() > 1 ? "# " + name + "\n" : "") << text;
  } else {
    emit(a.cfg, command + ".json", report);
  }
  return pass ? kPass : kFail;
}

int cmd_generate(const Args& a) {
  const auto gen = a.cfg.generator();
  const auto net = generate_ball<double>(gen, a.radius);
  const Graph& g = net.graph();
  json vs = json::array(), es = json::array(), order = json::array();
  for (Index v = 0; v < g.size(); ++v)
    vs.push_back({{"index", v}, {"name", vertex_name(gen, g, v)}, {"radius", g.radius(v)}});
  for (auto& [u, v, c] : net.edges()) es.push_back({u, v, c});
  for (Index v : enumerate_vertices(g)) order.push_back(vertex_name(gen, g, v));
  std::string csv = "u,v,c\n";
  for (auto& [u, v, c] : net.edges()) csv += std::to_string(u) + "," + std::to_string(v) + "," + num(c) + "\n";
  return finish(a, "generate", true,
                {{"spec", gen.to_json()},
                 {"radius", gen.is_finite() ? g.max_radius() : a.radius},
                 {"vertices", g.size()},
                 {"edges", g.edge_count()},
                 {"vertex_list", vs},
                 {"edge_list", es},
                 {"enumeration", order}},
                {{"edges.csv", csv}});
}

int cmd_kernel(const Args& a) {
  const auto gen = a.cfg.generator();
  const auto sched = schedule_for(a.cfg, gen);
  const Index rmax = sched.expand().back();
  const Graph g = materialize(gen, rmax);
  const Index x = vertex_arg(gen, g, a.x, default_vertex(gen));
  const auto bc = parse_bc(a.bc);
  const Precision prec = precision_for(gen, rmax);
  auto [res, csv] = with_precision(prec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(gen, sched);
    auto k = energy_kernel(ex, x, bc, solver_options(a.cfg), prec.name());
    json j = {{"x", vertex_name(gen, g, x)},
              {"bc", bc_name(bc)},
              {"schedule", sched.to_string()},
              {"precision", prec.name()},
              {"radius", k.radius},
              {"report", k.report.to_json()},
              {"values", vertex_values(gen, ex.network().graph(), k.values, a.radius)}};
    return std::make_pair(j, levels_csv(k.report));
  });
  const bool pass = res["report"]["converged"].get<bool>();
  return finish(a, "kernel", pass, res, {{"kernel_levels.csv", csv}});
}

int cmd_resist(const Args& a) {
  const auto gen = a.cfg.generator();
  const auto sched = schedule_for(a.cfg, gen);
  const Index rmax = sched.expand().back();
  const Graph g = materialize(gen, rmax);
  const Index x = vertex_arg(gen, g, a.x, default_vertex(gen));
  const Index y = vertex_arg(gen, g, a.y, 0);
  const auto bc = parse_bc(a.bc);
  const Precision prec = precision_for(gen, rmax);
  auto [res, csv] = with_precision(prec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(gen, sched);
    auto r = effective_resistance(ex, x, y, bc, solver_options(a.cfg), prec.name());
    json j = {{"x", vertex_name(gen, g, x)},
              {"y", vertex_name(gen, g, y)},
              {"bc", bc_name(bc)},
              {"schedule", sched.to_string()},
              {"precision", prec.name()},
              {"value", r.value},
              {"report", r.report.to_json()}};
    if (!a.compare_schedule.empty() && y == 0) {
      auto ind = exhaustion_independence<S>(gen, x, bc, sched, RadiusSchedule::parse(a.compare_schedule),
                                            solver_options(a.cfg));
      j["independence"] = ind.to_json();
    }
    return std::make_pair(j, levels_csv(r.report));
  });
  if (!a.compare_schedule.empty() && !res.contains("independence"))
    throw Error(ErrorCode::UsageError, "--compare-schedule needs --y o");
  bool pass = res["report"]["converged"].get<bool>();
  if (res.contains("independence")) pass = pass && res["independence"]["agree"].get<bool>();
  return finish(a, "resist", pass, res, {{"resist_levels.csv", csv}});
}

int cmd_monopole(const Args& a) {
  const auto gen = a.cfg.generator();
  const auto sched = schedule_for(a.cfg, gen, true);
  const Index rmax = sched.expand().back();
  const Graph g = materialize(gen, rmax);
  const Index x = vertex_arg(gen, g, a.x, 0);
  const Precision prec = precision_for(gen, rmax);
  auto [res, csv] = with_precision(prec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(gen, sched);
    auto m = monopole(ex, x, solver_options(a.cfg), prec.name());
    json j = {{"x", vertex_name(gen, g, x)},
              {"schedule", sched.to_string()},
              {"precision", prec.name()},
              {"transience", transience_name(m.transience)},
              {"report", m.report.to_json()}};
    return std::make_pair(j, levels_csv(m.report));
  });
  const bool pass = res["transience"].get<std::string>() != "inconclusive";
  return finish(a, "monopole", pass, res, {{"monopole_levels.csv", csv}});
}

Transience triage(const Args& a, const NetworkGenerator& gen) {
  if (gen.is_finite()) return Transience::Inconclusive;
  const auto sched = default_schedule(gen, true);
  const Precision prec = precision_for(gen, sched.expand().back());
  return with_precision(prec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(gen, sched);
    return monopole(ex, 0, solver_options(a.cfg), prec.name()).transience;
  });
}

int cmd_decompose(const Args& a) {
  const auto gen = a.cfg.generator();
  const auto sched = schedule_for(a.cfg, gen);
  const Index rmax = sched.expand().back();
  const Graph g = materialize(gen, rmax);
  const Index x = vertex_arg(gen, g, a.x, default_vertex(gen));
  const Transience t = triage(a, gen);
  const Precision prec = precision_for(gen, rmax);
  json res = with_precision(prec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(gen, sched);
    auto s = royden_split(ex, {x}, royden_options(a.cfg), t, prec.name()).front();
    json j = s.to_json();
    j["x"] = vertex_name(gen, g, x);
    return j;
  });
  res["triage"] = transience_name(t);
  res["precision"] = prec.name();
  res["schedule"] = sched.to_string();
  const bool pass = res["harm_residual_max"].get<double>() <= a.cfg.harm_tol &&
                    res["report_v"]["converged"].get<bool>() && res["pythagoras_rel"].get<double>() <= a.cfg.harm_tol;
  return finish(a, "decompose", pass, res);
}

int cmd_onb(const Args& a) {
  const auto gen = a.cfg.generator();
  const auto sched = schedule_for(a.cfg, gen);
  const Precision prec = precision_for(gen, sched.expand().back());
  OnbOptions oopt;
  oopt.degeneracy_tol = a.cfg.degeneracy_tol;
  std::vector<std::pair<std::string, std::string>> tables;
  json res = with_precision(prec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(gen, sched);
    auto b = build_onb(ex, a.cfg.N, solver_options(a.cfg), oopt, prec.name());
    const Graph& g = ex.network().graph();
    json pts = json::array();
    for (Index p : b.onb.points) pts.push_back(vertex_name(gen, g, p));
    tables = {{"onb_M.csv", matrix_csv(b.onb.M)}, {"onb_E.csv", matrix_csv(b.onb.E)}, {"onb_V.csv", matrix_csv(b.onb.V)}};
    return json{{"N", a.cfg.N},
                {"points", pts},
                {"kernels_converged", b.batch.all_converged()},
                {"radius", b.batch.radius},
                {"identities", onb_identities(b.onb).to_json()}};
  });
  res["precision"] = prec.name();
  res["schedule"] = sched.to_string();
  const auto& id = res["identities"];
  const double tol = 1e-7;
  bool pass = res["kernels_converged"].get<bool>();
  for (const char* k : {"M_vs_laplacian", "E_vs_evaluation", "EEt_vs_V", "kronecker_sum"})
    pass = pass && id[k].get<double>() <= tol;
  pass = pass && id["orthonormality"].get<double>() <= 1e-9;
  res["tol"] = tol;
  return finish(a, "onb", pass, res, tables);
}

int cmd_gauss_green(const Args& a) {
  const auto gen = a.cfg.generator();
  const auto sched = gen.is_finite() ? default_schedule(gen) : RadiusSchedule::linear(1, 1, a.levels);
  auto ex = make_exhaustion<double>(gen, sched);
  const auto& net = ex.network();
  std::vector<Index> sizes, radii;
  for (std::size_t k = 0; k < ex.sizes.size(); ++k)
    if (sizes.empty() || ex.sizes[k] != sizes.back()) {
      sizes.push_back(ex.sizes[k]);
      radii.push_back(ex.radii[k]);
    }
  std::mt19937_64 rng(a.cfg.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double worst = 0.0, worst_full = 0.0;
  json first;
  std::string csv = "radius,size,interior,boundary,total,level_energy,level_deviation\n";
  for (int p = 0; p < a.pairs; ++p) {
    Vec<double> u(net.size()), v(net.size());
    for (Index i = 0; i < net.size(); ++i) u[i] = uni(rng);
    for (Index i = 0; i < net.size(); ++i) v[i] = uni(rng);
    auto rep = gauss_green_verify(net, u, v, sizes, radii);
    for (const auto& l : rep.levels) worst = std::max(worst, l.level_deviation / (1.0 + std::abs(l.level_energy)));
    if (gen.is_finite()) worst_full = std::max(worst_full, rep.levels.back().deviation / (1.0 + std::abs(rep.target)));
    if (p == 0) {
      first = rep.to_json();
      for (const auto& l : rep.levels)
        csv += std::to_string(l.radius) + "," + std::to_string(l.size) + "," + num(l.interior) + "," +
               num(l.boundary) + "," + num(l.total) + "," + num(l.level_energy) + "," + num(l.level_deviation) + "\n";
    }
  }
  const double tol = 1e-10;
  const bool pass = worst <= tol && worst_full <= tol;
  return finish(a, "gauss-green", pass,
                {{"pairs", a.pairs},
                 {"windows", sizes.size()},
                 {"max_relative_window_deviation", worst},
                 {"max_relative_full_deviation", gen.is_finite() ? json(worst_full) : json(nullptr)},
                 {"tol", tol},
                 {"first_pair", first}},
                {{"gauss_green_levels.csv", csv}});
}

int cmd_boundary_sum(const Args& a) {
  const auto gen = a.cfg.generator();
  const auto sched = a.cfg.schedule.empty() ? RadiusSchedule::linear(1, 1, a.levels) : RadiusSchedule::parse(a.cfg.schedule);
  const Index rmax = sched.expand().back();
  const Graph g = materialize(gen, rmax);
  const Index x = vertex_arg(gen, g, a.x, default_vertex(gen));
  const std::string src = a.u_source.empty() ? (gen.family == Family::Ladder ? "ladder" : "harm") : a.u_source;
  if (src == "ladder" && gen.family != Family::Ladder)
    throw Error(ErrorCode::UsageError, "--u ladder needs the ladder network");
  if (src != "ladder" && src != "harm") throw Error(ErrorCode::UsageError, "--u must be ladder or harm");
  const Precision prec = precision_for(gen, rmax);
  auto [res, csv] = with_precision(prec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(gen, sched);
    BoundarySumReport rep;
    if (src == "ladder") {
      const Index cols = ex.network().size() / 2 - 1;
      rep = boundary_sum_harmonic(ex, ladder_values<S>(gen.alpha, gen.beta, cols), x, royden_options(a.cfg));
    } else {
      // u is the harmonic kernel at x, harmonic inside its own final level.
      auto s = royden_split(ex, {x}, royden_options(a.cfg)).front();
      std::vector<Index> rs;
      for (Index r : ex.radii)
        if (r <= s.radius) rs.push_back(r);
      auto small = make_exhaustion<S>(gen, RadiusSchedule::explicit_radii(rs));
      Vec<S> h = Vec<S>::Zero(small.network().size());
      const Index m = std::min<Index>(h.size(), s.h.size());
      h.head(m) = s.h.head(m);
      rep = boundary_sum_harmonic(small, h, x, royden_options(a.cfg));
    }
    std::string t = "radius,size,level_sum,interior,fixed_kernel_sum,deviation\n";
    for (const auto& l : rep.levels)
      t += std::to_string(l.radius) + "," + std::to_string(l.size) + "," + num(l.level_sum) + "," + num(l.interior) +
           "," + num(l.fixed_kernel) + "," + num(l.deviation) + "\n";
    json j = rep.to_json();
    j["x"] = vertex_name(gen, ex.network().graph(), x);
    return std::make_pair(j, t);
  });
  res["u"] = src;
  res["precision"] = prec.name();
  res["tol"] = a.tol;
  const bool pass = std::abs(res["final_deviation"].get<double>()) <= a.tol;
  return finish(a, "boundary-sum", pass, res, {{"boundary_sum_levels.csv", csv}});
}

std::pair<std::string, std::string> default_paths(const NetworkGenerator& gen) {
  switch (gen.family) {
    case Family::Ladder: return {"x-rail", "y-rail"};
    case Family::Lattice: return {"positive", "negative"};
    case Family::BinaryTree: return {"leftmost", "rightmost"};
    default: throw Error(ErrorCode::UsageError, "no default pair of paths on family " + gen.family_name());
  }
}

int cmd_paths(const Args& a) {
  const auto gen = a.cfg.generator();
  auto [da, db] = default_paths(gen);
  const auto pa = path_for(gen, a.path_a.empty() ? da : a.path_a);
  const auto pb = path_for(gen, a.path_b.empty() ? db : a.path_b);
  std::vector<Index> radii = a.radii;
  if (radii.empty())
    radii = gen.family == Family::Ladder && gen.beta == 1.0 ? std::vector<Index>{1024, 2048, 4096, 8192}
                                                           : std::vector<Index>{256, 512};
  const Graph g = materialize(gen, a.horizon + 1);
  for (const auto* p : {&pa, &pb})
    if (!check_path(g, *p, a.horizon))
      throw Error(ErrorCode::InvalidParameters, p->name + " is not a path to infinity up to the horizon");
  auto probes = compute_probes(gen, radii, pa, pb, a.horizon, solver_options(a.cfg));
  auto rep = path_equivalence(probes, a.cfg.path_tol, a.cfg.separation_tol);
  json res = rep.to_json();
  // Boundary values h(p_H) - h(o) on the deepest level, per probe and path.
  json bv = json::object();
  const auto& deep = probes.levels.back();
  const Index H = a.horizon;
  for (std::size_t i = 0; i < probes.names.size(); ++i) {
    json per = json::object();
    for (int side = 0; side < 2; ++side) {
      const auto& vals = side == 0 ? deep.along_a[i] : deep.along_b[i];
      const double est = vals[H] - vals[0];
      double spread = 0.0;
      for (Index n = H / 2; n <= H; ++n) spread = std::max(spread, std::abs(vals[n] - vals[0] - est));
      per[side == 0 ? pa.name : pb.name] = {{"estimate", est}, {"spread", spread}, {"stabilized", spread <= a.cfg.path_tol}};
    }
    bv[probes.names[i]] = per;
  }
  res["boundary_values"] = bv;
  bool pass = rep.verdict != Equivalence::Inconclusive;
  if (!a.expect.empty()) {
    if (a.expect != "equivalent" && a.expect != "inequivalent")
      throw Error(ErrorCode::UsageError, "--expect must be equivalent or inequivalent");
    res["expected"] = a.expect;
    pass = a.expect == equivalence_name(rep.verdict);
  }
  std::string csv = "radius,probe,gap_at_horizon\n";
  for (std::size_t k = 0; k < probes.levels.size(); ++k)
    for (std::size_t i = 0; i < probes.names.size(); ++i)
      csv += std::to_string(probes.levels[k].radius) + "," + probes.names[i] + "," + num(rep.horizon_gaps[i][k]) + "\n";
  return finish(a, "paths", pass, res, {{"paths_gaps.csv", csv}});
}

Vec<double> random_coefficients(Index N, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x75u);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec<double> u(N);
  for (Index n = 0; n < N; ++n) u[n] = normal(rng) / std::sqrt(static_cast<double>(N));
  return u;
}

int cmd_wiener(const Args& a) {
  const auto& c = a.cfg;
  if (a.check == "minlos") {
    auto ens = sample_ensemble(c.N, c.samples, c.seed);
    Vec<double> u = random_coefficients(c.N, c.seed);
    auto r = minlos_check(u, ens);
    json j = r.to_json();
    j["estimate"] = r.estimate.real();
    j["norm2"] = u.squaredNorm();
    return finish(a, "wiener", r.pass, j);
  }
  if (a.check == "moments") {
    auto ens = sample_ensemble(c.N, c.samples, c.seed);
    Vec<double> u = random_coefficients(c.N, c.seed);
    std::vector<MomentResult> ms = {moment_check(u, ens, 1), normalized_moment_check(u, ens, 2),
                                    odd_moment_check(u, ens, 1), odd_moment_check(u, ens, 3)};
    const char* names[] = {"second", "fourth_normalized", "first", "third"};
    json j = {{"norm2", u.squaredNorm()}};
    bool pass = true;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      j[names[i]] = ms[i].to_json();
      pass = pass && ms[i].pass;
    }
    return finish(a, "wiener", pass, j);
  }
  if (a.check == "resistance") {
    const auto fin = ball_generator(c.generator(), a.radius);
    auto ex = make_exhaustion<double>(fin, default_schedule(fin));
    const auto& net = ex.network();
    const Graph& g = net.graph();
    const Index x = vertex_arg(fin, g, a.x, enumerate_vertices(g).at(0));
    const Index y = vertex_arg(fin, g, a.y, 0);
    const Index N = net.size() - 1;
    auto b = build_onb(ex, N, solver_options(c));
    auto coef = [&](Index v) {
      if (v == 0) return Vec<double>(Vec<double>::Zero(N));
      for (Index i = 0; i < N; ++i)
        if (b.onb.points[i] == v) return coefficients(b.onb, b.onb.kernels.col(i));
      throw Error(ErrorCode::InvalidParameters, "vertex outside the ONB");
    };
    auto ens = sample_ensemble(N, c.samples, c.seed);
    const double target = effective_resistance(ex, x, y, BoundaryCondition::Free, solver_options(c)).value;
    auto r = resistance_via_expectation(coef(x), coef(y), ens, target, 1e-2);
    json j = r.to_json();
    j["estimate"] = r.square_estimate;
    j["stderr"] = r.square_stderr;
    j["x"] = vertex_name(fin, g, x);
    j["y"] = vertex_name(fin, g, y);
    j["vertices"] = net.size();
    return finish(a, "wiener", r.square_pass && r.exp_pass, j);
  }
  if (a.check == "boundary") {
    const auto gen = c.generator();
    if (gen.family != Family::Ladder) throw Error(ErrorCode::UsageError, "--check boundary needs the ladder network");
    auto r = check_boundary(gen.alpha, gen.beta, a.levels, c.N, c.samples, c.seed);
    json j = r.detail["boundary_integral"];
    j["onb_N"] = c.N;
    j["kernel_radius"] = r.detail["kernel_radius"];
    j["energy_u"] = r.detail["energy_u"];
    j["energy_h"] = r.detail["energy_h"];
    return finish(a, "wiener", j["pass"].get<bool>(), j);
  }
  throw Error(ErrorCode::UsageError, "--check must be minlos, moments, resistance or boundary");
}

int cmd_ladder(const Args& a) {
  const double al = a.cfg.alpha, be = a.cfg.beta;
  const Index N = a.cfg.N;
  auto lh = ladder_harmonic(al, be, N);
  auto en = ladder_energy(lh, a.cfg.tol_limit);
  auto bd = du_bound_check(lh);
  const bool u1 = static_cast<double>(lh.u[1]) == 1.0 / al;
  bool increasing = true;
  for (auto d : lh.du) increasing = increasing && d > 0.0L;
  const double res = lh.max_residual();
  std::string csv = "n,u,du,partial_energy\n";
  const std::size_t rows = std::min(lh.du.size(), en.total.size());
  for (std::size_t n = 0; n < rows; ++n)
    csv += std::to_string(n) + "," + num(static_cast<double>(lh.u[n])) + "," + num(static_cast<double>(lh.du[n])) +
           "," + num(en.total[n]) + "\n";
  json j = {{"alpha", al},
            {"beta", be},
            {"N", N},
            {"u1", static_cast<double>(lh.u[1])},
            {"u1_is_inverse_alpha", u1},
            {"max_residual", res},
            {"strictly_increasing", increasing},
            {"energy", en.to_json()},
            {"bound_violations", bd.violations},
            {"bound_worst_ratio", bd.worst_ratio},
            {"transitions_n1", ladder_vs_halfline_transitions(al, be, 1).to_json()}};
  const bool pass = u1 && res <= 1e-9 && increasing && bd.violations == 0;
  return finish(a, "ladder", pass, j, {{"ladder.csv", csv}});
}

int cmd_walk(const Args& a) {
  const auto gen = a.cfg.generator();
  const auto bc = parse_bc(a.bc);
  const Index r = std::max<Index>(a.radius, 1);
  Network host = gen.is_finite() ? generate_ball<double>(gen, 1) : generate_ball<double>(gen, r + 1);
  const Graph& hg = host.graph();
  const Index n = gen.is_finite() ? host.size() : hg.ball_size(r);
  if (a.target.empty()) throw Error(ErrorCode::UsageError, "--target is required");
  const Index start = vertex_arg(gen, hg, a.start, 0);
  const Index target = vertex_arg(gen, hg, a.target, 0);
  if (start >= n || target >= n) throw Error(ErrorCode::InvalidParameters, "start or target outside G_k");
  if (target == 0) throw Error(ErrorCode::InvalidParameters, "target must differ from o");
  // G_k^F or G_k^W as a finite network, relabelled by host index.
  Network window;
  std::vector<Index> map(static_cast<std::size_t>(n));
  if (bc == BoundaryCondition::Wired) {
    std::tie(window, map) = wired_network(host, n);
  } else {
    window = gen.is_finite() ? host : generate_ball<double>(gen, r);
    for (Index v = 0; v < n; ++v) map[v] = v;
  }
  const auto fin = finite_generator(window);
  auto ex = make_exhaustion<double>(fin, default_schedule(fin));
  const auto& net = ex.network();
  const Index s = *net.graph().index_of(map[start]);
  const Index t = *net.graph().index_of(map[target]);
  auto k = energy_kernel(ex, t, BoundaryCondition::Free, solver_options(a.cfg));
  const double reference = k.values[s] / k.values[t];
  WalkConfig wc;
  wc.trials = a.trials;
  wc.seed = a.cfg.seed;
  auto h = hitting_probability_mc(net, s, t, 0, wc);
  const double err = std::abs(h.estimate - reference);
  const bool pass = err <= 4.0 * h.stderr_ || err < 1e-12;
  json j = h.to_json();
  j["reference"] = reference;
  j["pass"] = pass;
  j["start"] = vertex_name(gen, hg, start);
  j["target"] = vertex_name(gen, hg, target);
  j["bc"] = bc_name(bc);
  j["radius"] = gen.is_finite() ? hg.max_radius() : r;
  j["walk_vertices"] = net.size();
  return finish(a, "walk", pass, j);
}

int cmd_verify_all(const Args& a) {
  const auto& c = a.cfg;
  const auto gen = c.generator();
  const NamedNetwork nn{c.network, gen};
  const NamedNetwork ball{gen.is_finite() ? c.network : "ball-3", ball_generator(gen, 3)};
  const NamedNetwork small{gen.is_finite() ? c.network : "ball-1", ball_generator(gen, 1)};
  const SolverOptions sopt = solver_options(c);
  const Index ball_vertices = make_exhaustion<double>(ball.gen, default_schedule(ball.gen)).network().size();
  std::vector<std::pair<std::string, std::function<CheckResult()>>> suites = {
      {"reproducing", [&] { return check_reproducing({ball}, 10, c.seed); }},
      {"gauss-green", [&] { return check_gauss_green({ball}, 20, c.seed); }},
      {"onb", [&] { return check_onb(nn, gen.is_finite() ? std::min(c.N, ball_vertices - 1) : c.N, sopt); }},
      {"royden", [&] { return check_royden(nn, std::nullopt, c.harm_tol, c.harm_tol, sopt); }},
      {"wiener", [&] { return check_wiener(c.N, c.samples, c.seed, 3); }},
      {"resistance-mc", [&] { return check_resistance_mc({small}, c.samples, c.seed); }},
      {"walk", [&] { return check_walk({small}, std::min<Index>(c.samples, 20000), c.seed); }},
  };
  if (!gen.is_finite())
    suites.emplace_back("transience", [&] {
      CheckResult r;
      r.name = "transience:" + nn.name;
      const Transience t = triage(a, gen);
      r.pass = t != Transience::Inconclusive;
      r.summary = transience_name(t);
      r.detail = {{"triage", transience_name(t)}};
      return r;
    });
  if (gen.family == Family::Ladder) {
    suites.emplace_back("ladder", [&] { return check_ladder(gen.alpha, gen.beta, 200, 1e-9, c.tol_limit); });
    if (gen.beta < 1.0)
      suites.emplace_back("boundary", [&] { return check_boundary(gen.alpha, gen.beta, 30, 40, c.samples, c.seed); });
    suites.emplace_back("paths", [&] {
      const bool eq = gen.beta == 1.0;
      const auto radii = eq ? std::vector<Index>{1024, 2048, 4096, 8192} : std::vector<Index>{256, 512};
      return check_paths(nn, "x-rail", "y-rail", radii, 200, eq, c.path_tol, c.separation_tol);
    });
  }
  json checks = json::array();
  int passed = 0;
  for (auto& [name, run] : suites) {
    CheckResult r;
    try {
      r = run();
    } catch (const Error& e) {
      r.name = name;
      r.pass = false;
      r.summary = e.what();
      r.detail = {{"error", e.what()}, {"code", static_cast<int>(e.code())}};
    }
    if (r.pass) ++passed;
    json j = r.to_json();
    j["suite"] = name;
    checks.push_back(j);
  }
  const int total = static_cast<int>(suites.size());
  return finish(a, "verify-all", passed == total, {{"passed", passed}, {"total", total}, {"checks", checks}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Potential theory on infinite weighted networks"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Args a;
  auto& c = a.cfg;
  app.add_option("--network", c.network, "network: JSON file, inline JSON, preset or family name")->capture_default_str();
  app.add_option("--alpha", c.alpha, "family parameter alpha")->capture_default_str();
  app.add_option("--beta", c.beta, "family parameter beta")->capture_default_str();
  app.add_option("--dim", c.dim, "lattice dimension")->capture_default_str();
  app.add_option("--schedule", c.schedule, "radius schedule: linear:s:d:n, geometric:s:f:n or explicit:r1,r2,...");
  app.add_option("--tol-limit", c.tol_limit, "relative stopping tolerance")->capture_default_str();
  app.add_option("--harm-tol", c.harm_tol, "Laplacian residual tolerance for harmonic parts")->capture_default_str();
  app.add_option("--path-tol", c.path_tol, "path equivalence tolerance")->capture_default_str();
  app.add_option("--separation-tol", c.separation_tol, "path separation tolerance")->capture_default_str();
  app.add_option("--degeneracy-tol", c.degeneracy_tol, "smallest admissible Gram pivot")->capture_default_str();
  app.add_option("--divergence-threshold", c.divergence_threshold, "monopole divergence threshold")
      ->capture_default_str();
  app.add_option("--residual-tol", c.residual_tol, "relative solver residual bound")->capture_default_str();
  app.add_option("--N", c.N, "truncation N")->capture_default_str();
  app.add_option("--samples", c.samples, "Monte Carlo samples S")->capture_default_str();
  app.add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  app.add_option("--out", c.out_dir, "output directory for report files");
  app.add_option("--format", c.format, "stdout format: json or csv")->capture_default_str();

  std::map<std::string, std::function<int(const Args&)>> commands;
  auto sub = [&](const std::string& name, const std::string& help, std::function<int(const Args&)> fn) {
    commands[name] = std::move(fn);
    return app.add_subcommand(name, help);
  };
  auto* gen = sub("generate", "materialize a ball and list vertices and edges", cmd_generate);
  gen->add_option("--radius", a.radius, "ball radius")->capture_default_str();
  auto* ker = sub("kernel", "energy kernel v_x (free) or f_x (wired)", cmd_kernel);
  ker->add_option("--x", a.x, "vertex");
  ker->add_option("--bc", a.bc, "free or wired")->capture_default_str();
  ker->add_option("--radius", a.radius, "radius of the listed values")->capture_default_str();
  auto* res = sub("resist", "effective resistance R(x, y)", cmd_resist);
  res->add_option("--x", a.x, "vertex");
  res->add_option("--y", a.y, "vertex (default o)");
  res->add_option("--bc", a.bc, "free or wired")->capture_default_str();
  res->add_option("--compare-schedule", a.compare_schedule, "second schedule; both must agree (y = o only)");
  auto* mon = sub("monopole", "wired monopole energies and transience triage", cmd_monopole);
  mon->add_option("--x", a.x, "vertex (default o)");
  auto* dec = sub("decompose", "split v_x = f_x + h_x", cmd_decompose);
  dec->add_option("--x", a.x, "vertex");
  sub("onb", "Gram-Schmidt ONB with M, E, V tables and identity checks", cmd_onb);
  auto* gg = sub("gauss-green", "interior plus boundary split of the energy on prefix windows", cmd_gauss_green);
  gg->add_option("--pairs", a.pairs, "random (u, v) pairs")->capture_default_str();
  gg->add_option("--levels", a.levels, "windows on infinite networks")->capture_default_str();
  auto* bs = sub("boundary-sum", "boundary sums of a harmonic u against h_x", cmd_boundary_sum);
  bs->add_option("--x", a.x, "vertex");
  bs->add_option("--levels", a.levels, "levels 1..levels")->capture_default_str();
  bs->add_option("--u", a.u_source, "ladder (explicit solution) or harm (h_x itself)");
  bs->add_option("--tol", a.tol, "final-level deviation tolerance")->capture_default_str();
  auto* pt = sub("paths", "equivalence of two paths to infinity", cmd_paths);
  pt->add_option("--a", a.path_a, "first path");
  pt->add_option("--b", a.path_b, "second path");
  pt->add_option("--radii", a.radii, "probe radii")->delimiter(',');
  pt->add_option("--horizon", a.horizon, "path prefix length")->capture_default_str();
  pt->add_option("--expect", a.expect, "equivalent or inequivalent");
  auto* wi = sub("wiener", "Monte Carlo checks in ONB coordinates", cmd_wiener);
  wi->add_option("--check", a.check, "minlos, moments, resistance or boundary")->required();
  wi->add_option("--x", a.x, "vertex for --check resistance");
  wi->add_option("--y", a.y, "vertex for --check resistance (default o)");
  wi->add_option("--radius", a.radius, "ball radius for --check resistance")->capture_default_str();
  wi->add_option("--levels", a.levels, "boundary-sum levels for --check boundary")->capture_default_str();
  sub("ladder", "explicit harmonic function on the ladder", cmd_ladder);
  auto* wk = sub("walk", "Monte Carlo hitting probability P_start[hit target before o]", cmd_walk);
  wk->add_option("--start", a.start, "start vertex (default o)");
  wk->add_option("--target", a.target, "target vertex")->required();
  wk->add_option("--trials", a.trials, "walks")->capture_default_str();
  wk->add_option("--bc", a.bc, "free (G_k) or wired (G_k^W)")->capture_default_str();
  wk->add_option("--radius", a.radius, "k for infinite networks")->capture_default_str();
  sub("verify-all", "run every invariant suite on the network", cmd_verify_all);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }
  try {
    c.validate();
    if (a.trials < 1 || a.pairs < 1 || a.levels < 1 || a.horizon < 1)
      throw Error(ErrorCode::UsageError, "counts must be positive");
    const std::string name = app.get_subcommands().front()->get_name();
    return commands.at(name)(a);
  } catch (const Error& e) {
    std::cerr << json{{"schema", "1"}, {"error", error_name(e.code())}, {"code", static_cast<int>(e.code())},
                      {"message", e.what()}}
                     .dump()
              << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << json{{"schema", "1"}, {"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return kUsage;
  }
}
