#include "resbdy/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace resbdy {

nlohmann::json GaussGreenReport::to_json() const {
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& l : levels)
    lv.push_back({{"radius", l.radius},
                  {"size", l.size},
                  {"interior", l.interior},
                  {"boundary", l.boundary},
                  {"total", l.total},
                  {"level_energy", l.level_energy},
                  {"level_deviation", l.level_deviation},
                  {"deviation", l.deviation}});
  return {{"target", target}, {"max_level_deviation", max_level_deviation}, {"levels", lv}};
}

nlohmann::json BoundarySumReport::to_json() const {
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& l : levels)
    lv.push_back({{"radius", l.radius},
                  {"size", l.size},
                  {"level_sum", l.level_sum},
                  {"interior", l.interior},
                  {"fixed_kernel_sum", l.fixed_kernel},
                  {"deviation", l.deviation}});
  return {{"x", x},
          {"target", target},
          {"harmonic_residual", harmonic_residual},
          {"final_deviation", final_deviation},
          {"levels", lv}};
}

std::vector<Index> PathToInfinity::prefix(Index length) const {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(length + 1));
  for (Index n = 0; n <= length; ++n) out.push_back(at(n));
  return out;
}

PathToInfinity path_for(const NetworkGenerator& gen, const std::string& name) {
  switch (gen.family) {
    case Family::Ladder:
      if (name == "x-rail") return {name, [](Index n) { return ladder_x(n); }};
      if (name == "y-rail") return {name, [](Index n) { return n == 0 ? Index(0) : ladder_y(n - 1); }};
      break;
    case Family::GeometricHalfLine:
      if (name == "ray") return {name, [](Index n) { return n; }};
      break;
    case Family::Lattice:
      if (gen.dim == 1 && name == "positive") return {name, [](Index n) { return 2 * n; }};
      if (gen.dim == 1 && name == "negative") return {name, [](Index n) { return n == 0 ? 0 : 2 * n - 1; }};
      break;
    case Family::BinaryTree:
      if (name == "leftmost") return {name, [](Index n) { return (Index(1) << n) - 1; }};
      if (name == "rightmost") return {name, [](Index n) { return (Index(1) << (n + 1)) - 2; }};
      break;
    default:
      break;
  }
  throw Error(ErrorCode::InvalidParameters, "no path '" + name + "' on family " + gen.family_name());
}

bool check_path(const Graph& g, const PathToInfinity& p, Index horizon) {
  auto pts = p.prefix(horizon);
  if (pts[0] != g.origin()) return false;
  std::vector<Index> seen(pts);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  for (Index n = 0; n < horizon; ++n) {
    if (pts[n + 1] >= g.size() || !g.slot_of(pts[n], pts[n + 1])) return false;
    if (g.radius(pts[n + 1]) < g.radius(pts[n])) return false;
  }
  return g.radius(pts[horizon]) > g.radius(pts[0]);
}

ProbeSet compute_probes(const NetworkGenerator& gen, const std::vector<Index>& radii, const PathToInfinity& a,
                        const PathToInfinity& b, Index horizon, const SolverOptions& opt) {
  ProbeSet ps;
  ps.names = {"h_x1", "h_x2", "w_o"};
  ps.horizon = horizon;
  ps.path_a = a.name;
  ps.path_b = b.name;
  const auto pa = a.prefix(horizon), pb = b.prefix(horizon);
  for (Index r : radii) {
    const Precision prec = precision_for(gen, r);
    ProbeLevel level = with_precision(prec, [&](auto tag) {
      using S = typename decltype(tag)::type;
      auto ex = make_exhaustion<S>(gen, RadiusSchedule::explicit_radii({r}));
      const auto& host = ex.network();
      const Index n = ex.sizes[0];
      for (Index v : pa)
        if (v >= n) throw Error(ErrorCode::InvalidParameters, "horizon exceeds radius " + std::to_string(r));
      for (Index v : pb)
        if (v >= n) throw Error(ErrorCode::InvalidParameters, "horizon exceeds radius " + std::to_string(r));
      auto order = enumerate_vertices(host.graph());
      std::vector<Index> xs{order.at(0), order.at(1)};
      if (ps.sources.empty()) ps.sources = {xs[0], xs[1], -1};
      LevelSystem<S> fs(host, n, LevelSystem<S>::Kind::FreeDipole);
      Mat<S> v = fs.solve_sources(xs);
      LevelSystem<S> ws(host, n, LevelSystem<S>::Kind::WiredDipole);
      Mat<S> f = ws.solve_sources(xs);
      LevelSystem<S> ms(host, n, LevelSystem<S>::Kind::WiredMonopole);
      Vec<S> w = ms.solve_sources({0}).col(0);
      double res = to_double(ms.residual(w, 0));
      for (int i = 0; i < 2; ++i) {
        res = std::max(res, to_double(fs.residual(v.col(i), xs[i])));
        res = std::max(res, to_double(ws.residual(f.col(i), xs[i])));
      }
      if (!(res <= opt.residual_tol))
        throw Error(ErrorCode::SolverFailure, "residual " + format_sci(res) + " at radius " + std::to_string(r));
      ProbeLevel out;
      out.radius = r;
      out.precision = prec.name();
      auto sample = [&](auto value_at) {
        std::vector<double> va, vb;
        for (Index p : pa) va.push_back(value_at(p));
        for (Index p : pb) vb.push_back(value_at(p));
        out.along_a.push_back(std::move(va));
        out.along_b.push_back(std::move(vb));
      };
      for (int i = 0; i < 2; ++i) sample([&](Index p) { return to_double(S(v(p, i) - f(p, i))); });
      sample([&](Index p) { return to_double(w[p]); });
      return out;
    });
    ps.levels.push_back(std::move(level));
  }
  return ps;
}

nlohmann::json ProbeSet::to_json() const {
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& l : levels) {
    nlohmann::json pr = nlohmann::json::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::vector<double> gap;
      for (std::size_t n = 0; n < l.along_a[i].size(); ++n) gap.push_back(l.along_a[i][n] - l.along_b[i][n]);
      pr[names[i]] = {{"along_a", l.along_a[i]}, {"along_b", l.along_b[i]}, {"gap", gap}};
    }
    lv.push_back({{"radius", l.radius}, {"precision", l.precision}, {"probes", pr}});
  }
  return {{"names", names}, {"sources", sources}, {"horizon", horizon},
          {"path_a", path_a}, {"path_b", path_b}, {"levels", lv}};
}

const char* equivalence_name(Equivalence e) {
  switch (e) {
    case Equivalence::Equivalent: return "equivalent";
    case Equivalence::Inequivalent: return "inequivalent";
    default: return "inconclusive";
  }
}

PathEquivalenceReport path_equivalence(const ProbeSet& probes, double path_tol, double separation_tol) {
  PathEquivalenceReport rep;
  rep.path_tol = path_tol;
  rep.separation_tol = separation_tol;
  rep.probes = probes;
  if (probes.levels.empty()) return rep;
  const std::size_t np = probes.names.size();
  const Index H = probes.horizon;
  rep.horizon_gaps.assign(np, {});
  rep.tail_max.assign(np, 0.0);
  rep.tail_min.assign(np, INFINITY);
  for (const auto& l : probes.levels)
    for (std::size_t i = 0; i < np; ++i) rep.horizon_gaps[i].push_back(std::abs(l.along_a[i][H] - l.along_b[i][H]));
  const auto& deep = probes.levels.back();
  for (std::size_t i = 0; i < np; ++i)
    for (Index n = (3 * H) / 4; n <= H; ++n) {
      double g = std::abs(deep.along_a[i][n] - deep.along_b[i][n]);
      rep.tail_max[i] = std::max(rep.tail_max[i], g);
      rep.tail_min[i] = std::min(rep.tail_min[i], g);
    }
  for (std::size_t i = 0; i < np; ++i) {
    const auto& g = rep.horizon_gaps[i];
    bool settled = g.size() < 2 || std::abs(g.back() - g[g.size() - 2]) <= 0.1 * g.back();
    if (rep.tail_min[i] > separation_tol && settled) {
      rep.verdict = Equivalence::Inequivalent;
      rep.certified_by = probes.names[i];
      return rep;
    }
  }
  bool all_small = true;
  for (std::size_t i = 0; i < np; ++i) {
    const auto& g = rep.horizon_gaps[i];
    bool shrinking = g.size() < 2 || g.back() <= g[g.size() - 2] * (1.0 + 1e-9) + 1e-15;
    if (!(g.back() < path_tol && shrinking)) all_small = false;
  }
  if (all_small) rep.verdict = Equivalence::Equivalent;
  return rep;
}

nlohmann::json PathEquivalenceReport::to_json() const {
  nlohmann::json pr = nlohmann::json::object();
  for (std::size_t i = 0; i < probes.names.size(); ++i)
    pr[probes.names[i]] = {{"horizon_gap_per_level", horizon_gaps[i]},
                           {"tail_max_gap", tail_max[i]},
                           {"tail_min_gap", tail_min[i]}};
  std::vector<Index> radii;
  for (const auto& l : probes.levels) radii.push_back(l.radius);
  return {{"verdict", equivalence_name(verdict)},
          {"certified_by", certified_by},
          {"path_tol", path_tol},
          {"separation_tol", separation_tol},
          {"finite_probe_surrogate", true},
          {"path_a", probes.path_a},
          {"path_b", probes.path_b},
          {"horizon", probes.horizon},
          {"radii", radii},
          {"probes", pr}};
}

nlohmann::json BoundaryPointValue::to_json() const {
  return {{"path", path}, {"estimate", estimate}, {"spread", spread}, {"stabilized", stabilized}};
}

}  // namespace resbdy
