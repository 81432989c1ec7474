#pragma once

#include "resbdy/royden.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace resbdy {

struct GaussGreenLevel {
  Index radius = 0;
  Index size = 0;
  double interior = 0.0;      // sum over int H of u Delta v
  double boundary = 0.0;      // sum over bd H of u dv/dn
  double total = 0.0;
  double level_energy = 0.0;  // energy over the edges inside H
  double level_deviation = 0.0;
  double deviation = 0.0;     // |total - target|
};

struct GaussGreenReport {
  double target = 0.0;
  std::vector<GaussGreenLevel> levels;
  double max_level_deviation = 0.0;
  nlohmann::json to_json() const;
};

// Interior and boundary terms on each prefix window of the given sizes; the
// target is energy(u, v) over the whole carrier of u and v.
template <class Scalar>
GaussGreenReport gauss_green_verify(const BasicNetwork<Scalar>& net, const Vec<Scalar>& u, const Vec<Scalar>& v,
                                    const std::vector<Index>& sizes, const std::vector<Index>& radii = {}) {
  if (u.size() != v.size()) throw Error(ErrorCode::DomainMismatch, "u and v differ in size");
  GaussGreenReport rep;
  const Scalar target = energy(net, u, v);
  rep.target = to_double(target);
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const Index n = sizes[k];
    if (n > u.size()) throw Error(ErrorCode::DomainMismatch, "window exceeds the potentials");
    SubgraphView h = SubgraphView::prefix(net.graph(), n);
    Scalar in(0), bd(0);
    for (Index x : h.interior()) in += u[x] * laplacian(net, v, x);
    for (Index x : h.boundary()) bd += u[x] * normal_derivative(net, v, h, x);
    Scalar tot = in + bd;
    Scalar le = energy(net, u.head(n), v.head(n));
    GaussGreenLevel l;
    l.radius = k < radii.size() ? radii[k] : net.graph().radius(n - 1);
    l.size = n;
    l.interior = to_double(in);
    l.boundary = to_double(bd);
    l.total = to_double(tot);
    l.level_energy = to_double(le);
    l.level_deviation = std::abs(to_double(Scalar(tot - le)));
    l.deviation = std::abs(to_double(Scalar(tot - target)));
    rep.max_level_deviation = std::max(rep.max_level_deviation, l.level_deviation);
    rep.levels.push_back(l);
  }
  return rep;
}

struct BoundarySumLevel {
  Index radius = 0;
  Index size = 0;
  double level_sum = 0.0;     // sum over bd G_k of u dh^(k)/dn, h^(k) = v^(k) - f^(k)
  double interior = 0.0;      // sum over int G_k of u Delta h^(k)
  double fixed_kernel = 0.0;  // sum over bd G_k of u dh/dn for the final-level h
  double deviation = 0.0;     // level_sum - target
};

struct BoundarySumReport {
  Index x = 0;
  double target = 0.0;  // u(x) - u(o)
  double harmonic_residual = 0.0;
  std::vector<BoundarySumLevel> levels;
  double final_deviation = 0.0;
  nlohmann::json to_json() const;
};

// Boundary sums of a harmonic u against the harmonic part of the kernel at x,
// level by level. u must be given on the host window of the last level.
template <class Scalar>
BoundarySumReport boundary_sum_harmonic(const Exhaustion<Scalar>& ex, const Vec<Scalar>& u, Index x,
                                        const RoydenOptions& opt = {}) {
  const auto& net = ex.network();
  BoundarySumReport rep;
  rep.x = x;
  rep.target = to_double(Scalar(u[x] - u[0]));
  const Index nmax = ex.sizes.back();
  if (u.size() < nmax) throw Error(ErrorCode::DomainMismatch, "u does not cover the last level");
  rep.harmonic_residual = interior_residual(net, Vec<Scalar>(u.head(nmax)));
  if (!(rep.harmonic_residual <= opt.harm_tol))
    throw Error(ErrorCode::NotHarmonic, "Laplacian residual " + format_sci(rep.harmonic_residual));
  std::vector<Vec<Scalar>> hs;
  std::vector<Index> used;
  for (Index k = 0; k < ex.levels(); ++k) {
    const Index n = ex.sizes[k];
    if (x >= n || n < 2) continue;
    if (net.graph().neighbors(0).back() >= n) continue;
    LevelSystem<Scalar> fs(net, n, LevelSystem<Scalar>::Kind::FreeDipole);
    LevelSystem<Scalar> ws(net, n, LevelSystem<Scalar>::Kind::WiredDipole);
    Vec<Scalar> v = fs.solve_sources({x}).col(0);
    Vec<Scalar> f = ws.solve_sources({x}).col(0);
    double res = std::max(to_double(fs.residual(v, x)), to_double(ws.residual(f, x)));
    if (!(res <= opt.solver.residual_tol)) throw Error(ErrorCode::SolverFailure, "residual " + format_sci(res));
    hs.push_back(v - f);
    used.push_back(k);
  }
  if (hs.empty()) throw Error(ErrorCode::InvalidParameters, "no level contains x and o in its interior");
  const Vec<Scalar>& hfin = hs.back();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const Index k = used[i];
    const Index n = ex.sizes[k];
    SubgraphView view = SubgraphView::prefix(net.graph(), n);
    Scalar bd(0), in(0), fixed(0);
    for (Index b : view.boundary()) {
      bd += u[b] * normal_derivative(net, hs[i], view, b);
      fixed += u[b] * normal_derivative(net, hfin, view, b);
    }
    for (Index y : view.interior()) in += u[y] * laplacian(net, hs[i], y);
    BoundarySumLevel l;
    l.radius = ex.radii[k];
    l.size = n;
    l.level_sum = to_double(bd);
    l.interior = to_double(in);
    l.fixed_kernel = to_double(fixed);
    l.deviation = l.level_sum - rep.target;
    rep.levels.push_back(l);
  }
  rep.final_deviation = rep.levels.back().deviation;
  return rep;
}

// A path to infinity as a rule n -> vertex index.
struct PathToInfinity {
  std::string name;
  std::function<Index(Index)> at;

  std::vector<Index> prefix(Index length) const;
};

// "x-rail" (x_0, x_1, ...), "y-rail" (o, y_0, y_1, ...) on the ladder; "ray" on the half-line; "positive",
// "negative" on Z^1; "leftmost", "rightmost" on the binary tree.
PathToInfinity path_for(const NetworkGenerator& gen, const std::string& name);

// Starts at o, successive adjacency, no repeated vertex and non-decreasing
// radius up to the horizon.
bool check_path(const Graph& g, const PathToInfinity& p, Index horizon);

struct ProbeLevel {
  Index radius = 0;
  std::string precision;
  // Per probe, values along each path prefix (positions 0..horizon).
  std::vector<std::vector<double>> along_a, along_b;
};

struct ProbeSet {
  std::vector<std::string> names;
  std::vector<Index> sources;  // -1 for the monopole at o
  Index horizon = 0;
  std::string path_a, path_b;
  std::vector<ProbeLevel> levels;
  nlohmann::json to_json() const;
};

// Probes h_{x_1}, h_{x_2} (enumeration order) and w_o, each solved on the
// ball of every radius in turn with precision chosen for that radius.
ProbeSet compute_probes(const NetworkGenerator& gen, const std::vector<Index>& radii, const PathToInfinity& a,
                        const PathToInfinity& b, Index horizon, const SolverOptions& opt = {});

enum class Equivalence { Equivalent, Inequivalent, Inconclusive };
const char* equivalence_name(Equivalence e);

struct PathEquivalenceReport {
  Equivalence verdict = Equivalence::Inconclusive;
  std::string certified_by;
  double path_tol = 1e-4;
  double separation_tol = 1e-2;
  // Per probe: |gap| at the horizon on each level, and max |gap| over the
  // last quarter of the prefix on the deepest level.
  std::vector<std::vector<double>> horizon_gaps;
  std::vector<double> tail_max, tail_min;
  ProbeSet probes;
  nlohmann::json to_json() const;
};

// Finite-probe surrogate: a probe whose gap settles above separation_tol
// certifies inequivalence; all gaps below path_tol and shrinking across levels
// is evidence of equivalence.
PathEquivalenceReport path_equivalence(const ProbeSet& probes, double path_tol = 1e-4, double separation_tol = 1e-2);

struct BoundaryPointValue {
  std::string path;
  double estimate = 0.0;
  double spread = 0.0;  // max |h(p_n) - h(p_H)| over n in [H/2, H]
  bool stabilized = false;
  nlohmann::json to_json() const;
};

// Phar v(p_n) - Phar v(o) at the horizon, with the spread over the second
// half of the prefix as stabilization evidence.
template <class Scalar>
BoundaryPointValue boundary_point_eval(const PathToInfinity& p, const Vec<Scalar>& h, Index horizon,
                                       double path_tol = 1e-4) {
  BoundaryPointValue out;
  out.path = p.name;
  auto pts = p.prefix(horizon);
  if (pts.back() >= h.size()) throw Error(ErrorCode::DomainMismatch, "path leaves the solved window");
  const double h0 = to_double(h[0]);
  out.estimate = to_double(h[pts.back()]) - h0;
  for (Index n = horizon / 2; n <= horizon; ++n)
    out.spread = std::max(out.spread, std::abs(to_double(h[pts[n]]) - h0 - out.estimate));
  out.stabilized = out.spread <= path_tol;
  return out;
}

}  // namespace resbdy
