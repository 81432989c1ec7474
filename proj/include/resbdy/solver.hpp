#pragma once

#include "resbdy/energy.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace resbdy {

// Symmetric weighted-Laplacian system with Dirichlet leaks, factored by
// eliminating unknowns in index order. Every pivot is formed as a sum of
// positive conductances (no subtraction), so the factorization is
// componentwise stable for any conductance range.
template <class Scalar>
class LaplacianFactor {
 public:
  explicit LaplacianFactor(Index n = 0) : upper_(static_cast<std::size_t>(n)), leak_(static_cast<std::size_t>(n), Scalar(0)) {}

  Index size() const { return static_cast<Index>(leak_.size()); }

  void add_edge(Index i, Index j, const Scalar& c) {
    if (i == j) return;
    if (i > j) std::swap(i, j);
    add_upper(i, j, c);
  }
  void add_leak(Index i, const Scalar& c) { leak_[i] += c; }

  void factorize() {
    const Index n = size();
    pivot_.assign(static_cast<std::size_t>(n), Scalar(0));
    for (Index m = 0; m < n; ++m) {
      auto& row = upper_[m];
      Scalar cm = leak_[m];
      for (auto& [j, c] : row) cm += c;
      if (!(cm > Scalar(0)))
        throw Error(ErrorCode::SingularSystem, "unknown " + std::to_string(m) + " is not connected to a fixed vertex");
      pivot_[m] = cm;
      // From here on the row stores c_mj / C_m.
      for (auto& e : row) e.second /= cm;
      for (std::size_t a = 0; a < row.size(); ++a) {
        leak_[row[a].first] += row[a].second * leak_[m];
        const Scalar cma = row[a].second * cm;
        for (std::size_t b = a + 1; b < row.size(); ++b) add_edge(row[a].first, row[b].first, cma * row[b].second);
      }
    }
    factored_ = true;
  }

  // Solves for each column of b (rows are unknowns).
  template <class Rhs>
  Rhs solve(Rhs b) const {
    if (!factored_) throw Error(ErrorCode::SolverFailure, "solve before factorize");
    const Index n = size();
    const Index r = b.cols();
    for (Index m = 0; m < n; ++m)
      for (auto& [j, t] : upper_[m])
        for (Index k = 0; k < r; ++k) b(j, k) += t * b(m, k);
    for (Index m = n - 1; m >= 0; --m) {
      for (Index k = 0; k < r; ++k) {
        Scalar s = b(m, k) / pivot_[m];
        for (auto& [j, t] : upper_[m]) s += t * b(j, k);
        b(m, k) = s;
      }
    }
    return b;
  }

 private:
  void add_upper(Index i, Index j, const Scalar& c) {
    auto& row = upper_[i];
    for (auto& e : row)
      if (e.first == j) {
        e.second += c;
        return;
      }
    row.emplace_back(j, c);
  }

  std::vector<std::vector<std::pair<Index, Scalar>>> upper_;
  std::vector<Scalar> leak_;
  std::vector<Scalar> pivot_;
  bool factored_ = false;
};

enum class BoundaryCondition { Free, Wired };

inline const char* bc_name(BoundaryCondition bc) { return bc == BoundaryCondition::Free ? "free" : "wired"; }

// Pinned Laplace problem on the window [0, n) of a host network.
//  FreeDipole:    G_k as a network in itself, v(o) = 0.
//  WiredDipole:   bd G_k shorted into one auxiliary vertex g, v(o) = 0.
//  WiredMonopole: bd G_k shorted into g, g grounded at 0.
template <class Scalar>
class LevelSystem {
 public:
  enum class Kind { FreeDipole, WiredDipole, WiredMonopole };

  LevelSystem(const BasicNetwork<Scalar>& host, Index n, Kind kind) : host_(&host), n_(n), kind_(kind) {
    const Graph& g = host.graph();
    if (n < 2 || n > g.size()) throw Error(ErrorCode::InvalidParameters, "window size " + std::to_string(n));
    if (!g.complete() && n > g.ball_size(g.exact_radius()))
      throw Error(ErrorCode::InvalidParameters, "window exceeds the exactly materialized ball");
    boundary_.assign(static_cast<std::size_t>(n), 0);
    bool any_bd = false;
    if (kind != Kind::FreeDipole) {
      for (Index v = 0; v < n; ++v) {
        auto nb = g.neighbors(v);
        if (!nb.empty() && nb.back() >= n) {
          boundary_[v] = 1;
          any_bd = true;
        }
      }
    }
    if (kind == Kind::WiredMonopole && !any_bd)
      throw Error(ErrorCode::SingularSystem, "finite network has no boundary to ground");
    if (boundary_[0])
      throw Error(ErrorCode::InvalidParameters, "origin lies on the window boundary");
    has_aux_ = any_bd;
    aux_grounded_ = kind == Kind::WiredMonopole;

    // Elimination order: deepest vertices first. The auxiliary vertex goes
    // first when it has few neighbors and last otherwise, to limit fill.
    std::vector<Index> order;
    order.reserve(static_cast<std::size_t>(n));
    for (Index v = n - 1; v >= 0; --v) {
      if (boundary_[v]) continue;
      if (v == 0 && kind != Kind::WiredMonopole) continue;
      order.push_back(v);
    }
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return g.radius(a) > g.radius(b); });
    Index aux_degree = 0;
    if (has_aux_ && !aux_grounded_) {
      std::vector<char> seen(static_cast<std::size_t>(n), 0);
      for (Index v = 0; v < n; ++v) {
        if (!boundary_[v]) continue;
        for (Index w : g.neighbors(v))
          if (w < n && !boundary_[w] && !seen[w]) {
            seen[w] = 1;
            ++aux_degree;
          }
      }
    }
    const bool aux_first = aux_degree <= 4;
    const Index shift = (has_aux_ && !aux_grounded_ && aux_first) ? 1 : 0;
    unknown_.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < order.size(); ++i) unknown_[order[i]] = static_cast<Index>(i) + shift;
    aux_ = -1;
    if (has_aux_ && !aux_grounded_) aux_ = aux_first ? 0 : static_cast<Index>(order.size());
    const Index nu = static_cast<Index>(order.size()) + (aux_ >= 0 ? 1 : 0);

    factor_ = LaplacianFactor<Scalar>(nu);
    for (Index v = 0; v < n; ++v) {
      const Index uv = slot(v);
      for (Index s = g.slot_begin(v); s < g.slot_end(v); ++s) {
        const Index w = g.slot_target(s);
        if (w >= n || w < v) continue;
        const Index uw = slot(w);
        const Scalar& c = host.slot_conductance(s);
        if (uv == uw) continue;  // both merged into g, or both fixed
        if (uv >= 0 && uw >= 0) {
          factor_.add_edge(uv, uw, c);
        } else if (uv >= 0) {
          factor_.add_leak(uv, c);
        } else if (uw >= 0) {
          factor_.add_leak(uw, c);
        }
      }
    }
    factor_.factorize();
  }

  Index window() const { return n_; }
  Kind kind() const { return kind_; }
  bool has_aux() const { return has_aux_; }
  bool on_boundary(Index v) const { return boundary_[v] != 0; }
  Index unknowns() const { return factor_.size(); }

  // Unknown carrying the value of window vertex v, or -1 if v is fixed at 0.
  Index slot(Index v) const {
    if (boundary_[v]) return aux_;
    return unknown_[v];
  }

  // Potentials for unit sources at xs (minus a unit sink at o for dipoles),
  // one column per source, lifted to the window.
  Mat<Scalar> solve_sources(const std::vector<Index>& xs) const {
    Mat<Scalar> b = Mat<Scalar>::Zero(unknowns(), static_cast<Index>(xs.size()));
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (xs[k] < 0 || xs[k] >= n_) throw Error(ErrorCode::InvalidParameters, "source outside window");
      Index u = slot(xs[k]);
      if (u >= 0) b(u, static_cast<Index>(k)) += Scalar(1);
      if (kind_ == Kind::WiredMonopole) {
        // no sink: the grounded auxiliary vertex absorbs the current
      }
    }
    Mat<Scalar> sol = factor_.solve(std::move(b));
    return lift(sol);
  }

  Mat<Scalar> lift(const Mat<Scalar>& sol) const {
    Mat<Scalar> out = Mat<Scalar>::Zero(n_, sol.cols());
    for (Index v = 0; v < n_; ++v) {
      Index u = slot(v);
      if (u >= 0) out.row(v) = sol.row(u);
    }
    return out;
  }

  // max over equations of |L v - b| for a lifted potential and its sources.
  Scalar residual(const Eigen::Ref<const Vec<Scalar>>& lifted, Index source) const {
    const Graph& g = host_->graph();
    Vec<Scalar> r = Vec<Scalar>::Zero(unknowns());
    for (Index v = 0; v < n_; ++v) {
      const Index uv = slot(v);
      for (Index s = g.slot_begin(v); s < g.slot_end(v); ++s) {
        const Index w = g.slot_target(s);
        if (w >= n_) continue;
        const Index uw = slot(w);
        if (uv < 0 || uv == uw) continue;
        r[uv] += host_->slot_conductance(s) * (lifted[v] - lifted[w]);
      }
    }
    Index us = slot(source);
    if (us >= 0) r[us] -= Scalar(1);
    Scalar worst(0);
    for (Index i = 0; i < r.size(); ++i) {
      Scalar a = r[i] < Scalar(0) ? Scalar(-r[i]) : r[i];
      if (a > worst) worst = a;
    }
    return worst;
  }

 private:
  const BasicNetwork<Scalar>* host_;
  Index n_;
  Kind kind_;
  std::vector<char> boundary_;
  std::vector<Index> unknown_;
  bool has_aux_ = false;
  bool aux_grounded_ = false;
  Index aux_ = -1;
  LaplacianFactor<Scalar> factor_;
};

struct SolverOptions {
  double tol_limit = 1e-8;
  double divergence_threshold = 1e6;
  double residual_tol = 1e-12;
};

struct ConvergenceReport {
  std::string quantity;
  std::vector<Index> radii;
  std::vector<Index> sizes;
  std::vector<double> values;
  std::vector<double> deltas;
  std::vector<double> accelerated;
  std::vector<double> log10_defect;
  std::vector<double> residuals;
  bool converged = false;
  bool diverged = false;
  Index converged_at = -1;
  double limit = std::numeric_limits<double>::quiet_NaN();
  std::string stopping_rule = "budget-exhausted";
  std::string precision;

  nlohmann::json to_json() const;
};

// Applies the stopping rules to a stream of per-level values.
class ConvergenceMonitor {
 public:
  enum class Mode { Plain, Accelerated };

  ConvergenceMonitor(std::string quantity, Mode mode, const SolverOptions& opt);

  // Returns true once a rule has fired.
  bool push(Index radius, Index size, double value, double log10_defect, double residual, bool saturated);
  bool done() const { return report_.converged || report_.diverged; }
  void allow_divergence(bool on) { divergence_ = on; }
  const ConvergenceReport& report() const { return report_; }
  ConvergenceReport& report() { return report_; }

 private:
  static double rel_delta(double a, double b);
  Mode mode_;
  SolverOptions opt_;
  bool divergence_ = false;
  ConvergenceReport report_;
};

template <class Scalar>
double log10_window_defect(const BasicNetwork<Scalar>& host, Index n) {
  const Graph& g = host.graph();
  Scalar d(0);
  for (Index v = 0; v < n; ++v)
    for (Index s = g.slot_begin(v); s < g.slot_end(v); ++s)
      if (g.slot_target(s) >= n) d += host.slot_conductance(s);
  if (!(d > Scalar(0))) return -std::numeric_limits<double>::infinity();
  using std::log10;
  return to_double(Scalar(log10(d)));
}

template <class Scalar>
bool window_saturated(const BasicNetwork<Scalar>& host, Index n) {
  return host.graph().complete() && n == host.size();
}

template <class Scalar>
typename LevelSystem<Scalar>::Kind dipole_kind(BoundaryCondition bc) {
  return bc == BoundaryCondition::Free ? LevelSystem<Scalar>::Kind::FreeDipole
                                       : LevelSystem<Scalar>::Kind::WiredDipole;
}

template <class Scalar>
Vec<Scalar> solve_dipole_level(const BasicNetwork<Scalar>& host, Index n, Index x, BoundaryCondition bc,
                               const SolverOptions& opt = {}) {
  LevelSystem<Scalar> sys(host, n, dipole_kind<Scalar>(bc));
  Vec<Scalar> v = sys.solve_sources({x}).col(0);
  Scalar res = sys.residual(v, x);
  if (to_double(res) > opt.residual_tol * 2.0)
    throw Error(ErrorCode::SolverFailure, "residual " + std::to_string(to_double(res)));
  return v;
}

// Dipole solves at several sources and boundary conditions over one
// exhaustion; all potentials are returned on the common final level.
template <class Scalar>
struct DipoleBatch {
  std::vector<Index> xs;
  std::vector<BoundaryCondition> bcs;
  // values[b] is window x |xs| for boundary condition bcs[b].
  std::vector<Mat<Scalar>> values;
  std::vector<std::vector<ConvergenceReport>> reports;
  Index level = -1;
  Index radius = 0;
  Index window = 0;
  double max_residual = 0.0;

  bool all_converged() const {
    for (auto& rs : reports)
      for (auto& r : rs)
        if (!r.converged) return false;
    return true;
  }
};

template <class Scalar>
DipoleBatch<Scalar> solve_dipoles(const Exhaustion<Scalar>& ex, const std::vector<Index>& xs,
                                  const std::vector<BoundaryCondition>& bcs, const SolverOptions& opt,
                                  const std::string& precision_name = "") {
  DipoleBatch<Scalar> out;
  out.xs = xs;
  out.bcs = bcs;
  out.values.resize(bcs.size());
  std::vector<std::vector<ConvergenceMonitor>> mon(bcs.size());
  for (std::size_t b = 0; b < bcs.size(); ++b)
    for (Index x : xs) {
      mon[b].emplace_back(std::string("R_") + bc_name(bcs[b]) + "(o," + std::to_string(x) + ")",
                          ConvergenceMonitor::Mode::Plain, opt);
      mon[b].back().report().precision = precision_name;
    }
  Index maxx = 0;
  for (Index x : xs) maxx = std::max(maxx, x);
  const auto& host = ex.network();
  for (Index k = 0; k < ex.levels(); ++k) {
    const Index n = ex.sizes[k];
    if (maxx >= n || n < 2) continue;
    if (host.graph().neighbors(0).back() >= n) continue;  // origin must be interior
    const double defect = log10_window_defect(host, n);
    const bool sat = window_saturated(host, n);
    bool all_done = true;
    for (std::size_t b = 0; b < bcs.size(); ++b) {
      LevelSystem<Scalar> sys(host, n, dipole_kind<Scalar>(bcs[b]));
      Mat<Scalar> v = sys.solve_sources(xs);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        double res = to_double(sys.residual(v.col(static_cast<Index>(i)), xs[i]));
        out.max_residual = std::max(out.max_residual, res);
        if (!(res <= opt.residual_tol))
          throw Error(ErrorCode::SolverFailure, "residual " + format_sci(res) + " at radius " +
                                                    std::to_string(ex.radii[k]) + " exceeds tolerance");
        mon[b][i].push(ex.radii[k], n, to_double(v(xs[i], static_cast<Index>(i))), defect, res, sat);
        if (!mon[b][i].done()) all_done = false;
      }
      out.values[b] = std::move(v);
    }
    out.level = k;
    out.radius = ex.radii[k];
    out.window = n;
    if (all_done) break;
  }
  if (out.level < 0) throw Error(ErrorCode::InvalidParameters, "no level contains the requested vertices");
  out.reports.resize(bcs.size());
  for (std::size_t b = 0; b < bcs.size(); ++b)
    for (auto& m : mon[b]) out.reports[b].push_back(m.report());
  return out;
}

template <class Scalar>
struct KernelResult {
  Vec<Scalar> values;
  ConvergenceReport report;
  Index radius = 0;
};

template <class Scalar>
KernelResult<Scalar> energy_kernel(const Exhaustion<Scalar>& ex, Index x, BoundaryCondition bc,
                                   const SolverOptions& opt = {}, const std::string& precision_name = "") {
  auto batch = solve_dipoles(ex, {x}, {bc}, opt, precision_name);
  return {batch.values[0].col(0), batch.reports[0][0], batch.radius};
}

template <class Scalar>
struct ResistanceResult {
  double value = 0.0;
  ConvergenceReport report;
};

// R(x, y) = energy(v_x - v_y) per level; equals v_x(x) when y = o.
template <class Scalar>
ResistanceResult<Scalar> effective_resistance(const Exhaustion<Scalar>& ex, Index x, Index y, BoundaryCondition bc,
                                              const SolverOptions& opt = {}, const std::string& precision_name = "") {
  ResistanceResult<Scalar> out;
  ConvergenceMonitor mon(std::string("R_") + bc_name(bc) + "(" + std::to_string(x) + "," + std::to_string(y) + ")",
                         ConvergenceMonitor::Mode::Plain, opt);
  mon.report().precision = precision_name;
  if (x == y) {
    out.report = mon.report();
    out.report.converged = true;
    out.report.limit = 0.0;
    out.report.stopping_rule = "identical-vertices";
    return out;
  }
  const auto& host = ex.network();
  for (Index k = 0; k < ex.levels(); ++k) {
    const Index n = ex.sizes[k];
    if (std::max(x, y) >= n || n < 2) continue;
    if (host.graph().neighbors(0).back() >= n) continue;
    LevelSystem<Scalar> sys(host, n, dipole_kind<Scalar>(bc));
    std::vector<Index> src{x, y};
    Mat<Scalar> v = sys.solve_sources(src);
    double res = std::max(to_double(sys.residual(v.col(0), x)), to_double(sys.residual(v.col(1), y)));
    if (!(res <= opt.residual_tol)) throw Error(ErrorCode::SolverFailure, "residual " + format_sci(res));
    Vec<Scalar> d = v.col(0) - v.col(1);
    Scalar r = energy(host, d);
    mon.push(ex.radii[k], n, to_double(r), log10_window_defect(host, n), res, window_saturated(host, n));
    if (mon.done()) break;
  }
  out.report = mon.report();
  out.value = out.report.values.empty() ? std::numeric_limits<double>::quiet_NaN() : out.report.values.back();
  return out;
}

enum class Transience { Transient, Recurrent, Inconclusive };

inline const char* transience_name(Transience t) {
  switch (t) {
    case Transience::Transient: return "transient";
    case Transience::Recurrent: return "recurrent";
    default: return "inconclusive";
  }
}

template <class Scalar>
struct MonopoleResult {
  Vec<Scalar> values;
  ConvergenceReport report;
  Transience transience = Transience::Inconclusive;
  Index radius = 0;
};

// Wired exhaustion of Delta w = delta_x with the shorted boundary grounded.
// Energies that settle (after Aitken acceleration of geometric tails) mean
// transient; energies passing the divergence threshold while increasing mean
// recurrent.
template <class Scalar>
MonopoleResult<Scalar> monopole(const Exhaustion<Scalar>& ex, Index x, const SolverOptions& opt = {},
                                const std::string& precision_name = "") {
  MonopoleResult<Scalar> out;
  ConvergenceMonitor mon("energy(w_" + std::to_string(x) + ")", ConvergenceMonitor::Mode::Accelerated, opt);
  mon.allow_divergence(true);
  mon.report().precision = precision_name;
  const auto& host = ex.network();
  if (host.graph().complete() && ex.sizes.back() == host.size()) {
    // Every level eventually saturates a finite network, which carries no
    // monopole.
  }
  for (Index k = 0; k < ex.levels(); ++k) {
    const Index n = ex.sizes[k];
    if (x >= n || n < 2) continue;
    if (window_saturated(host, n)) {
      mon.report().diverged = true;
      mon.report().stopping_rule = "finite-network";
      break;
    }
    LevelSystem<Scalar> sys(host, n, LevelSystem<Scalar>::Kind::WiredMonopole);
    if (sys.on_boundary(x)) continue;
    Vec<Scalar> w = sys.solve_sources({x}).col(0);
    double res = to_double(sys.residual(w, x));
    if (!(res <= opt.residual_tol)) throw Error(ErrorCode::SolverFailure, "residual " + format_sci(res));
    Scalar e = energy(host, w);
    mon.push(ex.radii[k], n, to_double(e), log10_window_defect(host, n), res, false);
    out.values = std::move(w);
    out.radius = ex.radii[k];
    if (mon.done()) break;
  }
  out.report = mon.report();
  if (out.report.converged) out.transience = Transience::Transient;
  else if (out.report.diverged) out.transience = Transience::Recurrent;
  return out;
}

struct IndependenceReport {
  double value_a = 0.0;
  double value_b = 0.0;
  bool agree = false;
  ConvergenceReport report_a, report_b;
  nlohmann::json to_json() const;
};

// Runs the same kernel value over two radius schedules; they must agree within
// 10 tol_limit (relative).
template <class Scalar>
IndependenceReport exhaustion_independence(const NetworkGenerator& gen, Index x, BoundaryCondition bc,
                                           const RadiusSchedule& a, const RadiusSchedule& b,
                                           const SolverOptions& opt = {}) {
  IndependenceReport out;
  auto ea = make_exhaustion<Scalar>(gen, a);
  auto eb = make_exhaustion<Scalar>(gen, b);
  auto ka = energy_kernel(ea, x, bc, opt);
  auto kb = energy_kernel(eb, x, bc, opt);
  out.report_a = ka.report;
  out.report_b = kb.report;
  out.value_a = ka.report.values.empty() ? NAN : ka.report.values.back();
  out.value_b = kb.report.values.empty() ? NAN : kb.report.values.back();
  double scale = std::max({std::abs(out.value_a), std::abs(out.value_b), 1e-300});
  out.agree = ka.report.converged && kb.report.converged &&
              std::abs(out.value_a - out.value_b) <= 10.0 * opt.tol_limit * scale;
  return out;
}

}  // namespace resbdy

namespace resbdy {

// Radius schedule used when none is configured. Finite networks run until the
// window saturates; recurrence triage on Z^d uses doubling radii.
RadiusSchedule default_schedule(const NetworkGenerator& gen, bool monopole = false);

}  // namespace resbdy
