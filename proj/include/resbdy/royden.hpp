#pragma once

#include "resbdy/solver.hpp"

#include <nlohmann/json.hpp>

namespace resbdy {

struct RoydenOptions {
  SolverOptions solver;
  double harm_tol = 1e-6;
};

template <class Scalar>
struct RoydenSplit {
  Index x = 0;
  Index window = 0;
  Index radius = 0;
  Vec<Scalar> v, f, h;
  Scalar energy_v{0}, energy_f{0}, energy_h{0}, cross{0};
  double harm_residual_max = 0.0;
  double pythagoras_rel = 0.0;
  double orthogonality_rel = 0.0;
  bool converged = false;
  bool harmonic_ok = true;
  // Set when the network was triaged recurrent: Harm is trivial, f = v.
  bool harm_trivial = false;
  // Energy of v - f on the final level, kept as telemetry when the harmonic
  // part is set to zero by recurrence.
  double level_harm_energy = 0.0;
  ConvergenceReport report_v, report_f;

  nlohmann::json to_json() const {
    return {{"x", x},
            {"radius", radius},
            {"energy_v", to_double(energy_v)},
            {"energy_f", to_double(energy_f)},
            {"energy_h", to_double(energy_h)},
            {"energy_fh", to_double(cross)},
            {"harm_residual_max", harm_residual_max},
            {"pythagoras_rel", pythagoras_rel},
            {"orthogonality_rel", orthogonality_rel},
            {"converged", converged},
            {"harmonic_ok", harmonic_ok},
            {"harm_trivial_by_recurrence", harm_trivial},
            {"level_harm_energy", level_harm_energy},
            {"report_v", report_v.to_json()},
            {"report_f", report_f.to_json()}};
  }
};

// Max |Delta h| over window vertices whose neighbors all lie in the window.
template <class Scalar>
double interior_residual(const BasicNetwork<Scalar>& net, const Vec<Scalar>& h) {
  std::vector<char> ok;
  Vec<Scalar> lap = laplacian(net, h, &ok);
  double worst = 0.0;
  for (Index i = 0; i < lap.size(); ++i)
    if (ok[i]) worst = std::max(worst, std::abs(to_double(lap[i])));
  return worst;
}

// v_x as the free exhaustion limit, f_x = P_Fin v_x as the wired limit and
// h_x = v_x - f_x, all on the common final level.
template <class Scalar>
std::vector<RoydenSplit<Scalar>> royden_split(const Exhaustion<Scalar>& ex, const std::vector<Index>& xs,
                                              const RoydenOptions& opt, Transience triage = Transience::Inconclusive,
                                              const std::string& precision_name = "") {
  auto batch = solve_dipoles(ex, xs, {BoundaryCondition::Free, BoundaryCondition::Wired}, opt.solver, precision_name);
  const auto& net = ex.network();
  std::vector<RoydenSplit<Scalar>> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    RoydenSplit<Scalar> s;
    s.x = xs[i];
    s.window = batch.window;
    s.radius = batch.radius;
    s.v = batch.values[0].col(static_cast<Index>(i));
    s.f = batch.values[1].col(static_cast<Index>(i));
    s.report_v = batch.reports[0][i];
    s.report_f = batch.reports[1][i];
    s.converged = s.report_v.converged && s.report_f.converged;
    Vec<Scalar> h = s.v - s.f;
    s.level_harm_energy = to_double(energy(net, h));
    if (triage == Transience::Recurrent) {
      // No nonconstant harmonic function of finite energy on a recurrent
      // network.
      s.harm_trivial = true;
      s.f = s.v;
      h.setZero();
    }
    s.h = h;
    s.energy_v = energy(net, s.v);
    s.energy_f = energy(net, s.f);
    s.energy_h = energy(net, s.h);
    s.cross = energy(net, s.f, s.h);
    s.harm_residual_max = interior_residual(net, s.h);
    s.harmonic_ok = s.harm_residual_max <= opt.harm_tol;
    double ev = to_double(s.energy_v);
    s.pythagoras_rel = ev > 0 ? std::abs(to_double(Scalar(s.energy_v - s.energy_f - s.energy_h))) / ev : 0.0;
    double denom = std::sqrt(std::max(0.0, to_double(s.energy_f) * to_double(s.energy_h)));
    s.orthogonality_rel = denom > 0 ? std::abs(to_double(s.cross)) / denom : 0.0;
    out.push_back(std::move(s));
  }
  return out;
}

template <class Scalar>
Vec<Scalar> fin_projection(const Exhaustion<Scalar>& ex, Index x, const RoydenOptions& opt = {}) {
  return royden_split(ex, {x}, opt).front().f;
}

template <class Scalar>
Vec<Scalar> harm_kernel(const Exhaustion<Scalar>& ex, Index x, const RoydenOptions& opt = {},
                        Transience triage = Transience::Inconclusive) {
  auto s = royden_split(ex, {x}, opt, triage).front();
  if (!s.converged) throw Error(ErrorCode::NotConverged, "harmonic kernel at " + std::to_string(x));
  if (!s.harmonic_ok)
    throw Error(ErrorCode::HarmonicityViolation, "residual " + std::to_string(s.harm_residual_max));
  return s.h;
}

// max |v(x)| over the ball of the given radius (within v's window); a lower
// bound for the sup over the whole network.
template <class Scalar, class D>
double sup_norm(const BasicNetwork<Scalar>& net, const Eigen::MatrixBase<D>& v, Index ball_radius) {
  Index m = std::min<Index>(v.size(), net.graph().ball_size(ball_radius));
  double worst = 0.0;
  for (Index i = 0; i < m; ++i) worst = std::max(worst, std::abs(to_double(Scalar(v[i] - v[0]))));
  return worst;
}

}  // namespace resbdy
