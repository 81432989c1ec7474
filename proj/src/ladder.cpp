#include "resbdy/ladder.hpp"
#include "resbdy/errors.hpp"

#include <cmath>

namespace resbdy {

namespace {

void check_params(double alpha, double beta) {
  if (!(alpha > 1.0) || !(beta > 0.0) || !(beta <= 1.0) || !std::isfinite(alpha))
    throw Error(ErrorCode::InvalidParameters, "ladder needs alpha > 1 >= beta > 0");
}

}  // namespace

double LadderHarmonic::max_residual() const {
  double w = 0.0;
  for (std::size_t i = 0; i < residual_x.size(); ++i)
    w = std::max({w, std::abs(residual_x[i]), std::abs(residual_y[i])});
  return w;
}

LadderHarmonic ladder_harmonic(double alpha, double beta, Index N) {
  check_params(alpha, beta);
  if (N < 2) throw Error(ErrorCode::InvalidParameters, "N must be >= 2");
  LadderHarmonic lh;
  lh.alpha = alpha;
  lh.beta = beta;
  lh.N = N;
  const long double a = alpha, b = beta;
  lh.u.assign(static_cast<std::size_t>(N + 1), 0.0L);
  lh.du.assign(static_cast<std::size_t>(N), 0.0L);
  lh.scaled.assign(static_cast<std::size_t>(N), 0.0L);
  // du(n) = du(n-1)/alpha + (beta/alpha)^n (2u(n) + 1)/alpha, du(0) = 1/alpha.
  lh.du[0] = 1.0L / a;
  lh.u[1] = lh.du[0];
  long double ratio = 1.0L;  // (beta/alpha)^n
  for (Index n = 1; n < N; ++n) {
    ratio *= b / a;
    lh.du[n] = lh.du[n - 1] / a + ratio * (2.0L * lh.u[n] + 1.0L) / a;
    lh.u[n + 1] = lh.u[n] + lh.du[n];
  }
  long double an = 1.0L;  // alpha^n
  for (Index n = 0; n < N; ++n) lh.scaled[n] = lh.du[n] * (an *= a);

  // Laplacian residuals at every interior column from the stored increments.
  lh.residual_x.assign(static_cast<std::size_t>(N), 0.0);
  lh.residual_y.assign(static_cast<std::size_t>(N), 0.0);
  an = 1.0L;
  long double bn = 1.0L;
  for (Index n = 0; n < N; ++n) {
    const long double back = n >= 1 ? an * lh.du[n - 1] : 0.0L;  // alpha^n (u(n) - u(n-1))
    const long double fwd = an * a * lh.du[n];                    // alpha^{n+1} (u(n+1) - u(n))
    const long double yn = -1.0L - lh.u[n];
    const long double rx = back - fwd + bn * (lh.u[n] - yn);
    // The y-rail increments are the negated x-rail increments.
    const long double ry = -back + fwd + bn * (yn - lh.u[n]);
    lh.residual_x[n] = static_cast<double>(rx);
    lh.residual_y[n] = static_cast<double>(ry);
    an *= a;
    bn *= b;
  }
  return lh;
}

LadderEnergy ladder_energy(const LadderHarmonic& lh, double tol_limit) {
  LadderEnergy e;
  const long double a = lh.alpha, b = lh.beta;
  long double xs = 0.0L, ys = 0.0L, rs = 0.0L, bn = 1.0L;
  for (Index n = 0; n < lh.N; ++n) {
    const long double h = lh.scaled[n] * lh.du[n];  // alpha^{n+1} du(n)^2
    xs += h;
    ys += h;
    const long double s = 2.0L * lh.u[n] + 1.0L;
    rs += bn * s * s;
    bn *= b;
    e.x_rail.push_back(static_cast<double>(xs));
    e.y_rail.push_back(static_cast<double>(ys));
    e.rungs.push_back(static_cast<double>(rs));
    e.total.push_back(static_cast<double>(xs + ys + rs));
  }
  const auto& t = e.total;
  for (std::size_t m = 4; m <= t.size() && !e.converged; ++m) {
    bool ok = true;
    for (std::size_t i = m - 3; i < m; ++i)
      if (!(std::abs(t[i] - t[i - 1]) < tol_limit * std::abs(t[i]))) ok = false;
    if (ok) {
      e.converged = true;
      e.converged_at = static_cast<Index>(m) - 1;
    }
  }
  e.condition_4beta2 = a > 4.0L * b * b;
  const long double q = 1.0L + 1.0L / a;
  e.condition_refined = a > q * q * b * b;
  e.status = e.converged ? "converged" : "inconclusive";
  return e;
}

DuBoundCheck du_bound_check(const LadderHarmonic& lh) {
  DuBoundCheck c;
  const long double a = lh.alpha, b = lh.beta;
  // P(n) = beta (1 - beta^n)/(1 - beta) = sum_{j=1}^n beta^j
  // T(n) = sum_{k<n} 2^k (beta^k - beta^n)/(1 - beta), T(n+1) = T(n) + beta^n (2^{n+1} - 1)
  long double P = 0.0L, T = 0.0L, bn = 1.0L, twon = 1.0L, twobn = 1.0L;
  for (Index n = 0; n < lh.N; ++n) {
    const long double B = 1.0L + P + twobn / a + 2.0L * (b / a) * T;
    c.bound.push_back(static_cast<double>(B));
    const double r = static_cast<double>(lh.scaled[n] / B);
    c.worst_ratio = std::max(c.worst_ratio, r);
    if (lh.scaled[n] > B * (1.0L + 1e-15L)) ++c.violations;
    T += bn * (2.0L * twon - 1.0L);
    bn *= b;
    P += bn;
    twon *= 2.0L;
    twobn *= 2.0L * b;
  }
  return c;
}

LadderTransitions ladder_vs_halfline_transitions(double alpha, double beta, Index n) {
  check_params(alpha, beta);
  if (n < 1) throw Error(ErrorCode::InvalidParameters, "n must be >= 1");
  LadderTransitions t;
  t.half_back = 1.0 / (1.0 + alpha);
  t.half_forward = alpha / (1.0 + alpha);
  const double q = std::pow(beta / alpha, static_cast<double>(n));
  const double d = 1.0 + alpha + q;
  t.back = 1.0 / d;
  t.forward = alpha / d;
  t.rung = q / d;
  t.row_sum = t.back + t.forward + t.rung;
  return t;
}

nlohmann::json LadderEnergy::to_json() const {
  return {{"x_rail", x_rail.empty() ? 0.0 : x_rail.back()},
          {"y_rail", y_rail.empty() ? 0.0 : y_rail.back()},
          {"rungs", rungs.empty() ? 0.0 : rungs.back()},
          {"total", total.empty() ? 0.0 : total.back()},
          {"converged", converged},
          {"converged_at", converged_at},
          {"alpha_gt_4beta2", condition_4beta2},
          {"alpha_gt_refined", condition_refined},
          {"status", status}};
}

nlohmann::json LadderTransitions::to_json() const {
  return {{"half_line", {half_back, half_forward}},
          {"ladder", {back, forward, rung}},
          {"row_sum", row_sum}};
}

}  // namespace resbdy
