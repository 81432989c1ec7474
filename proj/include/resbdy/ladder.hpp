#pragma once

#include "resbdy/scalar.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace resbdy {

// Explicit harmonic function on the (alpha, beta)-ladder: values u(n) on the
// x-rail, -1 - u(n) on the y-rail, u(0) = 0, u(1) = 1/alpha.
struct LadderHarmonic {
  double alpha = 0.0;
  double beta = 0.0;
  Index N = 0;
  std::vector<long double> u;      // u(0..N)
  std::vector<long double> du;     // du(n) = u(n+1) - u(n), n = 0..N-1
  std::vector<long double> scaled; // alpha^{n+1} du(n)
  std::vector<double> residual_x;  // Laplacian at x_n, n = 0..N-1
  std::vector<double> residual_y;

  double y(Index n) const { return static_cast<double>(-1.0L - u[n]); }
  double max_residual() const;
  // Value on the ladder vertex with internal index 2n (x_n) or 2n+1 (y_n).
  double at_vertex(Index v) const { return v % 2 == 0 ? static_cast<double>(u[v / 2]) : y(v / 2); }
};

LadderHarmonic ladder_harmonic(double alpha, double beta, Index N);

// The same function evaluated in Scalar on ladder vertex ids (x_n = 2n,
// y_n = 2n + 1) for columns 0..N.
template <class Scalar>
Vec<Scalar> ladder_values(double alpha, double beta, Index N) {
  Vec<Scalar> out(2 * (N + 1));
  const Scalar a(alpha), r = Scalar(beta) / a;
  Scalar u(0), du = Scalar(1) / a, q(1);
  for (Index n = 0; n <= N; ++n) {
    out[2 * n] = u;
    out[2 * n + 1] = Scalar(-1) - u;
    if (n >= 1) {
      q *= r;
      du = du / a + q * (Scalar(2) * u + Scalar(1)) / a;
    }
    u += du;
  }
  return out;
}

struct LadderEnergy {
  std::vector<double> x_rail;  // partial sums of alpha^{n+1} du(n)^2
  std::vector<double> y_rail;
  std::vector<double> rungs;   // partial sums of beta^n (2u(n)+1)^2
  std::vector<double> total;
  bool converged = false;
  Index converged_at = -1;
  bool condition_4beta2 = false;  // alpha > 4 beta^2
  bool condition_refined = false; // alpha > (1 + 1/alpha)^2 beta^2
  std::string status;             // "converged" or "inconclusive"
  nlohmann::json to_json() const;
};

LadderEnergy ladder_energy(const LadderHarmonic& lh, double tol_limit = 1e-8);

struct DuBoundCheck {
  std::vector<double> bound;  // alpha^{n+1} times the bound on du(n)
  Index violations = 0;
  double worst_ratio = 0.0;   // max over n of scaled(n) / bound(n)
};

// Term-by-term check of du(n) <= alpha^{-(n+1)} (1 + beta (1 - beta^n)/(1 - beta)
// + (2 beta)^n / alpha + 2 (beta/alpha) sum_{k<n} 2^k (beta^k - beta^n)/(1 - beta)).
DuBoundCheck du_bound_check(const LadderHarmonic& lh);

struct LadderTransitions {
  double half_back = 0.0, half_forward = 0.0;
  double back = 0.0, forward = 0.0, rung = 0.0;
  double row_sum = 0.0;
  nlohmann::json to_json() const;
};

LadderTransitions ladder_vs_halfline_transitions(double alpha, double beta, Index n);

}  // namespace resbdy
