#pragma once

#include "resbdy/scalar.hpp"

#include <nlohmann/json.hpp>

#include <complex>
#include <cstdint>

namespace resbdy {

// S samples of N i.i.d. standard normal coordinates. Sample block b of
// `streams` equal blocks is drawn from mt19937_64 seeded with
// seed_seq{seed, b}, so the samples depend only on (seed, N, S, streams),
// not on the number of worker threads.
class GaussianEnsemble {
 public:
  GaussianEnsemble(Index N, Index S, std::uint64_t seed, unsigned streams = 16);

  Index N() const { return N_; }
  Index S() const { return S_; }
  std::uint64_t seed() const { return seed_; }
  unsigned streams() const { return streams_; }
  // S x N, one sample per row.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>& samples() const { return xi_; }

 private:
  Index N_, S_;
  std::uint64_t seed_;
  unsigned streams_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> xi_;
};

GaussianEnsemble sample_ensemble(Index N, Index S, std::uint64_t seed, unsigned streams = 16);

// Per-sample values of u~(xi) = sum_n u_n xi_n.
Vec<double> wiener_transform(const Vec<double>& u, const GaussianEnsemble& ens);

struct McStat {
  double mean = 0.0;
  double stderr_ = 0.0;
};
McStat mean_and_stderr(const Vec<double>& x);

struct MinlosResult {
  std::complex<double> estimate;
  double target = 0.0;
  double abs_error = 0.0;
  double stderr_ = 0.0;
  bool pass = false;
  nlohmann::json to_json() const;
};
MinlosResult minlos_check(const Vec<double>& u, const GaussianEnsemble& ens);

struct MomentResult {
  int power = 0;
  double estimate = 0.0;
  double target = 0.0;
  double stderr_ = 0.0;
  bool pass = false;
  nlohmann::json to_json() const;
};
// E[u~^{2n}] against (2n)! / (2^n n!) |u|^{2n}.
MomentResult moment_check(const Vec<double>& u, const GaussianEnsemble& ens, int n);
// E[u~^p] for odd p against 0.
MomentResult odd_moment_check(const Vec<double>& u, const GaussianEnsemble& ens, int p);
// E[u~^{2n}] / |u|^{2n} against (2n)! / (2^n n!).
MomentResult normalized_moment_check(const Vec<double>& u, const GaussianEnsemble& ens, int n);

struct ResistanceMcResult {
  double target = 0.0;
  double square_estimate = 0.0;
  double square_stderr = 0.0;
  bool square_pass = false;
  double exp_estimate = 0.0;
  double exp_stderr = 0.0;
  bool exp_pass = false;
  double abs_floor = 0.0;
  nlohmann::json to_json() const;
};
// Coefficients of v_x and v_y; target is the solver's R(x, y). Passes within
// max(4 stderr, abs_floor).
ResistanceMcResult resistance_via_expectation(const Vec<double>& vx, const Vec<double>& vy,
                                              const GaussianEnsemble& ens, double target, double abs_floor = 0.0);

struct BoundaryIntegralResult {
  double estimate = 0.0;
  double target = 0.0;
  double stderr_ = 0.0;
  double tail_bound = 0.0;
  double negative_fraction = 0.0;
  bool pass = false;
  nlohmann::json to_json() const;
};
// E[u~ h~_x] against u(x) - u(o). norm_u2, norm_h2 are the full energies; the
// truncation tail is bounded by Cauchy-Schwarz on the coordinates past N.
BoundaryIntegralResult boundary_integral_check(const Vec<double>& u, const Vec<double>& h, const GaussianEnsemble& ens,
                                               double target, double norm_u2, double norm_h2);

}  // namespace resbdy
