#include "resbdy/wiener.hpp"
#include "resbdy/errors.hpp"

#include <cmath>
#include <random>
#include <thread>
#include <vector>

namespace resbdy {

GaussianEnsemble::GaussianEnsemble(Index N, Index S, std::uint64_t seed, unsigned streams)
    : N_(N), S_(S), seed_(seed), streams_(std::max(1u, streams)) {
  if (N < 1 || S < 1) throw Error(ErrorCode::InvalidParameters, "ensemble needs N, S >= 1");
  xi_.resize(S, N);
  const unsigned workers = std::min<unsigned>(worker_count(), streams_);
  auto fill = [&](unsigned first) {
    for (unsigned b = first; b < streams_; b += workers) {
      Index lo = S * b / streams_, hi = S * (b + 1) / streams_;
      std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(b)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Index s = lo; s < hi; ++s)
        for (Index n = 0; n < N; ++n) xi_(s, n) = normal(rng);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(fill, w);
  fill(0);
  for (auto& t : pool) t.join();
}

GaussianEnsemble sample_ensemble(Index N, Index S, std::uint64_t seed, unsigned streams) {
  return GaussianEnsemble(N, S, seed, streams);
}

Vec<double> wiener_transform(const Vec<double>& u, const GaussianEnsemble& ens) {
  if (u.size() > ens.N())
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(u.size()) + " coordinates for an ensemble of dimension " + std::to_string(ens.N()));
  return ens.samples().leftCols(u.size()) * u;
}

McStat mean_and_stderr(const Vec<double>& x) {
  const double S = static_cast<double>(x.size());
  McStat st;
  st.mean = x.sum() / S;
  double var = (x.array() - st.mean).square().sum() / std::max(1.0, S - 1.0);
  st.stderr_ = std::sqrt(var / S);
  return st;
}

MinlosResult minlos_check(const Vec<double>& u, const GaussianEnsemble& ens) {
  Vec<double> t = wiener_transform(u, ens);
  Vec<double> c = t.array().cos();
  Vec<double> s = t.array().sin();
  McStat sc = mean_and_stderr(c), ss = mean_and_stderr(s);
  MinlosResult r;
  r.estimate = {sc.mean, ss.mean};
  r.target = std::exp(-0.5 * u.squaredNorm());
  r.abs_error = std::abs(r.estimate - std::complex<double>(r.target, 0.0));
  r.stderr_ = std::hypot(sc.stderr_, ss.stderr_);
  r.pass = r.abs_error <= 4.0 * r.stderr_ || r.abs_error == 0.0;
  return r;
}

namespace {

double double_factorial_ratio(int n) {
  // (2n)! / (2^n n!) = (2n - 1)!!
  double r = 1.0;
  for (int k = 1; k <= 2 * n - 1; k += 2) r *= k;
  return r;
}

MomentResult power_mean(const Vec<double>& t, int p, double target) {
  Vec<double> x = t.array().pow(p);
  McStat st = mean_and_stderr(x);
  MomentResult r;
  r.power = p;
  r.estimate = st.mean;
  r.target = target;
  r.stderr_ = st.stderr_;
  r.pass = std::abs(st.mean - target) <= 4.0 * st.stderr_ || st.mean == target;
  return r;
}

}  // namespace

MomentResult moment_check(const Vec<double>& u, const GaussianEnsemble& ens, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidParameters, "moment order must be >= 1");
  Vec<double> t = wiener_transform(u, ens);
  return power_mean(t, 2 * n, double_factorial_ratio(n) * std::pow(u.squaredNorm(), n));
}

MomentResult odd_moment_check(const Vec<double>& u, const GaussianEnsemble& ens, int p) {
  if (p < 1 || p % 2 == 0) throw Error(ErrorCode::InvalidParameters, "odd power expected");
  return power_mean(wiener_transform(u, ens), p, 0.0);
}

MomentResult normalized_moment_check(const Vec<double>& u, const GaussianEnsemble& ens, int n) {
  double norm = std::sqrt(u.squaredNorm());
  if (norm == 0.0) throw Error(ErrorCode::InvalidParameters, "zero vector");
  Vec<double> t = wiener_transform(u, ens) / norm;
  return power_mean(t, 2 * n, double_factorial_ratio(n));
}

ResistanceMcResult resistance_via_expectation(const Vec<double>& vx, const Vec<double>& vy,
                                              const GaussianEnsemble& ens, double target, double abs_floor) {
  if (vx.size() != vy.size()) throw Error(ErrorCode::DimensionMismatch, "coefficient lengths differ");
  Vec<double> tx = wiener_transform(vx, ens), ty = wiener_transform(vy, ens);
  Vec<double> d = tx - ty;
  ResistanceMcResult r;
  r.target = target;
  r.abs_floor = abs_floor;
  McStat sq = mean_and_stderr(Vec<double>(d.array().square()));
  r.square_estimate = sq.mean;
  r.square_stderr = sq.stderr_;
  r.square_pass = std::abs(sq.mean - target) <= std::max(4.0 * sq.stderr_, abs_floor);
  // E[conj(e^{i x~}) e^{i y~}] is real in expectation; its imaginary part
  // only adds noise.
  McStat c = mean_and_stderr(Vec<double>(d.array().cos()));
  if (c.mean > 0.0) {
    r.exp_estimate = -2.0 * std::log(c.mean);
    r.exp_stderr = 2.0 * c.stderr_ / c.mean;
  } else {
    r.exp_estimate = std::numeric_limits<double>::infinity();
    r.exp_stderr = std::numeric_limits<double>::infinity();
  }
  r.exp_pass = std::abs(r.exp_estimate - target) <= std::max(4.0 * r.exp_stderr, abs_floor);
  return r;
}

BoundaryIntegralResult boundary_integral_check(const Vec<double>& u, const Vec<double>& h, const GaussianEnsemble& ens,
                                               double target, double norm_u2, double norm_h2) {
  if (u.size() != h.size()) throw Error(ErrorCode::DimensionMismatch, "coefficient lengths differ");
  Vec<double> tu = wiener_transform(u, ens), th = wiener_transform(h, ens);
  McStat st = mean_and_stderr(Vec<double>(tu.array() * th.array()));
  BoundaryIntegralResult r;
  r.estimate = st.mean;
  r.stderr_ = st.stderr_;
  r.target = target;
  r.tail_bound = std::sqrt(std::max(0.0, norm_u2 - u.squaredNorm())) * std::sqrt(std::max(0.0, norm_h2 - h.squaredNorm()));
  r.negative_fraction = static_cast<double>((th.array() < -1.0).count()) / static_cast<double>(th.size());
  r.pass = std::abs(st.mean - target) <= 4.0 * st.stderr_ + r.tail_bound;
  return r;
}

nlohmann::json MinlosResult::to_json() const {
  return {{"estimate_re", estimate.real()}, {"estimate_im", estimate.imag()}, {"target", target},
          {"abs_error", abs_error},         {"stderr", stderr_},              {"pass", pass}};
}

nlohmann::json MomentResult::to_json() const {
  return {{"power", power}, {"estimate", estimate}, {"target", target}, {"stderr", stderr_}, {"pass", pass}};
}

nlohmann::json ResistanceMcResult::to_json() const {
  auto fin = [](double x) -> nlohmann::json { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  return {{"target", target},
          {"square_estimate", square_estimate},
          {"square_stderr", square_stderr},
          {"square_pass", square_pass},
          {"exp_estimate", fin(exp_estimate)},
          {"exp_stderr", fin(exp_stderr)},
          {"exp_pass", exp_pass},
          {"abs_floor", abs_floor},
          {"pass", square_pass && exp_pass}};
}

nlohmann::json BoundaryIntegralResult::to_json() const {
  return {{"estimate", estimate}, {"target", target},
          {"stderr", stderr_},    {"tail_bound", tail_bound},
          {"negative_fraction", negative_fraction}, {"pass", pass}};
}

}  // namespace resbdy
