#pragma once

#include "resbdy/solver.hpp"

#include <nlohmann/json.hpp>

namespace resbdy {

struct OnbOptions {
  double degeneracy_tol = 1e-12;
  double reorth_threshold = 1e-10;
};

// Orthonormalization of the kernels v_{x_1}, ..., v_{x_N} in the energy inner
// product: eps_n = sum_k M(n, k) v_{x_k}, E = M^{-1}, V the Gram matrix.
template <class Scalar>
struct OnbSystem {
  const BasicNetwork<Scalar>* net = nullptr;
  std::vector<Index> points;
  Mat<Scalar> kernels;
  Mat<Scalar> eps;
  Mat<Scalar> M, E, V;
  double min_pivot = 0.0;
  int reorthogonalized = 0;

  Index N() const { return static_cast<Index>(points.size()); }
};

template <class Scalar>
OnbSystem<Scalar> gram_schmidt(const BasicNetwork<Scalar>& net, const Mat<Scalar>& kernels,
                               const std::vector<Index>& points, const OnbOptions& opt = {}) {
  using std::sqrt;
  const Index N = kernels.cols();
  if (static_cast<Index>(points.size()) != N) throw Error(ErrorCode::DimensionMismatch, "points vs kernels");
  OnbSystem<Scalar> s;
  s.net = &net;
  s.points = points;
  s.kernels = kernels;
  s.V = Mat<Scalar>::Zero(N, N);
  for (Index i = 0; i < N; ++i)
    for (Index j = 0; j <= i; ++j) s.V(i, j) = s.V(j, i) = energy(net, kernels.col(i), kernels.col(j));

  Mat<Scalar> R = Mat<Scalar>::Zero(N, N);
  s.eps = Mat<Scalar>::Zero(kernels.rows(), N);
  s.min_pivot = std::numeric_limits<double>::infinity();
  for (Index n = 0; n < N; ++n) {
    Vec<Scalar> w = kernels.col(n);
    auto sweep = [&] {
      for (Index j = 0; j < n; ++j) {
        Scalar r = energy(net, w, s.eps.col(j));
        w -= r * s.eps.col(j);
        R(j, n) += r;
      }
    };
    sweep();
    Scalar nn = energy(net, w);
    Scalar rnn = nn > Scalar(0) ? Scalar(sqrt(nn)) : Scalar(0);
    if (!(to_double(rnn) >= opt.degeneracy_tol))
      throw Error(ErrorCode::GramDegenerate,
                  "pivot " + std::to_string(to_double(rnn)) + " at n = " + std::to_string(n + 1));
    Vec<Scalar> e = w / rnn;
    double loss = 0.0;
    for (Index j = 0; j < n; ++j) loss = std::max(loss, std::abs(to_double(energy(net, e, s.eps.col(j)))));
    if (loss > opt.reorth_threshold) {
      ++s.reorthogonalized;
      sweep();
      nn = energy(net, w);
      rnn = sqrt(nn);
      e = w / rnn;
    }
    R(n, n) = rnn;
    s.eps.col(n) = e;
    s.min_pivot = std::min(s.min_pivot, to_double(rnn));
  }
  s.E = R.transpose();
  Mat<Scalar> I = Mat<Scalar>::Identity(N, N);
  s.M = s.E.template triangularView<Eigen::Lower>().solve(I);
  return s;
}

// (Delta eps_i)(x_j) for all i, j; the lower triangle should reproduce M and
// the strict upper triangle vanish.
template <class Scalar>
Mat<Scalar> entries_M_via_laplacian(const OnbSystem<Scalar>& s) {
  const Index N = s.N();
  Mat<Scalar> out(N, N);
  for (Index i = 0; i < N; ++i)
    for (Index j = 0; j < N; ++j) out(i, j) = laplacian(*s.net, s.eps.col(i), s.points[j]);
  return out;
}

// eps_j(x_i) - eps_j(o) for all i, j.
template <class Scalar>
Mat<Scalar> entries_E_via_evaluation(const OnbSystem<Scalar>& s) {
  const Index N = s.N();
  Mat<Scalar> out(N, N);
  for (Index i = 0; i < N; ++i)
    for (Index j = 0; j < N; ++j) out(i, j) = s.eps(s.points[i], j) - s.eps(0, j);
  return out;
}

// max over i, j of |sum_{j <= k <= i} (eps_k(x_i) - eps_k(o)) (Delta eps_k)(x_j) - delta_ij|.
template <class Scalar>
double kronecker_sum_check(const OnbSystem<Scalar>& s) {
  const Index N = s.N();
  Mat<Scalar> Ev = entries_E_via_evaluation(s);
  Mat<Scalar> Ml = entries_M_via_laplacian(s);
  double worst = 0.0;
  for (Index i = 0; i < N; ++i)
    for (Index j = 0; j < N; ++j) {
      Scalar sum(0);
      for (Index k = j; k <= i; ++k) sum += Ev(i, k) * Ml(k, j);
      if (i == j) sum -= Scalar(1);
      worst = std::max(worst, std::abs(to_double(sum)));
    }
  return worst;
}

struct OnbIdentityReport {
  Index N = 0;
  double orthonormality = 0.0;
  double inverse_pair = 0.0;
  double m_vs_laplacian = 0.0;
  double e_vs_evaluation = 0.0;
  double eet_vs_gram = 0.0;
  double gram_vs_reproducing = 0.0;
  double kronecker = 0.0;
  double span = 0.0;
  double min_pivot = 0.0;
  int reorthogonalized = 0;

  nlohmann::json to_json() const {
    return {{"N", N},
            {"orthonormality", orthonormality},
            {"EM_minus_I", inverse_pair},
            {"M_vs_laplacian", m_vs_laplacian},
            {"E_vs_evaluation", e_vs_evaluation},
            {"EEt_vs_V", eet_vs_gram},
            {"V_vs_reproducing", gram_vs_reproducing},
            {"kronecker_sum", kronecker},
            {"span_reconstruction", span},
            {"min_pivot", min_pivot},
            {"reorthogonalized", reorthogonalized}};
  }
};

template <class Scalar>
double max_abs(const Mat<Scalar>& a) {
  double w = 0.0;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) w = std::max(w, std::abs(to_double(a(i, j))));
  return w;
}

template <class Scalar>
OnbIdentityReport onb_identities(const OnbSystem<Scalar>& s) {
  using std::sqrt;
  OnbIdentityReport r;
  const Index N = s.N();
  r.N = N;
  r.min_pivot = s.min_pivot;
  r.reorthogonalized = s.reorthogonalized;
  Mat<Scalar> G(N, N);
  for (Index i = 0; i < N; ++i)
    for (Index j = 0; j <= i; ++j) G(i, j) = G(j, i) = energy(*s.net, s.eps.col(i), s.eps.col(j));
  Mat<Scalar> I = Mat<Scalar>::Identity(N, N);
  r.orthonormality = max_abs<Scalar>(G - I);
  r.inverse_pair = max_abs<Scalar>(s.E * s.M - I);
  Mat<Scalar> Ml = entries_M_via_laplacian(s);
  Mat<Scalar> Ev = entries_E_via_evaluation(s);
  r.m_vs_laplacian = max_abs<Scalar>(Ml - s.M);
  r.e_vs_evaluation = max_abs<Scalar>(Ev - s.E);
  r.eet_vs_gram = max_abs<Scalar>(Ev * Ev.transpose() - s.V);
  Mat<Scalar> Vr(N, N);
  for (Index i = 0; i < N; ++i)
    for (Index j = 0; j < N; ++j) Vr(i, j) = s.kernels(s.points[i], j);
  r.gram_vs_reproducing = max_abs<Scalar>(Vr - s.V);
  r.kronecker = kronecker_sum_check(s);
  for (Index n = 0; n < N; ++n) {
    Vec<Scalar> rec = Vec<Scalar>::Zero(s.eps.rows());
    for (Index j = 0; j <= n; ++j) rec += Ev(n, j) * s.eps.col(j);
    Vec<Scalar> d = s.kernels.col(n) - rec;
    r.span = std::max(r.span, std::sqrt(std::max(0.0, to_double(energy(*s.net, d)))));
  }
  return r;
}

// ONB coordinates of u from its values at x_1..x_N via the reproducing
// property: <u, eps_n> = sum_k M(n, k) (u(x_k) - u(o)).
template <class Scalar, class D>
Vec<double> coefficients(const OnbSystem<Scalar>& s, const Eigen::MatrixBase<D>& u) {
  const Index N = s.N();
  Vec<Scalar> du(N);
  for (Index k = 0; k < N; ++k) {
    if (s.points[k] >= u.size()) throw Error(ErrorCode::DimensionMismatch, "potential does not reach x_k");
    du[k] = Scalar(u[s.points[k]]) - Scalar(u[0]);
  }
  Vec<Scalar> c = s.M.template triangularView<Eigen::Lower>() * du;
  return to_double(c);
}

// (u_n) -> (n u_n).
inline Vec<double> number_operator(const Vec<double>& u) {
  Vec<double> out(u.size());
  for (Index n = 0; n < u.size(); ++n) out[n] = static_cast<double>(n + 1) * u[n];
  return out;
}

inline double p_seminorm(const Vec<double>& u, int p) {
  if (p < 0) throw Error(ErrorCode::InvalidParameters, "p must be >= 0");
  double s = 0.0;
  for (Index n = 0; n < u.size(); ++n) s += std::pow(static_cast<double>(n + 1), p) * u[n] * u[n];
  return std::sqrt(s);
}

// <v_{x_n}, Omega v_{x_m}> computed from coordinates and from the evaluation
// sum over k <= min(n, m) of k eps_k(x_n) eps_k(x_m); indices are 1-based.
template <class Scalar>
std::pair<double, double> number_operator_pairing(const OnbSystem<Scalar>& s, Index n, Index m) {
  Vec<double> cn = coefficients(s, s.kernels.col(n - 1));
  Vec<double> cm = coefficients(s, s.kernels.col(m - 1));
  double lhs = cn.dot(number_operator(cm));
  Scalar rhs(0);
  for (Index k = 1; k <= std::min(n, m); ++k)
    rhs += Scalar(static_cast<double>(k)) * (s.eps(s.points[n - 1], k - 1) - s.eps(0, k - 1)) *
           (s.eps(s.points[m - 1], k - 1) - s.eps(0, k - 1));
  return {lhs, to_double(rhs)};
}

// Kernels at the first N enumerated vertices, solved on a common converged
// free level, then orthonormalized.
template <class Scalar>
struct OnbBuild {
  OnbSystem<Scalar> onb;
  DipoleBatch<Scalar> batch;
};

template <class Scalar>
OnbBuild<Scalar> build_onb(const Exhaustion<Scalar>& ex, Index N, const SolverOptions& sopt = {},
                           const OnbOptions& oopt = {}, const std::string& precision_name = "") {
  auto order = enumerate_vertices(ex.network().graph());
  if (static_cast<Index>(order.size()) < N) throw Error(ErrorCode::InvalidParameters, "network has fewer than N vertices");
  std::vector<Index> pts(order.begin(), order.begin() + N);
  OnbBuild<Scalar> out;
  out.batch = solve_dipoles(ex, pts, {BoundaryCondition::Free}, sopt, precision_name);
  out.onb = gram_schmidt(ex.network(), out.batch.values[0], pts, oopt);
  return out;
}

}  // namespace resbdy
