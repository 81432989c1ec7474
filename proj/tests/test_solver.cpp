#include "resbdy/solver.hpp"

#include <Eigen/SparseCholesky>
#include <catch2/catch_amalgamated.hpp>

using namespace resbdy;

namespace {

Exhaustion<double> whole(const NetworkGenerator& gen) { return make_exhaustion<double>(gen, default_schedule(gen)); }

// R(x, o) from a grounded sparse LDL^T solve of Delta v = delta_x.
double ldlt_resistance(const Network& net, Index x) {
  const Index n = net.size() - 1;
  std::vector<Eigen::Triplet<double>> t;
  for (auto& [a, b, c] : net.edges()) {
    if (a > 0) t.emplace_back(a - 1, a - 1, c);
    if (b > 0) t.emplace_back(b - 1, b - 1, c);
    if (a > 0 && b > 0) {
      t.emplace_back(a - 1, b - 1, -c);
      t.emplace_back(b - 1, a - 1, -c);
    }
  }
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(t.begin(), t.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(L);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs[x - 1] = 1.0;
  return ldlt.solve(rhs)[x - 1];
}

}  // namespace

TEST_CASE("triangle resistance is two thirds", "[solver]") {
  auto ex = whole(preset("triangle"));
  auto r = effective_resistance(ex, 1, 2, BoundaryCondition::Free);
  CHECK(r.value == Catch::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(r.report.converged);
  CHECK(effective_resistance(ex, 1, 0, BoundaryCondition::Free).value == Catch::Approx(2.0 / 3.0));
}

TEST_CASE("series resistances add along a path", "[solver]") {
  auto ex = whole(preset("path-5"));
  for (Index k = 1; k <= 4; ++k) {
    auto kr = energy_kernel(ex, k, BoundaryCondition::Free);
    CHECK(kr.values[k] == Catch::Approx(static_cast<double>(k)));
    for (Index j = 0; j <= 4; ++j) CHECK(kr.values[j] == Catch::Approx(static_cast<double>(std::min(j, k))).margin(1e-14));
  }
}

TEST_CASE("kernel solves agree with a sparse LDLT", "[solver]") {
  auto gen = preset("grid-4x4");
  auto ex = whole(gen);
  const auto& net = ex.network();
  for (Index x = 1; x < net.size(); ++x) {
    auto k = energy_kernel(ex, x, BoundaryCondition::Free);
    CHECK(k.values[x] == Catch::Approx(ldlt_resistance(net, x)).epsilon(1e-12));
    std::vector<char> mask;
    Vec<double> lap = laplacian(net, k.values, &mask);
    for (Index y = 0; y < net.size(); ++y) {
      const double want = (y == x) - (y == 0);
      CHECK(lap[y] == Catch::Approx(want).margin(1e-12));
    }
  }
}

TEST_CASE("geometric half-line resistance to infinity", "[solver]") {
  // Conductance alpha^n on the edge (n-1, n): R(o, inf) = sum alpha^-n = 1 / (alpha - 1).
  auto gen = NetworkGenerator::half_line(2.0);
  auto ex = make_exhaustion<double>(gen, RadiusSchedule::linear(1, 1, 60));
  auto m = monopole(ex, 0);
  CHECK(m.transience == Transience::Transient);
  CHECK(m.report.limit == Catch::Approx(1.0).epsilon(1e-8));
  // Free and wired kernels coincide on a tree with one end.
  auto f = effective_resistance(ex, 3, 0, BoundaryCondition::Free);
  auto w = effective_resistance(ex, 3, 0, BoundaryCondition::Wired);
  CHECK(f.value == Catch::Approx(0.5 + 0.25 + 0.125));
  CHECK(w.value == Catch::Approx(f.value));
}

TEST_CASE("monopole energies diverge on Z^1", "[solver]") {
  auto gen = NetworkGenerator::lattice(1);
  auto sched = default_schedule(gen, true);
  const Precision prec = precision_for(gen, sched.expand().back());
  auto rep = with_precision(prec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(gen, sched);
    auto m = monopole(ex, 0);
    CHECK(m.transience == Transience::Recurrent);
    return m.report;
  });
  CHECK(rep.diverged);
  // Two rails of length k in parallel: energy(w_o) = k / 2 on the ball of radius k.
  CHECK(rep.values.front() == Catch::Approx(sched.expand().front() / 2.0));
}

TEST_CASE("convergence monitor stopping rules", "[solver]") {
  SolverOptions opt;
  ConvergenceMonitor plain("q", ConvergenceMonitor::Mode::Plain, opt);
  bool fired = false;
  for (int k = 1; k <= 80 && !fired; ++k) fired = plain.push(k, k, 1.0 - std::pow(0.5, k), -1.0, 0.0, false);
  CHECK(plain.report().converged);
  CHECK(plain.report().limit == Catch::Approx(1.0).epsilon(1e-7));

  ConvergenceMonitor div("q", ConvergenceMonitor::Mode::Accelerated, opt);
  div.allow_divergence(true);
  fired = false;
  for (int k = 1; k <= 40 && !fired; ++k) fired = div.push(k, k, std::pow(2.0, k), -1.0, 0.0, false);
  CHECK(div.report().diverged);
  CHECK_FALSE(div.report().converged);

  ConvergenceMonitor sat("q", ConvergenceMonitor::Mode::Plain, opt);
  CHECK(sat.push(1, 3, 0.5, -INFINITY, 0.0, true));
  CHECK(sat.report().converged);
}

TEST_CASE("level systems reject bad windows", "[solver]") {
  auto ex = whole(preset("triangle"));
  CHECK_THROWS_AS(LevelSystem<double>(ex.network(), 1, LevelSystem<double>::Kind::FreeDipole), Error);
  CHECK_THROWS_AS(LevelSystem<double>(ex.network(), 3, LevelSystem<double>::Kind::WiredMonopole), Error);
}

TEST_CASE("extended precision matches double on benign networks", "[solver]") {
  auto gen = preset("grid-4x4");
  Precision p{Precision::Kind::Extended, 50};
  double r = with_precision(p, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(gen, default_schedule(gen));
    return effective_resistance(ex, 15, 0, BoundaryCondition::Free).value;
  });
  auto ex = whole(gen);
  CHECK(r == Catch::Approx(effective_resistance(ex, 15, 0, BoundaryCondition::Free).value).epsilon(1e-13));
}
