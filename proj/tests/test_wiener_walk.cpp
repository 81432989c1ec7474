#include "resbdy/onb.hpp"
#include "resbdy/walk.hpp"
#include "resbdy/wiener.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace resbdy;

TEST_CASE("ensembles are reproducible and independent of threads", "[wiener]") {
  auto a = sample_ensemble(4, 2000, 11);
  auto b = sample_ensemble(4, 2000, 11);
  auto c = sample_ensemble(4, 2000, 12);
  CHECK(a.samples() == b.samples());
  CHECK(a.samples() != c.samples());
  CHECK(a.samples().rows() == 2000);
  CHECK(a.samples().cols() == 4);
}

TEST_CASE("minlos target for a unit vector", "[wiener]") {
  auto ens = sample_ensemble(3, 100000, 5);
  Vec<double> u = Vec<double>::Zero(3);
  u[0] = 1.0;
  auto r = minlos_check(u, ens);
  CHECK(r.target == Catch::Approx(std::exp(-0.5)));
  CHECK(r.pass);
  CHECK(std::abs(r.estimate.real() - r.target) <= 4.0 * r.stderr_);
}

TEST_CASE("gaussian moments of a linear functional", "[wiener]") {
  auto ens = sample_ensemble(5, 100000, 9);
  Vec<double> u(5);
  u << 0.5, -0.25, 0.1, 0.0, 0.3;
  auto m2 = moment_check(u, ens, 1);
  CHECK(m2.target == Catch::Approx(u.squaredNorm()));
  CHECK(m2.pass);
  auto m4 = normalized_moment_check(u, ens, 2);
  CHECK(m4.target == Catch::Approx(3.0));
  CHECK(m4.pass);
  CHECK(odd_moment_check(u, ens, 1).pass);
  CHECK(odd_moment_check(u, ens, 3).pass);
}

TEST_CASE("wiener transform is linear in the coefficients", "[wiener]") {
  auto ens = sample_ensemble(2, 100, 3);
  Vec<double> u(2), v(2);
  u << 1.0, 0.0;
  v << 0.0, 1.0;
  Vec<double> w = 2.0 * u - 3.0 * v;
  Vec<double> lhs = wiener_transform(w, ens);
  Vec<double> rhs = 2.0 * wiener_transform(u, ens) - 3.0 * wiener_transform(v, ens);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("resistance of the triangle as an expectation", "[wiener]") {
  auto gen = preset("triangle");
  auto ex = make_exhaustion<double>(gen, default_schedule(gen));
  auto b = build_onb(ex, 2);
  auto ens = sample_ensemble(2, 100000, 21);
  Vec<double> c1 = coefficients(b.onb, b.onb.kernels.col(0));
  Vec<double> c2 = coefficients(b.onb, b.onb.kernels.col(1));
  auto r = resistance_via_expectation(c1, c2, ens, 2.0 / 3.0, 1e-2);
  CHECK(r.square_pass);
  CHECK(r.exp_pass);
}

TEST_CASE("transition probabilities are conductance weighted", "[walk]") {
  auto net = build_finite<double>({{0, 1, 1.0}, {1, 2, 3.0}}, 0);
  auto p = transition_probabilities(net, 1);
  REQUIRE(p.size() == 2);
  CHECK(p[0].second == Catch::Approx(0.25));
  CHECK(p[1].second == Catch::Approx(0.75));
}

TEST_CASE("symmetric walk from the middle of a path", "[walk]") {
  auto net = build_finite<double>({{0, 1, 1.0}, {1, 2, 1.0}}, 0);
  WalkConfig cfg;
  cfg.trials = 100000;
  cfg.seed = 3;
  auto h = hitting_probability_mc(net, 1, 2, 0, cfg);
  CHECK(std::abs(h.estimate - 0.5) <= 4.0 * h.stderr_);
  CHECK(h.unabsorbed == 0);
  CHECK(hitting_probability_mc(net, 2, 2, 0, cfg).estimate == 1.0);
  CHECK(hitting_probability_mc(net, 0, 2, 0, cfg).estimate == 0.0);
}

TEST_CASE("wired network shorts the window boundary", "[walk]") {
  auto host = generate_ball<double>(NetworkGenerator::lattice(1), 3);
  const Index n = host.graph().ball_size(2);
  auto [w, map] = wired_network(host, n);
  // Z^1 ball of radius 2 with -2 and 2 shorted: o, +-1 and one boundary vertex.
  CHECK(w.size() == 4);
  CHECK(map[0] == 0);
  const Index g = map[n - 1];
  CHECK(map[n - 2] == g);
  CHECK(w.graph().neighbors(g).size() == 2);
}
