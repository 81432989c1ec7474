#include "resbdy/boundary.hpp"
#include "resbdy/ladder.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace resbdy;

TEST_CASE("ladder recursion first values", "[ladder]") {
  auto lh = ladder_harmonic(5.0, 0.9, 10);
  CHECK(static_cast<double>(lh.u[0]) == 0.0);
  CHECK(static_cast<double>(lh.u[1]) == 1.0 / 5.0);
  // Harmonic at x_1: 5 (u1 - 0) + 25 (u1 - u2) + 0.9 (u1 - (-1 - u1)) = 0.
  CHECK(static_cast<double>(lh.u[2]) == Catch::Approx(0.2904).epsilon(1e-14));
  CHECK(lh.y(1) == Catch::Approx(-1.2));
  CHECK(lh.max_residual() < 1e-15);
}

TEST_CASE("ladder recursion is increasing and harmonic", "[ladder]") {
  auto lh = ladder_harmonic(5.0, 0.9, 200);
  for (auto d : lh.du) CHECK(d > 0.0L);
  CHECK(lh.max_residual() <= 1e-9);
  auto bd = du_bound_check(lh);
  CHECK(bd.violations == 0);
  CHECK(bd.worst_ratio <= 1.0);
}

TEST_CASE("ladder energy converges for beta below one", "[ladder]") {
  auto lh = ladder_harmonic(5.0, 0.9, 200);
  auto en = ladder_energy(lh);
  CHECK(en.converged);
  CHECK(en.status == "converged");
  CHECK(en.total.back() == Catch::Approx(en.x_rail.back() + en.y_rail.back() + en.rungs.back()));
  // Column 0 contributes the rung (2u(0)+1)^2 = 1 and the rail edges 5 (0.2)^2 each.
  CHECK(en.total.front() == Catch::Approx(1.0 + 2 * 5.0 * 0.04));
}

TEST_CASE("ladder parameters are validated", "[ladder]") {
  CHECK_THROWS_AS(ladder_harmonic(1.0, 0.5, 10), Error);
  CHECK_THROWS_AS(ladder_harmonic(5.0, 1.5, 10), Error);
  CHECK_THROWS_AS(ladder_harmonic(5.0, 0.9, 1), Error);
}

TEST_CASE("ladder and half-line transition probabilities", "[ladder]") {
  auto t = ladder_vs_halfline_transitions(2.0, 0.5, 1);
  CHECK(t.half_back == Catch::Approx(1.0 / 3.0));
  CHECK(t.half_forward == Catch::Approx(2.0 / 3.0));
  CHECK(t.back + t.forward + t.rung == Catch::Approx(1.0));
  CHECK(t.rung == Catch::Approx(0.5 / 6.5));
}

TEST_CASE("ladder values on vertex ids", "[ladder]") {
  Vec<double> u = ladder_values<double>(5.0, 0.9, 3);
  REQUIRE(u.size() == 8);
  CHECK(u[ladder_x(1)] == Catch::Approx(0.2));
  CHECK(u[ladder_y(1)] == Catch::Approx(-1.2));
  CHECK(u[ladder_y(0)] == Catch::Approx(-1.0));
}

TEST_CASE("boundary sums of the ladder solution recover u(x_1) - u(o)", "[boundary]") {
  auto gen = NetworkGenerator::ladder(5.0, 0.9);
  const Precision prec = precision_for(gen, 12);
  auto rep = with_precision(prec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(gen, RadiusSchedule::linear(1, 1, 12));
    const Index cols = ex.network().size() / 2 - 1;
    return boundary_sum_harmonic(ex, ladder_values<S>(5.0, 0.9, cols), ladder_x(1));
  });
  CHECK(rep.target == Catch::Approx(0.2));
  CHECK(std::abs(rep.final_deviation) <= 1e-3);
  for (const auto& l : rep.levels) CHECK(l.interior == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("boundary sums need a harmonic u", "[boundary]") {
  auto gen = NetworkGenerator::ladder(5.0, 0.9);
  auto ex = make_exhaustion<double>(gen, RadiusSchedule::linear(1, 1, 4));
  Vec<double> u = Vec<double>::LinSpaced(ex.network().size(), 0.0, 1.0);
  CHECK_THROWS_AS(boundary_sum_harmonic(ex, u, ladder_x(1)), Error);
}

TEST_CASE("named paths to infinity", "[boundary]") {
  auto gen = NetworkGenerator::ladder(5.0, 0.9);
  Graph g = materialize(gen, 12);
  auto x = path_for(gen, "x-rail");
  auto y = path_for(gen, "y-rail");
  CHECK(x.prefix(2) == std::vector<Index>{0, 2, 4});
  CHECK(y.prefix(2) == std::vector<Index>{0, 1, 3});
  CHECK(check_path(g, x, 10));
  CHECK(check_path(g, y, 10));
  CHECK_THROWS_AS(path_for(gen, "diagonal"), Error);
  auto z = NetworkGenerator::lattice(1);
  Graph zg = materialize(z, 12);
  CHECK(check_path(zg, path_for(z, "positive"), 10));
  CHECK(check_path(zg, path_for(z, "negative"), 10));
  auto t = NetworkGenerator::binary_tree();
  Graph tg = materialize(t, 6);
  CHECK(check_path(tg, path_for(t, "leftmost"), 5));
  CHECK(check_path(tg, path_for(t, "rightmost"), 5));
}

TEST_CASE("path equivalence verdicts on synthetic probes", "[boundary]") {
  ProbeSet ps;
  ps.names = {"p"};
  ps.horizon = 8;
  for (double scale : {1.0, 1.0}) {
    ProbeLevel l;
    l.along_a = {std::vector<double>(9, 0.3 * scale)};
    l.along_b = {std::vector<double>(9, 0.1 * scale)};
    ps.levels.push_back(l);
  }
  CHECK(path_equivalence(ps).verdict == Equivalence::Inequivalent);
  CHECK(path_equivalence(ps).certified_by == "p");

  ProbeSet close = ps;
  close.levels[0].along_b = {std::vector<double>(9, 0.3 - 5e-5)};
  close.levels[1].along_b = {std::vector<double>(9, 0.3 - 2e-5)};
  CHECK(path_equivalence(close).verdict == Equivalence::Equivalent);

  ProbeSet grow = close;
  grow.levels[1].along_b = {std::vector<double>(9, 0.3 - 8e-5)};
  CHECK(path_equivalence(grow).verdict == Equivalence::Inconclusive);
}

TEST_CASE("probes separate the ladder rails", "[boundary]") {
  auto gen = NetworkGenerator::ladder(5.0, 0.9);
  auto probes = compute_probes(gen, {64, 128}, path_for(gen, "x-rail"), path_for(gen, "y-rail"), 40);
  auto rep = path_equivalence(probes);
  CHECK(rep.verdict == Equivalence::Inequivalent);
  CHECK(rep.certified_by == "h_x1");
}
