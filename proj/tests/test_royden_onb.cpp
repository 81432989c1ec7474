#include "resbdy/onb.hpp"
#include "resbdy/royden.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace resbdy;

TEST_CASE("finite networks have no harmonic part", "[royden]") {
  auto gen = preset("grid-4x4");
  auto ex = make_exhaustion<double>(gen, default_schedule(gen));
  auto s = royden_split(ex, {5}, RoydenOptions{}).front();
  CHECK(to_double(s.energy_h) < 1e-20);
  CHECK((s.v - s.f).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ladder kernels split with a nontrivial harmonic part", "[royden]") {
  auto gen = NetworkGenerator::ladder(5.0, 0.9);
  auto sched = default_schedule(gen);
  const Precision prec = precision_for(gen, sched.expand().back());
  auto [ev, ef, eh, res, pyth] = with_precision(prec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(gen, sched);
    auto s = royden_split(ex, {ladder_x(1)}, RoydenOptions{}).front();
    return std::make_tuple(to_double(s.energy_v), to_double(s.energy_f), to_double(s.energy_h), s.harm_residual_max,
                           s.pythagoras_rel);
  });
  CHECK(eh > 1e-3);
  CHECK(std::abs(ev - ef - eh) <= 1e-6 * ev);
  CHECK(res <= 1e-6);
  CHECK(pyth <= 1e-6);
  // v_x(x) = R^F(o, x) and the wired value is smaller.
  CHECK(ef < ev);
}

TEST_CASE("recurrent triage forces a trivial harmonic part", "[royden]") {
  auto gen = NetworkGenerator::lattice(1);
  auto ex = make_exhaustion<double>(gen, default_schedule(gen));
  auto s = royden_split(ex, {1}, RoydenOptions{}, Transience::Recurrent).front();
  CHECK(s.harm_trivial);
  CHECK(to_double(s.energy_h) == 0.0);
}

TEST_CASE("gram-schmidt on a path", "[onb]") {
  // Kernels v_1 = (0,1,1), v_2 = (0,1,2): V = [[1,1],[1,2]], eps_1 = v_1,
  // eps_2 = v_2 - v_1, so M = [[1,0],[-1,1]] and E = M^-1 = [[1,0],[1,1]].
  auto gen = preset("path-3");
  auto ex = make_exhaustion<double>(gen, default_schedule(gen));
  auto b = build_onb(ex, 2);
  const auto& s = b.onb;
  REQUIRE(s.points == std::vector<Index>{1, 2});
  Mat<double> V(2, 2), M(2, 2), E(2, 2);
  V << 1, 1, 1, 2;
  M << 1, 0, -1, 1;
  E << 1, 0, 1, 1;
  CHECK((s.V - V).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((s.M - M).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((s.E - E).cwiseAbs().maxCoeff() < 1e-14);
  auto id = onb_identities(s);
  CHECK(id.orthonormality < 1e-14);
  CHECK(id.kronecker < 1e-14);
  Vec<double> u(3);
  u << 0, 2, 5;
  Vec<double> c = coefficients(s, u);
  // <eps_1, u> = u(1) - u(o), <eps_2, u> = u(2) - u(1).
  CHECK(c[0] == Catch::Approx(2.0));
  CHECK(c[1] == Catch::Approx(3.0));
}

TEST_CASE("gram-schmidt identities on the ladder", "[onb]") {
  auto gen = NetworkGenerator::ladder(5.0, 0.9);
  auto sched = default_schedule(gen);
  const Precision prec = precision_for(gen, sched.expand().back());
  auto id = with_precision(prec, [&](auto tag) {
    using S = typename decltype(tag)::type;
    auto ex = make_exhaustion<S>(gen, sched);
    return onb_identities(build_onb(ex, 12).onb);
  });
  CHECK(id.m_vs_laplacian <= 1e-7);
  CHECK(id.e_vs_evaluation <= 1e-7);
  CHECK(id.eet_vs_gram <= 1e-7);
  CHECK(id.kronecker <= 1e-7);
  CHECK(id.orthonormality <= 1e-9);
}

TEST_CASE("repeated kernels are degenerate", "[onb]") {
  auto gen = preset("path-3");
  auto ex = make_exhaustion<double>(gen, default_schedule(gen));
  auto b = build_onb(ex, 2);
  Mat<double> k(3, 2);
  k.col(0) = b.onb.kernels.col(0);
  k.col(1) = b.onb.kernels.col(0);
  CHECK_THROWS_AS(gram_schmidt(ex.network(), k, {1, 1}), Error);
}

TEST_CASE("number operator pairing", "[onb]") {
  Vec<double> u(3);
  u << 1, 2, 3;
  Vec<double> nu = number_operator(u);
  CHECK(nu[0] == 1.0);
  CHECK(nu[1] == 4.0);
  CHECK(nu[2] == 9.0);
  CHECK(p_seminorm(u, 0) == Catch::Approx(std::sqrt(14.0)));
}
