#include "resbdy/boundary.hpp"
#include "resbdy/energy.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace resbdy;

namespace {

Vec<double> vec(std::initializer_list<double> xs) {
  Vec<double> v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("energy of a linear potential on a path", "[energy]") {
  auto net = build_finite<double>({{0, 1, 1.0}, {1, 2, 1.0}}, 0);
  Vec<double> v = vec({0, 1, 2});
  CHECK(energy(net, v) == 2.0);
  CHECK(energy(net, v, vec({1, 1, 1})) == 0.0);
}

TEST_CASE("laplacian at interior and end vertices", "[energy]") {
  auto net = build_finite<double>({{0, 1, 1.0}, {1, 2, 1.0}}, 0);
  Vec<double> v = vec({0, 1, 2});
  CHECK(laplacian(net, v, 1) == 0.0);
  CHECK(laplacian(net, v, Index{0}) == -1.0);
  CHECK(laplacian(net, v, 2) == 1.0);
  auto tri = build_finite<double>({{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}}, 0);
  Vec<double> d = vec({1, 0, 0});
  // Delta v(x) = sum_y c_xy (v(x) - v(y)).
  CHECK(laplacian(tri, d, Index{0}) == 4.0);
  CHECK(laplacian(tri, d, *tri.graph().index_of(1)) == -1.0);
  CHECK(laplacian(tri, d, *tri.graph().index_of(2)) == -3.0);
}

TEST_CASE("normal derivative on a window boundary", "[energy]") {
  auto net = build_finite<double>({{0, 1, 1.0}, {1, 2, 1.0}}, 0);
  Vec<double> v = vec({0, 1, 2});
  auto h = SubgraphView::prefix(net.graph(), 2);
  REQUIRE(h.boundary() == std::vector<Index>{1});
  CHECK(normal_derivative(net, v, h, 1) == 1.0);
  CHECK_THROWS_AS(normal_derivative(net, v, h, 0), Error);
}

TEST_CASE("gauss-green holds on every prefix window", "[energy]") {
  auto gen = preset("grid-4x4");
  auto net = build_finite<double>(gen.edges, 0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Vec<double> u(net.size()), v(net.size());
  for (Index i = 0; i < net.size(); ++i) {
    u[i] = uni(rng);
    v[i] = uni(rng);
  }
  std::vector<Index> sizes;
  for (Index r = 0; r <= net.graph().max_radius(); ++r) sizes.push_back(net.graph().ball_size(r));
  auto rep = gauss_green_verify(net, u, v, sizes);
  // Whole network: energy(u, v) = sum u Delta v with no boundary term.
  double direct = 0.0;
  for (Index x = 0; x < net.size(); ++x) direct += u[x] * laplacian(net, v, x);
  CHECK(rep.target == Catch::Approx(direct).margin(1e-12));
  CHECK(rep.max_level_deviation < 1e-12);
  CHECK(rep.levels.back().deviation < 1e-12);
}

TEST_CASE("potentials must cover the window", "[energy]") {
  auto net = build_finite<double>({{0, 1, 1.0}, {1, 2, 1.0}}, 0);
  CHECK_THROWS_AS(energy(net, vec({0, 1}), vec({0, 1, 2})), Error);
  CHECK_THROWS_AS(laplacian(net, vec({0, 1}), 1), Error);
}
