#include "resbdy/network.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace resbdy;

TEST_CASE("finite network indexes by distance from the origin", "[network]") {
  auto net = build_finite<double>({{0, 1, 1.0}, {1, 2, 2.0}, {0, 3, 1.0}}, 0);
  const Graph& g = net.graph();
  REQUIRE(g.size() == 4);
  CHECK(g.origin() == 0);
  CHECK(g.radius(0) == 0);
  CHECK(g.radius(1) == 1);
  CHECK(g.radius(2) == 1);
  CHECK(g.radius(3) == 2);
  CHECK(g.label(3) == 2);
  CHECK(net.conductance(*g.index_of(1), *g.index_of(2)) == 2.0);
  CHECK(net.total(*g.index_of(1)) == 3.0);
}

TEST_CASE("malformed finite networks are rejected", "[network]") {
  auto code_of = [](std::vector<EdgeSpec> e, std::int64_t o = 0) {
    try {
      build_finite_graph(e, o);
    } catch (const Error& err) {
      return err.code();
    }
    return ErrorCode::UsageError;
  };
  CHECK(code_of({{0, 0, 1.0}}) == ErrorCode::SelfLoop);
  CHECK(code_of({{0, 1, 0.0}}) == ErrorCode::NonpositiveConductance);
  CHECK(code_of({{0, 1, -1.0}}) == ErrorCode::NonpositiveConductance);
  CHECK(code_of({{0, 1, 1.0}, {2, 3, 1.0}}) == ErrorCode::DisconnectedGraph);
  CHECK(code_of({{0, 1, 1.0}}, 7) == ErrorCode::DisconnectedGraph);
}

TEST_CASE("parallel conductors add, symmetric listings do not", "[network]") {
  auto sym = build_finite<double>({{0, 1, 2.0}, {1, 0, 2.0}}, 0);
  CHECK(sym.conductance(0, 1) == 2.0);
  auto par = build_finite<double>({{0, 1, 2.0}, {0, 1, 3.0}}, 0);
  CHECK(par.conductance(0, 1) == 5.0);
}

TEST_CASE("family parameters are validated", "[network]") {
  CHECK_THROWS_AS(NetworkGenerator::ladder(1.0, 0.5).validate(), Error);
  CHECK_THROWS_AS(NetworkGenerator::ladder(5.0, 1.5).validate(), Error);
  CHECK_THROWS_AS(NetworkGenerator::ladder(5.0, 0.0).validate(), Error);
  CHECK_NOTHROW(NetworkGenerator::ladder(5.0, 1.0).validate());
  CHECK_THROWS_AS(NetworkGenerator::half_line(0.0).validate(), Error);
  CHECK_THROWS_AS(NetworkGenerator::lattice(0).validate(), Error);
  CHECK_THROWS_AS(materialize(NetworkGenerator::ladder(5.0, 0.9), 0), Error);
}

TEST_CASE("ladder balls hold two vertices per column", "[network]") {
  auto gen = NetworkGenerator::ladder(5.0, 0.9);
  Graph g = materialize(gen, 10);
  for (Index k = 0; k <= 10; ++k) CHECK(g.ball_size(k) == 2 * (k + 1));
  auto net = generate_ball<double>(gen, 3);
  CHECK(net.size() == 8);
  CHECK(net.conductance(ladder_x(2), ladder_x(3)) == Catch::Approx(125.0));
  CHECK(net.conductance(ladder_x(3), ladder_y(3)) == Catch::Approx(0.729));
  CHECK(net.conductance(ladder_x(0), ladder_y(0)) == Catch::Approx(1.0));
}

TEST_CASE("enumeration is breadth first with ascending ties", "[network]") {
  Graph g = materialize(NetworkGenerator::ladder(5.0, 0.9), 3);
  auto order = enumerate_vertices(g);
  REQUIRE(order.size() >= 5);
  CHECK(order[0] == ladder_y(0));
  CHECK(order[1] == ladder_x(1));
  CHECK(order[2] == ladder_y(1));
  CHECK(order[3] == ladder_x(2));

  Graph z = materialize(NetworkGenerator::lattice(1), 3);
  auto zo = enumerate_vertices(z);
  CHECK(z.radius(zo[0]) == 1);
  CHECK(z.radius(zo[1]) == 1);
  CHECK(zo[0] < zo[1]);
}

TEST_CASE("lattice and tree balls have the expected sizes", "[network]") {
  CHECK(materialize(NetworkGenerator::lattice(1), 5).ball_size(5) == 11);
  CHECK(materialize(NetworkGenerator::lattice(2), 3).ball_size(3) == 25);
  CHECK(materialize(NetworkGenerator::binary_tree(), 4).ball_size(4) == 31);
  CHECK(materialize(NetworkGenerator::half_line(2.0), 4).ball_size(4) == 5);
}

TEST_CASE("vertex names round trip", "[network]") {
  auto gen = NetworkGenerator::ladder(5.0, 0.9);
  Graph g = materialize(gen, 5);
  for (Index v = 0; v < g.ball_size(5); ++v) CHECK(parse_vertex(gen, g, vertex_name(gen, g, v)) == v);
  CHECK(parse_vertex(gen, g, "x1") == ladder_x(1));
  CHECK(parse_vertex(gen, g, "y2") == ladder_y(2));
}

TEST_CASE("network specs parse from JSON", "[network]") {
  auto f = NetworkGenerator::from_json(nlohmann::json::parse(R"({"edges": [[0,1,1],[1,2]], "origin": 0})"));
  CHECK(f.is_finite());
  CHECK(f.edges.size() == 2);
  auto l = NetworkGenerator::from_json(nlohmann::json::parse(R"({"family": "ladder", "params": {"alpha": 3, "beta": 0.5}})"));
  CHECK(l.family == Family::Ladder);
  CHECK(l.alpha == 3.0);
  CHECK(l.beta == 0.5);
  CHECK(NetworkGenerator::from_json(l.to_json()).to_json() == l.to_json());
  CHECK_THROWS_AS(preset("no-such-network"), Error);
}

TEST_CASE("radius schedules expand and parse", "[network]") {
  CHECK(RadiusSchedule::linear(2, 3, 4).expand() == std::vector<Index>{2, 5, 8, 11});
  CHECK(RadiusSchedule::geometric(1, 2.0, 4).expand() == std::vector<Index>{1, 2, 4, 8});
  CHECK(RadiusSchedule::parse("explicit:3,7").expand() == std::vector<Index>{3, 7});
  CHECK(RadiusSchedule::parse("linear:1:1:3").expand() == std::vector<Index>{1, 2, 3});
  CHECK_THROWS_AS(RadiusSchedule::parse("cubic:1"), Error);
}
