#pragma once

#include "resbdy/errors.hpp"
#include "resbdy/scalar.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace resbdy {

// Conductance of one edge, stored symbolically as base^power so that any
// scalar type can evaluate it exactly to its own precision.
struct Weight {
  double base = 1.0;
  int power = 1;
};

struct EdgeSpec {
  std::int64_t a = 0;
  std::int64_t b = 0;
  double c = 1.0;
};

// Topology of a materialized network. Vertex 0 is the origin and indices are
// sorted by radius, so every ball is an index prefix.
class Graph {
 public:
  Graph() = default;

  Index size() const { return static_cast<Index>(radius_.size()); }
  Index origin() const { return 0; }
  Index edge_count() const { return static_cast<Index>(adj_.size()) / 2; }

  std::span<const Index> neighbors(Index v) const {
    return {adj_.data() + offsets_[v], static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
  }
  Index slot_begin(Index v) const { return offsets_[v]; }
  Index slot_end(Index v) const { return offsets_[v + 1]; }
  Index slot_target(Index s) const { return adj_[s]; }
  const Weight& slot_weight(Index s) const { return weights_[s]; }
  std::optional<Index> slot_of(Index u, Index v) const;

  Index radius(Index v) const { return radius_[v]; }
  Index max_radius() const { return radius_.empty() ? 0 : radius_.back(); }
  // Number of vertices with radius <= r.
  Index ball_size(Index r) const;
  // Largest radius whose ball has every edge leaving it materialized.
  Index exact_radius() const { return exact_radius_; }
  bool complete() const { return complete_; }

  std::int64_t label(Index v) const { return labels_[v]; }
  std::optional<Index> index_of(std::int64_t label) const;

  // Graph with vertices [0, n) and only edges inside it.
  Graph induced_prefix(Index n) const;

 private:
  std::vector<Index> offsets_{0};
  std::vector<Index> adj_;
  std::vector<Weight> weights_;
  std::vector<Index> radius_;
  std::vector<std::int64_t> labels_;
  Index exact_radius_ = 0;
  bool complete_ = false;

  friend Graph build_topology(std::vector<std::vector<std::pair<Index, Weight>>> adjacency,
                              std::vector<Index> radius, std::vector<std::int64_t> labels,
                              Index exact_radius, bool complete);
};

Graph build_topology(std::vector<std::vector<std::pair<Index, Weight>>> adjacency,
                     std::vector<Index> radius, std::vector<std::int64_t> labels,
                     Index exact_radius, bool complete);

enum class Family { FiniteExplicit, Ladder, GeometricHalfLine, Lattice, BinaryTree };

struct NetworkGenerator {
  Family family = Family::FiniteExplicit;
  double alpha = 0.0;
  double beta = 0.0;
  int dim = 1;
  std::vector<EdgeSpec> edges;
  std::int64_t origin = 0;

  static NetworkGenerator finite(std::vector<EdgeSpec> edges, std::int64_t origin = 0);
  static NetworkGenerator ladder(double alpha, double beta);
  static NetworkGenerator half_line(double alpha);
  static NetworkGenerator lattice(int dim);
  static NetworkGenerator binary_tree();

  void validate() const;
  bool is_finite() const { return family == Family::FiniteExplicit; }
  std::string family_name() const;
  // log10 of max/min conductance inside the ball of the given radius.
  double log10_conductance_range(Index radius) const;
  // Crude log10 upper bound on potentials solved inside that ball.
  double log10_potential_scale(Index radius) const;

  nlohmann::json to_json() const;
  static NetworkGenerator from_json(const nlohmann::json& j);
};

// Preset finite networks used by tests and the CLI: path-5, triangle, star-4,
// grid-4x4.
NetworkGenerator preset(const std::string& name);

// Vertices within the given radius. The host is complete to radius - 1 at
// least; generated families are materialized one shell deeper so that the
// boundary of the requested ball is exact.
Graph materialize(const NetworkGenerator& gen, Index radius);

Graph build_finite_graph(const std::vector<EdgeSpec>& edges, std::int64_t origin);

// Ladder vertex helpers: x_n = 2n, y_n = 2n + 1.
inline Index ladder_x(Index n) { return 2 * n; }
inline Index ladder_y(Index n) { return 2 * n + 1; }

// Conductances evaluated in Scalar on a shared topology.
template <class Scalar>
class BasicNetwork {
 public:
  BasicNetwork() = default;
  explicit BasicNetwork(std::shared_ptr<const Graph> g) : g_(std::move(g)) {
    const Index slots = g_->slot_end(g_->size() - 1);
    c_.resize(static_cast<std::size_t>(slots));
    total_.assign(static_cast<std::size_t>(g_->size()), Scalar(0));
    for (Index v = 0; v < g_->size(); ++v) {
      for (Index s = g_->slot_begin(v); s < g_->slot_end(v); ++s) {
        const Weight& w = g_->slot_weight(s);
        c_[s] = ipow<Scalar>(w.base, w.power);
        total_[v] += c_[s];
      }
    }
  }

  const Graph& graph() const { return *g_; }
  std::shared_ptr<const Graph> graph_ptr() const { return g_; }
  Index size() const { return g_->size(); }
  Index origin() const { return 0; }
  std::span<const Index> neighbors(Index v) const { return g_->neighbors(v); }
  const Scalar& slot_conductance(Index s) const { return c_[s]; }
  const Scalar& total(Index v) const { return total_[v]; }
  Scalar conductance(Index u, Index v) const {
    auto s = g_->slot_of(u, v);
    return s ? c_[*s] : Scalar(0);
  }

  template <class Other>
  BasicNetwork<Other> cast() const {
    return BasicNetwork<Other>(g_);
  }

  // Edges (u < v) with conductances.
  std::vector<std::tuple<Index, Index, Scalar>> edges() const {
    std::vector<std::tuple<Index, Index, Scalar>> out;
    for (Index u = 0; u < size(); ++u)
      for (Index s = g_->slot_begin(u); s < g_->slot_end(u); ++s)
        if (g_->slot_target(s) > u) out.emplace_back(u, g_->slot_target(s), c_[s]);
    return out;
  }

 private:
  std::shared_ptr<const Graph> g_;
  std::vector<Scalar> c_;
  std::vector<Scalar> total_;
};

using Network = BasicNetwork<double>;

template <class Scalar = double>
BasicNetwork<Scalar> build_finite(const std::vector<EdgeSpec>& edges, std::int64_t origin = 0) {
  return BasicNetwork<Scalar>(std::make_shared<const Graph>(build_finite_graph(edges, origin)));
}

template <class Scalar = double>
BasicNetwork<Scalar> generate_ball(const NetworkGenerator& gen, Index radius) {
  if (radius < 1) throw Error(ErrorCode::InvalidParameters, "radius must be >= 1");
  auto g = std::make_shared<const Graph>(materialize(gen, radius));
  if (gen.is_finite()) return BasicNetwork<Scalar>(g);
  return BasicNetwork<Scalar>(std::make_shared<const Graph>(g->induced_prefix(g->ball_size(radius))));
}

struct RadiusSchedule {
  enum class Kind { Linear, Geometric, Explicit };
  Kind kind = Kind::Linear;
  Index start = 1;
  Index step = 1;
  double factor = 2.0;
  Index levels = 200;
  std::vector<Index> radii;

  static RadiusSchedule linear(Index start, Index step, Index levels);
  static RadiusSchedule geometric(Index start, double factor, Index levels);
  static RadiusSchedule explicit_radii(std::vector<Index> radii);
  // "linear:START:STEP:LEVELS", "geometric:START:FACTOR:LEVELS" or
  // "explicit:R1,R2,...".
  static RadiusSchedule parse(const std::string& text);
  std::string to_string() const;

  std::vector<Index> expand() const;
};

// G_1 subset G_2 subset ... realized as prefixes of one host network.
template <class Scalar>
struct Exhaustion {
  std::shared_ptr<const BasicNetwork<Scalar>> host;
  std::vector<Index> radii;
  std::vector<Index> sizes;

  Index levels() const { return static_cast<Index>(radii.size()); }
  const BasicNetwork<Scalar>& network() const { return *host; }
};

template <class Scalar>
Exhaustion<Scalar> make_exhaustion(const NetworkGenerator& gen, const RadiusSchedule& sched) {
  auto radii = sched.expand();
  if (radii.empty()) throw Error(ErrorCode::InvalidParameters, "empty radius schedule");
  const Index rmax = radii.back();
  auto g = std::make_shared<const Graph>(materialize(gen, rmax));
  Exhaustion<Scalar> ex;
  ex.host = std::make_shared<const BasicNetwork<Scalar>>(g);
  for (Index r : radii) {
    ex.radii.push_back(r);
    ex.sizes.push_back(g->ball_size(r));
  }
  return ex;
}

template <class Scalar>
Exhaustion<Scalar> default_exhaustion(const NetworkGenerator& gen, Index levels) {
  if (levels < 1) throw Error(ErrorCode::InvalidParameters, "levels must be >= 1");
  return make_exhaustion<Scalar>(gen, RadiusSchedule::linear(1, 1, levels));
}

Precision precision_for(const NetworkGenerator& gen, Index max_radius);

// Human-readable vertex name: "x3"/"y3" on the ladder, lattice coordinate on
// Z^1, the input label on finite networks.
std::string vertex_name(const NetworkGenerator& gen, const Graph& g, Index v);
// Inverse of vertex_name; also accepts "o" and a plain internal index "#12".
Index parse_vertex(const NetworkGenerator& gen, const Graph& g, const std::string& text);

// BFS order from the origin, excluding it; ties broken by ascending index.
std::vector<Index> enumerate_vertices(const Graph& g);

}  // namespace resbdy
