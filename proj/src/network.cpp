#include "resbdy/network.hpp"

#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace resbdy {

std::optional<Index> Graph::slot_of(Index u, Index v) const {
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return std::nullopt;
  return offsets_[u] + (it - nb.begin());
}

Index Graph::ball_size(Index r) const {
  return std::upper_bound(radius_.begin(), radius_.end(), r) - radius_.begin();
}

std::optional<Index> Graph::index_of(std::int64_t label) const {
  for (Index v = 0; v < size(); ++v)
    if (labels_[v] == label) return v;
  return std::nullopt;
}

Graph Graph::induced_prefix(Index n) const {
  std::vector<std::vector<std::pair<Index, Weight>>> adj(n);
  for (Index v = 0; v < n; ++v)
    for (Index s = offsets_[v]; s < offsets_[v + 1]; ++s)
      if (adj_[s] < n) adj[v].emplace_back(adj_[s], weights_[s]);
  std::vector<Index> radius(radius_.begin(), radius_.begin() + n);
  std::vector<std::int64_t> labels(labels_.begin(), labels_.begin() + n);
  Index r = radius.empty() ? 0 : radius.back();
  return build_topology(std::move(adj), std::move(radius), std::move(labels), r, true);
}

Graph build_topology(std::vector<std::vector<std::pair<Index, Weight>>> adjacency,
                     std::vector<Index> radius, std::vector<std::int64_t> labels,
                     Index exact_radius, bool complete) {
  Graph g;
  const Index n = static_cast<Index>(adjacency.size());
  g.offsets_.assign(n + 1, 0);
  for (Index v = 0; v < n; ++v) {
    auto& a = adjacency[v];
    std::sort(a.begin(), a.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
    g.offsets_[v + 1] = g.offsets_[v] + static_cast<Index>(a.size());
  }
  g.adj_.resize(g.offsets_[n]);
  g.weights_.resize(g.offsets_[n]);
  for (Index v = 0; v < n; ++v) {
    Index s = g.offsets_[v];
    for (auto& [t, w] : adjacency[v]) {
      g.adj_[s] = t;
      g.weights_[s] = w;
      ++s;
    }
    std::vector<std::pair<Index, Weight>>().swap(adjacency[v]);
  }
  g.radius_ = std::move(radius);
  g.labels_ = std::move(labels);
  g.exact_radius_ = exact_radius;
  g.complete_ = complete;
  return g;
}

Graph build_finite_graph(const std::vector<EdgeSpec>& edges, std::int64_t origin) {
  // Merge by unordered pair. A pair listed once in each orientation with the
  // same conductance is the symmetric closure; anything else is parallel
  // conductors and is summed.
  struct Acc {
    double fwd = 0.0, bwd = 0.0;
    int nf = 0, nb = 0;
  };
  std::map<std::pair<std::int64_t, std::int64_t>, Acc> pairs;
  for (const auto& e : edges) {
    if (e.a == e.b) throw Error(ErrorCode::SelfLoop, "edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ")");
    if (!(e.c > 0.0) || !std::isfinite(e.c))
      throw Error(ErrorCode::NonpositiveConductance,
                  "edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ")");
    auto key = std::minmax(e.a, e.b);
    Acc& acc = pairs[{key.first, key.second}];
    if (e.a < e.b) {
      acc.fwd += e.c;
      ++acc.nf;
    } else {
      acc.bwd += e.c;
      ++acc.nb;
    }
  }
  std::map<std::int64_t, std::vector<std::pair<std::int64_t, double>>> nbr;
  for (auto& [key, acc] : pairs) {
    double c = (acc.nf == 1 && acc.nb == 1 && acc.fwd == acc.bwd) ? acc.fwd : acc.fwd + acc.bwd;
    nbr[key.first].emplace_back(key.second, c);
    nbr[key.second].emplace_back(key.first, c);
  }
  if (!nbr.count(origin)) {
    if (pairs.empty()) throw Error(ErrorCode::DisconnectedGraph, "no edges");
    throw Error(ErrorCode::DisconnectedGraph, "origin " + std::to_string(origin) + " has no edges");
  }
  for (auto& [v, list] : nbr) std::sort(list.begin(), list.end());

  std::map<std::int64_t, Index> index;
  std::vector<std::int64_t> order;
  std::vector<Index> dist;
  std::deque<std::int64_t> queue{origin};
  index[origin] = 0;
  order.push_back(origin);
  dist.push_back(0);
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    Index dv = dist[index[v]];
    for (auto& [w, c] : nbr[v]) {
      if (index.count(w)) continue;
      index[w] = static_cast<Index>(order.size());
      order.push_back(w);
      dist.push_back(dv + 1);
      queue.push_back(w);
    }
  }
  if (order.size() != nbr.size())
    throw Error(ErrorCode::DisconnectedGraph,
                std::to_string(nbr.size() - order.size()) + " vertices unreachable from origin");

  std::vector<std::vector<std::pair<Index, Weight>>> adj(order.size());
  for (Index i = 0; i < static_cast<Index>(order.size()); ++i)
    for (auto& [w, c] : nbr[order[i]]) adj[i].emplace_back(index[w], Weight{c, 1});
  Index r = dist.back();
  return build_topology(std::move(adj), std::move(dist), std::move(order), r, true);
}

namespace {

Index tree_depth(Index i) {
  Index d = 0;
  while (i > 0) {
    i = (i - 1) / 2;
    ++d;
  }
  return d;
}

Index z1_index(std::int64_t z) { return z == 0 ? 0 : (z < 0 ? -2 * z - 1 : 2 * z); }
std::int64_t z1_label(Index i) { return i == 0 ? 0 : (i % 2 == 1 ? -(i + 1) / 2 : i / 2); }

Graph materialize_lattice(int d, Index r) {
  if (d == 1) {
    const Index n = 2 * r + 1;
    std::vector<std::vector<std::pair<Index, Weight>>> adj(n);
    std::vector<Index> radius(n);
    std::vector<std::int64_t> labels(n);
    for (Index i = 0; i < n; ++i) {
      std::int64_t z = z1_label(i);
      labels[i] = z;
      radius[i] = z < 0 ? -z : z;
      for (std::int64_t w : {z - 1, z + 1}) {
        Index j = z1_index(w);
        if (j < n) adj[i].emplace_back(j, Weight{1.0, 0});
      }
    }
    return build_topology(std::move(adj), std::move(radius), std::move(labels), r - 1, false);
  }
  std::vector<std::vector<int>> pts;
  std::vector<int> p(d, 0);
  // All points of L1 norm <= r, by (norm, lexicographic).
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == d) {
      pts.push_back(p);
      return;
    }
    for (int x = -left; x <= left; ++x) {
      p[k] = x;
      rec(k + 1, left - std::abs(x));
    }
  };
  rec(0, static_cast<int>(r));
  auto norm = [](const std::vector<int>& q) {
    int s = 0;
    for (int x : q) s += std::abs(x);
    return s;
  };
  std::stable_sort(pts.begin(), pts.end(), [&](const auto& a, const auto& b) {
    int na = norm(a), nb = norm(b);
    return na != nb ? na < nb : a < b;
  });
  std::map<std::vector<int>, Index> index;
  for (Index i = 0; i < static_cast<Index>(pts.size()); ++i) index[pts[i]] = i;
  const Index n = static_cast<Index>(pts.size());
  std::vector<std::vector<std::pair<Index, Weight>>> adj(n);
  std::vector<Index> radius(n);
  std::vector<std::int64_t> labels(n);
  for (Index i = 0; i < n; ++i) {
    radius[i] = norm(pts[i]);
    labels[i] = i;
    for (int k = 0; k < d; ++k)
      for (int s : {-1, 1}) {
        auto q = pts[i];
        q[k] += s;
        auto it = index.find(q);
        if (it != index.end()) adj[i].emplace_back(it->second, Weight{1.0, 0});
      }
  }
  return build_topology(std::move(adj), std::move(radius), std::move(labels), r - 1, false);
}

}  // namespace

Graph materialize(const NetworkGenerator& gen, Index radius) {
  gen.validate();
  if (radius < 1) throw Error(ErrorCode::InvalidParameters, "radius must be >= 1");
  if (gen.is_finite()) return build_finite_graph(gen.edges, gen.origin);
  const Index r = radius + 1;
  switch (gen.family) {
    case Family::Ladder: {
      const Index n = 2 * (r + 1);
      std::vector<std::vector<std::pair<Index, Weight>>> adj(n);
      std::vector<Index> rad(n);
      std::vector<std::int64_t> labels(n);
      for (Index k = 0; k <= r; ++k) {
        Index x = ladder_x(k), y = ladder_y(k);
        rad[x] = rad[y] = k;
        labels[x] = x;
        labels[y] = y;
        adj[x].emplace_back(y, Weight{gen.beta, static_cast<int>(k)});
        adj[y].emplace_back(x, Weight{gen.beta, static_cast<int>(k)});
        if (k >= 1) {
          Weight w{gen.alpha, static_cast<int>(k)};
          adj[x].emplace_back(ladder_x(k - 1), w);
          adj[ladder_x(k - 1)].emplace_back(x, w);
          adj[y].emplace_back(ladder_y(k - 1), w);
          adj[ladder_y(k - 1)].emplace_back(y, w);
        }
      }
      return build_topology(std::move(adj), std::move(rad), std::move(labels), radius, false);
    }
    case Family::GeometricHalfLine: {
      const Index n = r + 1;
      std::vector<std::vector<std::pair<Index, Weight>>> adj(n);
      std::vector<Index> rad(n);
      std::vector<std::int64_t> labels(n);
      for (Index k = 0; k < n; ++k) {
        rad[k] = k;
        labels[k] = k;
        if (k >= 1) {
          Weight w{gen.alpha, static_cast<int>(k)};
          adj[k].emplace_back(k - 1, w);
          adj[k - 1].emplace_back(k, w);
        }
      }
      return build_topology(std::move(adj), std::move(rad), std::move(labels), radius, false);
    }
    case Family::Lattice:
      return materialize_lattice(gen.dim, r);
    case Family::BinaryTree: {
      if (r > 40) throw Error(ErrorCode::InvalidParameters, "binary tree depth too large");
      const Index n = (Index{1} << (r + 1)) - 1;
      std::vector<std::vector<std::pair<Index, Weight>>> adj(n);
      std::vector<Index> rad(n);
      std::vector<std::int64_t> labels(n);
      for (Index i = 0; i < n; ++i) {
        rad[i] = tree_depth(i);
        labels[i] = i;
        if (i > 0) adj[i].emplace_back((i - 1) / 2, Weight{1.0, 0});
        for (Index c : {2 * i + 1, 2 * i + 2})
          if (c < n) adj[i].emplace_back(c, Weight{1.0, 0});
      }
      return build_topology(std::move(adj), std::move(rad), std::move(labels), radius, false);
    }
    default:
      break;
  }
  throw Error(ErrorCode::InvalidParameters, "unknown family");
}

NetworkGenerator NetworkGenerator::finite(std::vector<EdgeSpec> edges, std::int64_t origin) {
  NetworkGenerator g;
  g.family = Family::FiniteExplicit;
  g.edges = std::move(edges);
  g.origin = origin;
  return g;
}

NetworkGenerator NetworkGenerator::ladder(double alpha, double beta) {
  NetworkGenerator g;
  g.family = Family::Ladder;
  g.alpha = alpha;
  g.beta = beta;
  return g;
}

NetworkGenerator NetworkGenerator::half_line(double alpha) {
  NetworkGenerator g;
  g.family = Family::GeometricHalfLine;
  g.alpha = alpha;
  return g;
}

NetworkGenerator NetworkGenerator::lattice(int dim) {
  NetworkGenerator g;
  g.family = Family::Lattice;
  g.dim = dim;
  return g;
}

NetworkGenerator NetworkGenerator::binary_tree() {
  NetworkGenerator g;
  g.family = Family::BinaryTree;
  return g;
}

void NetworkGenerator::validate() const {
  switch (family) {
    case Family::Ladder:
      // beta = 1 is admitted: the one-point-boundary case is needed for path
      // equivalence.
      if (!(alpha > 1.0) || !(beta > 0.0) || !(beta <= 1.0) || !std::isfinite(alpha))
        throw Error(ErrorCode::InvalidParameters, "ladder needs alpha > 1 >= beta > 0");
      break;
    case Family::GeometricHalfLine:
      if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw Error(ErrorCode::InvalidParameters, "half-line needs alpha > 0");
      break;
    case Family::Lattice:
      if (dim < 1 || dim > 6) throw Error(ErrorCode::InvalidParameters, "lattice dimension must be 1..6");
      break;
    case Family::FiniteExplicit:
      if (edges.empty()) throw Error(ErrorCode::InvalidParameters, "finite network without edges");
      break;
    case Family::BinaryTree:
      break;
  }
}

std::string NetworkGenerator::family_name() const {
  switch (family) {
    case Family::FiniteExplicit: return "finite-explicit";
    case Family::Ladder: return "ladder";
    case Family::GeometricHalfLine: return "geometric-half-line";
    case Family::Lattice: return "lattice";
    case Family::BinaryTree: return "binary-tree";
  }
  return "unknown";
}

double NetworkGenerator::log10_conductance_range(Index radius) const {
  const double r = static_cast<double>(radius);
  switch (family) {
    case Family::Ladder:
      return (r + 2.0) * std::log10(alpha) + r * std::abs(std::log10(beta));
    case Family::GeometricHalfLine:
      return (r + 2.0) * std::abs(std::log10(alpha));
    case Family::FiniteExplicit: {
      double lo = INFINITY, hi = 0.0;
      for (const auto& e : edges) {
        lo = std::min(lo, e.c);
        hi = std::max(hi, e.c);
      }
      return lo > 0.0 ? std::log10(hi / lo) : 0.0;
    }
    default:
      return 0.0;
  }
}

double NetworkGenerator::log10_potential_scale(Index radius) const {
  const double r = static_cast<double>(radius);
  switch (family) {
    case Family::Ladder:
      return 1.0;
    case Family::GeometricHalfLine:
      return alpha >= 1.0 ? 1.0 : 1.0 + r * std::abs(std::log10(alpha));
    case Family::FiniteExplicit: {
      double s = 0.0;
      for (const auto& e : edges) s += 1.0 / e.c;
      return std::max(0.0, std::log10(s));
    }
    default:
      return std::log10(r + 1.0);
  }
}

nlohmann::json NetworkGenerator::to_json() const {
  nlohmann::json j;
  switch (family) {
    case Family::FiniteExplicit: {
      nlohmann::json e = nlohmann::json::array();
      for (const auto& x : edges) e.push_back({x.a, x.b, x.c});
      j["edges"] = e;
      j["origin"] = origin;
      break;
    }
    case Family::Ladder:
      j = {{"family", "ladder"}, {"params", {{"alpha", alpha}, {"beta", beta}}}};
      break;
    case Family::GeometricHalfLine:
      j = {{"family", "geometric-half-line"}, {"params", {{"alpha", alpha}}}};
      break;
    case Family::Lattice:
      j = {{"family", "lattice"}, {"params", {{"d", dim}}}};
      break;
    case Family::BinaryTree:
      j = {{"family", "binary-tree"}, {"params", nlohmann::json::object()}};
      break;
  }
  return j;
}

NetworkGenerator NetworkGenerator::from_json(const nlohmann::json& j) {
  if (j.is_string()) return preset(j.get<std::string>());
  if (!j.is_object()) throw Error(ErrorCode::UsageError, "network spec must be an object");
  if (j.contains("edges")) {
    std::vector<EdgeSpec> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3)
        throw Error(ErrorCode::UsageError, "edges must be [i, j] or [i, j, c]");
      edges.push_back({e[0].get<std::int64_t>(), e[1].get<std::int64_t>(), e.size() == 3 ? e[2].get<double>() : 1.0});
    }
    auto g = finite(std::move(edges), j.value("origin", std::int64_t{0}));
    g.validate();
    return g;
  }
  const std::string fam = j.value("family", std::string());
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  NetworkGenerator g;
  if (fam == "ladder") {
    g = ladder(params.value("alpha", 5.0), params.value("beta", 0.9));
  } else if (fam == "geometric-half-line" || fam == "half-line") {
    g = half_line(params.value("alpha", 2.0));
  } else if (fam == "lattice" || fam == "integer-lattice" || fam == "Z^d") {
    g = lattice(params.value("d", 1));
  } else if (fam == "binary-tree" || fam == "tree") {
    g = binary_tree();
  } else if (fam == "finite-explicit") {
    return from_json(params);
  } else {
    return preset(fam);
  }
  g.validate();
  return g;
}

NetworkGenerator preset(const std::string& name) {
  std::vector<EdgeSpec> e;
  if (name == "path-5") {
    for (int i = 0; i < 4; ++i) e.push_back({i, i + 1, 1.0});
  } else if (name == "path-3") {
    e = {{0, 1, 1.0}, {1, 2, 1.0}};
  } else if (name == "triangle") {
    e = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  } else if (name == "star-4") {
    for (int i = 1; i <= 4; ++i) e.push_back({0, i, 1.0});
  } else if (name == "grid-4x4") {
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        int v = 4 * r + c;
        if (c < 3) e.push_back({v, v + 1, 1.0});
        if (r < 3) e.push_back({v, v + 4, 1.0});
      }
  } else {
    throw Error(ErrorCode::UsageError, "unknown network '" + name + "'");
  }
  return NetworkGenerator::finite(std::move(e), 0);
}

RadiusSchedule RadiusSchedule::linear(Index start, Index step, Index levels) {
  RadiusSchedule s;
  s.kind = Kind::Linear;
  s.start = start;
  s.step = step;
  s.levels = levels;
  return s;
}

RadiusSchedule RadiusSchedule::geometric(Index start, double factor, Index levels) {
  RadiusSchedule s;
  s.kind = Kind::Geometric;
  s.start = start;
  s.factor = factor;
  s.levels = levels;
  return s;
}

RadiusSchedule RadiusSchedule::explicit_radii(std::vector<Index> radii) {
  RadiusSchedule s;
  s.kind = Kind::Explicit;
  s.radii = std::move(radii);
  s.levels = static_cast<Index>(s.radii.size());
  return s;
}

std::vector<Index> RadiusSchedule::expand() const {
  std::vector<Index> out;
  switch (kind) {
    case Kind::Linear:
      if (start < 1 || step < 1 || levels < 1) throw Error(ErrorCode::InvalidParameters, "bad linear schedule");
      for (Index i = 0; i < levels; ++i) out.push_back(start + i * step);
      break;
    case Kind::Geometric: {
      if (start < 1 || !(factor > 1.0) || levels < 1)
        throw Error(ErrorCode::InvalidParameters, "bad geometric schedule");
      double r = static_cast<double>(start);
      Index prev = 0;
      for (Index i = 0; i < levels; ++i) {
        Index ri = std::max(prev + 1, static_cast<Index>(std::llround(r)));
        out.push_back(ri);
        prev = ri;
        r *= factor;
      }
      break;
    }
    case Kind::Explicit:
      out = radii;
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      if (out.empty() || out.front() < 1) throw Error(ErrorCode::InvalidParameters, "bad explicit schedule");
      break;
  }
  return out;
}

RadiusSchedule RadiusSchedule::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  try {
    if (parts.size() == 4 && parts[0] == "linear")
      return linear(std::stoll(parts[1]), std::stoll(parts[2]), std::stoll(parts[3]));
    if (parts.size() == 4 && parts[0] == "geometric")
      return geometric(std::stoll(parts[1]), std::stod(parts[2]), std::stoll(parts[3]));
    if (parts.size() == 2 && parts[0] == "explicit") {
      std::vector<Index> r;
      std::stringstream rs(parts[1]);
      while (std::getline(rs, item, ',')) r.push_back(std::stoll(item));
      return explicit_radii(std::move(r));
    }
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorCode::UsageError, "cannot parse schedule '" + text + "'");
}

std::string RadiusSchedule::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Linear:
      os << "linear:" << start << ":" << step << ":" << levels;
      break;
    case Kind::Geometric:
      os << "geometric:" << start << ":" << factor << ":" << levels;
      break;
    case Kind::Explicit:
      os << "explicit:";
      for (std::size_t i = 0; i < radii.size(); ++i) os << (i ? "," : "") << radii[i];
      break;
  }
  return os.str();
}

Precision precision_for(const NetworkGenerator& gen, Index max_radius) {
  return choose_precision(gen.log10_conductance_range(max_radius), gen.log10_potential_scale(max_radius));
}

std::vector<Index> enumerate_vertices(const Graph& g) {
  std::vector<Index> order;
  std::vector<char> seen(g.size(), 0);
  std::deque<Index> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    Index v = queue.front();
    queue.pop_front();
    if (v != 0) order.push_back(v);
    for (Index w : g.neighbors(v))
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
  }
  return order;
}

std::string vertex_name(const NetworkGenerator& gen, const Graph& g, Index v) {
  switch (gen.family) {
    case Family::Ladder:
      return (v % 2 == 0 ? "x" : "y") + std::to_string(v / 2);
    case Family::Lattice:
      if (gen.dim == 1) return std::to_string(g.label(v));
      return "#" + std::to_string(v);
    case Family::FiniteExplicit:
      return std::to_string(g.label(v));
    default:
      return std::to_string(v);
  }
}

Index parse_vertex(const NetworkGenerator& gen, const Graph& g, const std::string& text) {
  auto bad = [&] { return Error(ErrorCode::UsageError, "unknown vertex '" + text + "'"); };
  if (text.empty()) throw bad();
  Index v = -1;
  try {
    if (text == "o") {
      v = 0;
    } else if (text[0] == '#') {
      v = std::stoll(text.substr(1));
    } else if (gen.family == Family::Ladder && (text[0] == 'x' || text[0] == 'y')) {
      Index n = std::stoll(text.substr(1));
      v = text[0] == 'x' ? ladder_x(n) : ladder_y(n);
    } else if (gen.family == Family::FiniteExplicit) {
      auto idx = g.index_of(std::stoll(text));
      if (!idx) throw bad();
      v = *idx;
    } else if (gen.family == Family::Lattice && gen.dim == 1) {
      v = z1_index(std::stoll(text));
    } else {
      v = std::stoll(text);
    }
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (v < 0 || v >= g.size()) throw bad();
  return v;
}

}  // namespace resbdy
