#include "resbdy/energy.hpp"

namespace resbdy {

SubgraphView::SubgraphView(const Graph& g, std::vector<Index> vertices) : g_(&g), vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  member_.assign(g.size(), 0);
  boundary_mask_.assign(g.size(), 0);
  for (Index v : vertices_) {
    if (v < 0 || v >= g.size()) throw Error(ErrorCode::DomainMismatch, "vertex outside network");
    member_[v] = 1;
  }
  for (Index v : vertices_) {
    bool bd = false;
    for (Index w : g.neighbors(v))
      if (!member_[w]) bd = true;
    // A vertex at the materialization edge may have unseen neighbors.
    if (!g.complete() && g.radius(v) > g.exact_radius()) bd = true;
    boundary_mask_[v] = bd;
    (bd ? boundary_ : interior_).push_back(v);
  }
}

SubgraphView SubgraphView::prefix(const Graph& g, Index n) {
  std::vector<Index> v(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) v[i] = i;
  return SubgraphView(g, std::move(v));
}

}  // namespace resbdy
