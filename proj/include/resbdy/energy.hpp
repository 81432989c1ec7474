#pragma once

#include "resbdy/network.hpp"

#include <vector>

namespace resbdy {

// Potentials are dense vectors indexed by vertex. A vector of length m lives
// on the prefix window [0, m) of the network.
template <class Scalar>
using Potential = Vec<Scalar>;

template <class Scalar>
struct WindowEnergy {
  Scalar value{0};
  // Total conductance of edges from the window to vertices outside it; these
  // edges are excluded from the sum.
  Scalar defect{0};
};

template <class Scalar, class DU, class DV>
WindowEnergy<Scalar> window_energy(const BasicNetwork<Scalar>& net, const Eigen::MatrixBase<DU>& u,
                                   const Eigen::MatrixBase<DV>& v) {
  if (u.size() != v.size() || u.size() > net.size())
    throw Error(ErrorCode::DomainMismatch, "potentials of sizes " + std::to_string(u.size()) + " and " +
                                               std::to_string(v.size()) + " on network of size " +
                                               std::to_string(net.size()));
  const Index m = u.size();
  const Graph& g = net.graph();
  WindowEnergy<Scalar> out;
  for (Index x = 0; x < m; ++x) {
    for (Index s = g.slot_begin(x); s < g.slot_end(x); ++s) {
      Index y = g.slot_target(s);
      if (y >= m) {
        out.defect += net.slot_conductance(s);
      } else if (y > x) {
        out.value += net.slot_conductance(s) * (u[x] - u[y]) * (v[x] - v[y]);
      }
    }
  }
  return out;
}

// Dirichlet form over the edges of the window carrying u and v.
template <class Scalar, class DU, class DV>
Scalar energy(const BasicNetwork<Scalar>& net, const Eigen::MatrixBase<DU>& u, const Eigen::MatrixBase<DV>& v) {
  return window_energy(net, u, v).value;
}

template <class Scalar, class DU>
Scalar energy(const BasicNetwork<Scalar>& net, const Eigen::MatrixBase<DU>& u) {
  return energy(net, u, u);
}

template <class Scalar, class DV>
Scalar laplacian(const BasicNetwork<Scalar>& net, const Eigen::MatrixBase<DV>& v, Index at) {
  const Graph& g = net.graph();
  if (at < 0 || at >= v.size())
    throw Error(ErrorCode::MissingNeighborValue, "vertex " + std::to_string(at) + " carries no value");
  Scalar sum(0);
  for (Index s = g.slot_begin(at); s < g.slot_end(at); ++s) {
    Index y = g.slot_target(s);
    if (y >= v.size())
      throw Error(ErrorCode::MissingNeighborValue,
                  "neighbor " + std::to_string(y) + " of " + std::to_string(at) + " carries no value");
    sum += net.slot_conductance(s) * (v[at] - v[y]);
  }
  return sum;
}

// Laplacian at every vertex whose neighbors all carry values; other entries
// are zero and reported through the mask.
template <class Scalar, class DV>
Vec<Scalar> laplacian(const BasicNetwork<Scalar>& net, const Eigen::MatrixBase<DV>& v,
                      std::vector<char>* complete = nullptr) {
  const Graph& g = net.graph();
  const Index m = v.size();
  Vec<Scalar> out = Vec<Scalar>::Zero(m);
  if (complete) complete->assign(m, 1);
  for (Index x = 0; x < m; ++x) {
    Scalar sum(0);
    bool ok = true;
    for (Index s = g.slot_begin(x); s < g.slot_end(x); ++s) {
      Index y = g.slot_target(s);
      if (y >= m) {
        ok = false;
        break;
      }
      sum += net.slot_conductance(s) * (v[x] - v[y]);
    }
    if (ok) out[x] = sum;
    if (complete && !ok) (*complete)[x] = 0;
  }
  return out;
}

// energy(delta_at, u), evaluated as an energy rather than via the Laplacian.
template <class Scalar, class DU>
Scalar dirac_pairing(const BasicNetwork<Scalar>& net, const Eigen::MatrixBase<DU>& u, Index at) {
  const Graph& g = net.graph();
  if (at < 0 || at >= u.size())
    throw Error(ErrorCode::MissingNeighborValue, "vertex " + std::to_string(at) + " carries no value");
  Index m = u.size();
  for (Index y : g.neighbors(at)) {
    if (y >= m)
      throw Error(ErrorCode::MissingNeighborValue,
                  "neighbor " + std::to_string(y) + " of " + std::to_string(at) + " carries no value");
  }
  Vec<Scalar> delta = Vec<Scalar>::Zero(m);
  delta[at] = Scalar(1);
  return energy(net, delta, u);
}

// A vertex subset H with its boundary (vertices of H adjacent to the
// complement) and interior.
class SubgraphView {
 public:
  SubgraphView(const Graph& g, std::vector<Index> vertices);
  // The prefix window [0, n).
  static SubgraphView prefix(const Graph& g, Index n);

  const Graph& graph() const { return *g_; }
  bool contains(Index v) const { return v >= 0 && v < static_cast<Index>(member_.size()) && member_[v]; }
  bool on_boundary(Index v) const { return contains(v) && boundary_mask_[v]; }
  const std::vector<Index>& vertices() const { return vertices_; }
  const std::vector<Index>& boundary() const { return boundary_; }
  const std::vector<Index>& interior() const { return interior_; }

 private:
  const Graph* g_;
  std::vector<Index> vertices_, boundary_, interior_;
  std::vector<char> member_, boundary_mask_;
};

// Sum over neighbors inside H of c_xy (v(x) - v(y)), for x on bd H.
template <class Scalar, class DV>
Scalar normal_derivative(const BasicNetwork<Scalar>& net, const Eigen::MatrixBase<DV>& v, const SubgraphView& h,
                         Index at) {
  if (!h.on_boundary(at)) throw Error(ErrorCode::NotBoundaryVertex, "vertex " + std::to_string(at));
  const Graph& g = net.graph();
  Scalar sum(0);
  for (Index s = g.slot_begin(at); s < g.slot_end(at); ++s) {
    Index y = g.slot_target(s);
    if (!h.contains(y)) continue;
    if (y >= v.size() || at >= v.size())
      throw Error(ErrorCode::MissingNeighborValue, "vertex " + std::to_string(y) + " carries no value");
    sum += net.slot_conductance(s) * (v[at] - v[y]);
  }
  return sum;
}

}  // namespace resbdy
