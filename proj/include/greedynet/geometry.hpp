#pragma once

// Nearest neighbour graphs, exact 2D Delaunay triangulation and the
// nearest-uncovered peeling construction for greedy routing sets.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "greedynet/greedy.hpp"
#include "greedynet/metric.hpp"
#include "greedynet/network.hpp"

namespace greedynet {

/// N(u): all agents at minimum distance from u.
inline std::vector<std::vector<Agent>> nearest_neighbor_sets(const MetricSpace& space) {
  const std::size_t n = space.size();
  if (n < 2) throw InvalidInput("nearest neighbours need at least two points");
  std::vector<std::vector<Agent>> nn(n);
  for (Agent u = 0; u < n; ++u) {
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    for (Agent v = 0; v < n; ++v)
      if (v != u) best = std::min(best, space.rank(u, v));
    for (Agent v = 0; v < n; ++v)
      if (v != u && space.rank(u, v) == best) nn[u].push_back(v);
  }
  return nn;
}

struct NngGraph {
  std::vector<std::vector<Agent>> nearest;
  std::vector<Edge> arcs;   // (u, v) for v in N(u), sorted
  std::vector<Edge> edges;  // undirected version, sorted
  std::vector<std::size_t> component;  // label per agent, labels ordered by smallest member
  std::size_t component_count = 0;

  bool adjacent(Agent u, Agent v) const {
    return std::binary_search(edges.begin(), edges.end(), make_edge(Variant::Undirected, u, v));
  }

  std::vector<std::vector<Agent>> components() const {
    std::vector<std::vector<Agent>> out(component_count);
    for (Agent u = 0; u < component.size(); ++u) out[component[u]].push_back(u);
    return out;
  }

  Network network(Variant variant) const {
    auto& es = variant == Variant::Directed ? arcs : edges;
    return network_from_edges(variant, component.size(), es);
  }
};

inline NngGraph build_nng(const MetricSpace& space) {
  NngGraph g;
  g.nearest = nearest_neighbor_sets(space);
  const std::size_t n = space.size();
  for (Agent u = 0; u < n; ++u)
    for (Agent v : g.nearest[u]) {
      g.arcs.push_back({u, v});
      g.edges.push_back(make_edge(Variant::Undirected, u, v));
    }
  std::sort(g.arcs.begin(), g.arcs.end());
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());

  std::vector<std::vector<Agent>> adj(n);
  for (auto& e : g.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
  g.component.assign(n, unset);
  for (Agent s = 0; s < n; ++s) {
    if (g.component[s] != unset) continue;
    std::vector<Agent> stack{s};
    g.component[s] = g.component_count;
    while (!stack.empty()) {
      Agent x = stack.back();
      stack.pop_back();
      for (Agent y : adj[x])
        if (g.component[y] == unset) {
          g.component[y] = g.component_count;
          stack.push_back(y);
        }
    }
    ++g.component_count;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Exact predicates over integer coordinates.

namespace predicates {

using Int256 = boost::multiprecision::int256_t;

struct P2 {
  std::int64_t x, y;
};

/// > 0 iff a, b, c make a left turn.
inline int orient2d(P2 a, P2 b, P2 c) {
  Wide det = (Wide(b.x) - a.x) * (Wide(c.y) - a.y) - (Wide(b.y) - a.y) * (Wide(c.x) - a.x);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

/// For a, b, c in counter-clockwise order: > 0 iff d lies strictly inside
/// their circumcircle, 0 iff cocircular.
inline int incircle(P2 a, P2 b, P2 c, P2 d) {
  Int256 adx = Int256(a.x) - d.x, ady = Int256(a.y) - d.y;
  Int256 bdx = Int256(b.x) - d.x, bdy = Int256(b.y) - d.y;
  Int256 cdx = Int256(c.x) - d.x, cdy = Int256(c.y) - d.y;
  Int256 alift = adx * adx + ady * ady;
  Int256 blift = bdx * bdx + bdy * bdy;
  Int256 clift = cdx * cdx + cdy * cdy;
  Int256 det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) + clift * (adx * bdy - bdx * ady);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

}  // namespace predicates

struct Triangulation2D {
  std::vector<std::array<Agent, 3>> triangles;  // counter-clockwise, sorted
  std::vector<Edge> edges;                      // sorted undirected edges

  Network network() const {
    std::size_t n = 0;
    for (auto& t : triangles) n = std::max({n, t[0] + 1, t[1] + 1, t[2] + 1});
    return network_from_edges(Variant::Undirected, n, edges);
  }
};

namespace detail {

class TriangleMesh {
 public:
  explicit TriangleMesh(std::size_t n) : n_(n) {}

  void add(Agent a, Agent b, Agent c) {
    std::size_t id = tris_.size();
    tris_.push_back({a, b, c});
    alive_.push_back(true);
    half_[key(a, b)] = id;
    half_[key(b, c)] = id;
    half_[key(c, a)] = id;
  }

  void kill(std::size_t id) {
    alive_[id] = false;
    auto& t = tris_[id];
    for (int i = 0; i < 3; ++i) {
      auto it = half_.find(key(t[i], t[(i + 1) % 3]));
      if (it != half_.end() && it->second == id) half_.erase(it);
    }
  }

  /// Triangle containing the directed half-edge a -> b, if any.
  std::optional<std::size_t> find(Agent a, Agent b) const {
    auto it = half_.find(key(a, b));
    if (it == half_.end()) return std::nullopt;
    return it->second;
  }

  Agent apex(std::size_t id, Agent a, Agent b) const {
    for (Agent x : tris_[id])
      if (x != a && x != b) return x;
    throw InvariantFault("degenerate triangle in mesh");
  }

  std::vector<std::array<Agent, 3>> live() const {
    std::vector<std::array<Agent, 3>> out;
    for (std::size_t i = 0; i < tris_.size(); ++i)
      if (alive_[i]) out.push_back(tris_[i]);
    return out;
  }

 private:
  std::uint64_t key(Agent a, Agent b) const { return std::uint64_t(a) * n_ + b; }

  std::size_t n_;
  std::vector<std::array<Agent, 3>> tris_;
  std::vector<bool> alive_;
  std::unordered_map<std::uint64_t, std::size_t> half_;
};

}  // namespace detail

/// Delaunay triangulation by sorted incremental insertion followed by Lawson
/// edge flips, all with exact integer predicates. A cocircular quadrilateral
/// takes the diagonal incident to its smallest point index.
inline Triangulation2D delaunay_2d(const MetricSpace& space) {
  using predicates::P2;
  if (!space.is_euclidean() || space.dimension() != 2)
    throw Unsupported("Delaunay triangulation requires 2D Euclidean points");
  const std::size_t n = space.size();
  if (n < 3) throw DegenerateInput("Delaunay triangulation requires at least three points");
  auto pt = [&](Agent i) { return P2{space.point(i)[0], space.point(i)[1]}; };

  std::vector<Agent> order(n);
  std::iota(order.begin(), order.end(), Agent{0});
  std::sort(order.begin(), order.end(), [&](Agent a, Agent b) {
    auto p = pt(a), q = pt(b);
    return p.x != q.x ? p.x < q.x : p.y < q.y;
  });

  std::size_t k = 2;
  while (k < n && predicates::orient2d(pt(order[0]), pt(order[1]), pt(order[k])) == 0) ++k;
  if (k == n) throw DegenerateInput("all points are collinear");
  // order[0..k) is a collinear chain, order[k] the first point off its line.
  std::vector<Agent> chain(order.begin(), order.begin() + k);
  Agent apex = order[k];

  detail::TriangleMesh mesh(n);
  std::vector<Agent> hull;
  bool left = predicates::orient2d(pt(chain[0]), pt(chain[1]), pt(apex)) > 0;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (left) {
      mesh.add(chain[i], chain[i + 1], apex);
    } else {
      mesh.add(chain[i + 1], chain[i], apex);
    }
  }
  if (left) {
    hull = chain;
    hull.push_back(apex);
  } else {
    hull.push_back(chain[0]);
    hull.push_back(apex);
    for (std::size_t i = chain.size() - 1; i >= 1; --i) hull.push_back(chain[i]);
  }

  // Remaining points in sorted order: each lies outside the current hull.
  std::vector<Agent> rest(order.begin() + k + 1, order.end());

  for (Agent p : rest) {
    const std::size_t h = hull.size();
    std::vector<bool> visible(h);
    bool any = false;
    for (std::size_t i = 0; i < h; ++i) {
      visible[i] = predicates::orient2d(pt(hull[i]), pt(hull[(i + 1) % h]), pt(p)) < 0;
      any = any || visible[i];
    }
    if (!any) throw InvariantFault("inserted point sees no hull edge");
    std::size_t start = 0;
    while (!(visible[start] && !visible[(start + h - 1) % h])) ++start;
    std::rotate(hull.begin(), hull.begin() + start, hull.end());
    std::rotate(visible.begin(), visible.begin() + start, visible.end());
    std::size_t m = 0;
    while (m < h && visible[m]) {
      mesh.add(hull[m], p, hull[(m + 1) % h]);
      ++m;
    }
    std::vector<Agent> next{hull[0], p};
    for (std::size_t i = m; i < h; ++i) next.push_back(hull[i]);
    hull = std::move(next);
  }

  // Lawson flips.
  std::vector<Edge> stack;
  for (auto& t : mesh.live())
    for (int i = 0; i < 3; ++i) stack.push_back(make_edge(Variant::Undirected, t[i], t[(i + 1) % 3]));
  std::size_t flips = 0;
  const std::size_t flip_limit = 16 * n * n + 1024;
  while (!stack.empty()) {
    Edge e = stack.back();
    stack.pop_back();
    auto t1 = mesh.find(e.a, e.b);
    auto t2 = mesh.find(e.b, e.a);
    if (!t1 || !t2) continue;
    Agent u = e.a, v = e.b;
    Agent w1 = mesh.apex(*t1, u, v);  // left of u -> v
    Agent w2 = mesh.apex(*t2, u, v);  // right of u -> v
    int ic = predicates::incircle(pt(u), pt(v), pt(w1), pt(w2));
    bool flip = ic > 0 || (ic == 0 && std::min(w1, w2) < std::min(u, v));
    if (!flip) continue;
    if (++flips > flip_limit) throw InvariantFault("Delaunay flip limit exceeded");
    mesh.kill(*t1);
    mesh.kill(*t2);
    mesh.add(u, w2, w1);
    mesh.add(w2, v, w1);
    stack.push_back(make_edge(Variant::Undirected, u, w2));
    stack.push_back(make_edge(Variant::Undirected, w2, v));
    stack.push_back(make_edge(Variant::Undirected, v, w1));
    stack.push_back(make_edge(Variant::Undirected, w1, u));
  }

  Triangulation2D tri;
  for (auto t : mesh.live()) {
    // Canonical rotation: smallest index first, orientation preserved.
    auto it = std::min_element(t.begin(), t.end());
    std::rotate(t.begin(), it, t.end());
    tri.triangles.push_back(t);
    for (int i = 0; i < 3; ++i) tri.edges.push_back(make_edge(Variant::Undirected, t[i], t[(i + 1) % 3]));
  }
  std::sort(tri.triangles.begin(), tri.triangles.end());
  std::sort(tri.edges.begin(), tri.edges.end());
  tri.edges.erase(std::unique(tri.edges.begin(), tri.edges.end()), tri.edges.end());
  return tri;
}

/// Empty-circumcircle check of every triangle against every point.
inline bool satisfies_empty_circle(const MetricSpace& space, const Triangulation2D& tri) {
  using predicates::P2;
  auto pt = [&](Agent i) { return P2{space.point(i)[0], space.point(i)[1]}; };
  for (auto& t : tri.triangles)
    for (Agent d = 0; d < space.size(); ++d) {
      if (d == t[0] || d == t[1] || d == t[2]) continue;
      if (predicates::incircle(pt(t[0]), pt(t[1]), pt(t[2]), pt(d)) > 0) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Greedy routing set constructions.

/// Nearest-uncovered peeling: connect to the nearest target not yet covered,
/// then mark every w with d(v,w) < d(u,w) as covered. Endpoints sorted.
inline std::vector<Agent> peeling_cover(const MetricSpace& space, Agent u) {
  space.check_index(u);
  const std::size_t n = space.size();
  if (n < 2) throw InvalidInput("peeling_cover requires at least two points");
  Bitset covered(n);
  covered.set(u);
  std::vector<Agent> chosen;
  for (Agent v : space.by_distance(u)) {
    if (covered.test(v)) continue;
    chosen.push_back(v);
    covered.set(v);
    for (Agent w = 0; w < n; ++w)
      if (!covered.test(w) && space.closer(w, v, u)) covered.set(w);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

/// Six-cone construction in the plane: the nearest point in each pi/3 cone
/// around u. Cone membership uses floating-point angles, so this is kept as
/// a cross-check only.
inline std::vector<Agent> cone_cover_2d(const MetricSpace& space, Agent u) {
  if (!space.is_euclidean() || space.dimension() != 2) throw Unsupported("cone cover requires 2D points");
  space.check_index(u);
  std::array<std::optional<Agent>, 6> best;
  for (Agent v : space.by_distance(u)) {
    if (v == u) continue;
    double dx = double(space.point(v)[0] - space.point(u)[0]);
    double dy = double(space.point(v)[1] - space.point(u)[1]);
    double ang = std::atan2(dy, dx);
    if (ang < 0) ang += 2 * std::numbers::pi;
    auto cone = std::min<std::size_t>(5, std::size_t(ang / (std::numbers::pi / 3)));
    if (!best[cone]) best[cone] = v;
  }
  std::vector<Agent> out;
  for (auto& b : best)
    if (b) out.push_back(*b);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace greedynet
