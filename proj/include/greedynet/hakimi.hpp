#pragma once

// Degree-bounded orientation of undirected edges via max-flow (Hakimi).
// The head of an oriented edge is the agent that ends up owning it.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "greedynet/network.hpp"

namespace greedynet {

/// Dinic's algorithm on an integer-capacity graph. Adjacency lists are
/// scanned in insertion order, so results are deterministic.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : adj_(nodes), level_(nodes), iter_(nodes) {}

  std::size_t add_arc(std::size_t from, std::size_t to, std::int64_t cap) {
    adj_[from].push_back(arcs_.size());
    arcs_.push_back({to, cap});
    adj_[to].push_back(arcs_.size());
    arcs_.push_back({from, 0});
    return arcs_.size() - 2;
  }

  std::int64_t run(std::size_t s, std::size_t t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      std::fill(iter_.begin(), iter_.end(), 0);
      while (auto f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) flow += f;
    }
    return flow;
  }

  std::int64_t flow_on(std::size_t arc) const { return arcs_[arc ^ 1].cap; }

 private:
  struct Arc {
    std::size_t to;
    std::int64_t cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      auto x = q.front();
      q.pop();
      for (auto id : adj_[x]) {
        auto& a = arcs_[id];
        if (a.cap > 0 && level_[a.to] < 0) {
          level_[a.to] = level_[x] + 1;
          q.push(a.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(std::size_t x, std::size_t t, std::int64_t pushed) {
    if (x == t) return pushed;
    for (auto& i = iter_[x]; i < adj_[x].size(); ++i) {
      auto id = adj_[x][i];
      auto& a = arcs_[id];
      if (a.cap <= 0 || level_[a.to] != level_[x] + 1) continue;
      if (auto f = dfs(a.to, t, std::min(pushed, a.cap))) {
        a.cap -= f;
        arcs_[id ^ 1].cap += f;
        return f;
      }
    }
    return 0;
  }

  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

struct Orientation {
  std::vector<Edge> edges;
  std::vector<Agent> owner;          // owner[i] is the head of edges[i]
  std::vector<std::size_t> indegree;  // per agent
};

/// Orients `edges` so that every agent u receives at most bound[u] of them.
/// Returns nullopt when no such orientation exists.
inline std::optional<Orientation> hakimi_orient(std::size_t n, const std::vector<Edge>& edges,
                                                const std::vector<std::size_t>& bound) {
  if (bound.size() != n) throw InvalidInput("hakimi_orient: bound vector has wrong size");
  for (auto& e : edges)
    if (e.a >= n || e.b >= n || e.a == e.b) throw InvalidInput("hakimi_orient: invalid edge");
  const std::size_t m = edges.size();
  const std::size_t source = m + n, sink = m + n + 1;
  MaxFlow flow(m + n + 2);
  std::vector<std::size_t> to_a(m), to_b(m);
  for (std::size_t i = 0; i < m; ++i) {
    flow.add_arc(source, i, 1);
    to_a[i] = flow.add_arc(i, m + edges[i].a, 1);
    to_b[i] = flow.add_arc(i, m + edges[i].b, 1);
  }
  for (Agent u = 0; u < n; ++u) flow.add_arc(m + u, sink, static_cast<std::int64_t>(bound[u]));
  if (flow.run(source, sink) < static_cast<std::int64_t>(m)) return std::nullopt;

  Orientation o;
  o.edges = edges;
  o.indegree.assign(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    Agent head = flow.flow_on(to_a[i]) > 0 ? edges[i].a : edges[i].b;
    o.owner.push_back(head);
    ++o.indegree[head];
  }
  return o;
}

/// Subset condition: for every U, sum of bounds over U >= edges inside U.
/// Exponential in n; used as an oracle in tests.
inline bool hakimi_condition_holds(std::size_t n, const std::vector<Edge>& edges,
                                   const std::vector<std::size_t>& bound) {
  if (n > 20) throw InvalidInput("hakimi_condition_holds is limited to n <= 20");
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::size_t cap = 0, inside = 0;
    for (Agent u = 0; u < n; ++u)
      if (mask >> u & 1) cap += bound[u];
    for (auto& e : edges)
      if ((mask >> e.a & 1) && (mask >> e.b & 1)) ++inside;
    if (cap < inside) return false;
  }
  return true;
}

}  // namespace greedynet
