#pragma once

// Greedy routing semantics: reachability toward a target, greedy
// connectivity, witness paths and the cost model.

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "greedynet/metric.hpp"
#include "greedynet/network.hpp"

namespace greedynet {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

namespace detail {

// reach[x] = 1 iff x has a greedy routing path to t. Agents are visited in
// increasing distance to t, so every strictly-closer hop is already settled.
// Stops once `stop_at` is settled when given.
inline void reach_to_target(const Network& net, const MetricSpace& space, Agent t, Bitset& reach,
                            std::optional<Agent> stop_at = std::nullopt) {
  reach.reset();
  reach.set(t);
  for (Agent x : space.by_distance(t)) {
    if (x == t) continue;
    for (Agent y : net.out(x)) {
      if (reach.test(y) && space.closer(t, y, x)) {
        reach.set(x);
        break;
      }
    }
    if (stop_at && x == *stop_at) return;
  }
}

}  // namespace detail

/// Agents (t excluded) with a greedy routing path to t.
inline Bitset greedy_reachable_to(const Network& net, const MetricSpace& space, Agent t) {
  space.check_index(t);
  Bitset reach(space.size());
  detail::reach_to_target(net, space, t, reach);
  reach.reset(t);
  return reach;
}

/// reaches(x, t) for all pairs; x reaches itself.
class ReachabilityTable {
 public:
  ReachabilityTable(const Network& net, const MetricSpace& space) : to_(space.size(), Bitset(space.size())) {
    for (Agent t = 0; t < space.size(); ++t) detail::reach_to_target(net, space, t, to_[t]);
  }

  bool reaches(Agent x, Agent t) const { return to_[t].test(x); }
  const Bitset& reaching(Agent t) const { return to_[t]; }

  bool connected(Agent u) const {
    for (auto& r : to_)
      if (!r.test(u)) return false;
    return true;
  }

  bool navigable() const {
    for (auto& r : to_)
      if (!r.all()) return false;
    return true;
  }

 private:
  std::vector<Bitset> to_;
};

inline bool is_greedy_connected(const Network& net, const MetricSpace& space, Agent u) {
  space.check_index(u);
  Bitset reach(space.size());
  for (Agent t = 0; t < space.size(); ++t) {
    if (t == u) continue;
    detail::reach_to_target(net, space, t, reach, u);
    if (!reach.test(u)) return false;
  }
  return true;
}

inline bool is_navigable(const Network& net, const MetricSpace& space) {
  Bitset reach(space.size());
  for (Agent t = 0; t < space.size(); ++t) {
    detail::reach_to_target(net, space, t, reach);
    if (!reach.all()) return false;
  }
  return true;
}

/// Witness greedy path from u to t. Each hop goes to the usable neighbour
/// closest to t that still reaches t, ties by lowest index.
inline std::optional<std::vector<Agent>> extract_greedy_path(const Network& net, const MetricSpace& space, Agent u,
                                                             Agent t) {
  space.check_index(u);
  space.check_index(t);
  if (u == t) throw InvalidInput("extract_greedy_path requires u != t");
  Bitset reach(space.size());
  detail::reach_to_target(net, space, t, reach);
  if (!reach.test(u)) return std::nullopt;
  std::vector<Agent> path{u};
  Agent x = u;
  while (x != t) {
    std::optional<Agent> next;
    for (Agent y : net.out(x)) {
      if (!reach.test(y) || !space.closer(t, y, x)) continue;
      if (!next || space.closer(t, y, *next)) next = y;  // out() is sorted, so ties keep the lower index
    }
    if (!next) throw InvariantFault("greedy path extraction lost its way");
    x = *next;
    path.push_back(x);
  }
  return path;
}

/// Checks the defining property of a greedy routing path.
inline bool is_greedy_path(const Network& net, const MetricSpace& space, std::span<const Agent> path) {
  if (path.size() < 2) return false;
  Agent t = path.back();
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!net.has_edge(path[i], path[i + 1])) return false;
    if (!space.closer(t, path[i + 1], path[i])) return false;
  }
  return true;
}

/// Exhaustive oracle: agents with a simple path to t along which the exact
/// distance to t strictly decreases. Exponential; meant for small n.
inline Bitset enumerate_reachable_to(const Network& net, const MetricSpace& space, Agent t) {
  space.check_index(t);
  const std::size_t n = space.size();
  Bitset found(n);
  std::vector<bool> on_path(n, false);
  auto dfs = [&](auto&& self, Agent x) -> bool {
    if (x == t) return true;
    on_path[x] = true;
    bool ok = false;
    for (Agent y : net.out(x)) {
      if (on_path[y] || space.compare_distances(y, t, x, t) != Ordering::Less) continue;
      if (self(self, y)) {
        ok = true;
        break;
      }
    }
    on_path[x] = false;
    return ok;
  };
  for (Agent x = 0; x < n; ++x)
    if (x != t && dfs(dfs, x)) found.set(x);
  return found;
}

/// |S_u| when u is greedy connected, otherwise infinite.
struct Cost {
  std::optional<std::size_t> edges;

  static Cost infinite() { return {}; }
  static Cost finite(std::size_t k) { return {k}; }
  bool is_infinite() const { return !edges.has_value(); }

  friend bool operator==(const Cost&, const Cost&) = default;
  friend bool operator<(const Cost& a, const Cost& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return *a.edges < *b.edges;
  }
};

inline std::string to_string(const Cost& c) { return c.is_infinite() ? "inf" : std::to_string(*c.edges); }

struct CostReport {
  std::vector<Cost> per_agent;
  Cost social;
};

inline Cost agent_cost(const StrategyProfile& profile, const MetricSpace& space, Agent u) {
  Network net = induce_network(profile);
  if (!is_greedy_connected(net, space, u)) return Cost::infinite();
  return Cost::finite(profile.strategy(u).size());
}

inline CostReport social_cost(const StrategyProfile& profile, const MetricSpace& space) {
  Network net = induce_network(profile);
  ReachabilityTable table(net, space);
  CostReport report;
  std::size_t total = 0;
  bool infinite = false;
  for (Agent u = 0; u < profile.size(); ++u) {
    if (table.connected(u)) {
      report.per_agent.push_back(Cost::finite(profile.strategy(u).size()));
      total += profile.strategy(u).size();
    } else {
      report.per_agent.push_back(Cost::infinite());
      infinite = true;
    }
  }
  report.social = infinite ? Cost::infinite() : Cost::finite(total);
  return report;
}

}  // namespace greedynet
