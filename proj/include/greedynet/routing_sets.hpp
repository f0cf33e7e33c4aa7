#pragma once

// Greedy routing sets, the degrees phi / phi+ / phi', and best responses.
//
// A best response reduces to set cover: a candidate endpoint v serves target
// t iff d(v,t) < d(u,t) and v already has a greedy path to t. That path can
// never pass through u (it would have to move away from t), so the coverage
// sets do not depend on u's own strategy.

#include <optional>
#include <vector>

#include "greedynet/geometry.hpp"
#include "greedynet/greedy.hpp"
#include "greedynet/set_cover.hpp"

namespace greedynet {

enum class SolveMode { Exact, Heuristic };

inline const char* to_string(SolveMode m) { return m == SolveMode::Exact ? "exact" : "heuristic"; }

struct SearchBudget {
  std::uint64_t node_budget = 2'000'000;
};

struct GreedyRoutingSet {
  Agent agent = 0;
  std::vector<Agent> endpoints;  // sorted
  std::size_t nng_overlap = 0;
  SolveMode mode = SolveMode::Exact;

  std::size_t size() const { return endpoints.size(); }
};

inline bool is_greedy_routing_set(const MetricSpace& space, Agent u, std::span<const Agent> endpoints) {
  space.check_index(u);
  for (Agent v : endpoints) {
    space.check_index(v);
    if (v == u) throw InvalidInput("a greedy routing set cannot contain the agent itself");
  }
  for (Agent w = 0; w < space.size(); ++w) {
    if (w == u) continue;
    bool ok = false;
    for (Agent v : endpoints)
      if (v == w || space.closer(w, v, u)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

namespace detail {

inline Bitset one_hop_cover(const MetricSpace& space, Agent u, Agent v) {
  Bitset s(space.size());
  s.set(v);
  for (Agent w = 0; w < space.size(); ++w)
    if (w != u && space.closer(w, v, u)) s.set(w);
  return s;
}

inline std::vector<Agent> chosen_agents(const SetCoverSolution& sol, const std::vector<Agent>& candidates) {
  std::vector<Agent> out;
  for (auto i : sol.chosen) out.push_back(candidates[i]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Canonical minimum greedy routing set Phi(u): minimum size, then most NNG
/// endpoints, then lexicographically smallest endpoints.
inline GreedyRoutingSet minimum_greedy_routing_set(const MetricSpace& space, const NngGraph& nng, Agent u,
                                                   const SearchBudget& budget = {}) {
  space.check_index(u);
  const std::size_t n = space.size();
  if (n < 2) throw InvalidInput("greedy routing sets need at least two points");
  SetCoverProblem problem;
  problem.universe = Bitset(n);
  problem.universe.set();
  problem.universe.reset(u);
  std::vector<Agent> candidates;
  for (Agent v = 0; v < n; ++v) {
    if (v == u) continue;
    candidates.push_back(v);
    problem.sets.push_back(detail::one_hop_cover(space, u, v));
    problem.preferred.push_back(nng.adjacent(u, v));
    problem.labels.push_back(v);
  }
  auto sol = solve_set_cover(problem, {budget.node_budget});
  GreedyRoutingSet out;
  out.agent = u;
  out.endpoints = detail::chosen_agents(sol, candidates);
  out.nng_overlap = sol.preferred_count;
  out.mode = sol.exact ? SolveMode::Exact : SolveMode::Heuristic;
  return out;
}

inline GreedyRoutingSet minimum_greedy_routing_set(const MetricSpace& space, Agent u, const SearchBudget& budget = {}) {
  return minimum_greedy_routing_set(space, build_nng(space), u, budget);
}

inline std::vector<GreedyRoutingSet> all_minimum_greedy_routing_sets(const MetricSpace& space,
                                                                     const SearchBudget& budget = {}) {
  auto nng = build_nng(space);
  std::vector<GreedyRoutingSet> out;
  for (Agent u = 0; u < space.size(); ++u) out.push_back(minimum_greedy_routing_set(space, nng, u, budget));
  return out;
}

struct PhiPrime {
  std::size_t value = 0;
  Bitset nng_reachable;          // W_u: targets reached by greedy paths inside the NNG
  std::vector<Agent> endpoints;  // non-NNG endpoints realising the value
  SolveMode mode = SolveMode::Exact;
};

/// Minimum number of non-NNG endpoints u needs so that every target outside
/// W_u has a strictly closer neighbour. One-hop coverage already provided by
/// u's NNG neighbours is credited, which keeps the quantity a valid lower
/// bound on u's non-NNG degree in every navigable network.
inline PhiPrime phi_prime(const MetricSpace& space, const NngGraph& nng, Agent u, const SearchBudget& budget = {}) {
  space.check_index(u);
  const std::size_t n = space.size();
  if (nng.component.size() != n) throw InvalidInput("NNG was built on a different space");
  PhiPrime out;
  Network g = nng.network(Variant::Undirected);
  out.nng_reachable = Bitset(n);
  Bitset reach(n);
  for (Agent t = 0; t < n; ++t) {
    if (t == u) continue;
    detail::reach_to_target(g, space, t, reach, u);
    if (reach.test(u)) out.nng_reachable.set(t);
  }
  SetCoverProblem problem;
  problem.universe = Bitset(n);
  problem.universe.set();
  problem.universe.reset(u);
  problem.universe -= out.nng_reachable;
  std::vector<Agent> candidates;
  for (Agent v = 0; v < n; ++v) {
    if (v == u) continue;
    Bitset cover = detail::one_hop_cover(space, u, v);
    if (nng.adjacent(u, v)) {
      problem.universe -= cover;
    } else {
      candidates.push_back(v);
      problem.sets.push_back(std::move(cover));
      problem.labels.push_back(v);
    }
  }
  auto sol = solve_set_cover(problem, {budget.node_budget});
  if (!sol.feasible) throw InvariantFault("phi' cover infeasible");
  out.endpoints = detail::chosen_agents(sol, candidates);
  out.value = out.endpoints.size();
  out.mode = sol.exact ? SolveMode::Exact : SolveMode::Heuristic;
  return out;
}

// ---------------------------------------------------------------------------
// Best responses.

struct BestResponseResult {
  std::vector<Agent> strategy;  // endpoints bought by u, sorted
  Cost cost;
  SolveMode mode = SolveMode::Exact;
  bool feasible = true;
  std::uint64_t nodes = 0;
};

namespace detail {

/// Best response of u when `others` holds every edge not bought by u.
/// Endpoints already adjacent to u in `others` are not candidates (their
/// edges stay regardless). `preferred` marks endpoints favoured on ties.
inline BestResponseResult cover_best_response(const MetricSpace& space, const Network& others, Agent u,
                                              const std::vector<bool>& preferred, const SearchBudget& budget) {
  const std::size_t n = space.size();
  ReachabilityTable table(others, space);
  SetCoverProblem problem;
  problem.universe = Bitset(n);
  problem.universe.set();
  problem.universe.reset(u);
  std::vector<Agent> candidates;
  auto coverage = [&](Agent v) {
    Bitset s(n);
    s.set(v);
    for (Agent t = 0; t < n; ++t)
      if (t != u && space.closer(t, v, u) && table.reaches(v, t)) s.set(t);
    return s;
  };
  for (Agent v : others.out(u)) problem.universe -= coverage(v);
  for (Agent v = 0; v < n; ++v) {
    if (v == u || others.has_edge(u, v)) continue;
    candidates.push_back(v);
    problem.sets.push_back(coverage(v));
    problem.preferred.push_back(v < preferred.size() && preferred[v]);
    problem.labels.push_back(v);
  }
  auto sol = solve_set_cover(problem, {budget.node_budget});
  BestResponseResult out;
  if (!sol.feasible) {
    // Buying every edge always works, so this is a logic fault upstream.
    out.feasible = false;
    out.cost = Cost::infinite();
    return out;
  }
  out.strategy = chosen_agents(sol, candidates);
  out.cost = Cost::finite(out.strategy.size());
  out.mode = sol.exact ? SolveMode::Exact : SolveMode::Heuristic;
  out.nodes = sol.nodes;
  return out;
}

inline Network network_without(const StrategyProfile& profile, Agent u) {
  StrategyProfile rest = profile;
  rest.set_strategy(u, {});
  return induce_network(rest);
}

}  // namespace detail

/// Minimum-size strategy for u with all other strategies fixed. Ties go to
/// the most NNG endpoints, then the lexicographically smallest set.
inline BestResponseResult best_response(const MetricSpace& space, const StrategyProfile& profile, Agent u,
                                        const SearchBudget& budget = {}, const NngGraph* nng = nullptr) {
  space.check_index(u);
  if (profile.size() != space.size()) throw InvalidInput("profile size does not match the space");
  std::optional<NngGraph> local;
  if (!nng) {
    local = build_nng(space);
    nng = &*local;
  }
  std::vector<bool> preferred(space.size());
  for (Agent v = 0; v < space.size(); ++v) preferred[v] = v != u && nng->adjacent(u, v);
  Network others = detail::network_without(profile, u);
  auto result = detail::cover_best_response(space, others, u, preferred, budget);
  if (!result.feasible) throw InvariantFault("best response infeasible even when buying every edge");
  return result;
}

/// Current cost of u, for comparison with a best response.
inline Cost current_cost(const MetricSpace& space, const StrategyProfile& profile, Agent u) {
  return agent_cost(profile, space, u);
}

}  // namespace greedynet
