#pragma once

// Directed social optimum construction and best-response dynamics for both
// game variants.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "greedynet/routing_sets.hpp"

namespace greedynet {

struct DirectedOptimum {
  StrategyProfile profile;
  std::size_t social_cost = 0;
  bool certified = true;  // false if any routing set came from the heuristic
};

/// Every agent buys its canonical minimum greedy routing set.
inline DirectedOptimum construct_directed_optimum(const MetricSpace& space, const SearchBudget& budget = {}) {
  if (space.size() < 2) throw InvalidInput("construct_directed_optimum needs at least two points");
  DirectedOptimum out{StrategyProfile(Variant::Directed, space.size())};
  auto nng = build_nng(space);
  for (Agent u = 0; u < space.size(); ++u) {
    auto g = minimum_greedy_routing_set(space, nng, u, budget);
    out.profile.set_strategy(u, g.endpoints);
    out.social_cost += g.size();
    if (g.mode != SolveMode::Exact) out.certified = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Initial profiles.

inline StrategyProfile empty_profile(Variant variant, std::size_t n) { return StrategyProfile(variant, n); }

inline StrategyProfile complete_profile(Variant variant, std::size_t n) {
  StrategyProfile p(variant, n);
  for (Agent u = 0; u < n; ++u)
    for (Agent v = 0; v < n; ++v)
      if (u != v && (variant == Variant::Directed || u < v)) p.add(u, v);
  return p;
}

/// Each potential edge is bought independently with probability p. In the
/// undirected variant the buyer of {u,v} is chosen uniformly.
inline StrategyProfile random_profile(Variant variant, std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("edge probability must lie in [0,1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::bernoulli_distribution side(0.5);
  StrategyProfile prof(variant, n);
  for (Agent u = 0; u < n; ++u)
    for (Agent v = 0; v < n; ++v) {
      if (u == v || (variant == Variant::Undirected && v < u)) continue;
      if (!coin(rng)) continue;
      if (variant == Variant::Undirected && side(rng))
        prof.add(v, u);
      else
        prof.add(u, v);
    }
  return prof;
}

// ---------------------------------------------------------------------------
// Dynamics.

struct Schedule {
  enum class Kind { RoundRobin, Random, Scripted };
  Kind kind = Kind::RoundRobin;
  std::uint64_t seed = 0;
  std::vector<Agent> script;  // activation order, repeated

  static Schedule round_robin() { return {}; }
  static Schedule random(std::uint64_t seed) { return {Kind::Random, seed, {}}; }
  static Schedule scripted(std::vector<Agent> order) { return {Kind::Scripted, 0, std::move(order)}; }

  std::string describe() const {
    switch (kind) {
      case Kind::RoundRobin:
        return "round-robin";
      case Kind::Random:
        return "random:" + std::to_string(seed);
      case Kind::Scripted: {
        std::string s = "scripted:";
        for (std::size_t i = 0; i < script.size(); ++i) s += (i ? "," : "") + std::to_string(script[i]);
        return s;
      }
    }
    return "";
  }
};

inline Schedule parse_schedule(const std::string& text) {
  if (text == "round-robin") return Schedule::round_robin();
  auto colon = text.find(':');
  std::string head = text.substr(0, colon), tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (head == "random" && !tail.empty()) return Schedule::random(std::stoull(tail));
    if (head == "scripted" && !tail.empty()) {
      std::vector<Agent> order;
      std::size_t pos = 0;
      while (pos <= tail.size()) {
        auto next = tail.find(',', pos);
        order.push_back(std::stoull(tail.substr(pos, next - pos)));
        if (next == std::string::npos) break;
        pos = next + 1;
      }
      return Schedule::scripted(std::move(order));
    }
  } catch (const std::logic_error&) {
  }
  throw InvalidInput("unknown schedule '" + text + "'");
}

enum class DynamicsStatus { Converged, CycleDetected, BudgetExhausted };

inline const char* to_string(DynamicsStatus s) {
  switch (s) {
    case DynamicsStatus::Converged:
      return "converged";
    case DynamicsStatus::CycleDetected:
      return "cycle";
    case DynamicsStatus::BudgetExhausted:
      return "budget";
  }
  return "";
}

struct DynamicsEvent {
  std::size_t step = 0;  // activation index
  std::size_t round = 0;
  Agent agent = 0;
  Cost old_cost;
  Cost new_cost;
  std::vector<Agent> old_strategy;
  std::vector<Agent> new_strategy;
  bool changed = false;
  std::uint64_t fingerprint = 0;  // after the activation
  friend bool operator==(const DynamicsEvent&, const DynamicsEvent&) = default;
};

struct DynamicsTrace {
  std::string schedule;
  Variant variant = Variant::Directed;
  std::vector<DynamicsEvent> events;
  DynamicsStatus status = DynamicsStatus::BudgetExhausted;
  std::size_t cycle_start = 0;  // index into `profiles` of the first repeat
  std::size_t cycle_end = 0;    // index into `profiles` where it recurred
  bool certified = true;
  std::vector<StrategyProfile> profiles;  // initial profile, then one per change
  StrategyProfile final_profile;

  /// Number of strategy changes.
  std::size_t moves() const { return profiles.empty() ? 0 : profiles.size() - 1; }
  friend bool operator==(const DynamicsTrace&, const DynamicsTrace&) = default;
};

struct DynamicsOptions {
  std::size_t max_rounds = 1000;
  SearchBudget budget;
};

/// Activates agents one at a time; an agent switches to its best response
/// only when that strictly lowers its cost.
inline DynamicsTrace run_dynamics(const MetricSpace& space, StrategyProfile profile, const Schedule& schedule,
                                  const DynamicsOptions& options = {}) {
  const std::size_t n = space.size();
  if (profile.size() != n) throw InvalidInput("profile size does not match the space");
  if (n == 0) throw InvalidInput("dynamics need at least one agent");
  if (schedule.kind == Schedule::Kind::Scripted) {
    if (schedule.script.empty()) throw InvalidInput("scripted schedule is empty");
    for (Agent a : schedule.script) space.check_index(a);
  }
  profile.canonicalize();

  DynamicsTrace trace;
  trace.schedule = schedule.describe();
  trace.variant = profile.variant();
  trace.profiles.push_back(profile);
  std::multimap<std::uint64_t, std::size_t> seen{{profile.fingerprint(), 0}};

  std::vector<Agent> pool;
  if (schedule.kind == Schedule::Kind::Scripted) {
    pool = schedule.script;
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  } else {
    for (Agent u = 0; u < n; ++u) pool.push_back(u);
  }
  const std::size_t period = schedule.kind == Schedule::Kind::Scripted ? schedule.script.size() : n;
  std::vector<bool> idle(n, false);
  std::size_t idle_count = 0;
  std::mt19937_64 rng(schedule.seed);
  auto nng = n >= 2 ? std::optional<NngGraph>(build_nng(space)) : std::nullopt;

  const std::size_t max_steps = options.max_rounds * period;
  for (std::size_t step = 0; step < max_steps; ++step) {
    Agent u = 0;
    switch (schedule.kind) {
      case Schedule::Kind::RoundRobin:
        u = step % n;
        break;
      case Schedule::Kind::Random:
        u = rng() % n;
        break;
      case Schedule::Kind::Scripted:
        u = schedule.script[step % period];
        break;
    }
    DynamicsEvent ev;
    ev.step = step;
    ev.round = step / period;
    ev.agent = u;
    ev.old_strategy = profile.strategy(u);
    ev.old_cost = agent_cost(profile, space, u);
    ev.new_cost = ev.old_cost;
    ev.new_strategy = ev.old_strategy;
    if (n >= 2) {
      auto br = best_response(space, profile, u, options.budget, &*nng);
      if (br.mode != SolveMode::Exact) trace.certified = false;
      if (br.cost < ev.old_cost) {
        profile.set_strategy(u, br.strategy);
        profile.canonicalize();
        ev.changed = true;
        ev.new_cost = br.cost;
        ev.new_strategy = profile.strategy(u);
      }
    }
    ev.fingerprint = profile.fingerprint();
    trace.events.push_back(ev);

    if (!ev.changed) {
      if (!idle[u]) {
        idle[u] = true;
        ++idle_count;
      }
      if (idle_count == pool.size()) {
        trace.status = DynamicsStatus::Converged;
        break;
      }
      continue;
    }
    std::fill(idle.begin(), idle.end(), false);
    idle_count = 0;
    trace.profiles.push_back(profile);
    const std::size_t index = trace.profiles.size() - 1;
    bool cycle = false;
    auto [lo, hi] = seen.equal_range(ev.fingerprint);
    for (auto it = lo; it != hi; ++it)
      if (trace.profiles[it->second] == profile) {
        trace.status = DynamicsStatus::CycleDetected;
        trace.cycle_start = it->second;
        trace.cycle_end = index;
        cycle = true;
        break;
      }
    if (cycle) break;
    seen.emplace(ev.fingerprint, index);
  }
  trace.final_profile = profile;
  return trace;
}

}  // namespace greedynet
