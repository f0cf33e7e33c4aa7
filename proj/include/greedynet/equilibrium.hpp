#pragma once

// Equilibrium verification, brute-force social optima, lower bounds and
// price-of-anarchy reports.

#include <optional>
#include <string>
#include <vector>

#include "greedynet/directed_game.hpp"
#include "greedynet/undirected_game.hpp"

namespace greedynet {

struct Criterion {
  enum class Kind { Exact, Beta, Additive };
  Kind kind = Kind::Exact;
  Rational value = 0;  // beta >= 1, or gamma >= 0

  static Criterion exact() { return {}; }
  static Criterion beta(Rational b) {
    if (b < 1) throw InvalidInput("beta must be at least 1");
    return {Kind::Beta, std::move(b)};
  }
  static Criterion additive(Rational g) {
    if (g < 0) throw InvalidInput("gamma must be non-negative");
    return {Kind::Additive, std::move(g)};
  }

  std::string describe() const {
    switch (kind) {
      case Kind::Exact:
        return "ne";
      case Kind::Beta:
        return "beta:" + value.str();
      case Kind::Additive:
        return "additive:" + value.str();
    }
    return "";
  }
};

/// Parses "ne", "beta:<x>" or "additive:<k>"; x and k may be integers,
/// decimals or p/q fractions.
inline Criterion parse_criterion(const std::string& text) {
  if (text == "ne") return Criterion::exact();
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    auto head = text.substr(0, colon);
    auto value = parse_rational(text.substr(colon + 1));
    if (head == "beta") return Criterion::beta(value);
    if (head == "additive") return Criterion::additive(value);
  }
  throw InvalidInput("unknown criterion '" + text + "'");
}

enum class Verdict { NE, BetaNE, AdditiveNE, NotStable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::NE:
      return "NE";
    case Verdict::BetaNE:
      return "BetaNE";
    case Verdict::AdditiveNE:
      return "AdditiveNE";
    case Verdict::NotStable:
      return "NotStable";
  }
  return "";
}

struct AgentWitness {
  Agent agent = 0;
  Cost current;
  Cost best;
  std::vector<Agent> best_strategy;
  bool improving = false;  // violates the criterion
};

struct EquilibriumReport {
  Verdict verdict = Verdict::NE;
  Criterion criterion;
  std::vector<AgentWitness> agents;
  bool certified = true;
  bool fast_path = false;
  std::optional<Agent> first_violation;
};

namespace detail {

inline bool violates(const Criterion& c, const Cost& current, const Cost& best) {
  if (best.is_infinite()) return false;
  if (current.is_infinite()) return true;
  Rational cur = *current.edges, b = *best.edges;
  switch (c.kind) {
    case Criterion::Kind::Exact:
      return b < cur;
    case Criterion::Kind::Beta:
      return b * c.value < cur;
    case Criterion::Kind::Additive:
      return b < cur - c.value;
  }
  return false;
}

}  // namespace detail

/// Compares every agent's cost with its exact best response. Directed
/// profiles in which everyone is greedy connected take the fast path: the
/// best response is then the minimum greedy routing set.
inline EquilibriumReport verify_equilibrium(const MetricSpace& space, const StrategyProfile& profile,
                                            const Criterion& criterion = Criterion::exact(),
                                            const SearchBudget& budget = {}) {
  const std::size_t n = space.size();
  if (profile.size() != n) throw InvalidInput("profile size does not match the space");
  StrategyProfile canonical = profile;
  canonical.canonicalize();
  EquilibriumReport report;
  report.criterion = criterion;
  if (n < 2) return report;
  auto costs = social_cost(canonical, space);
  auto nng = build_nng(space);
  report.fast_path = canonical.variant() == Variant::Directed && !costs.social.is_infinite();
  for (Agent u = 0; u < n; ++u) {
    AgentWitness w;
    w.agent = u;
    w.current = costs.per_agent[u];
    if (report.fast_path) {
      auto g = minimum_greedy_routing_set(space, nng, u, budget);
      if (g.mode != SolveMode::Exact) report.certified = false;
      w.best = Cost::finite(g.size());
      w.best_strategy = g.endpoints;
    } else {
      auto br = best_response(space, canonical, u, budget, &nng);
      if (br.mode != SolveMode::Exact) report.certified = false;
      w.best = br.cost;
      w.best_strategy = br.strategy;
    }
    w.improving = detail::violates(criterion, w.current, w.best);
    if (w.improving) {
      StrategyProfile dev = canonical;
      dev.set_strategy(u, w.best_strategy);
      if (!(agent_cost(dev, space, u) == w.best)) throw InvariantFault("witness deviation does not reproduce its cost");
      if (!report.first_violation) report.first_violation = u;
    }
    report.agents.push_back(std::move(w));
  }
  if (report.first_violation)
    report.verdict = Verdict::NotStable;
  else
    report.verdict = criterion.kind == Criterion::Kind::Exact  ? Verdict::NE
                     : criterion.kind == Criterion::Kind::Beta ? Verdict::BetaNE
                                                               : Verdict::AdditiveNE;
  return report;
}

// ---------------------------------------------------------------------------
// Social optimum oracles.

struct SocialOptimum {
  Variant variant = Variant::Undirected;
  Network network;
  std::size_t cost = 0;
  std::uint64_t nodes = 0;
};

inline constexpr std::size_t kMaxBruteUndirected = 9;
inline constexpr std::size_t kMaxBruteDirected = 7;

namespace detail {

/// Smallest endpoint set making u greedy connected when every other agent
/// buys all its arcs, by enumeration of subsets in increasing size.
inline std::vector<Agent> exhaustive_directed_minimum(const MetricSpace& space, Agent u) {
  const std::size_t n = space.size();
  std::vector<Agent> others;
  for (Agent v = 0; v < n; ++v)
    if (v != u) others.push_back(v);
  const std::size_t k = others.size();
  for (std::size_t size = 0; size <= k; ++size) {
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != size) continue;
      Network net(Variant::Directed, n);
      for (Agent x = 0; x < n; ++x)
        for (Agent y = 0; y < n; ++y)
          if (x != y && x != u) net.add_edge(x, y);
      std::vector<Agent> chosen;
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1) {
          net.add_edge(u, others[i]);
          chosen.push_back(others[i]);
        }
      if (is_greedy_connected(net, space, u)) return chosen;
    }
  }
  throw InvariantFault("no strategy connects agent " + std::to_string(u));
}

class UndirectedSoSearch {
 public:
  UndirectedSoSearch(const MetricSpace& space, const Network& upper) : space_(space), n_(space.size()) {
    best_ = upper.edges();
    std::sort(best_.begin(), best_.end());
  }

  void run(Network start) {
    adj_ = std::move(start);
    std::vector<Edge> excluded;
    search(excluded);
  }

  const std::vector<Edge>& best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  bool is_excluded(const std::vector<Edge>& x, Agent a, Agent b) const {
    return std::find(x.begin(), x.end(), make_edge(Variant::Undirected, a, b)) != x.end();
  }

  // Agents without one-hop coverage of some target.
  std::size_t uncovered_agents() const {
    std::size_t c = 0;
    for (Agent u = 0; u < n_; ++u) {
      auto nb = adj_.out(u);
      if (!is_greedy_routing_set(space_, u, nb)) ++c;
    }
    return c;
  }

  // Candidate edges that any completion must contain one of, chosen from the
  // violation with the fewest candidates. Empty optional means navigable.
  std::optional<std::vector<Edge>> branching_set(const std::vector<Edge>& excluded) const {
    std::optional<std::vector<Edge>> pick;
    auto consider = [&](std::vector<Edge> c) {
      if (!pick || c.size() < pick->size()) pick = std::move(c);
    };
    bool coverage_gap = false;
    for (Agent u = 0; u < n_; ++u)
      for (Agent t = 0; t < n_; ++t) {
        if (t == u) continue;
        bool ok = false;
        for (Agent w : adj_.out(u))
          if (w == t || space_.closer(t, w, u)) {
            ok = true;
            break;
          }
        if (ok) continue;
        coverage_gap = true;
        std::vector<Edge> c;
        for (Agent w = 0; w < n_; ++w)
          if (w != u && (w == t || space_.closer(t, w, u)) && !is_excluded(excluded, u, w))
            c.push_back(make_edge(Variant::Undirected, u, w));
        consider(std::move(c));
      }
    if (coverage_gap) return pick;
    Bitset reach(n_);
    for (Agent t = 0; t < n_; ++t) {
      detail::reach_to_target(adj_, space_, t, reach);
      for (Agent u = 0; u < n_; ++u) {
        if (reach.test(u)) continue;
        // R: nodes greedily reachable from u toward t; none reaches t.
        Bitset r(n_);
        std::vector<Agent> stack{u};
        r.set(u);
        while (!stack.empty()) {
          Agent x = stack.back();
          stack.pop_back();
          for (Agent y : adj_.out(x))
            if (!r.test(y) && space_.closer(t, y, x)) {
              r.set(y);
              stack.push_back(y);
            }
        }
        std::vector<Edge> c;
        for (Agent x = 0; x < n_; ++x) {
          if (!r.test(x)) continue;
          for (Agent y = 0; y < n_; ++y)
            if (!r.test(y) && space_.closer(t, y, x) && !adj_.has_edge(x, y) && !is_excluded(excluded, x, y))
              c.push_back(make_edge(Variant::Undirected, x, y));
        }
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        consider(std::move(c));
      }
    }
    return pick;
  }

  void search(std::vector<Edge>& excluded) {
    ++nodes_;
    const std::size_t m = adj_.edge_count();
    if (m >= best_.size()) return;
    std::size_t lb = (uncovered_agents() + 1) / 2;
    if (lb > 0 && m + lb >= best_.size()) return;
    auto cands = branching_set(excluded);
    if (!cands) {
      best_ = adj_.edges();
      return;
    }
    if (m + 1 >= best_.size()) return;
    const std::size_t mark = excluded.size();
    for (const Edge& e : *cands) {
      adj_.add_edge(e.a, e.b);
      search(excluded);
      adj_.remove_edge(e.a, e.b);
      excluded.push_back(e);
    }
    excluded.resize(mark);
  }

  const MetricSpace& space_;
  std::size_t n_;
  Network adj_;
  std::vector<Edge> best_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Exact minimum social cost. Directed: each agent's independent exhaustive
/// minimum. Undirected: branch and bound over edge sets containing the NNG.
inline SocialOptimum brute_force_social_optimum(const MetricSpace& space, Variant variant,
                                                std::optional<std::size_t> max_n = std::nullopt) {
  const std::size_t n = space.size();
  const std::size_t cap = max_n.value_or(variant == Variant::Directed ? kMaxBruteDirected : kMaxBruteUndirected);
  if (n > cap) throw InvalidInput("brute-force social optimum is limited to n <= " + std::to_string(cap));
  if (n < 2) throw InvalidInput("brute-force social optimum needs at least two points");
  SocialOptimum so;
  so.variant = variant;
  if (variant == Variant::Directed) {
    so.network = Network(Variant::Directed, n);
    for (Agent u = 0; u < n; ++u)
      for (Agent v : detail::exhaustive_directed_minimum(space, u)) so.network.add_edge(u, v, u);
    so.cost = so.network.edge_count();
    return so;
  }
  auto nng = build_nng(space);
  Network upper = compute_approximate_ne(space, ApproxMode::GeneralMetric).network;
  upper.clear_ownership();
  detail::UndirectedSoSearch search(space, upper);
  Network start = nng.network(Variant::Undirected);
  if (is_navigable(start, space)) {
    so.network = start;
    so.cost = start.edge_count();
    return so;
  }
  search.run(start);
  so.network = network_from_edges(Variant::Undirected, n, search.best());
  so.cost = so.network.edge_count();
  so.nodes = search.nodes();
  return so;
}

struct PhiPrimeSummary {
  std::vector<std::size_t> values;
  std::size_t nng_edges = 0;
  std::size_t bound = 0;
  bool exact = true;
};

/// |E_NNG| + ceil(sum phi'(u) / 2): every navigable undirected network has at
/// least this many edges.
inline PhiPrimeSummary so_lower_bound_details(const MetricSpace& space, const SearchBudget& budget = {}) {
  auto nng = build_nng(space);
  PhiPrimeSummary s;
  s.nng_edges = nng.edges.size();
  std::size_t sum = 0;
  for (Agent u = 0; u < space.size(); ++u) {
    auto p = phi_prime(space, nng, u, budget);
    if (p.mode != SolveMode::Exact) s.exact = false;
    s.values.push_back(p.value);
    sum += p.value;
  }
  s.bound = s.nng_edges + (sum + 1) / 2;
  return s;
}

inline std::size_t so_lower_bound(const MetricSpace& space, const SearchBudget& budget = {}) {
  return so_lower_bound_details(space, budget).bound;
}

struct PoaReport {
  Variant variant = Variant::Undirected;
  std::size_t equilibrium_cost = 0;
  std::optional<std::size_t> optimum;  // exact, when computed
  std::size_t lower_bound = 0;
  std::optional<Rational> ratio_exact;
  Rational ratio_lower;
  Rational bound;  // proven PoA upper bound for this setting
  std::string bound_label;
  bool bound_violated = false;
  std::string stability;  // verdict the caller established for the profile, if any
};

/// Proven PoA upper bound for the space and variant.
inline std::pair<Rational, std::string> poa_upper_bound(const MetricSpace& space, Variant variant) {
  if (variant == Variant::Directed) return {Rational(1), "directed: 1"};
  if (space.is_euclidean() && space.dimension() == 2) return {Rational(9, 5), "2D Euclidean: 1.8"};
  if (auto k = space.kissing()) {
    Rational b = Rational(2) - Rational(1, static_cast<long>(*k));
    return {b, "Euclidean D=" + std::to_string(space.dimension()) + ": 2-1/K(D)"};
  }
  return {Rational(2), "general metric: 2"};
}

struct PoaOptions {
  bool compute_exact = true;  // run the brute-force oracle when n is small enough
  SearchBudget budget;
  std::string stability;
};

inline PoaReport poa_report(const MetricSpace& space, const StrategyProfile& profile, const PoaOptions& options = {}) {
  const std::size_t n = space.size();
  if (profile.size() != n) throw InvalidInput("profile size does not match the space");
  auto costs = social_cost(profile, space);
  if (costs.social.is_infinite()) throw InvalidInput("profile is not navigable; its social cost is infinite");
  PoaReport r;
  r.variant = profile.variant();
  r.stability = options.stability;
  StrategyProfile canonical = profile;
  canonical.canonicalize();
  r.equilibrium_cost = canonical.total_edges();
  if (r.variant == Variant::Directed) {
    std::size_t sum = 0;
    auto nng = build_nng(space);
    for (Agent u = 0; u < n; ++u) sum += minimum_greedy_routing_set(space, nng, u, options.budget).size();
    r.lower_bound = sum;
    if (options.compute_exact && n <= kMaxBruteDirected) r.optimum = brute_force_social_optimum(space, r.variant).cost;
    else
      r.optimum = sum;
  } else {
    r.lower_bound = so_lower_bound(space, options.budget);
    if (options.compute_exact && n <= kMaxBruteUndirected) r.optimum = brute_force_social_optimum(space, r.variant).cost;
  }
  if (r.optimum) r.ratio_exact = Rational(r.equilibrium_cost) / Rational(*r.optimum);
  r.ratio_lower = Rational(r.equilibrium_cost) / Rational(std::max<std::size_t>(1, r.lower_bound));
  auto [b, label] = poa_upper_bound(space, r.variant);
  r.bound = b;
  r.bound_label = label;
  r.bound_violated = r.ratio_exact && *r.ratio_exact > r.bound;
  return r;
}

struct ComponentBudget {
  std::vector<Agent> members;
  std::size_t bought_non_nng = 0;
  std::size_t budget = 0;  // 2 + 3|C|
  bool within() const { return bought_non_nng <= budget; }
};

/// Per NNG component, the number of non-NNG edges bought by its agents
/// against the 2 + 3|C| budget.
inline std::vector<ComponentBudget> component_edge_budget_check(const Network& net, const MetricSpace& space) {
  if (net.directed()) throw Unsupported("component budgets apply to undirected networks");
  if (!net.has_full_ownership()) throw InvalidInput("component budget check needs ownership on every edge");
  auto nng = build_nng(space);
  std::vector<ComponentBudget> out;
  for (auto& members : nng.components()) out.push_back({members, 0, 2 + 3 * members.size()});
  for (const Edge& e : net.edges()) {
    if (nng.adjacent(e.a, e.b)) continue;
    ++out[nng.component[*net.owner(e)]].bought_non_nng;
  }
  return out;
}

/// Ownership from the approximate-NE construction stays inside each agent's
/// reserved edges plus its orientation bound.
inline bool check_alpha_structure(const ApproxResult& r) {
  for (Agent u = 0; u < r.profile.size(); ++u)
    if (r.profile.strategy(u).size() > r.reserved[u] + r.delta[u]) return false;
  return true;
}

}  // namespace greedynet
