#pragma once

// Approximate Nash equilibria for the undirected game: redundant-edge
// filtering, critical incident sets, critical best responses, edge
// classification and the iterative construction with a Hakimi orientation.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "greedynet/geometry.hpp"
#include "greedynet/hakimi.hpp"
#include "greedynet/routing_sets.hpp"

namespace greedynet {

/// Edges sorted by decreasing exact length, ties by endpoint indices.
inline std::vector<Edge> edges_by_decreasing_length(const Network& net, const MetricSpace& space) {
  auto es = net.edges();
  std::stable_sort(es.begin(), es.end(), [&](const Edge& x, const Edge& y) {
    return space.compare_distances(x.a, x.b, y.a, y.b) == Ordering::Greater;
  });
  return es;
}

/// Removes edges whose individual removal keeps the network navigable,
/// longest first. An edge kept earlier stays necessary after later removals
/// (reachability only shrinks), so one pass reaches the fixpoint.
inline Network filter_redundant_edges(Network net, const MetricSpace& space,
                                      std::vector<Edge>* removed = nullptr) {
  if (!is_navigable(net, space)) throw InvalidInput("filter_redundant_edges needs a navigable network");
  for (const Edge& e : edges_by_decreasing_length(net, space)) {
    auto owner = net.owner(e);
    net.remove_edge(e.a, e.b);
    if (is_navigable(net, space)) {
      if (removed) removed->push_back(e);
    } else {
      net.add_edge(e.a, e.b, owner);
    }
  }
  return net;
}

/// Incident edges of u whose individual removal breaks u's greedy connectivity.
inline std::vector<Edge> critical_incident_set(const Network& net, const MetricSpace& space, Agent u) {
  if (net.directed()) throw Unsupported("critical incident sets are defined for undirected networks");
  if (!is_greedy_connected(net, space, u))
    throw InvalidInput("agent " + std::to_string(u) + " is not greedy connected");
  std::vector<Edge> h;
  Network g = net;
  for (const Edge& e : net.incident_edges(u)) {
    g.remove_edge(e.a, e.b);
    if (!is_greedy_connected(g, space, u)) h.push_back(e);
    g.add_edge(e.a, e.b);
  }
  return h;
}

/// Best response of u in the network without H_u. The remaining incident
/// edges of u are treated as bought by the other endpoint. Among minimum
/// strategies the one with most endpoints in H_u wins, then lexicographic.
inline BestResponseResult critical_best_response(const Network& net, const MetricSpace& space, Agent u,
                                                 const std::vector<Edge>& h, const SearchBudget& budget = {}) {
  Network g = net;
  g.clear_ownership();
  std::vector<bool> preferred(space.size(), false);
  for (const Edge& e : h) {
    g.remove_edge(e.a, e.b);
    preferred[other_end(e, u)] = true;
  }
  auto r = detail::cover_best_response(space, g, u, preferred, budget);
  if (!r.feasible) throw InvariantFault("critical best response infeasible");
  return r;
}

inline BestResponseResult critical_best_response(const Network& net, const MetricSpace& space, Agent u,
                                                 const SearchBudget& budget = {}) {
  return critical_best_response(net, space, u, critical_incident_set(net, space, u), budget);
}

enum class EdgeKind { Single, Double, Slack };

inline const char* to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Single:
      return "single";
    case EdgeKind::Double:
      return "double";
    case EdgeKind::Slack:
      return "slack";
  }
  return "";
}

struct EdgeClass {
  Edge edge;
  EdgeKind kind = EdgeKind::Slack;
  Agent single_for = 0;  // meaningful for Single only
  friend bool operator==(const EdgeClass&, const EdgeClass&) = default;
};

namespace detail {

inline bool edge_in(const std::vector<Edge>& es, const Edge& e) { return std::find(es.begin(), es.end(), e) != es.end(); }

inline std::vector<EdgeClass> classify_with(const Network& net, const std::vector<std::vector<Edge>>& h) {
  std::vector<EdgeClass> out;
  for (const Edge& e : net.edges()) {
    bool ca = edge_in(h[e.a], e), cb = edge_in(h[e.b], e);
    EdgeClass c{e, EdgeKind::Slack, 0};
    if (ca && cb)
      c.kind = EdgeKind::Double;
    else if (ca || cb) {
      c.kind = EdgeKind::Single;
      c.single_for = ca ? e.a : e.b;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

/// Tags every edge of a navigable undirected network as single (critical for
/// exactly one endpoint), double or slack.
inline std::vector<EdgeClass> classify_edges(const Network& net, const MetricSpace& space) {
  if (!is_navigable(net, space)) throw InvalidInput("classify_edges needs a navigable network");
  std::vector<std::vector<Edge>> h(space.size());
  for (Agent u = 0; u < space.size(); ++u) h[u] = critical_incident_set(net, space, u);
  return detail::classify_with(net, h);
}

struct CriticalAnalysis {
  std::vector<std::vector<Edge>> critical;   // H_u
  std::vector<std::vector<Agent>> best;      // endpoints of S_u^best
  std::vector<std::vector<Edge>> best_in_h;  // S_u^best ∩ H_u
  std::vector<std::vector<Edge>> added;      // A_u = S_u^best \ H_u (new edges)
  std::vector<std::vector<Edge>> single_minus;  // S_u^{s-}
  std::vector<EdgeClass> classes;
  bool exact = true;

  std::size_t alpha(Agent u) const { return added[u].size(); }
};

inline CriticalAnalysis analyze_critical(const Network& net, const MetricSpace& space, const SearchBudget& budget = {}) {
  const std::size_t n = space.size();
  CriticalAnalysis ca;
  ca.critical.resize(n);
  ca.best.resize(n);
  ca.best_in_h.resize(n);
  ca.added.resize(n);
  ca.single_minus.resize(n);
  for (Agent u = 0; u < n; ++u) ca.critical[u] = critical_incident_set(net, space, u);
  ca.classes = detail::classify_with(net, ca.critical);
  for (Agent u = 0; u < n; ++u) {
    auto br = critical_best_response(net, space, u, ca.critical[u], budget);
    if (br.mode != SolveMode::Exact) ca.exact = false;
    ca.best[u] = br.strategy;
    for (Agent v : br.strategy) {
      Edge e = make_edge(Variant::Undirected, u, v);
      (detail::edge_in(ca.critical[u], e) ? ca.best_in_h[u] : ca.added[u]).push_back(e);
    }
  }
  for (auto& c : ca.classes)
    if (c.kind == EdgeKind::Single && !detail::edge_in(ca.best_in_h[c.single_for], c.edge))
      ca.single_minus[c.single_for].push_back(c.edge);
  return ca;
}

// ---------------------------------------------------------------------------
// The iterative construction.

enum class ApproxMode { GeneralMetric, Euclidean, Planar2D };

inline const char* to_string(ApproxMode m) {
  switch (m) {
    case ApproxMode::GeneralMetric:
      return "general";
    case ApproxMode::Euclidean:
      return "euclidean";
    case ApproxMode::Planar2D:
      return "planar2d";
  }
  return "";
}

inline ApproxMode parse_approx_mode(const std::string& s) {
  if (s == "general") return ApproxMode::GeneralMetric;
  if (s == "euclidean") return ApproxMode::Euclidean;
  if (s == "planar2d") return ApproxMode::Planar2D;
  throw InvalidInput("unknown mode '" + s + "'");
}

/// Mode picked from the space: planar2d for 2D points, euclidean for other
/// dimensions, general for explicit metrics.
inline ApproxMode default_approx_mode(const MetricSpace& space) {
  if (!space.is_euclidean()) return ApproxMode::GeneralMetric;
  return space.dimension() == 2 ? ApproxMode::Planar2D : ApproxMode::Euclidean;
}

struct AgentIterationStats {
  std::size_t critical = 0;  // |H_u|
  std::size_t best = 0;      // |S_u^best|
  std::size_t alpha = 0;
  std::size_t single_minus = 0;
  friend bool operator==(const AgentIterationStats&, const AgentIterationStats&) = default;
};

struct IterationRecord {
  std::size_t iteration = 0;
  std::size_t edges = 0;  // |E| at the start of the iteration, after slack removal
  bool navigable = true;
  std::size_t slack_removed = 0;
  std::vector<AgentIterationStats> agents;
  std::optional<bool> flow_feasible;
  std::string action;  // replace-single, hakimi, replace-unassigned, relaxed
  std::optional<Agent> agent;
  std::vector<std::string> notes;
  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct AlgorithmTrace {
  std::string mode;
  std::string delta_rule;
  std::size_t initial_edges = 0;   // union of minimum greedy routing sets
  std::size_t filtered_edges = 0;  // after the first filtering
  bool delaunay_used = false;
  std::size_t iteration_bound = 0;
  std::vector<IterationRecord> iterations;
  bool certified = true;
  std::size_t relaxed_slack = 0;  // extra in-degree allowed by the fallback, 0 if unused
  friend bool operator==(const AlgorithmTrace&, const AlgorithmTrace&) = default;
};

struct ApproxResult {
  Network network;  // with full ownership
  StrategyProfile profile;
  AlgorithmTrace trace;
  std::vector<std::size_t> delta;     // in-degree bound used for the oriented edges
  std::vector<std::size_t> reserved;  // |S_u^best ∩ H_u| + |S_u^{s-}| assigned before orienting
  std::vector<std::size_t> alpha;
  bool certified() const { return trace.certified; }
};

struct ApproxOptions {
  SearchBudget budget;
  bool verify_iterations = true;  // check navigability of every intermediate network
};

/// Iteration cap (K(D)-1)·n - 1, with K = n-1 when no kissing number applies.
inline std::size_t approx_iteration_bound(const MetricSpace& space) {
  const std::size_t n = space.size();
  std::size_t k = n > 1 ? n - 1 : 1;
  if (auto kd = space.kissing()) k = *kd;
  return std::max<std::size_t>(1, (k - 1) * n - 1);
}

namespace detail {

inline Network edges_network(std::size_t n, const std::vector<Edge>& es) {
  return network_from_edges(Variant::Undirected, n, es);
}

inline std::vector<Edge> minus(std::vector<Edge> a, const std::vector<Edge>& b) {
  a.erase(std::remove_if(a.begin(), a.end(), [&](const Edge& e) { return edge_in(b, e); }), a.end());
  return a;
}

inline std::vector<Edge> unite(std::vector<Edge> a, const std::vector<Edge>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace detail

inline ApproxResult compute_approximate_ne(const MetricSpace& space, ApproxMode mode, const ApproxOptions& options = {}) {
  const std::size_t n = space.size();
  if (n < 2) throw InvalidInput("compute_approximate_ne needs at least two points");
  if (mode != ApproxMode::GeneralMetric && !space.is_euclidean())
    throw Unsupported(std::string("mode ") + to_string(mode) + " needs a Euclidean space");
  if (mode == ApproxMode::Planar2D && space.dimension() != 2) throw Unsupported("mode planar2d needs 2D points");

  ApproxResult result;
  AlgorithmTrace& trace = result.trace;
  trace.mode = to_string(mode);
  trace.delta_rule = mode == ApproxMode::Planar2D ? "alpha-minus-single+2" : "alpha-minus-single";
  trace.iteration_bound = approx_iteration_bound(space);

  auto nng = build_nng(space);
  std::vector<Edge> start;
  for (Agent u = 0; u < n; ++u) {
    auto g = minimum_greedy_routing_set(space, nng, u, options.budget);
    if (g.mode != SolveMode::Exact) trace.certified = false;
    for (Agent v : g.endpoints) start.push_back(make_edge(Variant::Undirected, u, v));
  }
  std::sort(start.begin(), start.end());
  start.erase(std::unique(start.begin(), start.end()), start.end());
  trace.initial_edges = start.size();

  Network net = filter_redundant_edges(detail::edges_network(n, start), space);
  if (mode == ApproxMode::Planar2D && n >= 3) {
    try {
      auto dt = delaunay_2d(space);
      if (dt.edges.size() < net.edge_count()) {
        Network dtn = detail::edges_network(n, dt.edges);
        if (is_navigable(dtn, space)) {
          net = filter_redundant_edges(std::move(dtn), space);
          trace.delaunay_used = true;
        }
      }
    } catch (const DegenerateInput&) {
      // collinear input: no triangulation to compare against
    }
  }
  trace.filtered_edges = net.edge_count();

  for (std::size_t it = 1;; ++it) {
    if (it > trace.iteration_bound)
      throw InvariantFault("approximate NE loop exceeded its bound of " + std::to_string(trace.iteration_bound) +
                           " iterations");
    IterationRecord rec;
    rec.iteration = it;
    std::vector<Edge> slack;
    net = filter_redundant_edges(std::move(net), space, &slack);
    rec.slack_removed = slack.size();
    rec.edges = net.edge_count();
    rec.navigable = !options.verify_iterations || is_navigable(net, space);
    if (!rec.navigable) throw InvariantFault("intermediate network lost navigability");

    auto ca = analyze_critical(net, space, options.budget);
    if (!ca.exact) trace.certified = false;
    for (Agent u = 0; u < n; ++u)
      rec.agents.push_back({ca.critical[u].size(), ca.best[u].size(), ca.alpha(u), ca.single_minus[u].size()});

    const auto current = net.edges();
    bool replaced = false;
    for (Agent u = 0; u < n && !replaced; ++u) {
      if (ca.alpha(u) >= ca.single_minus[u].size()) continue;
      auto next = detail::unite(detail::minus(current, ca.single_minus[u]), ca.added[u]);
      Network cand = detail::edges_network(n, next);
      if (!is_navigable(cand, space)) {
        rec.notes.push_back("replacement for agent " + std::to_string(u) + " breaks navigability; skipped");
        continue;
      }
      net = std::move(cand);
      rec.action = "replace-single";
      rec.agent = u;
      replaced = true;
    }
    if (replaced) {
      trace.iterations.push_back(std::move(rec));
      continue;
    }

    // Pre-assign S_u^best ∩ H_u (lower index first on conflicts) and S_u^{s-}.
    std::map<Edge, Agent> assigned;
    std::vector<std::size_t> reserved(n, 0);
    for (Agent u = 0; u < n; ++u)
      for (const Edge& e : ca.best_in_h[u])
        if (assigned.emplace(e, u).second) ++reserved[u];
    for (Agent u = 0; u < n; ++u)
      for (const Edge& e : ca.single_minus[u])
        if (assigned.emplace(e, u).second) ++reserved[u];
    std::vector<Edge> rest;
    for (const Edge& e : current)
      if (!assigned.count(e)) rest.push_back(e);
    std::vector<std::size_t> delta(n);
    for (Agent u = 0; u < n; ++u) {
      std::size_t a = ca.alpha(u), s = ca.single_minus[u].size();
      delta[u] = (a > s ? a - s : 0) + (mode == ApproxMode::Planar2D ? 2 : 0);
    }
    auto orientation = hakimi_orient(n, rest, delta);
    rec.flow_feasible = orientation.has_value();

    if (!orientation) {
      std::vector<Edge> all_added;
      for (Agent u = 0; u < n; ++u) all_added = detail::unite(all_added, ca.added[u]);
      auto next = detail::unite(detail::minus(current, rest), all_added);
      Network cand = detail::edges_network(n, next);
      if (next.size() < current.size() && is_navigable(cand, space)) {
        net = std::move(cand);
        rec.action = "replace-unassigned";
        trace.iterations.push_back(std::move(rec));
        continue;
      }
      // Fall back to the smallest uniform relaxation that admits an orientation.
      rec.notes.push_back("unassigned-edge replacement not applicable; relaxing in-degree bounds");
      for (std::size_t k = 1; !orientation; ++k) {
        auto relaxed = delta;
        for (auto& d : relaxed) d += k;
        orientation = hakimi_orient(n, rest, relaxed);
        if (orientation) {
          trace.relaxed_slack = k;
          delta = relaxed;
        }
      }
      trace.certified = false;
      rec.action = "relaxed";
    } else {
      rec.action = "hakimi";
    }

    for (std::size_t i = 0; i < orientation->edges.size(); ++i) assigned[orientation->edges[i]] = orientation->owner[i];
    Network out(Variant::Undirected, n);
    for (auto& [e, o] : assigned) out.add_edge(e.a, e.b, o);
    result.network = std::move(out);
    result.profile = result.network.to_profile();
    result.delta = delta;
    result.reserved = reserved;
    for (Agent u = 0; u < n; ++u) result.alpha.push_back(ca.alpha(u));
    trace.iterations.push_back(std::move(rec));
    return result;
  }
}

inline ApproxResult compute_approximate_ne(const MetricSpace& space, const ApproxOptions& options = {}) {
  return compute_approximate_ne(space, default_approx_mode(space), options);
}

}  // namespace greedynet
