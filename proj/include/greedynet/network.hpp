#pragma once

// Strategy profiles and the networks they induce.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "greedynet/metric.hpp"

namespace greedynet {

enum class Variant { Directed, Undirected };

inline const char* to_string(Variant v) { return v == Variant::Directed ? "directed" : "undirected"; }

inline Variant parse_variant(const std::string& s) {
  if (s == "directed") return Variant::Directed;
  if (s == "undirected") return Variant::Undirected;
  throw InvalidInput("unknown variant '" + s + "'");
}

/// Directed: an arc a -> b. Undirected: a pair stored with a < b.
struct Edge {
  Agent a = 0;
  Agent b = 0;
  auto operator<=>(const Edge&) const = default;
};

inline Edge make_edge(Variant variant, Agent u, Agent v) {
  if (variant == Variant::Undirected && v < u) std::swap(u, v);
  return {u, v};
}

inline Agent other_end(const Edge& e, Agent u) { return e.a == u ? e.b : e.a; }

namespace detail {

inline bool sorted_insert(std::vector<Agent>& v, Agent x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) return false;
  v.insert(it, x);
  return true;
}

inline bool sorted_erase(std::vector<Agent>& v, Agent x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) return false;
  v.erase(it);
  return true;
}

inline bool sorted_contains(const std::vector<Agent>& v, Agent x) { return std::binary_search(v.begin(), v.end(), x); }

}  // namespace detail

struct CanonicalizationEvent {
  Edge edge;
  Agent kept_owner = 0;
  Agent dropped_owner = 0;
  friend bool operator==(const CanonicalizationEvent&, const CanonicalizationEvent&) = default;
};

/// Per-agent sets of bought endpoints. In the directed variant the endpoints
/// are out-neighbours; in the undirected variant each endpoint v of agent u
/// stands for the edge {u,v} owned by u.
class StrategyProfile {
 public:
  StrategyProfile() = default;
  StrategyProfile(Variant variant, std::size_t n) : variant_(variant), strategies_(n) {}

  Variant variant() const { return variant_; }
  std::size_t size() const { return strategies_.size(); }

  const std::vector<Agent>& strategy(Agent u) const { return strategies_.at(u); }

  void set_strategy(Agent u, std::vector<Agent> endpoints) {
    check(u);
    std::sort(endpoints.begin(), endpoints.end());
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
      check(endpoints[i]);
      if (endpoints[i] == u) throw InvalidInput("agent " + std::to_string(u) + " cannot buy a self-edge");
      if (i > 0 && endpoints[i] == endpoints[i - 1])
        throw InvalidInput("duplicate endpoint " + std::to_string(endpoints[i]) + " in strategy of agent " +
                           std::to_string(u));
    }
    strategies_[u] = std::move(endpoints);
  }

  bool add(Agent u, Agent v) {
    check(u);
    check(v);
    if (u == v) throw InvalidInput("agent " + std::to_string(u) + " cannot buy a self-edge");
    return detail::sorted_insert(strategies_[u], v);
  }

  bool remove(Agent u, Agent v) {
    check(u);
    return detail::sorted_erase(strategies_[u], v);
  }

  bool owns(Agent u, Agent v) const { return detail::sorted_contains(strategies_.at(u), v); }

  std::size_t total_edges() const {
    std::size_t s = 0;
    for (auto& st : strategies_) s += st.size();
    return s;
  }

  /// Drops undirected edges bought by both endpoints from the higher-indexed
  /// owner. No-op for directed profiles.
  std::vector<CanonicalizationEvent> canonicalize() {
    std::vector<CanonicalizationEvent> events;
    if (variant_ != Variant::Undirected) return events;
    for (Agent u = 0; u < size(); ++u) {
      for (Agent v : std::vector<Agent>(strategies_[u])) {
        if (v > u && owns(v, u)) {
          detail::sorted_erase(strategies_[v], u);
          events.push_back({make_edge(variant_, u, v), u, v});
        }
      }
    }
    return events;
  }

  /// Order-independent 64-bit hash of the profile (FNV-1a over the sorted
  /// strategies). Equal profiles hash equally; callers compare in full on a hit.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::uint64_t x) {
      for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xffU;
        h *= 1099511628211ULL;
      }
    };
    mix(static_cast<std::uint64_t>(variant_));
    for (Agent u = 0; u < size(); ++u) {
      mix(u);
      mix(strategies_[u].size());
      for (Agent v : strategies_[u]) mix(v);
    }
    return h;
  }

  friend bool operator==(const StrategyProfile& a, const StrategyProfile& b) {
    return a.variant_ == b.variant_ && a.strategies_ == b.strategies_;
  }

 private:
  void check(Agent u) const {
    if (u >= size()) throw InvalidInput("agent index " + std::to_string(u) + " out of range");
  }

  Variant variant_ = Variant::Directed;
  std::vector<std::vector<Agent>> strategies_;
};

/// Graph over the agent set with optional edge ownership. For undirected
/// networks out() and in() coincide.
class Network {
 public:
  Network() = default;
  Network(Variant variant, std::size_t n) : variant_(variant), out_(n), in_(n) {}

  Variant variant() const { return variant_; }
  std::size_t size() const { return out_.size(); }
  bool directed() const { return variant_ == Variant::Directed; }

  /// Returns false if the edge already exists.
  bool add_edge(Agent u, Agent v, std::optional<Agent> owner = std::nullopt) {
    check(u);
    check(v);
    if (u == v) throw InvalidInput("self-edges are not allowed");
    Edge e = make_edge(variant_, u, v);
    if (!detail::sorted_insert(out_[u], v)) return false;
    if (directed()) {
      detail::sorted_insert(in_[v], u);
    } else {
      detail::sorted_insert(out_[v], u);
    }
    ++edge_count_;
    if (owner) set_owner(e, *owner);
    return true;
  }

  bool remove_edge(Agent u, Agent v) {
    check(u);
    check(v);
    if (!detail::sorted_erase(out_[u], v)) return false;
    if (directed()) {
      detail::sorted_erase(in_[v], u);
    } else {
      detail::sorted_erase(out_[v], u);
    }
    --edge_count_;
    owners_.erase(make_edge(variant_, u, v));
    return true;
  }

  bool has_edge(Agent u, Agent v) const { return u < size() && detail::sorted_contains(out_[u], v); }
  bool has_edge(const Edge& e) const { return has_edge(e.a, e.b); }

  std::span<const Agent> out(Agent u) const { return out_.at(u); }
  std::span<const Agent> in(Agent u) const { return directed() ? std::span<const Agent>(in_.at(u)) : out(u); }
  std::span<const Agent> neighbors(Agent u) const { return out(u); }

  std::size_t edge_count() const { return edge_count_; }

  /// Edges in sorted order.
  std::vector<Edge> edges() const {
    std::vector<Edge> es;
    es.reserve(edge_count_);
    for (Agent u = 0; u < size(); ++u)
      for (Agent v : out_[u])
        if (directed() || u < v) es.push_back({u, v});
    return es;
  }

  std::vector<Edge> incident_edges(Agent u) const {
    std::vector<Edge> es;
    for (Agent v : out_.at(u)) es.push_back(make_edge(variant_, u, v));
    if (directed())
      for (Agent v : in_.at(u)) es.push_back({v, u});
    return es;
  }

  std::optional<Agent> owner(const Edge& e) const {
    auto it = owners_.find(e);
    if (it == owners_.end()) return std::nullopt;
    return it->second;
  }

  void set_owner(const Edge& e, Agent owner) {
    if (!has_edge(e)) throw InvalidInput("cannot assign an owner to a missing edge");
    if (owner != e.a && owner != e.b) throw InvalidInput("edge owner must be an endpoint");
    if (directed() && owner != e.a) throw InvalidInput("a directed arc is owned by its tail");
    owners_[e] = owner;
  }

  void clear_ownership() { owners_.clear(); }

  bool has_full_ownership() const { return owners_.size() == edge_count_; }

  /// Owned-edge profile; requires ownership on every edge.
  StrategyProfile to_profile() const {
    if (!has_full_ownership()) throw InvalidInput("network has edges without an owner");
    StrategyProfile p(variant_, size());
    for (auto& [e, o] : owners_) p.add(o, other_end(e, o));
    return p;
  }

  const std::vector<CanonicalizationEvent>& events() const { return events_; }
  void record_events(std::vector<CanonicalizationEvent> ev) {
    events_.insert(events_.end(), ev.begin(), ev.end());
  }

  friend bool operator==(const Network& a, const Network& b) {
    return a.variant_ == b.variant_ && a.out_ == b.out_ && a.owners_ == b.owners_;
  }

 private:
  void check(Agent u) const {
    if (u >= size()) throw InvalidInput("agent index " + std::to_string(u) + " out of range");
  }

  Variant variant_ = Variant::Directed;
  std::vector<std::vector<Agent>> out_;
  std::vector<std::vector<Agent>> in_;
  std::size_t edge_count_ = 0;
  std::map<Edge, Agent> owners_;
  std::vector<CanonicalizationEvent> events_;
};

/// E(s) with ownership. Undirected edges bought by both endpoints are kept
/// once, owned by the lower index, and the duplication is recorded.
inline Network induce_network(const StrategyProfile& profile) {
  StrategyProfile canonical = profile;
  auto events = canonical.canonicalize();
  Network net(profile.variant(), profile.size());
  for (Agent u = 0; u < profile.size(); ++u)
    for (Agent v : canonical.strategy(u)) net.add_edge(u, v, u);
  net.record_events(std::move(events));
  return net;
}

/// Network from a plain edge list without ownership.
inline Network network_from_edges(Variant variant, std::size_t n, std::span<const Edge> edges) {
  Network net(variant, n);
  for (auto& e : edges) net.add_edge(e.a, e.b);
  return net;
}

}  // namespace greedynet
