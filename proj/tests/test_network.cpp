#include <random>

#include <gtest/gtest.h>

#include "greedynet/directed_game.hpp"
#include "greedynet/instances.hpp"

using namespace greedynet;

namespace {

// Independent oracle: depth-first enumeration of simple paths whose exact
// squared distance to t strictly decreases. Uses only distance_squared or
// the raw matrix, never the rank table.
bool brute_reaches(const Network& net, const MetricSpace& s, Agent x, Agent t, std::vector<bool>& seen) {
  if (x == t) return true;
  seen[x] = true;
  bool ok = false;
  for (Agent y = 0; y < s.size() && !ok; ++y) {
    if (seen[y] || !net.has_edge(x, y)) continue;
    bool closer = s.is_euclidean() ? s.distance_squared(y, t) < s.distance_squared(x, t)
                                   : s.metric_distance(y, t) < s.metric_distance(x, t);
    if (closer) ok = brute_reaches(net, s, y, t, seen);
  }
  seen[x] = false;
  return ok;
}

bool brute_connected(const Network& net, const MetricSpace& s, Agent u) {
  for (Agent t = 0; t < s.size(); ++t) {
    if (t == u) continue;
    std::vector<bool> seen(s.size(), false);
    if (!brute_reaches(net, s, u, t, seen)) return false;
  }
  return true;
}

MetricSpace line013() { return line_points({0, 1, 3}); }

}  // namespace

TEST(InduceNetwork, DirectedPairBuysBothArcs) {
  StrategyProfile p(Variant::Directed, 2);
  p.add(0, 1);
  p.add(1, 0);
  auto net = induce_network(p);
  EXPECT_EQ(net.edge_count(), 2u);
  EXPECT_TRUE(net.has_edge(0, 1));
  EXPECT_TRUE(net.has_edge(1, 0));
}

TEST(InduceNetwork, UndirectedDuplicateIsCanonicalized) {
  StrategyProfile p(Variant::Undirected, 2);
  p.add(0, 1);
  p.add(1, 0);
  auto net = induce_network(p);
  EXPECT_EQ(net.edge_count(), 1u);
  EXPECT_EQ(net.owner({0, 1}), Agent{0});
  ASSERT_EQ(net.events().size(), 1u);
  EXPECT_EQ(net.events()[0].kept_owner, 0u);
  EXPECT_EQ(net.events()[0].dropped_owner, 1u);
}

TEST(InduceNetwork, EmptyStrategies) {
  auto net = induce_network(StrategyProfile(Variant::Undirected, 4));
  EXPECT_EQ(net.edge_count(), 0u);
}

TEST(StrategyProfile, RejectsSelfAndDuplicateEndpoints) {
  StrategyProfile p(Variant::Directed, 3);
  EXPECT_THROW(p.set_strategy(0, {0}), InvalidInput);
  EXPECT_THROW(p.set_strategy(0, {1, 1}), InvalidInput);
  EXPECT_THROW(p.set_strategy(0, {3}), InvalidInput);
}

TEST(StrategyProfile, FingerprintIsOrderIndependent) {
  StrategyProfile a(Variant::Directed, 4), b(Variant::Directed, 4);
  a.set_strategy(0, {3, 1});
  b.add(0, 1);
  b.add(0, 3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  b.add(2, 0);
  EXPECT_NE(a.fingerprint(), b.fingerprint());
}

TEST(Network, OwnershipRules) {
  Network d(Variant::Directed, 3);
  d.add_edge(0, 1);
  EXPECT_THROW(d.set_owner({0, 1}, 1), InvalidInput);
  EXPECT_THROW(d.set_owner({1, 2}, 1), InvalidInput);
  Network u(Variant::Undirected, 3);
  u.add_edge(2, 0, 2);
  EXPECT_EQ(u.owner({0, 2}), Agent{2});
  EXPECT_TRUE(u.has_edge(0, 2));
  EXPECT_FALSE(u.add_edge(0, 2));
  EXPECT_THROW(u.add_edge(1, 1), InvalidInput);
}

// Four points with a single greedy connected agent s.
TEST(GreedyReachability, OnlyOneAgentConnected) {
  auto space = MetricSpace::euclidean(2, {{0, 0}, {0, 15}, {12, 15}, {0, 8}});
  const Agent t = 0, s = 1, u = 2, a = 3;
  Network net(Variant::Directed, 4);
  net.add_edge(s, a);
  net.add_edge(a, t);
  net.add_edge(s, u);
  EXPECT_TRUE(greedy_reachable_to(net, space, t).test(s));
  EXPECT_TRUE(is_greedy_connected(net, space, s));
  EXPECT_FALSE(is_greedy_connected(net, space, t));
  EXPECT_FALSE(is_greedy_connected(net, space, u));
  EXPECT_FALSE(is_greedy_connected(net, space, a));
  auto path = extract_greedy_path(net, space, s, t);
  ASSERT_TRUE(path);
  EXPECT_EQ(*path, (std::vector<Agent>{s, a, t}));
  EXPECT_TRUE(is_greedy_path(net, space, *path));
  // s cannot route to t through u: the hop s -> u moves away from t
  net.remove_edge(s, a);
  EXPECT_FALSE(greedy_reachable_to(net, space, t).test(s));
  // while u -> s is usable toward t since d(s,t)=15 < d(u,t)
  net.add_edge(u, s);
  net.add_edge(s, a);
  EXPECT_TRUE(greedy_reachable_to(net, space, t).test(u));
}

TEST(GreedyReachability, CompleteGraphReachesEverything) {
  auto space = uniform_points(7, 2, 100, 3);
  auto net = induce_network(complete_profile(Variant::Directed, 7));
  for (Agent t = 0; t < 7; ++t) EXPECT_EQ(greedy_reachable_to(net, space, t).count(), 6u);
  EXPECT_TRUE(is_navigable(net, space));
}

TEST(GreedyReachability, LineWithSingleArc) {
  auto space = line013();  // agents 0,1,2 at 0,1,3
  Network net(Variant::Directed, 3);
  net.add_edge(0, 2);
  auto to3 = greedy_reachable_to(net, space, 2);
  EXPECT_TRUE(to3.test(0));
  EXPECT_FALSE(to3.test(1));
  for (Agent t = 0; t < 3; ++t)
    if (t != 1) {
      EXPECT_FALSE(greedy_reachable_to(net, space, t).test(1));
    }
}

TEST(GreedyConnected, SingleAgentIsVacuous) {
  auto space = MetricSpace::euclidean(2, {{4, 4}});
  Network net(Variant::Undirected, 1);
  EXPECT_TRUE(is_greedy_connected(net, space, 0));
  EXPECT_TRUE(is_navigable(net, space));
}

TEST(GreedyConnected, UnitSquareFourCycle) {
  auto space = MetricSpace::euclidean(2, {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  Network net(Variant::Undirected, 4);
  net.add_edge(0, 1);
  net.add_edge(1, 2);
  net.add_edge(2, 3);
  net.add_edge(3, 0);
  for (Agent u = 0; u < 4; ++u) {
    EXPECT_TRUE(brute_connected(net, space, u));
    EXPECT_TRUE(is_greedy_connected(net, space, u));
  }
}

TEST(Navigable, EdgelessIsNot) {
  auto space = line013();
  EXPECT_FALSE(is_navigable(Network(Variant::Undirected, 3), space));
}

TEST(Navigable, TwoClusterNngIsNot) {
  auto space = MetricSpace::euclidean(2, {{0, 0}, {1, 0}, {100, 0}, {101, 0}});
  auto nng = build_nng(space);
  EXPECT_EQ(nng.component_count, 2u);
  auto net = nng.network(Variant::Undirected);
  EXPECT_FALSE(is_navigable(net, space));
  EXPECT_FALSE(brute_connected(net, space, 0));
}

TEST(ExtractGreedyPath, DirectEdgeAndLine) {
  auto space = line013();
  Network net(Variant::Directed, 3);
  net.add_edge(0, 1);
  net.add_edge(1, 2);
  EXPECT_EQ(*extract_greedy_path(net, space, 0, 2), (std::vector<Agent>{0, 1, 2}));
  net.add_edge(0, 2);
  EXPECT_EQ(*extract_greedy_path(net, space, 0, 2), (std::vector<Agent>{0, 2}));
  EXPECT_FALSE(extract_greedy_path(net, space, 2, 0).has_value());
  EXPECT_THROW(extract_greedy_path(net, space, 1, 1), InvalidInput);
}

TEST(Cost, DirectedLineProfile) {
  auto space = line013();
  StrategyProfile p(Variant::Directed, 3);
  p.set_strategy(0, {1});
  p.set_strategy(1, {0, 2});
  p.set_strategy(2, {1});
  auto r = social_cost(p, space);
  EXPECT_EQ(r.per_agent[0], Cost::finite(1));
  EXPECT_EQ(r.per_agent[1], Cost::finite(2));
  EXPECT_EQ(r.per_agent[2], Cost::finite(1));
  EXPECT_EQ(r.social, Cost::finite(4));
  auto net = induce_network(p);
  for (Agent u = 0; u < 3; ++u) EXPECT_TRUE(brute_connected(net, space, u));
}

TEST(Cost, DisconnectedAgentMakesSocialInfinite) {
  auto space = line013();
  StrategyProfile p(Variant::Directed, 3);
  p.set_strategy(0, {1});
  p.set_strategy(1, {0, 2});
  EXPECT_TRUE(agent_cost(p, space, 2).is_infinite());
  EXPECT_TRUE(social_cost(p, space).social.is_infinite());
}

TEST(Cost, UndirectedPairOwnerPays) {
  auto space = MetricSpace::euclidean(1, {{0}, {5}});
  StrategyProfile p(Variant::Undirected, 2);
  p.add(0, 1);
  EXPECT_EQ(agent_cost(p, space, 0), Cost::finite(1));
  EXPECT_EQ(agent_cost(p, space, 1), Cost::finite(0));
}

// Property suite over random small instances.
TEST(ReachabilityProperty, MatchesBruteForceEnumeration) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t n = 2 + rng() % 7;
    Variant variant = trial % 2 ? Variant::Directed : Variant::Undirected;
    MetricSpace space = trial % 3 == 2 ? random_general_metric(n, 6, rng()) : uniform_points(n, 1 + trial % 3, 8, rng());
    auto net = induce_network(random_profile(variant, n, 0.35, rng()));
    for (Agent t = 0; t < n; ++t) {
      auto fast = greedy_reachable_to(net, space, t);
      for (Agent x = 0; x < n; ++x) {
        if (x == t) continue;
        std::vector<bool> seen(n, false);
        EXPECT_EQ(fast.test(x), brute_reaches(net, space, x, t, seen));
        auto path = extract_greedy_path(net, space, x, t);
        EXPECT_EQ(path.has_value(), fast.test(x));
        if (path) {
          EXPECT_TRUE(is_greedy_path(net, space, *path));
        }
      }
    }
  }
}

TEST(ReachabilityProperty, AddingAnEdgeNeverShrinks) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 3 + rng() % 6;
    auto space = uniform_points(n, 2, 20, rng());
    Variant variant = trial % 2 ? Variant::Directed : Variant::Undirected;
    auto net = induce_network(random_profile(variant, n, 0.3, rng()));
    Agent a = rng() % n, b = rng() % n;
    if (a == b) continue;
    Network bigger = net;
    bigger.add_edge(a, b);
    for (Agent t = 0; t < n; ++t) {
      auto before = greedy_reachable_to(net, space, t), after = greedy_reachable_to(bigger, space, t);
      EXPECT_TRUE(before.is_subset_of(after));
    }
  }
}

// If v is greedy connected and adjacent to u with d(v,w) < d(u,w), then u
// reaches w, whatever strategy v uses to stay connected.
TEST(ReachabilityProperty, FirstHopThroughConnectedNeighbour) {
  std::mt19937_64 rng(29);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 4 + rng() % 5;
    auto space = uniform_points(n, 2, 30, rng());
    auto profile = construct_directed_optimum(space).profile;
    Agent u = rng() % n, v = rng() % n;
    if (u == v) continue;
    profile.set_strategy(u, {v});
    auto net = induce_network(profile);
    if (!is_greedy_connected(net, space, v)) continue;
    auto reached = [&](const Network& g) {
      std::vector<bool> r(n);
      for (Agent w = 0; w < n; ++w)
        if (w != u && space.closer(w, v, u)) r[w] = greedy_reachable_to(g, space, w).test(u);
      return r;
    };
    auto base = reached(net);
    for (Agent w = 0; w < n; ++w) {
      if (w != u && space.closer(w, v, u)) {
        EXPECT_TRUE(base[w]);
      }
    }
    // swap v's strategy for another that keeps v connected
    StrategyProfile alt = profile;
    std::vector<Agent> all;
    for (Agent x = 0; x < n; ++x)
      if (x != v) all.push_back(x);
    alt.set_strategy(v, all);
    EXPECT_EQ(reached(induce_network(alt)), base);
    ++checked;
  }
  EXPECT_GT(checked, 20);
}
