#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace greedynet;

namespace {

MetricSpace unit_square() { return MetricSpace::euclidean(2, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

// Every strictly better strategy for u, found by exhaustive enumeration.
bool has_improving_deviation(const MetricSpace& s, const StrategyProfile& p, Agent u) {
  auto best = oracle::best_response_size(s, p, u);
  StrategyProfile canon = p;
  canon.canonicalize();
  auto cur = agent_cost(canon, s, u);
  return best && Cost::finite(*best) < cur;
}

}  // namespace

TEST(Criterion, Parse) {
  EXPECT_EQ(parse_criterion("ne").kind, Criterion::Kind::Exact);
  auto b = parse_criterion("beta:3/2");
  EXPECT_EQ(b.kind, Criterion::Kind::Beta);
  EXPECT_EQ(b.value, Rational(3, 2));
  EXPECT_EQ(parse_criterion("additive:2").value, Rational(2));
  EXPECT_EQ(parse_criterion("beta:1.25").describe(), "beta:5/4");
  EXPECT_THROW(parse_criterion("beta:0.5"), InvalidInput);
  EXPECT_THROW(parse_criterion("additive:-1"), InvalidInput);
  EXPECT_THROW(parse_criterion("gamma:1"), InvalidInput);
  EXPECT_THROW(parse_criterion("beta:x"), InvalidInput);
}

TEST(VerifyEquilibrium, DirectedOptimumIsNe) {
  auto s = uniform_points(12, 2, 1000, 5);
  auto opt = construct_directed_optimum(s);
  auto r = verify_equilibrium(s, opt.profile);
  EXPECT_EQ(r.verdict, Verdict::NE);
  EXPECT_TRUE(r.certified);
  EXPECT_TRUE(r.fast_path);
  EXPECT_FALSE(r.first_violation.has_value());
}

TEST(VerifyEquilibrium, ExtraEdgeIsNotStable) {
  auto s = line_points({0, 1, 3});
  auto p = construct_directed_optimum(s).profile;
  p.add(0, 2);
  auto r = verify_equilibrium(s, p);
  EXPECT_EQ(r.verdict, Verdict::NotStable);
  ASSERT_TRUE(r.first_violation.has_value());
  EXPECT_EQ(*r.first_violation, 0u);
  auto& w = r.agents[0];
  EXPECT_TRUE(w.improving);
  EXPECT_EQ(w.current, Cost::finite(2));
  EXPECT_EQ(w.best, Cost::finite(1));
  EXPECT_EQ(w.best_strategy, std::vector<Agent>{1});
  // the witness reproduces its cost
  StrategyProfile dev = p;
  dev.set_strategy(0, w.best_strategy);
  EXPECT_EQ(agent_cost(dev, s, 0), w.best);
}

TEST(VerifyEquilibrium, RelaxedCriteria) {
  auto s = line_points({0, 1, 3});
  auto p = construct_directed_optimum(s).profile;
  p.add(0, 2);
  // 0 pays 2 but could pay 1
  EXPECT_EQ(verify_equilibrium(s, p, Criterion::beta(2)).verdict, Verdict::BetaNE);
  EXPECT_EQ(verify_equilibrium(s, p, Criterion::beta(Rational(3, 2))).verdict, Verdict::NotStable);
  EXPECT_EQ(verify_equilibrium(s, p, Criterion::additive(1)).verdict, Verdict::AdditiveNE);
  EXPECT_EQ(verify_equilibrium(s, p, Criterion::additive(Rational(1, 2))).verdict, Verdict::NotStable);
}

TEST(VerifyEquilibrium, DisconnectedAgentIsNotStable) {
  auto s = line_points({0, 1, 3});
  auto r = verify_equilibrium(s, StrategyProfile(Variant::Undirected, 3));
  EXPECT_EQ(r.verdict, Verdict::NotStable);
  EXPECT_FALSE(r.fast_path);
  EXPECT_TRUE(r.agents[0].current.is_infinite());
}

TEST(VerifyEquilibrium, PlanarApproximationIsAdditiveTwo) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = uniform_points(7 + seed % 3, 2, 100, seed);
    auto r = compute_approximate_ne(s, ApproxMode::Planar2D);
    auto rep = verify_equilibrium(s, r.profile, Criterion::additive(2));
    EXPECT_EQ(rep.verdict, Verdict::AdditiveNE);
    EXPECT_TRUE(rep.certified);
  }
}

TEST(VerifyEquilibriumProperty, SoundAgainstExhaustiveSearch) {
  std::mt19937_64 rng(2);
  std::size_t stable = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 4 + trial % 4;
    auto variant = trial % 2 ? Variant::Directed : Variant::Undirected;
    auto s = uniform_points(n, 2, 30, trial);
    StrategyProfile p = trial % 3 == 0 ? random_profile(variant, n, 0.4, rng())
                                       : run_dynamics(s, random_profile(variant, n, 0.3, rng()),
                                                      Schedule::round_robin())
                                             .final_profile;
    auto rep = verify_equilibrium(s, p);
    bool any = false;
    for (Agent u = 0; u < n; ++u) any = any || has_improving_deviation(s, p, u);
    EXPECT_EQ(rep.verdict == Verdict::NotStable, any);
    stable += rep.verdict == Verdict::NE;
  }
  EXPECT_GT(stable, 0u);
}

TEST(BruteForceSo, Examples) {
  EXPECT_EQ(brute_force_social_optimum(line_points({0, 1, 3}), Variant::Undirected).cost, 2u);
  auto sq = brute_force_social_optimum(unit_square(), Variant::Undirected);
  EXPECT_EQ(sq.cost, 4u);
  EXPECT_TRUE(is_navigable(sq.network, unit_square()));
  auto s = uniform_points(6, 2, 50, 3);
  std::size_t sum = 0;
  for (Agent u = 0; u < 6; ++u) sum += oracle::phi(s, u).size;
  EXPECT_EQ(brute_force_social_optimum(s, Variant::Directed).cost, sum);
}

TEST(BruteForceSo, SizeCap) {
  EXPECT_THROW(brute_force_social_optimum(uniform_points(10, 2, 100, 1), Variant::Undirected), InvalidInput);
  EXPECT_THROW(brute_force_social_optimum(uniform_points(8, 2, 100, 1), Variant::Directed), InvalidInput);
  EXPECT_NO_THROW(brute_force_social_optimum(uniform_points(8, 2, 100, 1), Variant::Directed, 8));
}

TEST(BruteForceSoProperty, MatchesExhaustiveEdgeSearch) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto s = seed % 2 ? random_general_metric(5, 6, seed) : uniform_points(5 + seed % 3 / 2, 2, 25, seed);
    EXPECT_EQ(brute_force_social_optimum(s, Variant::Undirected).cost,
              oracle::min_navigable_edges(s, Variant::Undirected));
  }
}

TEST(SoLowerBound, Examples) {
  EXPECT_EQ(so_lower_bound(line_points({0, 1, 3})), 2u);
  // NNG-navigable: the bound is the NNG itself
  auto sq = unit_square();
  EXPECT_EQ(so_lower_bound(sq), build_nng(sq).edges.size());
  auto d = so_lower_bound_details(MetricSpace::euclidean(2, {{0, 0}, {0, 1}, {100, 0}, {100, 1}}));
  EXPECT_EQ(d.nng_edges, 2u);
  std::size_t sum = 0;
  for (auto v : d.values) sum += v;
  EXPECT_EQ(d.bound, 2 + (sum + 1) / 2);
}

TEST(SoLowerBoundProperty, Sandwich) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    auto s = uniform_points(6 + seed % 4, 2, 200, seed);
    auto lb = so_lower_bound(s);
    auto so = brute_force_social_optimum(s, Variant::Undirected);
    auto alg = compute_approximate_ne(s, ApproxMode::Planar2D);
    EXPECT_LE(lb, so.cost);
    EXPECT_LE(so.cost, alg.network.edge_count());
    EXPECT_LE(so.cost, delaunay_2d(s).edges.size());
    EXPECT_TRUE(is_navigable(so.network, s));
  }
}

TEST(Poa, DirectedIsOne) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto s = uniform_points(7, 2, 100, seed);
    auto r = poa_report(s, construct_directed_optimum(s).profile);
    ASSERT_TRUE(r.ratio_exact.has_value());
    EXPECT_EQ(*r.ratio_exact, Rational(1));
    EXPECT_FALSE(r.bound_violated);
  }
}

TEST(Poa, PlanarWithinBound) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto s = uniform_points(6 + seed % 4, 2, 300, seed + 50);
    auto r = poa_report(s, compute_approximate_ne(s, ApproxMode::Planar2D).profile);
    ASSERT_TRUE(r.ratio_exact.has_value());
    EXPECT_LE(*r.ratio_exact, Rational(9, 5));
    EXPECT_GE(r.ratio_lower, *r.ratio_exact);
    EXPECT_EQ(r.bound, Rational(9, 5));
    EXPECT_FALSE(r.bound_violated);
  }
}

TEST(Poa, UpperBoundLabels) {
  EXPECT_EQ(poa_upper_bound(uniform_points(4, 3, 10, 1), Variant::Undirected).first, Rational(23, 12));
  EXPECT_EQ(poa_upper_bound(line_points({0, 1}), Variant::Undirected).first, Rational(3, 2));
  EXPECT_EQ(poa_upper_bound(random_general_metric(4, 5, 1), Variant::Undirected).first, Rational(2));
  EXPECT_EQ(poa_upper_bound(line_points({0, 1}), Variant::Directed).first, Rational(1));
}

TEST(Poa, RejectsNonNavigableProfile) {
  EXPECT_THROW(poa_report(line_points({0, 1, 3}), StrategyProfile(Variant::Undirected, 3)), InvalidInput);
}

TEST(Poa, LowerBoundFamilyRatioIsReported) {
  auto s = poa_lower_bound_family(3);
  auto alg = compute_approximate_ne(s, ApproxMode::Planar2D);
  PoaOptions opt;
  opt.compute_exact = false;
  auto r = poa_report(s, alg.profile, opt);
  EXPECT_FALSE(r.optimum.has_value());
  EXPECT_GE(r.ratio_lower, Rational(1));
  EXPECT_EQ(r.equilibrium_cost, alg.network.edge_count());
  EXPECT_EQ(build_nng(s).component_count, 9u);
}

TEST(ComponentBudget, Values) {
  // two far pairs joined by one edge bought by agent 1
  auto s = MetricSpace::euclidean(2, {{0, 0}, {1, 0}, {50, 0}, {51, 0}, {52, 0}});
  auto nng = build_nng(s);
  ASSERT_EQ(nng.component_count, 2u);
  Network net(Variant::Undirected, 5);
  for (auto& e : nng.edges) net.add_edge(e.a, e.b, e.a);
  net.add_edge(1, 2, 1);
  auto b = component_edge_budget_check(net, s);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].budget, 8u);
  EXPECT_EQ(b[1].budget, 11u);
  EXPECT_EQ(b[0].bought_non_nng, 1u);
  EXPECT_EQ(b[1].bought_non_nng, 0u);
  EXPECT_TRUE(b[0].within());
  net.clear_ownership();
  EXPECT_THROW(component_edge_budget_check(net, s), InvalidInput);
}

TEST(ComponentBudgetProperty, PlanarOutputsWithinBudget) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = clustered_points(40, 2, 5, 2000, 40, seed);
    auto r = compute_approximate_ne(s, ApproxMode::Planar2D);
    if (!r.trace.certified) continue;
    for (auto& c : component_edge_budget_check(r.network, s)) EXPECT_TRUE(c.within());
    EXPECT_TRUE(check_alpha_structure(r));
  }
}
