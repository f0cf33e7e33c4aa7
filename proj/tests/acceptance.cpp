// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"

using namespace greedynet;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::size_t violations = 0;
  std::string first;

  void fail(const std::string& what) {
    if (violations++ == 0) first = what;
    pass = false;
  }
};

int failures = 0;

void run(int id, const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) o.fail("runtime " + std::to_string(secs) + "s over limit");
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s (%.1fs)", o.pass ? "PASS" : "FAIL", id, name.c_str(), secs);
  if (!o.detail.empty()) std::printf(" %s", o.detail.c_str());
  if (!o.pass) std::printf(" violations=%zu first: %s", o.violations, o.first.c_str());
  std::printf("\n");
  std::fflush(stdout);
}

std::string tag(const std::string& kind, std::uint64_t seed, std::size_t n) {
  return kind + " seed=" + std::to_string(seed) + " n=" + std::to_string(n);
}

bool stable(const EquilibriumReport& r) { return r.verdict != Verdict::NotStable && r.certified; }

// Instances reused by criteria 7 and 11.
struct AlgoCase {
  std::string label;
  MetricSpace space;
  ApproxResult result;
};
std::vector<AlgoCase> planar_outputs;

Outcome reachability() {
  Outcome o;
  std::mt19937_64 rng(101);
  std::size_t pairs = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    std::size_t n = 2 + rng() % 7, d = 1 + rng() % 3;
    auto variant = i % 2 ? Variant::Directed : Variant::Undirected;
    // small coordinate ranges produce many distance ties
    auto s = uniform_points(n, d, i % 3 == 0 ? 9 : 100, i);
    auto net = induce_network(random_profile(variant, n, 0.1 + 0.1 * double(rng() % 7), i));
    for (Agent t = 0; t < n; ++t) {
      auto fast = greedy_reachable_to(net, s, t);
      for (Agent x = 0; x < n; ++x) {
        if (x == t) continue;
        std::vector<bool> seen(n, false);
        ++pairs;
        if (fast.test(x) != oracle::reaches(net, s, x, t, seen)) o.fail(tag("uniform", i, n));
      }
    }
  }
  o.detail = "pairs=" + std::to_string(pairs);
  return o;
}

Outcome phi_bounds() {
  Outcome o;
  std::size_t maxima[4] = {0, 0, 0, 0};
  const std::size_t bound[4] = {0, 2, 6, 12};
  for (std::uint64_t i = 0; i < 500; ++i) {
    std::size_t d = 1 + i % 3;
    std::size_t n = d == 3 ? 2 + i % 39 : 2 + i % 59;
    auto s = i % 5 == 4 ? clustered_points(n, d, 1 + i % 4, 1000, 40, i) : uniform_points(n, d, 1000, i);
    auto nng = build_nng(s);
    for (Agent u = 0; u < n; ++u) {
      auto g = minimum_greedy_routing_set(s, nng, u);
      maxima[d] = std::max(maxima[d], g.size());
      if (g.size() > bound[d]) o.fail(tag("D=" + std::to_string(d), i, n) + " phi=" + std::to_string(g.size()));
    }
  }
  o.detail = "max_phi D1=" + std::to_string(maxima[1]) + " D2=" + std::to_string(maxima[2]) +
             " D3=" + std::to_string(maxima[3]);
  return o;
}

Outcome delaunay_checks() {
  Outcome o;
  std::size_t removals = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    std::size_t n = 3 + i % 98;
    auto s = uniform_points(n, 2, 1'000'000, 5000 + i);
    auto tri = delaunay_2d(s);
    auto net = tri.network();
    auto nng = build_nng(s);
    if (!is_navigable(net, s)) o.fail(tag("not navigable", i, n));
    if (net.edge_count() > 3 * n - 6) o.fail(tag("too many edges", i, n));
    for (auto& e : nng.edges) {
      if (!net.has_edge(e)) {
        o.fail(tag("missing NNG edge", i, n));
        continue;
      }
      auto cut = net;
      cut.remove_edge(e.a, e.b);
      ++removals;
      if (is_navigable(cut, s)) o.fail(tag("NNG edge not necessary", i, n));
    }
  }
  o.detail = "nng_removals=" + std::to_string(removals);
  return o;
}

MetricSpace mixed_space(std::uint64_t i, std::size_t n) {
  switch (i % 4) {
    case 0: return uniform_points(n, 1, 100, i);
    case 1: return uniform_points(n, 2, 100, i);
    case 2: return uniform_points(n, 3, 100, i);
    default: return random_general_metric(n, 12, i);
  }
}

Outcome directed_optimum() {
  Outcome o;
  std::size_t exhaustive = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    std::size_t n = 2 + i % 9;
    auto s = mixed_space(i, n);
    auto opt = construct_directed_optimum(s);
    auto rep = verify_equilibrium(s, opt.profile, Criterion::exact());
    if (rep.verdict != Verdict::NE || !rep.certified) o.fail(tag("not NE", i, n));
    auto nng = build_nng(s);
    std::size_t sum = 0;
    for (Agent u = 0; u < n; ++u) sum += minimum_greedy_routing_set(s, nng, u).size();
    if (opt.social_cost != sum) o.fail(tag("cost != sum phi", i, n));
    if (n <= 7) {
      ++exhaustive;
      std::size_t brute = 0;
      for (Agent u = 0; u < n; ++u) brute += oracle::phi(s, u).size;
      if (opt.social_cost != brute) o.fail(tag("cost != exhaustive", i, n));
    }
    auto poa = poa_report(s, opt.profile);
    if (!poa.ratio_exact || *poa.ratio_exact != 1) o.fail(tag("PoA != 1", i, n));
  }
  o.detail = "exhaustive_checked=" + std::to_string(exhaustive);
  return o;
}

Outcome directed_no_cycles() {
  Outcome o;
  std::size_t moves = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    std::size_t n = 2 + i % 9;
    auto s = mixed_space(i + 300, n);
    auto init = random_profile(Variant::Directed, n, 0.05 * double(i % 10), i);
    for (auto sched : {Schedule::round_robin(), Schedule::random(i)}) {
      auto t = run_dynamics(s, init, sched);
      moves += t.moves();
      if (t.status != DynamicsStatus::Converged) o.fail(tag(std::string(to_string(t.status)), i, n));
      std::set<std::uint64_t> seen;
      for (auto& p : t.profiles)
        if (!seen.insert(p.fingerprint()).second) o.fail(tag("repeated fingerprint", i, n));
    }
  }
  o.detail = "moves=" + std::to_string(moves);
  return o;
}

Outcome undirected_cycle() {
  Outcome o;
  auto c = best_response_cycle_instance();
  auto t = run_dynamics(c.space, c.initial, Schedule::scripted(c.order));
  if (t.status != DynamicsStatus::CycleDetected) o.fail(std::string("status ") + to_string(t.status));
  std::string pattern;
  for (auto& ev : t.events) {
    if (!ev.changed) continue;
    if (!(ev.new_cost < ev.old_cost)) o.fail("non-improving move");
    long delta = long(ev.new_strategy.size()) - long(ev.old_strategy.size());
    pattern += std::to_string(ev.agent) + (delta > 0 ? "+" : delta < 0 ? "-" : "=") + " ";
  }
  if (pattern != "0+ 1- 2+ 0- 1+ 2- ") o.fail("pattern " + pattern);
  if (t.profiles.size() != 7 || !(t.profiles.front() == t.profiles.back())) o.fail("profile does not recur");
  o.detail = "moves=" + pattern.substr(0, pattern.size() - 1);
  return o;
}

Outcome algorithm_soundness() {
  Outcome o;
  std::size_t max_iter = 0, relaxed = 0;
  for (std::uint64_t i = 0; i < 300; ++i) {
    MetricSpace s;
    std::string kind;
    ApproxMode mode;
    if (i % 3 == 0) {
      std::size_t n = 2 + i % 59;
      s = i % 6 == 3 ? clustered_points(n, 2, 2 + i % 5, 10000, 300, i) : uniform_points(n, 2, 10000, i);
      kind = "2D";
      mode = ApproxMode::Planar2D;
    } else if (i % 3 == 1) {
      s = uniform_points(2 + i % 29, 3, 1000, i);
      kind = "3D";
      mode = ApproxMode::Euclidean;
    } else {
      s = random_general_metric(2 + i % 19, 20, i);
      kind = "metric";
      mode = ApproxMode::GeneralMetric;
    }
    auto r = compute_approximate_ne(s, mode);
    auto bound = approx_iteration_bound(s);
    if (!is_navigable(r.network, s)) o.fail(tag(kind + " output not navigable", i, s.size()));
    if (r.trace.iterations.size() > bound) o.fail(tag(kind + " iteration bound", i, s.size()));
    for (auto& it : r.trace.iterations)
      if (!it.navigable) o.fail(tag(kind + " intermediate not navigable", i, s.size()));
    if (induce_network(r.profile).edges() != r.network.edges()) o.fail(tag(kind + " profile mismatch", i, s.size()));
    max_iter = std::max(max_iter, r.trace.iterations.size());
    if (r.trace.relaxed_slack) ++relaxed;
    if (kind == "2D") planar_outputs.push_back({tag(kind, i, s.size()), s, std::move(r)});
  }
  o.detail = "max_iterations=" + std::to_string(max_iter) + " relaxed=" + std::to_string(relaxed);
  return o;
}

Outcome approximation_quality() {
  Outcome o;
  Rational worst_exact = 0, worst_lower = 0;
  std::size_t exact = 0, larger = 0;
  for (std::uint64_t i = 0; i < 120; ++i) {
    std::size_t n = 2 + i % 8;
    auto s = i % 4 == 3 ? clustered_points(n, 2, 2, 1000, 60, 700 + i) : uniform_points(n, 2, 1000, 700 + i);
    auto r = compute_approximate_ne(s, ApproxMode::Planar2D);
    auto so = brute_force_social_optimum(s, Variant::Undirected);
    Rational ratio = Rational(r.network.edge_count()) / Rational(so.cost);
    worst_exact = std::max(worst_exact, ratio);
    ++exact;
    if (ratio > Rational(9, 5)) o.fail(tag("ratio " + io::rational_to_string(ratio), 700 + i, n));
  }
  for (std::uint64_t i = 0; i < 20; ++i) {
    std::size_t n = 10 + 4 * i;
    auto s = uniform_points(n, 2, 100000, 900 + i);
    auto r = compute_approximate_ne(s, ApproxMode::Planar2D);
    auto lb = so_lower_bound(s);
    worst_lower = std::max(worst_lower, Rational(r.network.edge_count()) / Rational(std::max<std::size_t>(1, lb)));
    ++larger;
  }
  o.detail = "exact_cases=" + std::to_string(exact) + " worst_vs_SO=" + io::rational_to_string(worst_exact) +
             " larger_cases=" + std::to_string(larger) +
             " worst_vs_lower_bound=" + std::to_string(worst_lower.convert_to<double>()) + " (informational)";
  return o;
}

Outcome output_stability() {
  Outcome o;
  std::size_t planar = 0, spatial = 0;
  for (std::uint64_t i = 0; i < 80; ++i) {
    std::size_t n = 2 + i % 8;
    auto s = uniform_points(n, 2, 1000, 1100 + i);
    auto r = compute_approximate_ne(s, ApproxMode::Planar2D);
    auto rep = verify_equilibrium(s, r.profile, Criterion::additive(2));
    ++planar;
    if (!stable(rep)) o.fail(tag("2D not +2-NE", 1100 + i, n));
  }
  for (std::uint64_t i = 0; i < 60; ++i) {
    std::size_t n = 2 + i % 7;
    auto s = uniform_points(n, 3, 1000, 1300 + i);
    auto r = compute_approximate_ne(s, ApproxMode::Euclidean);
    auto rep = verify_equilibrium(s, r.profile, Criterion::beta(2));
    ++spatial;
    if (!stable(rep)) o.fail(tag("3D not 2-NE", 1300 + i, n));
  }
  o.detail = "planar=" + std::to_string(planar) + " spatial=" + std::to_string(spatial);
  return o;
}

Outcome hakimi() {
  Outcome o;
  std::mt19937_64 rng(55);
  std::size_t feasible = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = 2 + rng() % 11;
    std::vector<Edge> edges;
    for (Agent a = 0; a < n; ++a)
      for (Agent b = a + 1; b < n; ++b)
        if (rng() % 3 == 0) edges.push_back({a, b});
    std::vector<std::size_t> bound(n);
    for (auto& b : bound) b = rng() % 3;
    // independent flow network: source -> edge -> endpoints -> sink
    const std::size_t m = edges.size(), src = m + n, snk = m + n + 1;
    MaxFlow flow(m + n + 2);
    for (std::size_t k = 0; k < m; ++k) {
      flow.add_arc(src, k, 1);
      flow.add_arc(k, m + edges[k].a, 1);
      flow.add_arc(k, m + edges[k].b, 1);
    }
    for (Agent u = 0; u < n; ++u) flow.add_arc(m + u, snk, std::int64_t(bound[u]));
    bool saturates = flow.run(src, snk) == std::int64_t(m);
    auto orient = hakimi_orient(n, edges, bound);
    if (orient.has_value() != saturates) o.fail("trial " + std::to_string(trial) + " disagrees with max flow");
    if (orient.has_value() != hakimi_condition_holds(n, edges, bound))
      o.fail("trial " + std::to_string(trial) + " disagrees with subset condition");
    if (!orient) continue;
    ++feasible;
    std::vector<std::size_t> deg(n, 0);
    for (std::size_t k = 0; k < m; ++k) {
      if (orient->owner[k] != edges[k].a && orient->owner[k] != edges[k].b) o.fail("owner not an endpoint");
      ++deg[orient->owner[k]];
    }
    for (Agent u = 0; u < n; ++u)
      if (deg[u] > bound[u]) o.fail("trial " + std::to_string(trial) + " exceeds bound");
  }
  if (hakimi_orient(3, {{0, 1}, {0, 2}, {1, 2}}, {1, 1, 0})) o.fail("triangle (1,1,0) oriented");
  o.detail = "feasible=" + std::to_string(feasible) + "/500";
  return o;
}

Outcome component_budgets() {
  Outcome o;
  std::size_t components = 0, certified = 0, worst_slack = ~std::size_t{0};
  for (auto& c : planar_outputs) {
    if (!c.result.certified()) continue;
    ++certified;
    for (auto& b : component_edge_budget_check(c.result.network, c.space)) {
      ++components;
      if (!b.within()) o.fail(c.label + " component of size " + std::to_string(b.members.size()));
      else
        worst_slack = std::min(worst_slack, b.budget - b.bought_non_nng);
    }
  }
  if (certified == 0) o.fail("no certified planar outputs");
  o.detail = "certified_outputs=" + std::to_string(certified) + " components=" + std::to_string(components) +
             " min_slack=" + std::to_string(worst_slack);
  return o;
}

Outcome gadgets() {
  Outcome o;
  std::size_t cases = 0;
  for (std::size_t m = 1; m <= 4; ++m)
    for (std::size_t n = 1; n <= 6; ++n)
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        SetCoverGadget g{m, n, random_set_family(m, n, seed * 31 + m * 7 + n)};
        auto inst = set_cover_gadget(g, Variant::Directed);
        auto br = best_response(inst.space, *inst.background, g.u());
        auto cover = oracle::min_cover(n, g.family);
        ++cases;
        if (br.mode != SolveMode::Exact) o.fail("heuristic best response");
        if (!br.cost.edges || *br.cost.edges != m + cover)
          o.fail("m=" + std::to_string(m) + " n=" + std::to_string(n) + " seed=" + std::to_string(seed) +
                 " cost=" + to_string(br.cost) + " expected=" + std::to_string(m + cover));
      }
  o.detail = "gadgets=" + std::to_string(cases);
  return o;
}

std::string pipeline_bytes(std::uint64_t seed) {
  std::ostringstream out;
  auto s = uniform_points(18, 2, 1000, seed);
  auto opt = construct_directed_optimum(s);
  out << io::profile_to_json(opt.profile).dump();
  auto r = compute_approximate_ne(s, ApproxMode::Planar2D);
  out << io::network_to_json(r.network).dump() << io::algorithm_trace_to_jsonl(r.trace);
  out << io::equilibrium_report_to_json(verify_equilibrium(s, r.profile, Criterion::additive(2))).dump();
  out << io::poa_report_to_json(poa_report(s, r.profile, {false, {}, {}})).dump();
  for (auto sched : {Schedule::round_robin(), Schedule::random(seed)})
    out << io::dynamics_trace_to_jsonl(
        run_dynamics(s, random_profile(Variant::Undirected, 18, 0.15, seed), sched));
  out << io::to_dot(r.network, s) << io::to_svg(r.network, s);
  out << io::network_to_json(delaunay_2d(s).network()).dump();
  out << io::network_to_json(build_nng(s).network(Variant::Undirected)).dump();
  auto g = random_general_metric(9, 15, seed);
  out << io::network_to_json(compute_approximate_ne(g, ApproxMode::GeneralMetric).network).dump();
  return out.str();
}

Outcome determinism() {
  Outcome o;
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    if (pipeline_bytes(seed) != pipeline_bytes(seed)) o.fail("pipeline output differs, seed " + std::to_string(seed));

  std::size_t trips = 0;
  auto trip = [&](bool ok, const std::string& what) {
    ++trips;
    if (!ok) o.fail(what + " round trip");
  };
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto pts = uniform_points(12, 1 + seed % 3, 1000, seed, int(seed % 3));
    trip(io::points_from_json(io::points_to_json(pts)) == pts, "points json");
    trip(io::points_from_csv(io::points_to_csv(pts), pts.scale()) == pts, "points csv");
    auto met = random_general_metric(7, 10, seed);
    trip(io::metric_from_json(io::metric_to_json(met)) == met, "metric json");
    auto prof = random_profile(seed % 2 ? Variant::Directed : Variant::Undirected, 12, 0.3, seed);
    trip(io::profile_from_json(io::profile_to_json(prof)) == prof, "profile");
    auto s2 = uniform_points(12, 2, 1000, seed);
    auto r = compute_approximate_ne(s2, ApproxMode::Planar2D);
    trip(io::network_from_json(io::network_to_json(r.network)) == r.network, "owned network");
    auto dt = delaunay_2d(s2).network();
    trip(io::network_from_json(io::network_to_json(dt)) == dt, "network");
    trip(io::algorithm_trace_from_jsonl(io::algorithm_trace_to_jsonl(r.trace)) == r.trace, "algorithm trace");
    auto dyn = run_dynamics(s2, prof.variant() == Variant::Directed ? prof : empty_profile(Variant::Undirected, 12),
                            Schedule::random(seed));
    trip(io::dynamics_trace_from_jsonl(io::dynamics_trace_to_jsonl(dyn)) == dyn, "dynamics trace");
    InstanceSpec spec;
    spec.kind = InstanceKind::Clustered;
    spec.n = 20;
    spec.seed = seed;
    auto j = io::instance_spec_to_json(spec);
    trip(io::instance_spec_to_json(io::instance_spec_from_json(j)).dump() == j.dump(), "instance spec");
    trip(io::to_svg(r.network, s2) == io::to_svg(r.network, s2), "svg");
  }
  o.detail = "round_trips=" + std::to_string(trips);
  return o;
}

}  // namespace

int main() {
  run(1, "greedy reachability matches exhaustive path search", 60, reachability);
  run(2, "phi(u) within kissing bounds", 0, phi_bounds);
  run(3, "Delaunay navigable, sparse, contains NNG, NNG edges necessary", 120, delaunay_checks);
  run(4, "directed optimum is NE with cost sum phi and PoA 1", 0, directed_optimum);
  run(5, "directed dynamics converge without repeats", 0, directed_no_cycles);
  run(6, "undirected best-response cycle detected", 0, undirected_cycle);
  run(7, "approximate NE navigable within iteration bound", 300, algorithm_soundness);
  run(8, "planar approximate NE within 1.8 of social optimum", 0, approximation_quality);
  run(9, "outputs are +2-NE (2D) and 2-NE (3D)", 0, output_stability);
  run(10, "Hakimi orientation iff max flow saturates", 0, hakimi);
  run(11, "non-NNG bought edges per NNG component within 2+3|C|", 0, component_budgets);
  run(12, "set-cover gadget best response costs m + min cover", 0, gadgets);
  run(13, "determinism and load/save identity", 0, determinism);
  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
