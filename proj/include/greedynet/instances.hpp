#pragma once

// Deterministic instance generators. Randomness uses mt19937_64 with plain
// modular reduction so the same seed yields the same points everywhere.

#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "greedynet/network.hpp"

namespace greedynet {

enum class InstanceKind { UniformSquare, Clustered, Line, Grid, SetCoverGadget, PoaLowerBoundFamily };

inline const char* to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::UniformSquare:
      return "uniform";
    case InstanceKind::Clustered:
      return "clustered";
    case InstanceKind::Line:
      return "line";
    case InstanceKind::Grid:
      return "grid";
    case InstanceKind::SetCoverGadget:
      return "gadget";
    case InstanceKind::PoaLowerBoundFamily:
      return "poa-family";
  }
  return "";
}

inline InstanceKind parse_instance_kind(const std::string& s) {
  for (auto k : {InstanceKind::UniformSquare, InstanceKind::Clustered, InstanceKind::Line, InstanceKind::Grid,
                 InstanceKind::SetCoverGadget, InstanceKind::PoaLowerBoundFamily})
    if (s == to_string(k)) return k;
  throw InvalidInput("unknown instance kind '" + s + "'");
}

struct InstanceSpec {
  InstanceKind kind = InstanceKind::UniformSquare;
  std::size_t n = 10;
  std::size_t dimension = 2;
  std::int64_t side = 1000;  // coordinate range [0, side)
  std::size_t clusters = 3;
  std::int64_t spread = 20;
  std::vector<std::int64_t> positions;       // Line: explicit positions
  std::size_t sets = 2;                      // SetCoverGadget: m
  std::vector<std::vector<std::size_t>> family;  // SetCoverGadget: explicit sets over 0..n-1
  std::size_t replicas = 2;                  // PoaLowerBoundFamily: lattice side
  std::uint64_t seed = 0;
  int scale = 0;
};

struct GeneratedInstance {
  MetricSpace space;
  std::optional<StrategyProfile> background;  // fixed strategies of the other agents
  std::optional<Agent> focus;                 // agent whose best response is of interest

  GeneratedInstance(MetricSpace s, std::optional<StrategyProfile> bg = std::nullopt,
                    std::optional<Agent> f = std::nullopt)
      : space(std::move(s)), background(std::move(bg)), focus(f) {}
};

namespace detail {

inline std::int64_t draw(std::mt19937_64& rng, std::int64_t side) {
  return static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(side));
}

}  // namespace detail

/// Uniform points in [0, side)^D without duplicates.
inline MetricSpace uniform_points(std::size_t n, std::size_t dimension, std::int64_t side, std::uint64_t seed,
                                  int scale = 0) {
  if (dimension == 0) throw InvalidInput("dimension must be at least 1");
  if (side <= 0) throw InvalidInput("side must be positive");
  if (std::pow(double(side), double(dimension)) < double(n)) throw InvalidInput("not enough room for distinct points");
  std::mt19937_64 rng(seed);
  std::set<std::vector<std::int64_t>> seen;
  std::vector<std::vector<std::int64_t>> pts;
  while (pts.size() < n) {
    std::vector<std::int64_t> p(dimension);
    for (auto& c : p) c = detail::draw(rng, side);
    if (seen.insert(p).second) pts.push_back(std::move(p));
  }
  return MetricSpace::euclidean(dimension, pts, scale);
}

/// Points scattered uniformly within `spread` of uniformly placed centres.
inline MetricSpace clustered_points(std::size_t n, std::size_t dimension, std::size_t clusters, std::int64_t side,
                                    std::int64_t spread, std::uint64_t seed, int scale = 0) {
  if (clusters == 0) throw InvalidInput("need at least one cluster");
  if (spread <= 0 || side <= 0) throw InvalidInput("side and spread must be positive");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::int64_t>> centres(clusters, std::vector<std::int64_t>(dimension));
  for (auto& c : centres)
    for (auto& x : c) x = detail::draw(rng, side);
  std::set<std::vector<std::int64_t>> seen;
  std::vector<std::vector<std::int64_t>> pts;
  std::size_t attempts = 0;
  while (pts.size() < n) {
    if (++attempts > 100 * (n + 10)) throw InvalidInput("clusters too tight for distinct points");
    auto& c = centres[pts.size() % clusters];
    std::vector<std::int64_t> p(dimension);
    for (std::size_t k = 0; k < dimension; ++k) p[k] = c[k] + detail::draw(rng, 2 * spread + 1) - spread;
    if (seen.insert(p).second) pts.push_back(std::move(p));
  }
  return MetricSpace::euclidean(dimension, pts, scale);
}

inline MetricSpace line_points(const std::vector<std::int64_t>& positions, int scale = 0) {
  std::vector<std::vector<std::int64_t>> pts;
  for (auto x : positions) pts.push_back({x});
  return MetricSpace::euclidean(1, pts, scale);
}

/// rows x cols lattice with the given spacing, row-major.
inline MetricSpace grid_points(std::size_t rows, std::size_t cols, std::int64_t spacing = 1) {
  if (rows == 0 || cols == 0 || spacing <= 0) throw InvalidInput("grid needs positive rows, cols and spacing");
  std::vector<std::vector<std::int64_t>> pts;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) pts.push_back({std::int64_t(c) * spacing, std::int64_t(r) * spacing});
  return MetricSpace::euclidean(2, pts);
}

/// Random explicit metric: shortest-path closure of random integer weights,
/// which always satisfies the triangle inequality.
inline MetricSpace random_general_metric(std::size_t n, std::int64_t max_weight, std::uint64_t seed) {
  if (max_weight < 1) throw InvalidInput("max_weight must be positive");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = 1 + detail::draw(rng, max_weight);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  std::vector<std::vector<Rational>> r(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = d[i][j];
  return MetricSpace::general(std::move(r));
}

// ---------------------------------------------------------------------------
// Set-cover gadget: u at 0, Q_i at 2m+i-1, Q'_i at 3m+i-1, x_j at 4m+j-1
// (1-based i, j). Indices: u = 0, Q_i = i, Q'_i = m+i, x_j = 2m+j.

struct SetCoverGadget {
  std::size_t sets = 0;
  std::size_t elements = 0;
  std::vector<std::vector<std::size_t>> family;  // 0-based element indices

  Agent u() const { return 0; }
  Agent q(std::size_t i) const { return 1 + i; }
  Agent q_prime(std::size_t i) const { return 1 + sets + i; }
  Agent x(std::size_t j) const { return 1 + 2 * sets + j; }
};

/// Random family over `elements` elements with every element in some set.
inline std::vector<std::vector<std::size_t>> random_set_family(std::size_t sets, std::size_t elements,
                                                               std::uint64_t seed) {
  if (sets == 0 || elements == 0) throw InvalidInput("gadget needs at least one set and one element");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> fam(sets);
  for (std::size_t j = 0; j < elements; ++j) {
    bool placed = false;
    for (std::size_t i = 0; i < sets; ++i)
      if (rng() % 2) {
        fam[i].push_back(j);
        placed = true;
      }
    if (!placed) fam[rng() % sets].push_back(j);
  }
  return fam;
}

inline GeneratedInstance set_cover_gadget(const SetCoverGadget& g, Variant variant) {
  const std::size_t m = g.sets;
  if (m == 0 || g.elements == 0 || g.family.size() != m) throw InvalidInput("malformed set-cover gadget");
  std::vector<bool> covered(g.elements, false);
  for (auto& s : g.family)
    for (auto j : s) {
      if (j >= g.elements) throw InvalidInput("gadget set refers to a missing element");
      covered[j] = true;
    }
  for (bool c : covered)
    if (!c) throw InvalidInput("gadget family does not cover every element");
  std::vector<std::int64_t> pos(1 + 2 * m + g.elements);
  pos[g.u()] = 0;
  for (std::size_t i = 0; i < m; ++i) {
    pos[g.q(i)] = std::int64_t(2 * m + i);
    pos[g.q_prime(i)] = std::int64_t(3 * m + i);
  }
  for (std::size_t j = 0; j < g.elements; ++j) pos[g.x(j)] = std::int64_t(4 * m + j);
  GeneratedInstance out{line_points(pos)};
  StrategyProfile bg(variant, pos.size());
  for (std::size_t i = 0; i < m; ++i) {
    for (auto j : g.family[i]) bg.add(g.q(i), g.x(j));
    bg.add(g.q_prime(i), g.q(i));
    if (variant == Variant::Undirected) bg.add(g.q_prime(i), g.u());
  }
  out.background = std::move(bg);
  out.focus = g.u();
  return out;
}

/// Exhaustive minimum set cover size, for cross-checking.
inline std::size_t exhaustive_min_cover(std::size_t elements, const std::vector<std::vector<std::size_t>>& family) {
  const std::size_t m = family.size();
  if (m > 20) throw InvalidInput("exhaustive cover limited to 20 sets");
  std::size_t best = m + 1;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<bool> c(elements, false);
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1)
        for (auto j : family[i]) c[j] = true;
    if (std::all_of(c.begin(), c.end(), [](bool b) { return b; }))
      best = std::min<std::size_t>(best, __builtin_popcount(mask));
  }
  return best;
}

// ---------------------------------------------------------------------------

/// Pairs of nearby points placed on a k x k triangular lattice of spacing
/// 1000: every pair is an NNG component with six equidistant neighbouring
/// pairs in the interior.
inline MetricSpace poa_lower_bound_family(std::size_t replicas) {
  if (replicas == 0) throw InvalidInput("replicas must be positive");
  const std::int64_t spacing = 1000, height = 866;  // round(1000 * sqrt(3) / 2)
  std::vector<std::vector<std::int64_t>> pts;
  for (std::size_t r = 0; r < replicas; ++r)
    for (std::size_t c = 0; c < replicas; ++c) {
      std::int64_t x = std::int64_t(c) * spacing + std::int64_t(r) * spacing / 2;
      std::int64_t y = std::int64_t(r) * height;
      pts.push_back({x - 5, y});
      pts.push_back({x + 5, y});
    }
  return MetricSpace::euclidean(2, pts);
}

inline GeneratedInstance generate_instance(const InstanceSpec& spec, Variant variant = Variant::Undirected) {
  switch (spec.kind) {
    case InstanceKind::UniformSquare:
      return {uniform_points(spec.n, spec.dimension, spec.side, spec.seed, spec.scale)};
    case InstanceKind::Clustered:
      return {clustered_points(spec.n, spec.dimension, spec.clusters, spec.side, spec.spread, spec.seed, spec.scale)};
    case InstanceKind::Line: {
      if (!spec.positions.empty()) return {line_points(spec.positions, spec.scale)};
      return {uniform_points(spec.n, 1, spec.side, spec.seed, spec.scale)};
    }
    case InstanceKind::Grid: {
      std::size_t side = static_cast<std::size_t>(std::ceil(std::sqrt(double(spec.n))));
      if (side * side != spec.n) throw InvalidInput("grid instances need a square number of points");
      return {grid_points(side, side, std::max<std::int64_t>(1, spec.side / std::int64_t(side)))};
    }
    case InstanceKind::SetCoverGadget: {
      SetCoverGadget g{spec.sets, spec.n,
                       spec.family.empty() ? random_set_family(spec.sets, spec.n, spec.seed) : spec.family};
      return set_cover_gadget(g, variant);
    }
    case InstanceKind::PoaLowerBoundFamily:
      return {poa_lower_bound_family(spec.replicas)};
  }
  throw InvalidInput("unknown instance kind");
}

struct CycleInstance {
  MetricSpace space;
  StrategyProfile initial;
  std::vector<Agent> order;  // activation order, repeated
};

/// Five integer points in the plane on which undirected best-response
/// dynamics cycle. Activating 0, 1, 2 repeatedly from `initial` makes six
/// strict improvements that alternately buy and drop an edge (0 builds,
/// 1 drops, 2 builds, 0 drops, 1 builds, 2 drops) and return to `initial`.
inline CycleInstance best_response_cycle_instance() {
  CycleInstance c{MetricSpace::euclidean(2, {{5, 15}, {11, 4}, {1, 4}, {1, 1}, {10, 12}}),
                  StrategyProfile(Variant::Undirected, 5), {0, 1, 2}};
  c.initial.set_strategy(0, {4});
  c.initial.set_strategy(1, {4});
  c.initial.set_strategy(2, {4});
  c.initial.set_strategy(3, {1, 2});
  return c;
}

}  // namespace greedynet
