#pragma once

// Exact minimum set cover by branch and bound, with a greedy fallback.
//
// Among minimum covers the solver prefers the one with the most `preferred`
// sets, then the lexicographically smallest sorted label vector. This is the
// canonical tie-break used for greedy routing sets and best responses.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "greedynet/greedy.hpp"

namespace greedynet {

struct SetCoverProblem {
  Bitset universe;                  // elements that must be covered
  std::vector<Bitset> sets;         // each sized like universe
  std::vector<bool> preferred;      // empty means none preferred
  std::vector<std::size_t> labels;  // tie-break keys; empty means set index
};

struct SetCoverOptions {
  std::uint64_t node_budget = 2'000'000;
};

struct SetCoverSolution {
  bool feasible = false;
  bool exact = false;
  std::vector<std::size_t> chosen;  // set indices, ordered by label
  std::size_t preferred_count = 0;
  std::uint64_t nodes = 0;
};

namespace detail {

class SetCoverSearch {
 public:
  SetCoverSearch(const SetCoverProblem& p, const SetCoverOptions& opt) : p_(p), opt_(opt) {
    const std::size_t m = p.sets.size();
    label_.resize(m);
    for (std::size_t i = 0; i < m; ++i) label_[i] = p.labels.empty() ? i : p.labels[i];
    by_label_.resize(m);
    std::iota(by_label_.begin(), by_label_.end(), std::size_t{0});
    std::sort(by_label_.begin(), by_label_.end(), [&](auto a, auto b) { return label_[a] < label_[b]; });
    coverers_.resize(p.universe.size());
    for (std::size_t idx : by_label_)
      for (auto e = p.sets[idx].find_first(); e != Bitset::npos; e = p.sets[idx].find_next(e))
        if (p.universe.test(e)) coverers_[e].push_back(idx);
  }

  SetCoverSolution run() {
    SetCoverSolution out;
    Bitset all(p_.universe.size());
    for (auto& s : p_.sets) all |= s;
    if (!p_.universe.is_subset_of(all)) return out;
    out.feasible = true;

    best_ = greedy();
    have_best_ = true;
    Bitset covered(p_.universe.size());
    std::vector<std::size_t> chosen;
    Bitset forbidden(p_.sets.size());
    aborted_ = false;
    dfs(covered, chosen, forbidden, 0);
    out.exact = !aborted_;
    out.chosen = best_;
    out.preferred_count = pref_count(best_);
    out.nodes = nodes_;
    return out;
  }

  std::vector<std::size_t> greedy() const {
    Bitset covered(p_.universe.size());
    std::vector<std::size_t> chosen;
    while (!p_.universe.is_subset_of(covered)) {
      std::size_t best = std::numeric_limits<std::size_t>::max();
      std::size_t best_gain = 0;
      for (std::size_t idx : by_label_) {
        std::size_t gain = ((p_.sets[idx] & p_.universe) - covered).count();
        if (gain > best_gain || (gain == best_gain && gain > 0 && is_pref(idx) && !is_pref(best))) {
          best = idx;
          best_gain = gain;
        }
      }
      chosen.push_back(best);
      covered |= p_.sets[best];
    }
    sort_by_label(chosen);
    return chosen;
  }

 private:
  bool is_pref(std::size_t idx) const {
    return idx < p_.preferred.size() && p_.preferred[idx];
  }

  std::size_t pref_count(const std::vector<std::size_t>& c) const {
    return std::count_if(c.begin(), c.end(), [&](auto i) { return is_pref(i); });
  }

  void sort_by_label(std::vector<std::size_t>& c) const {
    std::sort(c.begin(), c.end(), [&](auto a, auto b) { return label_[a] < label_[b]; });
  }

  bool better(std::vector<std::size_t> cand) const {
    if (cand.size() != best_.size()) return cand.size() < best_.size();
    auto pc = pref_count(cand), pb = pref_count(best_);
    if (pc != pb) return pc > pb;
    sort_by_label(cand);
    return std::lexicographical_compare(cand.begin(), cand.end(), best_.begin(), best_.end(),
                                        [&](auto a, auto b) { return label_[a] < label_[b]; });
  }

  void dfs(const Bitset& covered, std::vector<std::size_t>& chosen, Bitset forbidden, std::size_t prefs) {
    if (aborted_) return;
    if (++nodes_ > opt_.node_budget) {
      aborted_ = true;
      return;
    }
    Bitset uncovered = p_.universe - covered;
    if (uncovered.none()) {
      if (better(chosen)) {
        best_ = chosen;
        sort_by_label(best_);
      }
      return;
    }
    const std::size_t depth = chosen.size();
    if (depth + 1 > best_.size()) return;

    std::size_t max_gain = 0;
    for (std::size_t idx = 0; idx < p_.sets.size(); ++idx)
      if (!forbidden.test(idx)) max_gain = std::max(max_gain, (p_.sets[idx] & uncovered).count());
    if (max_gain == 0) return;
    std::size_t lb = (uncovered.count() + max_gain - 1) / max_gain;
    if (depth + lb > best_.size()) return;
    if (depth + lb == best_.size() && prefs + lb < pref_count(best_)) return;

    std::size_t pick = Bitset::npos, pick_count = std::numeric_limits<std::size_t>::max();
    for (auto e = uncovered.find_first(); e != Bitset::npos; e = uncovered.find_next(e)) {
      std::size_t c = 0;
      for (std::size_t idx : coverers_[e])
        if (!forbidden.test(idx)) ++c;
      if (c < pick_count) {
        pick = e;
        pick_count = c;
        if (c <= 1) break;
      }
    }
    if (pick_count == 0) return;
    for (std::size_t idx : coverers_[pick]) {
      if (forbidden.test(idx)) continue;
      chosen.push_back(idx);
      dfs(covered | p_.sets[idx], chosen, forbidden, prefs + (is_pref(idx) ? 1 : 0));
      chosen.pop_back();
      if (aborted_) return;
      forbidden.set(idx);
    }
  }

  const SetCoverProblem& p_;
  SetCoverOptions opt_;
  std::vector<std::size_t> label_;
  std::vector<std::size_t> by_label_;
  std::vector<std::vector<std::size_t>> coverers_;
  std::vector<std::size_t> best_;
  bool have_best_ = false;
  bool aborted_ = false;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

inline SetCoverSolution solve_set_cover(const SetCoverProblem& problem, const SetCoverOptions& options = {}) {
  for (auto& s : problem.sets)
    if (s.size() != problem.universe.size()) throw InvalidInput("set cover: set size mismatch");
  detail::SetCoverSearch search(problem, options);
  return search.run();
}

/// Greedy cover by largest marginal gain. Feasible iff the union covers the
/// universe; never marked exact.
inline SetCoverSolution greedy_set_cover(const SetCoverProblem& problem) {
  SetCoverSolution out;
  Bitset all(problem.universe.size());
  for (auto& s : problem.sets) all |= s;
  if (!problem.universe.is_subset_of(all)) return out;
  detail::SetCoverSearch search(problem, {});
  out.feasible = true;
  out.chosen = search.greedy();
  for (auto i : out.chosen)
    if (i < problem.preferred.size() && problem.preferred[i]) ++out.preferred_count;
  return out;
}

}  // namespace greedynet
