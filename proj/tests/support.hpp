#pragma once

// Random instance generators and brute-force oracles shared by the tests.
// Every generator takes an explicit engine so runs are reproducible.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ergo/game.hpp"
#include "ergo/hypergraph.hpp"
#include "ergo/shapley.hpp"
#include "ergo/subset.hpp"

#ifndef ERGO_FIXTURE_DIR
#define ERGO_FIXTURE_DIR "fixtures"
#endif

namespace testing {

using Rng = std::mt19937_64;

inline std::string fixture(const std::string& name) { return std::string(ERGO_FIXTURE_DIR) + "/" + name; }

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline ergo::Subset random_nonempty_subset(Rng& rng, int n, double density) {
  ergo::Subset s;
  for (int j = 0; j < n; ++j)
    if (uniform_real(rng, 0.0, 1.0) < density) s.insert(j);
  if (s.is_empty()) s.insert(uniform_int(rng, 0, n - 1));
  return s;
}

/// Support with 1..max_min actions per state and 1..max_max replies each.
inline ergo::SupportSpec random_support(Rng& rng, int n, int max_min, int max_max,
                                        double density = 0.35) {
  ergo::SupportSpec s;
  s.n = n;
  s.successors.resize(static_cast<std::size_t>(n));
  for (auto& rows : s.successors) {
    rows.resize(static_cast<std::size_t>(uniform_int(rng, 1, max_min)));
    for (auto& replies : rows) {
      replies.resize(static_cast<std::size_t>(uniform_int(rng, 1, max_max)));
      for (auto& succ : replies) succ = random_nonempty_subset(rng, n, density);
    }
  }
  return s;
}

/// Game on a given support: weights in [0.2, 1] normalized per row, payments in [-pay, pay].
inline ergo::GameSpec game_on_support(Rng& rng, const ergo::SupportSpec& support, double pay) {
  ergo::GameSpec g = ergo::uniform_game(support);
  for (auto& actions : g.dynamics)
    for (auto& a : actions)
      for (auto& b : a.max_actions) {
        double total = 0.0;
        for (auto& t : b.transition) total += (t.prob = uniform_real(rng, 0.2, 1.0));
        for (auto& t : b.transition) t.prob /= total;
        b.payment = pay > 0 ? uniform_real(rng, -pay, pay) : 0.0;
      }
  return g;
}

inline ergo::GameSpec random_game(Rng& rng, int n, int max_min, int max_max, double pay = 1.0,
                                  double density = 0.35) {
  return game_on_support(rng, random_support(rng, n, max_min, max_max, density), pay);
}

/// Same support and payments, fresh positive probabilities.
inline ergo::GameSpec resample_probabilities(Rng& rng, const ergo::GameSpec& game) {
  ergo::GameSpec g = game;
  for (auto& actions : g.dynamics)
    for (auto& a : actions)
      for (auto& b : a.max_actions) {
        double total = 0.0;
        for (auto& t : b.transition) total += (t.prob = uniform_real(rng, 0.05, 1.0));
        for (auto& t : b.transition) t.prob /= total;
      }
  return g;
}

inline std::vector<std::vector<double>> random_stochastic_matrix(Rng& rng, int n, double density) {
  std::vector<std::vector<double>> P(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (auto& row : P) {
    const ergo::Subset succ = random_nonempty_subset(rng, n, density);
    double total = 0.0;
    for (int j : succ.indices()) total += (row[static_cast<std::size_t>(j)] = uniform_real(rng, 0.1, 1.0));
    for (double& x : row) x /= total;
  }
  return P;
}

inline ergo::ValueVector random_vector(Rng& rng, int n, double lo, double hi) {
  ergo::ValueVector v(static_cast<std::size_t>(n));
  for (double& x : v) x = uniform_real(rng, lo, hi);
  return v;
}

// ---- brute-force oracles ----

/// Upper abstraction straight from the quantifier reading:
/// for all a, exists b, exists j in supp with x_j (min-max order).
inline ergo::Subset naive_f_plus(const ergo::SupportSpec& s, ergo::Subset x) {
  ergo::Subset out;
  for (int i = 0; i < s.n; ++i) {
    bool all_a = true;
    for (const auto& replies : s.successors[static_cast<std::size_t>(i)]) {
      bool some_b = false;
      for (ergo::Subset succ : replies)
        for (int j = 0; j < s.n; ++j) some_b = some_b || (succ.contains(j) && x.contains(j));
      all_a = all_a && some_b;
    }
    if (all_a) out.insert(i);
  }
  return out;
}

/// for all a, exists b, for all j in supp: x_j.
inline ergo::Subset naive_f_minus(const ergo::SupportSpec& s, ergo::Subset x) {
  ergo::Subset out;
  for (int i = 0; i < s.n; ++i) {
    bool all_a = true;
    for (const auto& replies : s.successors[static_cast<std::size_t>(i)]) {
      bool some_b = false;
      for (ergo::Subset succ : replies) {
        bool all_j = true;
        for (int j = 0; j < s.n; ++j) all_j = all_j && (!succ.contains(j) || x.contains(j));
        some_b = some_b || all_j;
      }
      all_a = all_a && some_b;
    }
    if (all_a) out.insert(i);
  }
  return out;
}

/// Lattice membership through the real payment-free operator on indicator vectors.
inline bool real_h1(const ergo::GameSpec& g, ergo::Subset I) {
  const int n = g.size();
  const auto y = ergo::recession_apply(g, I.complement(n).indicator(n));
  for (int i : I.indices())
    if (y[static_cast<std::size_t>(i)] > 1e-12) return false;
  return true;
}

inline bool real_h2(const ergo::GameSpec& g, ergo::Subset J) {
  const int n = g.size();
  const auto y = ergo::recession_apply(g, J.indicator(n));
  for (int j : J.indices())
    if (y[static_cast<std::size_t>(j)] < 1.0 - 1e-12) return false;
  return true;
}

/// Phi from its definition: union of all upper-lattice sets disjoint from I.
inline ergo::Subset naive_phi(const ergo::GameSpec& g, ergo::Subset I) {
  ergo::Subset out;
  const int n = g.size();
  ergo::for_each_subset(n, [&](ergo::Subset J) {
    if (!J.intersects(I) && real_h2(g, J)) out |= J;
    return true;
  });
  return out;
}

inline ergo::Subset naive_phi_star(const ergo::GameSpec& g, ergo::Subset J) {
  ergo::Subset out;
  const int n = g.size();
  ergo::for_each_subset(n, [&](ergo::Subset I) {
    if (!I.intersects(J) && real_h1(g, I)) out |= I;
    return true;
  });
  return out;
}

/// Hypergraph reachability by repeated sweeps until nothing changes.
inline std::set<int> naive_reach(const ergo::Hypergraph& h, const std::vector<int>& start) {
  std::set<int> seen(start.begin(), start.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& e : h.arcs) {
      const bool covered = std::all_of(e.tail.begin(), e.tail.end(), [&](int t) { return seen.count(t) > 0; });
      if (!covered) continue;
      for (int x : e.head) changed = seen.insert(x).second || changed;
    }
  }
  return seen;
}

/// Transitive closure of the support digraph of a zero-player game.
inline std::vector<ergo::Subset> naive_reachable_from(const ergo::SupportSpec& s) {
  std::vector<ergo::Subset> r(static_cast<std::size_t>(s.n));
  for (int i = 0; i < s.n; ++i) r[static_cast<std::size_t>(i)] = ergo::Subset{i} | s.successors[static_cast<std::size_t>(i)][0][0];
  for (int k = 0; k < s.n; ++k)
    for (int i = 0; i < s.n; ++i)
      if (r[static_cast<std::size_t>(i)].contains(k)) r[static_cast<std::size_t>(i)] |= r[static_cast<std::size_t>(k)];
  return r;
}

/// Final classes by path enumeration: i is in a final class iff every state
/// reachable from i reaches i back.
inline std::vector<ergo::Subset> naive_final_classes(const ergo::SupportSpec& s) {
  const auto r = naive_reachable_from(s);
  std::vector<ergo::Subset> out;
  ergo::Subset placed;
  for (int i = 0; i < s.n; ++i) {
    if (placed.contains(i)) continue;
    bool final = true;
    for (int j : r[static_cast<std::size_t>(i)].indices()) final = final && r[static_cast<std::size_t>(j)].contains(i);
    if (!final) continue;
    out.push_back(r[static_cast<std::size_t>(i)]);
    placed |= r[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace testing
