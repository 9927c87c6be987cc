#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ergo/game.hpp"
#include "ergo/subset.hpp"

namespace ergo {

/// A monotone Boolean map {0,1}^n -> {0,1}^n, with vectors stored as Subsets.
using BooleanOperator = std::function<Subset(Subset)>;

/// Upper abstraction: bit i is set iff min_a max_b max_{j in supp(i,a,b)} x_j = 1.
Subset f_plus(const SupportSpec& support, Subset x);
/// Lower abstraction: bit i is set iff min_a max_b min_{j in supp(i,a,b)} x_j = 1.
Subset f_minus(const SupportSpec& support, Subset x);

BooleanOperator upper_abstraction(const SupportSpec& support);
BooleanOperator lower_abstraction(const SupportSpec& support);
/// x -> complement(op(complement(x))): the Boolean counterpart of x -> 1 - F(1 - x).
BooleanOperator boolean_conjugate(BooleanOperator op, int n);

/// I belongs to the lower lattice: F+(1_{S\I}) <= 1_{S\I}.
bool check_h1(const SupportSpec& support, Subset I);
/// J belongs to the upper lattice: 1_J <= F-(1_J).
bool check_h2(const SupportSpec& support, Subset J);

/// Exact limit of a monotone Boolean iteration from a pre- or post-fixed
/// point; at most n changing steps.
Subset boolean_kleene(const BooleanOperator& op, Subset x0);

inline constexpr int kEnumerationGuard = 24;

struct LatticePair {
  std::vector<Subset> lower;  // sets satisfying check_h1
  std::vector<Subset> upper;  // sets satisfying check_h2
};

/// Both lattices, each sorted by cardinality then lexicographically.
LatticePair enumerate_lattices(const SupportSpec& support, int guard = kEnumerationGuard);

/// A first-mover policy keeping the play inside I almost surely against any
/// opponent, when one exists (only defined on MinMax supports).
std::optional<Policy> confining_min_policy(const SupportSpec& support, Subset I);
/// A second-mover policy keeping the play inside J almost surely.
std::optional<Policy> confining_max_policy(const SupportSpec& support, Subset J);

}  // namespace ergo
