#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ergo/boolean.hpp"
#include "ergo/game.hpp"
#include "ergo/hypergraph.hpp"
#include "ergo/shapley.hpp"
#include "ergo/subset.hpp"

namespace ergo {

/// The Galois connection between the lower and upper lattices of a support,
/// evaluated by reachability in the merged hypergraphs. Builds both
/// hypergraphs once; every query is linear in their size.
class GaloisConnection {
 public:
  explicit GaloisConnection(SupportSpec support, bool debug_crosscheck = false);

  const SupportSpec& support() const { return support_; }
  int n() const { return support_.n; }
  const Hypergraph& merged_plus() const { return merged_plus_; }
  const Hypergraph& merged_minus() const { return merged_minus_; }

  bool in_lower(Subset I) const { return check_h1(support_, I); }
  bool in_upper(Subset J) const { return check_h2(support_, J); }

  /// Largest J in the upper lattice disjoint from I. Requires I in the lower lattice.
  Subset phi(Subset I) const;
  /// Largest I in the lower lattice disjoint from J. Requires J in the upper lattice.
  Subset phi_star(Subset J) const;
  /// phi_star(phi(I)); requires phi(I) nonempty.
  Subset closure(Subset I) const;

  /// Same maps through Boolean Kleene iteration of the abstractions.
  Subset phi_by_kleene(Subset I) const;
  Subset phi_star_by_kleene(Subset J) const;

 private:
  SupportSpec support_;
  Hypergraph merged_plus_;
  Hypergraph merged_minus_;
  bool debug_crosscheck_;
};

Subset phi(const SupportSpec& support, Subset I);
Subset phi_star(const SupportSpec& support, Subset J);
Subset closure(const SupportSpec& support, Subset I);

using SubsetPair = std::pair<Subset, Subset>;

/// All conjugate pairs (I, J): nonempty, J = phi(I), I = phi_star(J); ordered by I.
std::vector<SubsetPair> conjugate_pairs(const SupportSpec& support, int guard = kEnumerationGuard);

/// All disjoint nonempty (I, J) with I lower and J upper; empty iff ergodic.
std::vector<SubsetPair> nontrivial_boolean_fixed_points(const SupportSpec& support,
                                                        int guard = kEnumerationGuard);

struct ErgodicityOptions {
  int guard = kEnumerationGuard;
  bool guard_override = false;
  int jobs = 1;
  bool debug_crosscheck = false;
  /// Only honoured by the GameSpec overload, which has real probabilities.
  bool want_fixed_point = false;
};

struct ErgodicityStats {
  long long subsets_examined = 0;
  double elapsed_ms = 0.0;
};

struct ErgodicityReport {
  bool ergodic = true;
  std::optional<SubsetPair> witness;
  std::optional<ValueVector> fixed_point_witness;
  ErgodicityStats stats;
};

/// Scans proper subsets by cardinality then lexicographically for I in the
/// lower lattice with phi(I) nonempty; the first hit is canonicalized to
/// (closure(I), phi(I)).
ErgodicityReport is_ergodic(const SupportSpec& support, const ErgodicityOptions& options = {});
ErgodicityReport is_ergodic(const GameSpec& game, const ErgodicityOptions& options = {});

}  // namespace ergo
