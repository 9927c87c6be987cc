#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ergo/game.hpp"
#include "ergo/shapley.hpp"
#include "ergo/subset.hpp"

namespace ergo {

/// Operator restricted to a closed carrier, keeping only the minimizer's
/// actions that confine the play to the carrier. For min-max supports these
/// are first-mover actions; for max-min supports they are replies.
struct ReducedGame {
  Subset carrier;                   // in the parent's indexing
  std::vector<int> parent_state;    // reduced index -> parent index
  int parent_n = 0;
  SupportSpec support;
  std::optional<GameSpec> game;     // present when built from a GameSpec
  /// kept[i][a] lists the parent's indices of retained replies of reduced
  /// state i and retained action a; kept_actions[i] the retained actions.
  std::vector<std::vector<int>> kept_actions;
  std::vector<std::vector<std::vector<int>>> kept_replies;

  Subset to_reduced(Subset parent_set) const;
  Subset to_parent(Subset reduced_set) const;
  ValueVector lift(const ValueVector& reduced, double fill = 0.0) const;
};

ReducedGame reduce_operator(const SupportSpec& support, Subset carrier);
ReducedGame reduce_operator(const GameSpec& game, Subset carrier);

/// One pass through the decision loop; sets use the original state indices.
struct TrailStep {
  Subset carrier;
  Subset target;
  bool f_plus_fixed = false;
  std::optional<Subset> phi;
  std::optional<Subset> closure;
  std::string outcome;  // "no:f_plus", "no:phi_empty", "yes:closed", "yes:trivial", "no:empty", "reduce"
  int actions_kept = 0;
};

struct IMinAnswer {
  bool yes = false;
  std::vector<TrailStep> trail;
  /// Trail of the conjugate (argmax) problem, for the mixed query.
  std::vector<TrailStep> dual_trail;
  std::optional<ValueVector> witness;
  double residual = 0.0;
};

/// Does the payment-free operator have a fixed point whose argmin is exactly I?
IMinAnswer solve_i_min(const SupportSpec& support, Subset I);
/// Same decision; on yes also constructs and verifies a witness when `construct`.
IMinAnswer solve_i_min(const GameSpec& game, Subset I, bool construct = true);

/// Fixed point with argmin exactly I and argmax exactly J.
IMinAnswer solve_i_min_j_max(const SupportSpec& support, Subset I, Subset J);
IMinAnswer solve_i_min_j_max(const GameSpec& game, Subset I, Subset J, bool construct = true);

inline constexpr double kTieTolerance = 1e-9;
inline constexpr double kWitnessResidual = 1e-9;

/// Active action sets of the operator at w.
struct ActiveSets {
  std::vector<std::vector<int>> actions;              // per state
  std::vector<std::vector<std::vector<int>>> replies; // per state, per listed action
};

ActiveSets active_sets(const GameSpec& game, const ValueVector& w, double tie = kTieTolerance);

/// Semiderivative of the payment-free operator at the fixed point w, applied to x.
ValueVector semiderivative_apply(const GameSpec& game, const ValueVector& w, const ValueVector& x,
                                 double tie = kTieTolerance);
Operator semiderivative_operator(const GameSpec& game, const ValueVector& w,
                                 double tie = kTieTolerance);

/// Fixed point inside {z : v or 1_J <= z <= w and 1_{S\I}} reached by
/// increasing Kleene iteration from v or 1_J. v and w are rescaled first to
/// [0, 1/2] and [1/2, 1].
ValueVector lattice_witness(const Operator& op, const ValueVector& v, const ValueVector& w,
                            Subset I, Subset J);

/// Fixed point of the payment-free operator with argmin exactly I, scaled to
/// [0, 1]. Requires a yes answer for I.
ValueVector construct_witness(const GameSpec& game, Subset I);

/// ||F(u) - u|| for the payment-free operator.
double fixed_point_residual(const GameSpec& game, const ValueVector& u);

}  // namespace ergo
