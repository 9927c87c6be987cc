#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ergo/game.hpp"
#include "ergo/subset.hpp"

namespace ergo {

/// Real vector indexed by states: payoffs, iterates, fixed points.
using ValueVector = std::vector<double>;

/// A map R^n -> R^n; used for Shapley operators, their conjugates and
/// semiderivatives.
using Operator = std::function<ValueVector(const ValueVector&)>;

double sup_norm(std::span<const double> x);
double sup_distance(std::span<const double> x, std::span<const double> y);
/// max - min of the entries.
double spread(std::span<const double> x);

/// [T(x)]_i = min_a max_b (r_i^{ab} + P_i^{ab} x)  (max/min swapped for MaxMin games).
ValueVector apply_shapley(const GameSpec& game, const ValueVector& x);
/// Payment-free operator F = T(0, P), the recession function of T.
ValueVector recession_apply(const GameSpec& game, const ValueVector& x);
/// -F(-x).
ValueVector dual_operator(const ValueVector& x, const Operator& op);

Operator shapley_operator(const GameSpec& game);
Operator recession_operator(const GameSpec& game);

/// T^k(x0).
ValueVector value_iteration(const GameSpec& game, int k, const ValueVector& x0);

struct MeanPayoffEstimate {
  ValueVector estimate;
  int horizon = 0;
  double oscillation = 0.0;
  bool converged = false;
};

/// Iterates v^k = T(v^{k-1}) from 0 and stops at the first k whose
/// normalized iterate v^k/k is within `tolerance` of v^{k-1}/(k-1).
MeanPayoffEstimate mean_payoff_estimate(const GameSpec& game, int max_horizon, double tolerance);

/// T^k(0)/k at a fixed horizon.
ValueVector mean_payoff_at(const GameSpec& game, int horizon);

bool check_ergodic_equation(const GameSpec& game, double lambda, const ValueVector& u,
                            double tolerance);

inline constexpr double kKleeneTolerance = 1e-10;
inline constexpr int kKleeneMaxIter = 1'000'000;
/// Entries within this fraction of the range from the min (max) belong to argmin (argmax).
inline constexpr double kArgThreshold = 1e-6;

/// Monotone iteration F^k(x0) until successive iterates are within
/// `tolerance`. Requires F(x0) <= x0 or F(x0) >= x0.
ValueVector kleene_limit_real(const Operator& op, const ValueVector& x0,
                              int max_iter = kKleeneMaxIter, double tolerance = kKleeneTolerance);

/// Argmin/argmax after rescaling x to [0, 1]; a constant vector has argmin = argmax = S.
Subset argmin_set(const ValueVector& x, double threshold = kArgThreshold);
Subset argmax_set(const ValueVector& x, double threshold = kArgThreshold);

}  // namespace ergo
