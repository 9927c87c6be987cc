#include "ergo/shapley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ergo/errors.hpp"

namespace ergo {

namespace {

ValueVector evaluate(const GameSpec& game, const ValueVector& x, bool with_payments) {
  if (static_cast<int>(x.size()) != game.size())
    throw PreconditionError("vector has length " + std::to_string(x.size()) + ", expected " +
                            std::to_string(game.size()));
  const bool min_first = game.order == Order::MinMax;
  constexpr double inf = std::numeric_limits<double>::infinity();
  ValueVector out(x.size());
  for (std::size_t i = 0; i < game.dynamics.size(); ++i) {
    double outer = min_first ? inf : -inf;
    for (const auto& a : game.dynamics[i]) {
      double inner = min_first ? -inf : inf;
      for (const auto& b : a.max_actions) {
        double v = with_payments ? b.payment : 0.0;
        for (const auto& t : b.transition) v += t.prob * x[static_cast<std::size_t>(t.state)];
        inner = min_first ? std::max(inner, v) : std::min(inner, v);
      }
      outer = min_first ? std::min(outer, inner) : std::max(outer, inner);
    }
    out[i] = outer;
  }
  return out;
}

}  // namespace

double sup_norm(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double sup_distance(std::span<const double> x, std::span<const double> y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

double spread(std::span<const double> x) {
  if (x.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *hi - *lo;
}

ValueVector apply_shapley(const GameSpec& game, const ValueVector& x) {
  return evaluate(game, x, true);
}

ValueVector recession_apply(const GameSpec& game, const ValueVector& x) {
  return evaluate(game, x, false);
}

ValueVector dual_operator(const ValueVector& x, const Operator& op) {
  ValueVector neg(x.size());
  std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
  ValueVector y = op(neg);
  for (double& v : y) v = -v;
  return y;
}

Operator shapley_operator(const GameSpec& game) {
  return [game](const ValueVector& x) { return apply_shapley(game, x); };
}

Operator recession_operator(const GameSpec& game) {
  return [game](const ValueVector& x) { return recession_apply(game, x); };
}

ValueVector value_iteration(const GameSpec& game, int k, const ValueVector& x0) {
  if (k < 0) throw PreconditionError("iteration count must be nonnegative");
  ValueVector v = x0;
  for (int step = 0; step < k; ++step) v = apply_shapley(game, v);
  return v;
}

MeanPayoffEstimate mean_payoff_estimate(const GameSpec& game, int max_horizon, double tolerance) {
  if (max_horizon < 1) throw PreconditionError("max_horizon must be at least 1");
  if (!(tolerance > 0.0)) throw PreconditionError("tolerance must be positive");
  const std::size_t n = static_cast<std::size_t>(game.size());
  MeanPayoffEstimate est;
  ValueVector v(n, 0.0);
  ValueVector prev_norm;
  ValueVector norm(n);
  for (int k = 1; k <= max_horizon; ++k) {
    v = apply_shapley(game, v);
    for (std::size_t i = 0; i < n; ++i) norm[i] = v[i] / k;
    est.horizon = k;
    if (k == 1) {
      // T(0) = 0 makes 0 a fixed point, so every later iterate is 0 as well.
      if (sup_norm(norm) == 0.0) {
        est.estimate = norm;
        est.oscillation = 0.0;
        est.converged = true;
        return est;
      }
    } else {
      est.oscillation = sup_distance(norm, prev_norm);
      if (est.oscillation <= tolerance) {
        est.estimate = norm;
        est.converged = true;
        return est;
      }
    }
    prev_norm = norm;
  }
  est.estimate = norm;
  est.converged = false;
  return est;
}

ValueVector mean_payoff_at(const GameSpec& game, int horizon) {
  if (horizon < 1) throw PreconditionError("horizon must be at least 1");
  ValueVector v = value_iteration(game, horizon, ValueVector(static_cast<std::size_t>(game.size())));
  for (double& x : v) x /= horizon;
  return v;
}

bool check_ergodic_equation(const GameSpec& game, double lambda, const ValueVector& u,
                            double tolerance) {
  if (tolerance < 0.0) throw PreconditionError("tolerance must be nonnegative");
  ValueVector t = apply_shapley(game, u);
  double gap = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) gap = std::max(gap, std::abs(t[i] - lambda - u[i]));
  return gap <= tolerance;
}

ValueVector kleene_limit_real(const Operator& op, const ValueVector& x0, int max_iter,
                              double tolerance) {
  constexpr double slack = 1e-12;
  ValueVector cur = x0;
  ValueVector next = op(cur);
  bool down = true;
  bool up = true;
  for (std::size_t i = 0; i < cur.size(); ++i) {
    if (next[i] > cur[i] + slack) down = false;
    if (next[i] < cur[i] - slack) up = false;
  }
  if (!down && !up)
    throw PreconditionError("Kleene iteration needs F(x0) <= x0 or F(x0) >= x0");
  for (int it = 0; it < max_iter; ++it) {
    if (sup_distance(next, cur) <= tolerance) return next;
    cur = std::move(next);
    next = op(cur);
  }
  throw NumericError("Kleene iteration did not reach tolerance " + std::to_string(tolerance) +
                     " within " + std::to_string(max_iter) + " iterations");
}

Subset argmin_set(const ValueVector& x, double threshold) {
  Subset s;
  if (x.empty()) return s;
  auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double range = *hi - *lo;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (range == 0.0 || (x[i] - *lo) / range <= threshold) s.insert(static_cast<int>(i));
  return s;
}

Subset argmax_set(const ValueVector& x, double threshold) {
  Subset s;
  if (x.empty()) return s;
  auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double range = *hi - *lo;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (range == 0.0 || (*hi - x[i]) / range <= threshold) s.insert(static_cast<int>(i));
  return s;
}

}  // namespace ergo
