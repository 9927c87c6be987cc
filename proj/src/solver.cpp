#include "ergo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergo/boolean.hpp"
#include "ergo/errors.hpp"
#include "ergo/galois.hpp"

namespace ergo {

Subset ReducedGame::to_reduced(Subset parent_set) const {
  Subset out;
  for (std::size_t k = 0; k < parent_state.size(); ++k)
    if (parent_set.contains(parent_state[k])) out.insert(static_cast<int>(k));
  return out;
}

Subset ReducedGame::to_parent(Subset reduced_set) const {
  Subset out;
  for (int k : reduced_set.indices()) out.insert(parent_state.at(static_cast<std::size_t>(k)));
  return out;
}

ValueVector ReducedGame::lift(const ValueVector& reduced, double fill) const {
  ValueVector out(static_cast<std::size_t>(parent_n), fill);
  for (std::size_t k = 0; k < parent_state.size(); ++k)
    out[static_cast<std::size_t>(parent_state[k])] = reduced.at(k);
  return out;
}

namespace {

ReducedGame select_actions(const SupportSpec& support, Subset carrier) {
  if (carrier.is_empty() || !carrier.fits(support.n))
    throw PreconditionError("reduction carrier must be a nonempty set of states");
  if (!check_h1(support, carrier))
    throw PreconditionError("reduction carrier must belong to the lower lattice");
  ReducedGame red;
  red.carrier = carrier;
  red.parent_state = carrier.indices();
  red.parent_n = support.n;
  const std::size_t n = red.parent_state.size();
  red.support.n = static_cast<int>(n);
  red.support.order = support.order;
  red.support.successors.resize(n);
  red.kept_actions.resize(n);
  red.kept_replies.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& rows = support.successors[static_cast<std::size_t>(red.parent_state[k])];
    for (std::size_t a = 0; a < rows.size(); ++a) {
      std::vector<int> replies;
      bool all_inside = true;
      for (std::size_t b = 0; b < rows[a].size(); ++b) {
        if (rows[a][b].is_subset_of(carrier)) {
          replies.push_back(static_cast<int>(b));
        } else {
          all_inside = false;
        }
      }
      // min-max: the minimizer picks a, so a must confine against every reply.
      // max-min: the minimizer replies, so only confining replies survive.
      const bool keep = support.order == Order::MinMax ? all_inside : !replies.empty();
      if (!keep) continue;
      red.kept_actions[k].push_back(static_cast<int>(a));
      red.kept_replies[k].push_back(replies);
      std::vector<Subset> reduced_rows;
      for (int b : replies) reduced_rows.push_back(red.to_reduced(rows[a][static_cast<std::size_t>(b)]));
      red.support.successors[k].push_back(std::move(reduced_rows));
    }
    if (red.kept_actions[k].empty())
      throw PreconditionError("reduction left a state without actions");
  }
  return red;
}

}  // namespace

ReducedGame reduce_operator(const SupportSpec& support, Subset carrier) {
  return select_actions(support, carrier);
}

ReducedGame reduce_operator(const GameSpec& game, Subset carrier) {
  ReducedGame red = select_actions(extract_support(game), carrier);
  GameSpec out;
  out.order = game.order;
  std::vector<int> index(static_cast<std::size_t>(game.size()), -1);
  for (std::size_t k = 0; k < red.parent_state.size(); ++k) {
    index[static_cast<std::size_t>(red.parent_state[k])] = static_cast<int>(k);
    out.states.push_back(game.states[static_cast<std::size_t>(red.parent_state[k])]);
  }
  out.dynamics.resize(red.parent_state.size());
  for (std::size_t k = 0; k < red.parent_state.size(); ++k) {
    const auto& actions = game.dynamics[static_cast<std::size_t>(red.parent_state[k])];
    for (std::size_t t = 0; t < red.kept_actions[k].size(); ++t) {
      const auto& a = actions[static_cast<std::size_t>(red.kept_actions[k][t])];
      MinActionSpec ra{a.label, {}};
      for (int b : red.kept_replies[k][t]) {
        const auto& row = a.max_actions[static_cast<std::size_t>(b)];
        MaxActionSpec rb{row.label, row.payment, {}};
        // Entries outside the carrier are below the support threshold; drop them.
        for (const auto& tr : row.transition)
          if (index[static_cast<std::size_t>(tr.state)] >= 0)
            rb.transition.push_back({index[static_cast<std::size_t>(tr.state)], tr.prob});
        ra.max_actions.push_back(std::move(rb));
      }
      out.dynamics[k].push_back(std::move(ra));
    }
  }
  red.game = std::move(out);
  return red;
}

namespace {

int count_actions(const SupportSpec& s) {
  return s.order == Order::MinMax ? s.m1() : s.m2();
}

IMinAnswer run_algorithm(const SupportSpec& support, Subset I) {
  IMinAnswer ans;
  const int n = support.n;
  if (!I.fits(n)) throw PreconditionError("target set has states outside the game");
  if (I.is_empty()) {
    ans.trail.push_back({Subset::full(n), I, false, {}, {}, "no:empty", count_actions(support)});
    return ans;
  }
  if (I == Subset::full(n)) {
    ans.yes = true;
    ans.trail.push_back({Subset::full(n), I, true, {}, {}, "yes:trivial", count_actions(support)});
    return ans;
  }

  SupportSpec cur = support;
  std::vector<int> to_original(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) to_original[static_cast<std::size_t>(i)] = i;
  auto original = [&](Subset s) {
    Subset out;
    for (int k : s.indices()) out.insert(to_original[static_cast<std::size_t>(k)]);
    return out;
  };
  Subset target = I;
  for (int guard = 0; guard <= n; ++guard) {
    TrailStep step;
    step.carrier = original(Subset::full(cur.n));
    step.target = original(target);
    step.actions_kept = count_actions(cur);
    const Subset rest = target.complement(cur.n);
    step.f_plus_fixed = f_plus(cur, rest) == rest;
    if (!step.f_plus_fixed) {
      step.outcome = "no:f_plus";
      ans.trail.push_back(step);
      return ans;
    }
    const GaloisConnection galois(cur);
    const Subset J = galois.phi(target);
    step.phi = original(J);
    if (J.is_empty()) {
      step.outcome = "no:phi_empty";
      ans.trail.push_back(step);
      return ans;
    }
    const Subset closed = galois.phi_star(J);
    step.closure = original(closed);
    if (closed == target) {
      step.outcome = "yes:closed";
      ans.yes = true;
      ans.trail.push_back(step);
      return ans;
    }
    step.outcome = "reduce";
    ans.trail.push_back(step);
    ReducedGame red = reduce_operator(cur, closed);
    std::vector<int> next_map;
    for (int p : red.parent_state) next_map.push_back(to_original[static_cast<std::size_t>(p)]);
    to_original = std::move(next_map);
    target = red.to_reduced(target);
    cur = std::move(red.support);
  }
  throw NumericError("decision loop exceeded its iteration bound");
}

SupportSpec conjugate_support(const SupportSpec& support) {
  SupportSpec out = support;
  out.order = flipped(support.order);
  return out;
}

ValueVector normalized(const ValueVector& x) {
  auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double range = *hi - *lo;
  ValueVector out(x.size(), 0.0);
  if (range == 0.0) return out;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - *lo) / range;
  return out;
}

void check_pair(Subset I, Subset J) {
  if (I.is_empty() || J.is_empty()) throw PreconditionError("argmin and argmax sets must be nonempty");
  if (I.intersects(J)) throw PreconditionError("argmin and argmax sets must be disjoint");
}

}  // namespace

IMinAnswer solve_i_min(const SupportSpec& support, Subset I) { return run_algorithm(support, I); }

IMinAnswer solve_i_min(const GameSpec& game, Subset I, bool construct) {
  IMinAnswer ans = run_algorithm(extract_support(game), I);
  if (ans.yes && construct) {
    ans.witness = construct_witness(game, I);
    ans.residual = fixed_point_residual(game, *ans.witness);
  }
  return ans;
}

IMinAnswer solve_i_min_j_max(const SupportSpec& support, Subset I, Subset J) {
  check_pair(I, J);
  IMinAnswer ans;
  if (!check_h1(support, I) || !check_h2(support, J)) return ans;
  IMinAnswer lower = run_algorithm(support, I);
  ans.trail = std::move(lower.trail);
  if (!lower.yes) return ans;
  IMinAnswer upper = run_algorithm(conjugate_support(support), J);
  ans.dual_trail = std::move(upper.trail);
  ans.yes = upper.yes;
  return ans;
}

IMinAnswer solve_i_min_j_max(const GameSpec& game, Subset I, Subset J, bool construct) {
  IMinAnswer ans = solve_i_min_j_max(extract_support(game), I, J);
  if (ans.yes && construct) {
    const ValueVector v = construct_witness(game, I);
    const ValueVector flipped_u = construct_witness(conjugate(payment_free(game)), J);
    ValueVector w(flipped_u.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 - flipped_u[i];
    ans.witness = lattice_witness(recession_operator(game), v, w, I, J);
    ans.residual = fixed_point_residual(game, *ans.witness);
  }
  return ans;
}

ActiveSets active_sets(const GameSpec& game, const ValueVector& w, double tie) {
  const ValueVector value = recession_apply(game, w);
  ActiveSets act;
  act.actions.resize(game.dynamics.size());
  act.replies.resize(game.dynamics.size());
  const bool min_first = game.order == Order::MinMax;
  for (std::size_t i = 0; i < game.dynamics.size(); ++i) {
    const auto& actions = game.dynamics[i];
    act.replies[i].resize(actions.size());
    for (std::size_t a = 0; a < actions.size(); ++a) {
      double inner = min_first ? -std::numeric_limits<double>::infinity()
                               : std::numeric_limits<double>::infinity();
      std::vector<double> rows;
      for (const auto& b : actions[a].max_actions) {
        double v = 0.0;
        for (const auto& t : b.transition) v += t.prob * w[static_cast<std::size_t>(t.state)];
        rows.push_back(v);
        inner = min_first ? std::max(inner, v) : std::min(inner, v);
      }
      if (std::abs(inner - value[i]) > tie) continue;
      act.actions[i].push_back(static_cast<int>(a));
      for (std::size_t b = 0; b < rows.size(); ++b)
        if (std::abs(rows[b] - value[i]) <= tie) act.replies[i][a].push_back(static_cast<int>(b));
      if (act.replies[i][a].empty())
        throw NumericError("empty active reply set; tie tolerance too tight for w");
    }
    if (act.actions[i].empty())
      throw NumericError("empty active action set; tie tolerance too tight for w");
  }
  return act;
}

namespace {

ValueVector apply_active(const GameSpec& game, const ActiveSets& act, const ValueVector& x) {
  const bool min_first = game.order == Order::MinMax;
  ValueVector out(x.size());
  for (std::size_t i = 0; i < game.dynamics.size(); ++i) {
    double outer = min_first ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
    for (int a : act.actions[i]) {
      const auto& rows = game.dynamics[i][static_cast<std::size_t>(a)].max_actions;
      double inner = min_first ? -std::numeric_limits<double>::infinity()
                               : std::numeric_limits<double>::infinity();
      for (int b : act.replies[i][static_cast<std::size_t>(a)]) {
        double v = 0.0;
        for (const auto& t : rows[static_cast<std::size_t>(b)].transition)
          v += t.prob * x[static_cast<std::size_t>(t.state)];
        inner = min_first ? std::max(inner, v) : std::min(inner, v);
      }
      outer = min_first ? std::min(outer, inner) : std::max(outer, inner);
    }
    out[i] = outer;
  }
  return out;
}

void require_fixed_point(const GameSpec& game, const ValueVector& w) {
  const double r = fixed_point_residual(game, w);
  if (r > 1e-10)
    throw PreconditionError("semiderivative needs a fixed point; residual " + std::to_string(r));
}

}  // namespace

ValueVector semiderivative_apply(const GameSpec& game, const ValueVector& w, const ValueVector& x,
                                 double tie) {
  require_fixed_point(game, w);
  return apply_active(game, active_sets(game, w, tie), x);
}

Operator semiderivative_operator(const GameSpec& game, const ValueVector& w, double tie) {
  require_fixed_point(game, w);
  return [game, act = active_sets(game, w, tie)](const ValueVector& x) {
    return apply_active(game, act, x);
  };
}

ValueVector lattice_witness(const Operator& op, const ValueVector& v, const ValueVector& w,
                            Subset I, Subset J) {
  ValueVector lo = normalized(v);
  ValueVector hi = normalized(w);
  ValueVector start(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    lo[i] *= 0.5;
    hi[i] = 0.5 + 0.5 * hi[i];
    start[i] = J.contains(static_cast<int>(i)) ? 1.0 : lo[i];
  }
  ValueVector z = kleene_limit_real(op, start, kKleeneMaxIter, 1e-12);
  if (argmin_set(z) != I || argmax_set(z) != J)
    throw NumericError("lattice witness lost the prescribed argmin/argmax");
  return z;
}

double fixed_point_residual(const GameSpec& game, const ValueVector& u) {
  return sup_distance(recession_apply(game, u), u);
}

ValueVector construct_witness(const GameSpec& game, Subset I) {
  const int n = game.size();
  if (I.is_empty() || !I.fits(n)) throw PreconditionError("witness target must be a nonempty set of states");
  if (I == Subset::full(n)) return ValueVector(static_cast<std::size_t>(n), 0.0);

  const GaloisConnection galois(extract_support(game));
  if (!galois.in_lower(I)) throw PreconditionError("no fixed point has this argmin (not in the lower lattice)");
  const Subset J = galois.phi(I);
  if (J.is_empty()) throw PreconditionError("no fixed point has this argmin (phi is empty)");
  const Subset closed = galois.phi_star(J);
  const Operator F = recession_operator(game);
  const ValueVector w =
      kleene_limit_real(F, closed.complement(n).indicator(n), kKleeneMaxIter, 1e-12);
  if (closed == I) {
    ValueVector u = normalized(w);
    if (argmin_set(u) != I) throw NumericError("Kleene limit does not have the expected argmin");
    return u;
  }

  const ReducedGame red = reduce_operator(game, closed);
  const ValueVector v = construct_witness(*red.game, red.to_reduced(I));
  const ValueVector z = red.lift(v);

  const Operator derivative = semiderivative_operator(game, w);
  const ValueVector zbar = kleene_limit_real(derivative, z, kKleeneMaxIter, 1e-12);

  for (double eps = 0.5; eps >= 1e-14; eps *= 0.5) {
    ValueVector u(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = w[i] + eps * zbar[i];
    if (fixed_point_residual(game, u) > kWitnessResidual) continue;
    u = normalized(u);
    if (argmin_set(u) != I)
      throw NumericError("witness in the first-order region does not have the requested argmin");
    return u;
  }
  throw NumericError("step search exhausted below 1e-14 without reaching residual 1e-9");
}

}  // namespace ergo
