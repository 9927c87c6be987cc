#include "ergo/boolean.hpp"

#include "ergo/errors.hpp"

namespace ergo {

namespace {

template <class Leaf>
Subset abstract(const SupportSpec& support, Leaf leaf) {
  const bool min_first = support.order == Order::MinMax;
  Subset out;
  for (int i = 0; i < support.n; ++i) {
    const auto& rows = support.successors[static_cast<std::size_t>(i)];
    bool outer = min_first;  // min over {0,1} starts at 1, max at 0
    for (const auto& a : rows) {
      bool inner = !min_first;
      for (Subset succ : a) {
        const bool v = leaf(succ);
        inner = min_first ? (inner || v) : (inner && v);
      }
      outer = min_first ? (outer && inner) : (outer || inner);
    }
    if (outer) out.insert(i);
  }
  return out;
}

}  // namespace

Subset f_plus(const SupportSpec& support, Subset x) {
  return abstract(support, [x](Subset succ) { return succ.intersects(x); });
}

Subset f_minus(const SupportSpec& support, Subset x) {
  return abstract(support, [x](Subset succ) { return succ.is_subset_of(x); });
}

BooleanOperator upper_abstraction(const SupportSpec& support) {
  return [support](Subset x) { return f_plus(support, x); };
}

BooleanOperator lower_abstraction(const SupportSpec& support) {
  return [support](Subset x) { return f_minus(support, x); };
}

BooleanOperator boolean_conjugate(BooleanOperator op, int n) {
  return [op = std::move(op), n](Subset x) { return op(x.complement(n)).complement(n); };
}

bool check_h1(const SupportSpec& support, Subset I) {
  const Subset rest = I.complement(support.n);
  return f_plus(support, rest).is_subset_of(rest);
}

bool check_h2(const SupportSpec& support, Subset J) {
  return J.is_subset_of(f_minus(support, J));
}

Subset boolean_kleene(const BooleanOperator& op, Subset x0) {
  Subset next = op(x0);
  const bool down = next.is_subset_of(x0);
  const bool up = x0.is_subset_of(next);
  if (!down && !up)
    throw PreconditionError("Boolean Kleene iteration needs op(x0) <= x0 or op(x0) >= x0");
  Subset cur = x0;
  while (next != cur) {
    cur = next;
    next = op(cur);
  }
  return cur;
}

LatticePair enumerate_lattices(const SupportSpec& support, int guard) {
  if (support.n > guard)
    throw GuardError("lattice enumeration over " + std::to_string(support.n) +
                     " states exceeds the guard of " + std::to_string(guard));
  LatticePair out;
  for_each_subset(support.n, [&](Subset s) {
    if (check_h1(support, s)) out.lower.push_back(s);
    if (check_h2(support, s)) out.upper.push_back(s);
    return true;
  });
  return out;
}

std::optional<Policy> confining_min_policy(const SupportSpec& support, Subset I) {
  if (support.order != Order::MinMax)
    throw PreconditionError("confining policies are defined for min-max games");
  Policy p;
  p.min_policy.assign(static_cast<std::size_t>(support.n), 0);
  for (const auto& rows : support.successors) p.max_policy.emplace_back(rows.size(), 0);
  for (int i : I.indices()) {
    const auto& rows = support.successors[static_cast<std::size_t>(i)];
    bool found = false;
    for (std::size_t a = 0; a < rows.size() && !found; ++a) {
      bool stays = true;
      for (Subset succ : rows[a]) stays = stays && succ.is_subset_of(I);
      if (stays) {
        p.min_policy[static_cast<std::size_t>(i)] = static_cast<int>(a);
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  return p;
}

std::optional<Policy> confining_max_policy(const SupportSpec& support, Subset J) {
  if (support.order != Order::MinMax)
    throw PreconditionError("confining policies are defined for min-max games");
  Policy p;
  p.min_policy.assign(static_cast<std::size_t>(support.n), 0);
  for (const auto& rows : support.successors) p.max_policy.emplace_back(rows.size(), 0);
  for (int i : J.indices()) {
    const auto& rows = support.successors[static_cast<std::size_t>(i)];
    for (std::size_t a = 0; a < rows.size(); ++a) {
      bool found = false;
      for (std::size_t b = 0; b < rows[a].size() && !found; ++b) {
        if (rows[a][b].is_subset_of(J)) {
          p.max_policy[static_cast<std::size_t>(i)][a] = static_cast<int>(b);
          found = true;
        }
      }
      if (!found) return std::nullopt;
    }
  }
  return p;
}

}  // namespace ergo
