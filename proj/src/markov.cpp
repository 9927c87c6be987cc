#include "ergo/markov.hpp"

#include <algorithm>
#include <random>

#include "ergo/errors.hpp"
#include "ergo/galois.hpp"

namespace ergo {

void require_zero_player(const GameSpec& game) {
  for (std::size_t i = 0; i < game.dynamics.size(); ++i) {
    if (game.dynamics[i].size() != 1 || game.dynamics[i][0].max_actions.size() != 1)
      throw PreconditionError("state " + game.states[i] +
                              " has more than one action; not a zero-player game");
  }
}

namespace {

// Iterative Tarjan over the support digraph.
std::vector<int> component_of(const std::vector<Subset>& succ) {
  const int n = static_cast<int>(succ.size());
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0),
      comp(static_cast<std::size_t>(n), -1);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  int counter = 0, components = 0;
  struct Frame {
    int v;
    std::vector<int> next;
    std::size_t pos = 0;
  };
  for (int root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] >= 0) continue;
    std::vector<Frame> frames;
    auto open = [&](int v) {
      index[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = counter++;
      stack.push_back(v);
      on_stack[static_cast<std::size_t>(v)] = 1;
      frames.push_back({v, succ[static_cast<std::size_t>(v)].indices()});
    };
    open(root);
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.pos < f.next.size()) {
        const int w = f.next[f.pos++];
        if (index[static_cast<std::size_t>(w)] < 0) {
          open(w);
        } else if (on_stack[static_cast<std::size_t>(w)]) {
          low[static_cast<std::size_t>(f.v)] =
              std::min(low[static_cast<std::size_t>(f.v)], index[static_cast<std::size_t>(w)]);
        }
        continue;
      }
      const int v = f.v;
      if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          comp[static_cast<std::size_t>(w)] = components;
        } while (w != v);
        ++components;
      }
      frames.pop_back();
      if (!frames.empty()) {
        const int parent = frames.back().v;
        low[static_cast<std::size_t>(parent)] =
            std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(v)]);
      }
    }
  }
  return comp;
}

}  // namespace

ChainAnalysis analyze_chain(const GameSpec& game) {
  require_zero_player(game);
  const SupportSpec support = extract_support(game);
  std::vector<Subset> succ;
  for (const auto& rows : support.successors) succ.push_back(rows[0][0]);
  const std::vector<int> comp = component_of(succ);
  const int count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<Subset> members(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < comp.size(); ++i)
    members[static_cast<std::size_t>(comp[i])].insert(static_cast<int>(i));

  ChainAnalysis out;
  out.classes = members;
  std::sort(out.classes.begin(), out.classes.end(), [](Subset a, Subset b) {
    return a.indices().front() < b.indices().front();
  });
  for (Subset c : out.classes) {
    bool closed = true;
    for (int i : c.indices()) closed = closed && succ[static_cast<std::size_t>(i)].is_subset_of(c);
    if (closed) out.final_classes.push_back(c);
  }
  out.ergodic = out.final_classes.size() == 1;
  return out;
}

ValueVector cesaro_average(const GameSpec& game, const ValueVector& g, int k) {
  require_zero_player(game);
  if (k <= 0) throw PreconditionError("Cesaro horizon must be positive");
  if (g.size() != game.dynamics.size()) throw PreconditionError("payment vector has wrong length");
  ValueVector power = g, sum(g.size(), 0.0);
  for (int t = 0; t < k; ++t) {
    for (std::size_t i = 0; i < g.size(); ++i) sum[i] += power[i];
    ValueVector next(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (const auto& tr : game.dynamics[i][0].max_actions[0].transition)
        next[i] += tr.prob * power[static_cast<std::size_t>(tr.state)];
    power = std::move(next);
  }
  for (double& x : sum) x /= k;
  return sum;
}

namespace {

// The lazy chain (I+P)/2 has the same Cesaro limit as P and is aperiodic, so
// its powers converge geometrically; average them over the second half.
ValueVector cesaro_limit_estimate(const GameSpec& game, const ValueVector& g, int k) {
  const std::size_t n = g.size();
  ValueVector power = g, sum(n, 0.0);
  const int start = k / 2;
  for (int t = 0; t < k; ++t) {
    if (t >= start)
      for (std::size_t i = 0; i < n; ++i) sum[i] += power[i];
    ValueVector next(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = 0.5 * power[i];
      for (const auto& tr : game.dynamics[i][0].max_actions[0].transition)
        next[i] += 0.5 * tr.prob * power[static_cast<std::size_t>(tr.state)];
    }
    power = std::move(next);
  }
  for (double& x : sum) x /= (k - start);
  return sum;
}

}  // namespace

bool harmonic_constant_check(const GameSpec& game, int k_max, double tolerance,
                             const HarmonicCheckOptions& options) {
  require_zero_player(game);
  if (k_max <= 0) throw PreconditionError("Cesaro horizon must be positive");
  ErgodicityOptions eo;
  eo.guard_override = true;
  const bool ergodic = is_ergodic(game, eo).ergodic;
  if (!ergodic) return false;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < options.trials; ++trial) {
    ValueVector g(game.dynamics.size());
    for (double& x : g) x = unit(rng);
    const double s = spread(cesaro_limit_estimate(game, g, k_max));
    if (s > tolerance)
      throw NumericError("Cesaro spread " + std::to_string(s) + " still above " +
                         std::to_string(tolerance) + " at horizon " + std::to_string(k_max));
  }
  return true;
}

}  // namespace ergo
