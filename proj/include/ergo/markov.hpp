#pragma once

#include <cstdint>
#include <vector>

#include "ergo/game.hpp"
#include "ergo/shapley.hpp"
#include "ergo/subset.hpp"

namespace ergo {

/// Class structure of the support digraph of a zero-player game.
struct ChainAnalysis {
  /// Strongly connected classes, each ordered by its smallest state.
  std::vector<Subset> classes;
  /// Classes with no arc leaving them.
  std::vector<Subset> final_classes;
  bool ergodic = false;
};

/// Throws PreconditionError unless every state has exactly one action per player.
void require_zero_player(const GameSpec& game);

ChainAnalysis analyze_chain(const GameSpec& game);

/// (1/k) sum_{t<k} P^t g for a zero-player game.
ValueVector cesaro_average(const GameSpec& game, const ValueVector& g, int k);

struct HarmonicCheckOptions {
  int trials = 5;
  std::uint64_t seed = 1;
};

/// Game-level ergodicity verdict. When it says ergodic, also checks that
/// Cesaro-limit estimates of random payments have spread <= tolerance by horizon
/// k_max and throws NumericError otherwise.
bool harmonic_constant_check(const GameSpec& game, int k_max, double tolerance,
                             const HarmonicCheckOptions& options = {});

}  // namespace ergo
