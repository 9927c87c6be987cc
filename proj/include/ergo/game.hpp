#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ergo/subset.hpp"

namespace ergo {

/// Which player picks first in every state. Games read from documents are
/// always MinMax; MaxMin arises as the conjugate x -> -T(-x).
enum class Order { MinMax, MaxMin };

inline Order flipped(Order o) { return o == Order::MinMax ? Order::MaxMin : Order::MinMax; }

struct Transition {
  int state;
  double prob;
  bool operator==(const Transition&) const = default;
};

/// Response of the second mover: payment and successor distribution
/// (sparse, sorted by state, positive entries only after validation).
struct MaxActionSpec {
  std::string label;
  double payment = 0.0;
  std::vector<Transition> transition;
  bool operator==(const MaxActionSpec&) const = default;
};

struct MinActionSpec {
  std::string label;
  std::vector<MaxActionSpec> max_actions;
  bool operator==(const MinActionSpec&) const = default;
};

/// A finite zero-sum stochastic game with perfect information.
/// dynamics[i][a].max_actions[b] holds r_i^{ab} and P_i^{ab}.
struct GameSpec {
  std::vector<std::string> states;
  std::vector<std::vector<MinActionSpec>> dynamics;
  Order order = Order::MinMax;

  int size() const { return static_cast<int>(states.size()); }
  bool operator==(const GameSpec&) const = default;

  /// Index of a state label; throws InputError when unknown.
  int state_index(std::string_view label) const;
  /// Throws InputError on any violated invariant.
  void validate() const;
  double max_abs_payment() const;
};

/// Transition support: successors[i][a][b] = {j : (P_i^{ab})_j > 0}.
struct SupportSpec {
  int n = 0;
  Order order = Order::MinMax;
  std::vector<std::vector<std::vector<Subset>>> successors;

  int m1() const;
  int m2() const;
  /// Largest action-set cardinality over both players.
  int max_actions() const;
  bool operator==(const SupportSpec&) const = default;
};

struct SupportWarning {
  int state;
  int min_action;
  int max_action;
  int successor;
  double prob;
};

struct SupportExtraction {
  SupportSpec support;
  std::vector<SupportWarning> warnings;
};

inline constexpr double kRowSumTolerance = 1e-9;
inline constexpr double kSupportThreshold = 1e-12;

GameSpec parse_game(std::string_view document);
GameSpec load_game(const std::string& path);
/// Canonical JSON text: keys sorted, two-space indentation.
std::string serialize_game(const GameSpec& game);

/// Entries in (0, 1e-12] are dropped and reported. Throws InputError when a
/// row loses every entry.
SupportExtraction extract_support_checked(const GameSpec& game);
SupportSpec extract_support(const GameSpec& game);

GameSpec perturb_payments(const GameSpec& game, const std::vector<double>& g);

/// Payment-free game with the same transitions (the recession game).
GameSpec payment_free(const GameSpec& game);

/// The conjugate game: order swapped, payments negated, so that
/// T~(x) = -T(-x).
GameSpec conjugate(const GameSpec& game);

/// Zero-player game with transition matrix P (rows must be stochastic).
GameSpec chain_game(const std::vector<std::vector<double>>& P,
                    const std::vector<double>& payments = {});

/// Game with the given support, uniform probabilities on each successor set
/// and zero payments. Labels are "1".."n", "a1".., "b1"...
GameSpec uniform_game(const SupportSpec& support);

/// Labels "1".."n" for parsing CLI sets and rendering results.
std::vector<int> parse_state_list(const GameSpec& game, std::string_view csv);
Subset parse_state_set(const GameSpec& game, std::string_view csv);
std::vector<std::string> state_labels(const GameSpec& game, Subset s);

struct Policy {
  /// min_policy[i] = index of the first mover's action at state i.
  std::vector<int> min_policy;
  /// max_policy[i][a] = index of the second mover's action after (i, a).
  std::vector<std::vector<int>> max_policy;
};

/// Every player picks its first listed action.
Policy default_policy(const GameSpec& game);
/// Policies in JSON: {"min": {"<state>": "<a>"}, "max": {"<state>": {"<a>": "<b>"}}}.
/// Unlisted entries fall back to the first action.
Policy parse_policy(const GameSpec& game, std::string_view document);
void validate_policy(const GameSpec& game, const Policy& policy);

struct Step {
  int state;
  int min_action;
  int max_action;
  double payment;
};

struct Trajectory {
  std::uint64_t seed = 0;
  std::vector<Step> steps;
  /// Final state reached after the last step (the start state when empty).
  int final_state = 0;
  double total_payoff = 0.0;

  std::vector<int> visited_states() const;
};

Trajectory simulate(const GameSpec& game, const Policy& policies, int start, int horizon,
                    std::uint64_t seed);

}  // namespace ergo
