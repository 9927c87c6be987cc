#pragma once

#include <string>
#include <vector>

#include "ergo/game.hpp"
#include "ergo/subset.hpp"

namespace ergo {

enum class NodeKind { State, Prime, MinNode, MinMaxNode };

struct Node {
  NodeKind kind;
  int state;
  int min_action = -1;
  int max_action = -1;
  bool operator==(const Node&) const = default;
};

struct Hyperarc {
  std::vector<int> tail;
  std::vector<int> head;
};

/// Directed hypergraph. Node ids are indices into `nodes`; in every graph
/// built here State(i) has id i.
struct Hypergraph {
  int n_states = 0;
  std::vector<Node> nodes;
  std::vector<Hyperarc> arcs;
  /// Display names, parallel to `nodes`.
  std::vector<std::string> labels;

  int size() const;
  /// Id of a node, or -1.
  int find(const Node& node) const;
  int prime(int i) const { return find({NodeKind::Prime, i}); }
};

struct ReachResult {
  std::vector<int> reached;  // sorted node ids
  Subset states;             // reached State nodes
};

/// Encodes the upper abstraction: Prime(i) is reachable from J iff bit i of F+(1_J) is 1.
Hypergraph build_g_plus(const SupportSpec& support);
/// Encodes the lower abstraction: Prime(i) is reachable from I iff bit i of F-(1_{S\I}) is 0.
Hypergraph build_g_minus(const SupportSpec& support);
/// Identifies every Prime(i) with State(i).
Hypergraph merge_primes(const Hypergraph& graph);

/// Replaces the numeric display names with the game's state and action labels.
void apply_labels(Hypergraph& graph, const GameSpec& game);

/// Linear-time reachability: each hyperarc counts down its unreached tail nodes.
ReachResult reach(const Hypergraph& graph, const std::vector<int>& start);
ReachResult reach(const Hypergraph& graph, Subset start_states);

/// Reach(K) restricted to `universe` stays inside K.
bool is_invariant_relative(const Hypergraph& graph, const std::vector<int>& K,
                           const std::vector<int>& universe);
/// Same, with K and the universe taken among State nodes.
bool is_invariant_relative(const Hypergraph& graph, Subset K, Subset universe);

std::string export_dot(const Hypergraph& graph);
std::string export_json(const Hypergraph& graph);

}  // namespace ergo
