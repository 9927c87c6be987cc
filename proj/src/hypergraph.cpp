#include "ergo/hypergraph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <json.hpp>

#include "ergo/errors.hpp"

namespace ergo {

namespace {

std::string default_label(const Node& node) {
  const std::string i = std::to_string(node.state + 1);
  switch (node.kind) {
    case NodeKind::State: return i;
    case NodeKind::Prime: return i + "'";
    case NodeKind::MinNode: return "(" + i + ",a" + std::to_string(node.min_action + 1) + ")";
    case NodeKind::MinMaxNode:
      return "(" + i + ",a" + std::to_string(node.min_action + 1) + ",b" +
             std::to_string(node.max_action + 1) + ")";
  }
  return i;
}

int add_node(Hypergraph& g, Node node) {
  g.nodes.push_back(node);
  g.labels.push_back(default_label(node));
  return static_cast<int>(g.nodes.size()) - 1;
}

Hypergraph skeleton(int n) {
  Hypergraph g;
  g.n_states = n;
  for (int i = 0; i < n; ++i) add_node(g, {NodeKind::State, i});
  for (int i = 0; i < n; ++i) add_node(g, {NodeKind::Prime, i});
  return g;
}

// Bit i is "hit" iff every first-mover action a has some reply b whose
// successor set meets the start set. Layer nodes are (i, a).
Hypergraph and_of_or(const SupportSpec& support) {
  Hypergraph g = skeleton(support.n);
  for (int i = 0; i < support.n; ++i) {
    const auto& rows = support.successors[static_cast<std::size_t>(i)];
    Hyperarc top;
    for (std::size_t a = 0; a < rows.size(); ++a) {
      const int node = add_node(g, {NodeKind::MinNode, i, static_cast<int>(a)});
      Subset preds;
      for (Subset succ : rows[a]) preds |= succ;
      for (int j : preds.indices()) g.arcs.push_back({{j}, {node}});
      top.tail.push_back(node);
    }
    top.head = {support.n + i};
    g.arcs.push_back(std::move(top));
  }
  return g;
}

// Bit i is "hit" iff some first-mover action a has every reply b hitting.
// Layer nodes are (i, a, b).
Hypergraph or_of_and(const SupportSpec& support) {
  Hypergraph g = skeleton(support.n);
  for (int i = 0; i < support.n; ++i) {
    const auto& rows = support.successors[static_cast<std::size_t>(i)];
    for (std::size_t a = 0; a < rows.size(); ++a) {
      Hyperarc top;
      for (std::size_t b = 0; b < rows[a].size(); ++b) {
        const int node =
            add_node(g, {NodeKind::MinMaxNode, i, static_cast<int>(a), static_cast<int>(b)});
        for (int j : rows[a][b].indices()) g.arcs.push_back({{j}, {node}});
        top.tail.push_back(node);
      }
      top.head = {support.n + i};
      g.arcs.push_back(std::move(top));
    }
  }
  return g;
}

}  // namespace

int Hypergraph::size() const {
  int s = static_cast<int>(nodes.size());
  for (const auto& e : arcs) s += static_cast<int>(e.tail.size() + e.head.size());
  return s;
}

int Hypergraph::find(const Node& node) const {
  if (node.kind == NodeKind::State && node.state >= 0 && node.state < n_states &&
      nodes[static_cast<std::size_t>(node.state)] == node)
    return node.state;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k] == node) return static_cast<int>(k);
  return -1;
}

Hypergraph build_g_plus(const SupportSpec& support) {
  // min over actions, max over replies: AND of ORs. The conjugate order swaps the shape.
  return support.order == Order::MinMax ? and_of_or(support) : or_of_and(support);
}

Hypergraph build_g_minus(const SupportSpec& support) {
  return support.order == Order::MinMax ? or_of_and(support) : and_of_or(support);
}

Hypergraph merge_primes(const Hypergraph& graph) {
  std::vector<int> remap(graph.nodes.size(), -1);
  Hypergraph out;
  out.n_states = graph.n_states;
  for (std::size_t k = 0; k < graph.nodes.size(); ++k) {
    if (graph.nodes[k].kind == NodeKind::Prime) continue;
    remap[k] = static_cast<int>(out.nodes.size());
    out.nodes.push_back(graph.nodes[k]);
    out.labels.push_back(graph.labels[k]);
  }
  for (std::size_t k = 0; k < graph.nodes.size(); ++k) {
    if (graph.nodes[k].kind != NodeKind::Prime) continue;
    const int target = graph.find({NodeKind::State, graph.nodes[k].state});
    if (target < 0)
      throw PreconditionError("prime node " + graph.labels[k] + " has no matching state");
    remap[k] = remap[static_cast<std::size_t>(target)];
  }
  auto rewrite = [&](const std::vector<int>& ids) {
    std::vector<int> r;
    for (int id : ids) r.push_back(remap[static_cast<std::size_t>(id)]);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
  };
  for (const auto& e : graph.arcs) out.arcs.push_back({rewrite(e.tail), rewrite(e.head)});
  return out;
}

void apply_labels(Hypergraph& graph, const GameSpec& game) {
  for (std::size_t k = 0; k < graph.nodes.size(); ++k) {
    const Node& node = graph.nodes[k];
    const auto& state = game.states.at(static_cast<std::size_t>(node.state));
    const auto& actions = game.dynamics.at(static_cast<std::size_t>(node.state));
    switch (node.kind) {
      case NodeKind::State: graph.labels[k] = state; break;
      case NodeKind::Prime: graph.labels[k] = state + "'"; break;
      case NodeKind::MinNode:
        graph.labels[k] =
            "(" + state + "," + actions.at(static_cast<std::size_t>(node.min_action)).label + ")";
        break;
      case NodeKind::MinMaxNode: {
        const auto& a = actions.at(static_cast<std::size_t>(node.min_action));
        graph.labels[k] = "(" + state + "," + a.label + "," +
                          a.max_actions.at(static_cast<std::size_t>(node.max_action)).label + ")";
        break;
      }
    }
  }
}

ReachResult reach(const Hypergraph& graph, const std::vector<int>& start) {
  const std::size_t count = graph.nodes.size();
  std::vector<std::vector<int>> arcs_from(count);
  std::vector<int> remaining(graph.arcs.size());
  for (std::size_t e = 0; e < graph.arcs.size(); ++e) {
    remaining[e] = static_cast<int>(graph.arcs[e].tail.size());
    for (int t : graph.arcs[e].tail) arcs_from[static_cast<std::size_t>(t)].push_back(static_cast<int>(e));
  }

  std::vector<char> seen(count, 0);
  std::deque<int> queue;
  for (int s : start) {
    if (s < 0 || static_cast<std::size_t>(s) >= count)
      throw PreconditionError("unknown node " + std::to_string(s) + " in reachability start set");
    if (!seen[static_cast<std::size_t>(s)]) {
      seen[static_cast<std::size_t>(s)] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int e : arcs_from[static_cast<std::size_t>(u)]) {
      if (--remaining[static_cast<std::size_t>(e)] != 0) continue;
      for (int h : graph.arcs[static_cast<std::size_t>(e)].head) {
        if (!seen[static_cast<std::size_t>(h)]) {
          seen[static_cast<std::size_t>(h)] = 1;
          queue.push_back(h);
        }
      }
    }
  }

  ReachResult out;
  for (std::size_t k = 0; k < count; ++k) {
    if (!seen[k]) continue;
    out.reached.push_back(static_cast<int>(k));
    if (graph.nodes[k].kind == NodeKind::State) out.states.insert(graph.nodes[k].state);
  }
  return out;
}

ReachResult reach(const Hypergraph& graph, Subset start_states) {
  std::vector<int> ids;
  for (int i : start_states.indices()) {
    const int id = graph.find({NodeKind::State, i});
    if (id < 0) throw PreconditionError("unknown state " + std::to_string(i + 1));
    ids.push_back(id);
  }
  return reach(graph, ids);
}

bool is_invariant_relative(const Hypergraph& graph, const std::vector<int>& K,
                           const std::vector<int>& universe) {
  std::vector<char> in_k(graph.nodes.size(), 0);
  std::vector<char> in_u(graph.nodes.size(), 0);
  for (int k : K) in_k.at(static_cast<std::size_t>(k)) = 1;
  for (int u : universe) in_u.at(static_cast<std::size_t>(u)) = 1;
  for (int k : K)
    if (!in_u[static_cast<std::size_t>(k)])
      throw PreconditionError("invariance query with K outside the universe");
  for (int r : reach(graph, K).reached)
    if (in_u[static_cast<std::size_t>(r)] && !in_k[static_cast<std::size_t>(r)]) return false;
  return true;
}

bool is_invariant_relative(const Hypergraph& graph, Subset K, Subset universe) {
  if (!K.is_subset_of(universe))
    throw PreconditionError("invariance query with K outside the universe");
  return (reach(graph, K).states & universe).is_subset_of(K);
}

std::string export_dot(const Hypergraph& graph) {
  std::ostringstream os;
  auto quoted = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  os << "digraph hypergraph {\n  rankdir=LR;\n";
  for (std::size_t k = 0; k < graph.nodes.size(); ++k) {
    const char* shape = "circle";
    switch (graph.nodes[k].kind) {
      case NodeKind::State: shape = "circle"; break;
      case NodeKind::Prime: shape = "doublecircle"; break;
      case NodeKind::MinNode: shape = "box"; break;
      case NodeKind::MinMaxNode: shape = "diamond"; break;
    }
    os << "  n" << k << " [label=" << quoted(graph.labels[k]) << ", shape=" << shape << "];\n";
  }
  for (std::size_t e = 0; e < graph.arcs.size(); ++e) {
    const auto& arc = graph.arcs[e];
    if (arc.tail.size() == 1) {
      for (int h : arc.head) os << "  n" << arc.tail.front() << " -> n" << h << ";\n";
      continue;
    }
    os << "  j" << e << " [shape=point, label=\"\"];\n";
    for (int t : arc.tail) os << "  n" << t << " -> j" << e << " [arrowhead=none];\n";
    for (int h : arc.head) os << "  j" << e << " -> n" << h << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string export_json(const Hypergraph& graph) {
  using nlohmann::json;
  json nodes = json::array();
  for (std::size_t k = 0; k < graph.nodes.size(); ++k) {
    const Node& node = graph.nodes[k];
    const char* kind = "state";
    switch (node.kind) {
      case NodeKind::State: kind = "state"; break;
      case NodeKind::Prime: kind = "prime"; break;
      case NodeKind::MinNode: kind = "min"; break;
      case NodeKind::MinMaxNode: kind = "min_max"; break;
    }
    json j{{"id", k}, {"kind", kind}, {"label", graph.labels[k]}, {"state", node.state}};
    if (node.min_action >= 0) j["min_action"] = node.min_action;
    if (node.max_action >= 0) j["max_action"] = node.max_action;
    nodes.push_back(j);
  }
  json arcs = json::array();
  for (const auto& e : graph.arcs) arcs.push_back({{"tail", e.tail}, {"head", e.head}});
  json doc{{"nodes", nodes}, {"arcs", arcs}, {"size", graph.size()}};
  return doc.dump(2) + "\n";
}

}  // namespace ergo
