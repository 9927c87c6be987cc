#include "ergo/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ergo/boolean.hpp"
#include "ergo/errors.hpp"
#include "ergo/galois.hpp"
#include "ergo/hypergraph.hpp"
#include "ergo/markov.hpp"
#include "ergo/shapley.hpp"
#include "ergo/solver.hpp"

namespace ergo::cli {

namespace {

using nlohmann::json;

struct Globals {
  bool json_output = false;
  bool guard_override = false;
  bool debug_crosscheck = false;
  int jobs = 1;
};

std::string number(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string vector_text(const ValueVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + number(v[i]);
  return s;
}

std::string set_text(const GameSpec& game, Subset s) {
  std::string out = "{";
  const auto labels = state_labels(game, s);
  for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? "," : "") + labels[i];
  return out + "}";
}

json set_json(const GameSpec& game, Subset s) { return state_labels(game, s); }

const ValueVector& require_finite(const ValueVector& v) {
  for (double x : v)
    if (!std::isfinite(x)) throw NumericError("value overflowed to a non-finite number");
  return v;
}

json vector_json(const ValueVector& v) {
  json a = json::array();
  for (double x : v) a.push_back(x == 0.0 ? 0.0 : x);
  return a;
}

ValueVector parse_vector(const GameSpec& game, const std::string& text) {
  ValueVector v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string token = text.substr(pos, comma - pos);
    const auto first = token.find_first_not_of(' ');
    const auto last = token.find_last_not_of(' ');
    token = first == std::string::npos ? "" : token.substr(first, last - first + 1);
    double x = 0.0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), x);
    if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size())
      throw InputError("bad vector entry \"" + token + "\"");
    v.push_back(x);
    pos = comma + 1;
  }
  if (v.size() != static_cast<std::size_t>(game.size()))
    throw InputError("vector has " + std::to_string(v.size()) + " entries, game has " +
                     std::to_string(game.size()) + " states");
  return v;
}

void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << "\n"; }

json trail_json(const GameSpec& game, const std::vector<TrailStep>& trail) {
  json steps = json::array();
  for (const auto& s : trail) {
    json j{{"carrier", set_json(game, s.carrier)},
           {"target", set_json(game, s.target)},
           {"f_plus_fixed", s.f_plus_fixed},
           {"outcome", s.outcome},
           {"actions_kept", s.actions_kept}};
    j["phi"] = s.phi ? set_json(game, *s.phi) : json(nullptr);
    j["closure"] = s.closure ? set_json(game, *s.closure) : json(nullptr);
    steps.push_back(j);
  }
  return steps;
}

void print_trail(std::ostream& out, const GameSpec& game, const std::vector<TrailStep>& trail,
                 const std::string& title) {
  out << title << ":\n";
  for (std::size_t k = 0; k < trail.size(); ++k) {
    const auto& s = trail[k];
    out << "  step " << k + 1 << ": carrier " << set_text(game, s.carrier) << ", target "
        << set_text(game, s.target) << ", actions " << s.actions_kept;
    if (s.phi) out << ", phi " << set_text(game, *s.phi);
    if (s.closure) out << ", closure " << set_text(game, *s.closure);
    out << " -> " << s.outcome << "\n";
  }
}

ErgodicityOptions ergodicity_options(const Globals& g) {
  ErgodicityOptions o;
  o.guard_override = g.guard_override;
  o.debug_crosscheck = g.debug_crosscheck;
  o.jobs = g.jobs;
  return o;
}

int cmd_validate(const GameSpec& game, const Globals& g, bool canonical, std::ostream& out,
                 std::ostream& err) {
  const SupportExtraction ex = extract_support_checked(game);
  if (canonical) {
    out << serialize_game(game);
    return kExitOk;
  }
  if (g.json_output) {
    json warnings = json::array();
    for (const auto& w : ex.warnings)
      warnings.push_back({{"state", game.states[static_cast<std::size_t>(w.state)]},
                          {"successor", game.states[static_cast<std::size_t>(w.successor)]},
                          {"probability", w.prob}});
    emit(out, {{"valid", true},
               {"states", game.size()},
               {"order", game.order == Order::MinMax ? "min-max" : "max-min"},
               {"warnings", warnings}});
    return kExitOk;
  }
  for (const auto& w : ex.warnings)
    err << "warning: transition " << game.states[static_cast<std::size_t>(w.state)] << " -> "
        << game.states[static_cast<std::size_t>(w.successor)] << " has probability "
        << number(w.prob) << ", dropped from the support\n";
  out << "valid: " << game.size() << " states, max |payment| " << number(game.max_abs_payment())
      << "\n";
  return kExitOk;
}

int cmd_apply(const GameSpec& game, const Globals& g, const std::string& vec, bool recession,
              bool dual, std::ostream& out) {
  const ValueVector x = parse_vector(game, vec);
  const Operator op = recession ? recession_operator(game) : shapley_operator(game);
  const ValueVector y = require_finite(dual ? dual_operator(x, op) : op(x));
  if (g.json_output)
    emit(out, {{"input", vector_json(x)}, {"output", vector_json(y)}});
  else
    out << vector_text(y) << "\n";
  return kExitOk;
}

int cmd_iterate(const GameSpec& game, const Globals& g, int k, bool mean_payoff, std::ostream& out) {
  if (k < 0) throw InputError("-k must be nonnegative");
  if (mean_payoff) {
    if (k == 0) throw InputError("--mean-payoff needs k >= 1");
    const ValueVector m = require_finite(mean_payoff_at(game, k));
    if (g.json_output)
      emit(out, {{"k", k}, {"mean_payoff", vector_json(m)}, {"spread", spread(m)}});
    else
      out << vector_text(m) << "\n";
    return kExitOk;
  }
  const ValueVector v =
      require_finite(value_iteration(game, k, ValueVector(static_cast<std::size_t>(game.size()), 0.0)));
  if (g.json_output)
    emit(out, {{"k", k}, {"value", vector_json(v)}});
  else
    out << vector_text(v) << "\n";
  return kExitOk;
}

int cmd_ergodic(const GameSpec& game, const Globals& g, bool witness, std::ostream& out) {
  ErgodicityOptions opts = ergodicity_options(g);
  opts.want_fixed_point = witness;
  const ErgodicityReport r = is_ergodic(game, opts);
  if (g.json_output) {
    json doc{{"verdict", r.ergodic ? "ergodic" : "not-ergodic"},
             {"stats", {{"subsets_examined", r.stats.subsets_examined}}}};
    doc["witness"] = r.witness ? json{{"I", set_json(game, r.witness->first)},
                                      {"J", set_json(game, r.witness->second)}}
                               : json(nullptr);
    if (r.fixed_point_witness) {
      doc["fixed_point"] = vector_json(*r.fixed_point_witness);
      doc["residual"] = fixed_point_residual(game, *r.fixed_point_witness);
    } else {
      doc["fixed_point"] = nullptr;
    }
    emit(out, doc);
  } else {
    out << "verdict: " << (r.ergodic ? "ergodic" : "not-ergodic") << "\n";
    if (r.witness)
      out << "witness: I = " << set_text(game, r.witness->first)
          << ", J = " << set_text(game, r.witness->second) << "\n";
    if (r.fixed_point_witness)
      out << "fixed point: " << vector_text(*r.fixed_point_witness) << " (residual "
          << number(fixed_point_residual(game, *r.fixed_point_witness)) << ")\n";
    out << "subsets examined: " << r.stats.subsets_examined << "\n";
  }
  return r.ergodic ? kExitOk : kExitNo;
}

int cmd_galois(const GameSpec& game, const Globals& g, const std::string& set, bool dual,
               std::ostream& out) {
  const GaloisConnection galois(extract_support(game), g.debug_crosscheck);
  const Subset s = parse_state_set(game, set);
  const Subset image = dual ? galois.phi_star(s) : galois.phi(s);
  std::optional<Subset> closed;
  if (!image.is_empty()) closed = dual ? galois.phi(image) : galois.phi_star(image);
  const char* name = dual ? "phi_star" : "phi";
  if (g.json_output) {
    json doc{{"set", set_json(game, s)}, {name, set_json(game, image)}};
    doc["closure"] = closed ? set_json(game, *closed) : json(nullptr);
    emit(out, doc);
  } else {
    out << name << set_text(game, s) << " = " << set_text(game, image) << "\n";
    if (closed) out << "closure: " << set_text(game, *closed) << "\n";
  }
  return kExitOk;
}

int cmd_lattices(const GameSpec& game, const Globals& g, std::ostream& out) {
  const SupportSpec support = extract_support(game);
  const int guard = g.guard_override ? kMaxStates : kEnumerationGuard;
  const LatticePair lat = enumerate_lattices(support, guard);
  const auto pairs = conjugate_pairs(support, guard);
  if (g.json_output) {
    json lower = json::array(), upper = json::array(), conj = json::array();
    for (Subset s : lat.lower) lower.push_back(set_json(game, s));
    for (Subset s : lat.upper) upper.push_back(set_json(game, s));
    for (const auto& [I, J] : pairs) conj.push_back({{"I", set_json(game, I)}, {"J", set_json(game, J)}});
    emit(out, {{"lower", lower}, {"upper", upper}, {"conjugate_pairs", conj}});
    return kExitOk;
  }
  out << "lower:";
  for (Subset s : lat.lower) out << " " << set_text(game, s);
  out << "\nupper:";
  for (Subset s : lat.upper) out << " " << set_text(game, s);
  out << "\nconjugate pairs:";
  for (const auto& [I, J] : pairs) out << " (" << set_text(game, I) << ", " << set_text(game, J) << ")";
  out << "\n";
  return kExitOk;
}

int cmd_fixed_point(const GameSpec& game, const Globals& g, const std::string& argmin,
                    const std::string& argmax, bool construct, bool trail, std::ostream& out) {
  const Subset I = parse_state_set(game, argmin);
  IMinAnswer ans;
  std::optional<Subset> J;
  if (argmax.empty()) {
    ans = solve_i_min(game, I, construct);
  } else {
    J = parse_state_set(game, argmax);
    ans = solve_i_min_j_max(game, I, *J, construct);
  }
  if (g.json_output) {
    json doc{{"answer", ans.yes ? "yes" : "no"}, {"argmin", set_json(game, I)}};
    if (J) doc["argmax"] = set_json(game, *J);
    if (ans.witness) {
      doc["witness"] = vector_json(*ans.witness);
      doc["residual"] = ans.residual;
    }
    if (trail) {
      doc["trail"] = trail_json(game, ans.trail);
      if (J) doc["dual_trail"] = trail_json(game, ans.dual_trail);
    }
    emit(out, doc);
  } else {
    out << "answer: " << (ans.yes ? "yes" : "no") << "\n";
    if (!ans.trail.empty() && !trail) out << "outcome: " << ans.trail.back().outcome << "\n";
    if (ans.witness)
      out << "witness: " << vector_text(*ans.witness) << " (residual " << number(ans.residual)
          << ")\n";
    if (trail) {
      print_trail(out, game, ans.trail, "trail");
      if (J && !ans.dual_trail.empty()) print_trail(out, game, ans.dual_trail, "argmax trail");
    }
  }
  return ans.yes ? kExitOk : kExitNo;
}

int cmd_hypergraph(const GameSpec& game, const Globals& g, const std::string& which, bool merged,
                   const std::string& dot_path, std::ostream& out) {
  const SupportSpec support = extract_support(game);
  Hypergraph graph = which == "plus" ? build_g_plus(support) : build_g_minus(support);
  if (merged) graph = merge_primes(graph);
  apply_labels(graph, game);
  std::ofstream file(dot_path);
  if (!file) throw InputError("cannot write \"" + dot_path + "\"");
  file << export_dot(graph);
  if (!file) throw InputError("failed writing \"" + dot_path + "\"");
  if (g.json_output) {
    out << export_json(graph);
  } else {
    out << "wrote " << dot_path << ": " << graph.nodes.size() << " nodes, " << graph.arcs.size()
        << " hyperarcs, size " << graph.size() << "\n";
  }
  return kExitOk;
}

int cmd_markov(const GameSpec& game, const Globals& g, std::ostream& out) {
  const ChainAnalysis c = analyze_chain(game);
  if (g.json_output) {
    json classes = json::array(), finals = json::array();
    for (Subset s : c.classes) classes.push_back(set_json(game, s));
    for (Subset s : c.final_classes) finals.push_back(set_json(game, s));
    emit(out, {{"classes", classes}, {"final_classes", finals}, {"ergodic", c.ergodic}});
  } else {
    out << "classes:";
    for (Subset s : c.classes) out << " " << set_text(game, s);
    out << "\nfinal classes:";
    for (Subset s : c.final_classes) out << " " << set_text(game, s);
    out << "\nergodic: " << (c.ergodic ? "yes" : "no") << "\n";
  }
  return c.ergodic ? kExitOk : kExitNo;
}

int cmd_simulate(const GameSpec& game, const Globals& g, const std::string& start, int steps,
                 std::uint64_t seed, const std::string& policy_path, std::ostream& out) {
  Policy policy = default_policy(game);
  if (!policy_path.empty()) {
    std::ifstream in(policy_path);
    if (!in) throw InputError("cannot read file \"" + policy_path + "\"");
    std::stringstream buffer;
    buffer << in.rdbuf();
    policy = parse_policy(game, buffer.str());
  }
  const int from = start.empty() ? 0 : game.state_index(start);
  if (steps < 0) throw InputError("--steps must be nonnegative");
  const Trajectory t = simulate(game, policy, from, steps, seed);
  auto label = [&](int i) { return game.states[static_cast<std::size_t>(i)]; };
  if (g.json_output) {
    json st = json::array();
    for (const auto& s : t.steps) {
      const auto& a = game.dynamics[static_cast<std::size_t>(s.state)][static_cast<std::size_t>(s.min_action)];
      st.push_back({{"state", label(s.state)},
                    {"min_action", a.label},
                    {"max_action", a.max_actions[static_cast<std::size_t>(s.max_action)].label},
                    {"payment", s.payment}});
    }
    emit(out, {{"seed", seed},
               {"start", label(from)},
               {"steps", st},
               {"final_state", label(t.final_state)},
               {"total_payoff", t.total_payoff}});
    return kExitOk;
  }
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    const auto& s = t.steps[k];
    const auto& a = game.dynamics[static_cast<std::size_t>(s.state)][static_cast<std::size_t>(s.min_action)];
    out << k << " " << label(s.state) << " " << a.label << " "
        << a.max_actions[static_cast<std::size_t>(s.max_action)].label << " " << number(s.payment)
        << "\n";
  }
  out << "final state: " << label(t.final_state) << "\ntotal payoff: " << number(t.total_payoff)
      << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ergodicity analysis of perfect-information zero-sum stochastic games", "ergo"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json_output, "Machine-readable JSON report");
  app.add_flag("--guard-override", g.guard_override, "Allow exponential enumeration beyond 24 states");
  app.add_flag("--debug-crosscheck", g.debug_crosscheck,
               "Cross-check hypergraph results against Boolean iteration");
  app.add_option("--jobs", g.jobs, "Worker threads for subset enumeration")->check(CLI::PositiveNumber);

  std::string path;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("game", path, "Game file (JSON)")->required();
    return sub;
  };

  bool canonical = false;
  auto* validate = add("validate", "Check a game file");
  validate->add_flag("--canonical", canonical, "Print the canonical serialization");

  std::string vec;
  bool recession = false, dual = false;
  auto* apply = add("apply", "Apply the Shapley operator to a vector");
  apply->add_option("--vec", vec, "Comma-separated vector")->required();
  apply->add_flag("--recession", recession, "Use the payment-free operator");
  apply->add_flag("--dual", dual, "Use the conjugate x -> -T(-x)");

  int k = 0;
  bool mean_payoff = false;
  auto* iterate = add("iterate", "Value iteration T^k(0)");
  iterate->add_option("-k", k, "Number of iterations")->required();
  iterate->add_flag("--mean-payoff", mean_payoff, "Report T^k(0)/k");

  bool witness = false;
  auto* ergodic = add("ergodic", "Decide ergodicity");
  ergodic->add_flag("--witness", witness, "Also compute a nontrivial fixed point");

  std::string set;
  bool galois_dual = false;
  auto* galois = add("galois", "Evaluate the Galois connection on a set");
  galois->add_option("--set", set, "Comma-separated state labels")->required();
  galois->add_flag("--dual", galois_dual, "Evaluate phi_star instead of phi");

  auto* lattices = add("lattices", "Enumerate the lower and upper lattices");

  std::string argmin, argmax;
  bool construct = false, trail = false;
  auto* fixed = add("fixed-point", "Decide whether a fixed point with given argmin/argmax exists");
  fixed->add_option("--argmin", argmin, "Required argmin set")->required();
  fixed->add_option("--argmax", argmax, "Required argmax set");
  fixed->add_flag("--construct", construct, "Construct and verify a witness vector");
  fixed->add_flag("--trail", trail, "Include the decision trail");

  std::string which, dot_path;
  bool merged = false;
  auto* hyper = add("hypergraph", "Export a hypergraph as DOT");
  hyper->add_option("--which", which, "plus or minus")->required()->check(CLI::IsMember({"plus", "minus"}));
  hyper->add_flag("--merged", merged, "Identify primed copies with states");
  hyper->add_option("--dot", dot_path, "Output DOT path")->required();

  auto* markov = add("markov", "Class structure of a zero-player game");

  std::string start, policies;
  int steps = 0;
  std::uint64_t seed = 0;
  auto* sim = add("simulate", "Simulate a play under fixed policies");
  sim->add_option("--start", start, "Start state label (default: first state)");
  sim->add_option("--steps", steps, "Number of steps")->required();
  sim->add_option("--seed", seed, "Random seed")->required();
  sim->add_option("--policies", policies, "Policy file (JSON)");

  std::vector<std::string> argv_storage{"ergo"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    const GameSpec game = load_game(path);
    if (validate->parsed()) return cmd_validate(game, g, canonical, out, err);
    if (apply->parsed()) return cmd_apply(game, g, vec, recession, dual, out);
    if (iterate->parsed()) return cmd_iterate(game, g, k, mean_payoff, out);
    if (ergodic->parsed()) return cmd_ergodic(game, g, witness, out);
    if (galois->parsed()) return cmd_galois(game, g, set, galois_dual, out);
    if (lattices->parsed()) return cmd_lattices(game, g, out);
    if (fixed->parsed()) return cmd_fixed_point(game, g, argmin, argmax, construct, trail, out);
    if (hyper->parsed()) return cmd_hypergraph(game, g, which, merged, dot_path, out);
    if (markov->parsed()) return cmd_markov(game, g, out);
    if (sim->parsed()) return cmd_simulate(game, g, start, steps, seed, policies, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const GuardError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  err << "error: no subcommand\n";
  return kExitInput;
}

}  // namespace ergo::cli
