#include "ergo/game.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ergo/errors.hpp"

namespace ergo {

using nlohmann::json;

namespace {

std::pair<int, int> line_and_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  // nlohmann reports the number of bytes consumed, so the offending byte is byte-1.
  std::size_t end = byte == 0 ? 0 : std::min(byte - 1, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw InputError("schema violation at " + path + ": " + what);
}

double parse_probability(const json& value, const std::string& path) {
  double p = 0.0;
  if (value.is_number()) {
    p = value.get<double>();
  } else if (value.is_string()) {
    const auto text = value.get<std::string>();
    const auto slash = text.find('/');
    auto to_double = [&](std::string_view s) {
      double out = 0.0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        schema_error(path, "malformed probability \"" + text + "\"");
      return out;
    };
    if (slash == std::string::npos) {
      p = to_double(text);
    } else {
      const double num = to_double(std::string_view(text).substr(0, slash));
      const double den = to_double(std::string_view(text).substr(slash + 1));
      if (den == 0.0) schema_error(path, "zero denominator in \"" + text + "\"");
      p = num / den;
    }
  } else {
    schema_error(path, "probability must be a number or a \"p/q\" string");
  }
  if (!std::isfinite(p)) schema_error(path, "probability is not finite");
  if (p < 0.0) throw InputError("negative probability at " + path);
  if (p > 1.0 + kRowSumTolerance) schema_error(path, "probability exceeds 1");
  return p;
}

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string format_number(double x) {
  json j = x;
  return j.dump();
}

}  // namespace

int GameSpec::state_index(std::string_view label) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == label) return static_cast<int>(i);
  throw InputError("unknown state label \"" + std::string(label) + "\"");
}

void GameSpec::validate() const {
  const int n = size();
  if (n == 0) throw InputError("game has no states");
  if (n > kMaxStates)
    throw InputError("game has " + std::to_string(n) + " states; at most " +
                     std::to_string(kMaxStates) + " are supported");
  if (static_cast<int>(dynamics.size()) != n)
    throw InputError("dynamics must list every state");
  for (int i = 0; i < n; ++i) {
    const auto& state = states[static_cast<std::size_t>(i)];
    const auto& actions = dynamics[static_cast<std::size_t>(i)];
    if (actions.empty()) throw InputError("state \"" + state + "\" has no MIN action");
    for (const auto& a : actions) {
      if (a.max_actions.empty())
        throw InputError("state \"" + state + "\", action \"" + a.label + "\" has no MAX action");
      for (const auto& b : a.max_actions) {
        const std::string where = "state \"" + state + "\", actions \"" + a.label + "\"/\"" +
                                  b.label + "\"";
        if (!std::isfinite(b.payment)) throw InputError("non-finite payment at " + where);
        double sum = 0.0;
        for (const auto& t : b.transition) {
          if (t.state < 0 || t.state >= n) throw InputError("successor out of range at " + where);
          if (t.prob < 0.0) throw InputError("negative probability at " + where);
          sum += t.prob;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance)
          throw InputError("stochasticity violation at " + where + ": row sums to " +
                           format_number(sum));
      }
    }
  }
}

double GameSpec::max_abs_payment() const {
  double c = 0.0;
  for (const auto& actions : dynamics)
    for (const auto& a : actions)
      for (const auto& b : a.max_actions) c = std::max(c, std::abs(b.payment));
  return c;
}

int SupportSpec::m1() const {
  int m = 0;
  for (const auto& s : successors) m += static_cast<int>(s.size());
  return m;
}

int SupportSpec::m2() const {
  int m = 0;
  for (const auto& s : successors)
    for (const auto& a : s) m += static_cast<int>(a.size());
  return m;
}

int SupportSpec::max_actions() const {
  std::size_t m = 0;
  for (const auto& s : successors) {
    m = std::max(m, s.size());
    for (const auto& a : s) m = std::max(m, a.size());
  }
  return static_cast<int>(m);
}

GameSpec parse_game(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    auto [line, column] = line_and_column(document, e.byte);
    throw InputError("syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + e.what(),
                     line, column);
  }
  if (!doc.is_object()) schema_error("$", "document must be an object");

  GameSpec game;
  const auto& states = require(doc, "states", "$");
  if (!states.is_array() || states.empty()) schema_error("$.states", "must be a nonempty array");
  for (const auto& s : states) {
    if (!s.is_string()) schema_error("$.states", "state labels must be strings");
    const auto label = s.get<std::string>();
    if (std::find(game.states.begin(), game.states.end(), label) != game.states.end())
      schema_error("$.states", "duplicate state label \"" + label + "\"");
    game.states.push_back(label);
  }
  if (game.size() > kMaxStates)
    schema_error("$.states", "at most " + std::to_string(kMaxStates) + " states are supported");

  if (auto it = doc.find("order"); it != doc.end()) {
    if (*it == "min-max") {
      game.order = Order::MinMax;
    } else if (*it == "max-min") {
      game.order = Order::MaxMin;
    } else {
      schema_error("$.order", "expected \"min-max\" or \"max-min\"");
    }
  }

  const auto& dynamics = require(doc, "dynamics", "$");
  if (!dynamics.is_object()) schema_error("$.dynamics", "must be an object");
  for (const auto& [key, _] : dynamics.items()) {
    if (std::find(game.states.begin(), game.states.end(), key) == game.states.end())
      schema_error("$.dynamics", "unknown state label \"" + key + "\"");
  }

  game.dynamics.resize(game.states.size());
  for (std::size_t i = 0; i < game.states.size(); ++i) {
    const auto& label = game.states[i];
    const std::string spath = "$.dynamics." + label;
    auto it = dynamics.find(label);
    if (it == dynamics.end()) schema_error("$.dynamics", "missing state \"" + label + "\"");
    if (!it->is_object() || it->empty()) schema_error(spath, "must be a nonempty object of MIN actions");
    for (const auto& [alabel, aval] : it->items()) {
      const std::string apath = spath + "." + alabel;
      if (!aval.is_object() || aval.empty())
        schema_error(apath, "must be a nonempty object of MAX actions");
      MinActionSpec a{alabel, {}};
      for (const auto& [blabel, bval] : aval.items()) {
        const std::string bpath = apath + "." + blabel;
        if (!bval.is_object()) schema_error(bpath, "must be an object");
        MaxActionSpec b;
        b.label = blabel;
        const auto& pay = require(bval, "payment", bpath);
        if (!pay.is_number()) schema_error(bpath + ".payment", "must be a number");
        b.payment = pay.get<double>();
        const auto& tr = require(bval, "transition", bpath);
        if (!tr.is_object() || tr.empty())
          schema_error(bpath + ".transition", "must be a nonempty object");
        double sum = 0.0;
        for (const auto& [jlabel, pval] : tr.items()) {
          const std::string tpath = bpath + ".transition." + jlabel;
          auto pos = std::find(game.states.begin(), game.states.end(), jlabel);
          if (pos == game.states.end())
            schema_error(tpath, "unknown state label \"" + jlabel + "\"");
          const double p = parse_probability(pval, tpath);
          sum += p;
          if (p > 0.0)
            b.transition.push_back({static_cast<int>(pos - game.states.begin()), p});
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance)
          throw InputError("stochasticity violation at " + bpath + ".transition: row sums to " +
                           format_number(sum));
        std::sort(b.transition.begin(), b.transition.end(),
                  [](const Transition& x, const Transition& y) { return x.state < y.state; });
        a.max_actions.push_back(std::move(b));
      }
      game.dynamics[i].push_back(std::move(a));
    }
  }
  game.validate();
  return game;
}

GameSpec load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read file \"" + path + "\"");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_game(buffer.str());
}

std::string serialize_game(const GameSpec& game) {
  json doc;
  doc["states"] = game.states;
  json dyn = json::object();
  for (std::size_t i = 0; i < game.states.size(); ++i) {
    json state = json::object();
    for (const auto& a : game.dynamics[i]) {
      json aj = json::object();
      for (const auto& b : a.max_actions) {
        json tr = json::object();
        for (const auto& t : b.transition)
          tr[game.states[static_cast<std::size_t>(t.state)]] = t.prob;
        aj[b.label] = json{{"payment", b.payment}, {"transition", tr}};
      }
      state[a.label] = aj;
    }
    dyn[game.states[i]] = state;
  }
  doc["dynamics"] = dyn;
  if (game.order == Order::MaxMin) doc["order"] = "max-min";
  return doc.dump(2) + "\n";
}

SupportExtraction extract_support_checked(const GameSpec& game) {
  SupportExtraction out;
  auto& sup = out.support;
  sup.n = game.size();
  sup.order = game.order;
  sup.successors.resize(game.dynamics.size());
  for (std::size_t i = 0; i < game.dynamics.size(); ++i) {
    const auto& actions = game.dynamics[i];
    auto& rows = sup.successors[i];
    rows.resize(actions.size());
    for (std::size_t a = 0; a < actions.size(); ++a) {
      for (std::size_t b = 0; b < actions[a].max_actions.size(); ++b) {
        Subset succ;
        for (const auto& t : actions[a].max_actions[b].transition) {
          if (t.prob > kSupportThreshold) {
            succ.insert(t.state);
          } else if (t.prob > 0.0) {
            out.warnings.push_back({static_cast<int>(i), static_cast<int>(a),
                                    static_cast<int>(b), t.state, t.prob});
          }
        }
        if (succ.is_empty())
          throw InputError("degenerate transition row at state \"" + game.states[i] +
                           "\", actions \"" + actions[a].label + "\"/\"" +
                           actions[a].max_actions[b].label + "\": empty support");
        rows[a].push_back(succ);
      }
    }
  }
  return out;
}

SupportSpec extract_support(const GameSpec& game) { return extract_support_checked(game).support; }

GameSpec perturb_payments(const GameSpec& game, const std::vector<double>& g) {
  if (static_cast<int>(g.size()) != game.size())
    throw PreconditionError("perturbation has length " + std::to_string(g.size()) +
                            ", expected " + std::to_string(game.size()));
  GameSpec out = game;
  for (std::size_t i = 0; i < out.dynamics.size(); ++i)
    for (auto& a : out.dynamics[i])
      for (auto& b : a.max_actions) b.payment += g[i];
  return out;
}

GameSpec payment_free(const GameSpec& game) {
  GameSpec out = game;
  for (auto& actions : out.dynamics)
    for (auto& a : actions)
      for (auto& b : a.max_actions) b.payment = 0.0;
  return out;
}

GameSpec conjugate(const GameSpec& game) {
  GameSpec out = game;
  out.order = flipped(game.order);
  for (auto& actions : out.dynamics)
    for (auto& a : actions)
      for (auto& b : a.max_actions) b.payment = -b.payment;
  return out;
}

GameSpec chain_game(const std::vector<std::vector<double>>& P,
                    const std::vector<double>& payments) {
  GameSpec game;
  const std::size_t n = P.size();
  for (std::size_t i = 0; i < n; ++i) game.states.push_back(std::to_string(i + 1));
  game.dynamics.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    MaxActionSpec b{"b", payments.empty() ? 0.0 : payments.at(i), {}};
    for (std::size_t j = 0; j < P[i].size(); ++j)
      if (P[i][j] > 0.0) b.transition.push_back({static_cast<int>(j), P[i][j]});
    game.dynamics[i].push_back(MinActionSpec{"a", {b}});
  }
  game.validate();
  return game;
}

GameSpec uniform_game(const SupportSpec& support) {
  GameSpec game;
  game.order = support.order;
  for (int i = 0; i < support.n; ++i) game.states.push_back(std::to_string(i + 1));
  game.dynamics.resize(static_cast<std::size_t>(support.n));
  for (std::size_t i = 0; i < support.successors.size(); ++i) {
    const auto& rows = support.successors[i];
    for (std::size_t a = 0; a < rows.size(); ++a) {
      MinActionSpec act{"a" + std::to_string(a + 1), {}};
      for (std::size_t b = 0; b < rows[a].size(); ++b) {
        const std::vector<int> succ = rows[a][b].indices();
        MaxActionSpec reply{"b" + std::to_string(b + 1), 0.0, {}};
        for (int j : succ) reply.transition.push_back({j, 1.0 / static_cast<double>(succ.size())});
        act.max_actions.push_back(std::move(reply));
      }
      game.dynamics[i].push_back(std::move(act));
    }
  }
  game.validate();
  return game;
}

std::vector<int> parse_state_list(const GameSpec& game, std::string_view csv) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    auto comma = csv.find(',', pos);
    if (comma == std::string_view::npos) comma = csv.size();
    auto token = csv.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) out.push_back(game.state_index(token));
    pos = comma + 1;
  }
  return out;
}

Subset parse_state_set(const GameSpec& game, std::string_view csv) {
  return Subset::from_indices(parse_state_list(game, csv));
}

std::vector<std::string> state_labels(const GameSpec& game, Subset s) {
  std::vector<std::string> out;
  for (int i : s.indices()) out.push_back(game.states.at(static_cast<std::size_t>(i)));
  return out;
}

Policy default_policy(const GameSpec& game) {
  Policy p;
  p.min_policy.assign(game.dynamics.size(), 0);
  for (const auto& actions : game.dynamics) p.max_policy.emplace_back(actions.size(), 0);
  return p;
}

Policy parse_policy(const GameSpec& game, std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    auto [line, column] = line_and_column(document, e.byte);
    throw InputError("syntax error in policy at line " + std::to_string(line) + ", column " +
                         std::to_string(column),
                     line, column);
  }
  Policy p = default_policy(game);
  auto min_index = [&](int i, const std::string& label) {
    const auto& actions = game.dynamics[static_cast<std::size_t>(i)];
    for (std::size_t a = 0; a < actions.size(); ++a)
      if (actions[a].label == label) return static_cast<int>(a);
    throw InputError("unknown MIN action \"" + label + "\" at state \"" +
                     game.states[static_cast<std::size_t>(i)] + "\"");
  };
  if (auto it = doc.find("min"); it != doc.end()) {
    for (const auto& [state, action] : it->items()) {
      const int i = game.state_index(state);
      p.min_policy[static_cast<std::size_t>(i)] = min_index(i, action.get<std::string>());
    }
  }
  if (auto it = doc.find("max"); it != doc.end()) {
    for (const auto& [state, per_action] : it->items()) {
      const int i = game.state_index(state);
      for (const auto& [alabel, blabel] : per_action.items()) {
        const int a = min_index(i, alabel);
        const auto& bs = game.dynamics[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)]
                             .max_actions;
        auto pos = std::find_if(bs.begin(), bs.end(),
                                [&](const MaxActionSpec& b) { return b.label == blabel; });
        if (pos == bs.end())
          throw InputError("unknown MAX action \"" + blabel.get<std::string>() + "\" at state \"" +
                           state + "\"");
        p.max_policy[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] =
            static_cast<int>(pos - bs.begin());
      }
    }
  }
  return p;
}

void validate_policy(const GameSpec& game, const Policy& policy) {
  if (policy.min_policy.size() != game.dynamics.size() ||
      policy.max_policy.size() != game.dynamics.size())
    throw PreconditionError("policy does not cover every state");
  for (std::size_t i = 0; i < game.dynamics.size(); ++i) {
    const auto& actions = game.dynamics[i];
    const int a = policy.min_policy[i];
    if (a < 0 || a >= static_cast<int>(actions.size()))
      throw PreconditionError("invalid MIN action in policy at state " + game.states[i]);
    if (policy.max_policy[i].size() != actions.size())
      throw PreconditionError("MAX policy does not cover every MIN action at state " +
                              game.states[i]);
    for (std::size_t k = 0; k < actions.size(); ++k) {
      const int b = policy.max_policy[i][k];
      if (b < 0 || b >= static_cast<int>(actions[k].max_actions.size()))
        throw PreconditionError("invalid MAX action in policy at state " + game.states[i]);
    }
  }
}

std::vector<int> Trajectory::visited_states() const {
  std::vector<int> out;
  out.reserve(steps.size() + 1);
  for (const auto& s : steps) out.push_back(s.state);
  out.push_back(final_state);
  return out;
}

Trajectory simulate(const GameSpec& game, const Policy& policies, int start, int horizon,
                    std::uint64_t seed) {
  if (start < 0 || start >= game.size()) throw PreconditionError("invalid start state");
  if (horizon < 0) throw PreconditionError("horizon must be nonnegative");
  validate_policy(game, policies);

  std::mt19937_64 rng(seed);
  Trajectory traj;
  traj.seed = seed;
  traj.steps.reserve(static_cast<std::size_t>(horizon));
  int state = start;
  for (int step = 0; step < horizon; ++step) {
    const auto i = static_cast<std::size_t>(state);
    const int a = policies.min_policy[i];
    const int b = policies.max_policy[i][static_cast<std::size_t>(a)];
    const auto& row = game.dynamics[i][static_cast<std::size_t>(a)]
                          .max_actions[static_cast<std::size_t>(b)];
    traj.steps.push_back({state, a, b, row.payment});
    traj.total_payoff += row.payment;

    // 53 random bits; the inverse-CDF walk is spelled out so that the
    // trajectory does not depend on the standard library's distributions.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double acc = 0.0;
    int next = -1;
    for (const auto& t : row.transition) {
      if (t.prob <= kSupportThreshold) continue;
      next = t.state;
      acc += t.prob;
      if (u < acc) break;
    }
    state = next;
  }
  traj.final_state = state;
  return traj;
}

}  // namespace ergo
