#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ergo/cli.hpp"
#include "ergo/shapley.hpp"
#include "ergo/solver.hpp"
#include "support.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ergo::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kFour = testing::fixture("four_state.json");
const std::string kThree = testing::fixture("three_state.json");
const std::string kCycle = testing::fixture("cycle2.json");
const std::string kIdentity = testing::fixture("identity2.json");

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ergo_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("validate") {
  CHECK(run({"validate", kFour}).code == ergo::cli::kExitOk);
  const Outcome j = run({"--json", "validate", kFour});
  CHECK(json::parse(j.out)["valid"] == true);
  const Outcome missing = run({"validate", "no/such/file.json"});
  CHECK(missing.code == ergo::cli::kExitInput);
  CHECK_FALSE(missing.err.empty());
  const std::string bad = write_file("bad.json", "{\"states\": [\"1\"],\n \"dynamics\": {\"1\": {\"a\": {\"b\": {\"payment\": 0, \"transition\": {\"1\": 0.5}}}}}}");
  CHECK(run({"validate", bad}).code == ergo::cli::kExitInput);
  const std::string broken = write_file("broken.json", "{\n  \"states\": [\n");
  const Outcome b = run({"validate", broken});
  CHECK(b.code == ergo::cli::kExitInput);
  CHECK(b.err.find("line") != std::string::npos);
}

TEST_CASE("argument errors") {
  CHECK(run({}).code == ergo::cli::kExitInput);
  CHECK(run({"frobnicate", kFour}).code == ergo::cli::kExitInput);
  CHECK(run({"apply", kFour}).code == ergo::cli::kExitInput);
  CHECK(run({"apply", kFour, "--vec", "1,2"}).code == ergo::cli::kExitInput);
  CHECK(run({"apply", kFour, "--vec", "1,x,2,3"}).code == ergo::cli::kExitInput);
  CHECK(run({"galois", kFour, "--set", "9"}).code == ergo::cli::kExitInput);
  CHECK(run({"fixed-point", kFour, "--argmin", "1,2", "--argmax", "2"}).code == ergo::cli::kExitInput);
  CHECK(run({"markov", kFour}).code == ergo::cli::kExitInput);
}

TEST_CASE("apply and iterate") {
  CHECK(run({"apply", kThree, "--vec", "0,1,1", "--recession"}).out == "0.5,0,1\n");
  CHECK(run({"apply", kFour, "--vec", "0,0,0.5,1", "--recession"}).out == "0,0,0.5,1\n");
  CHECK(run({"apply", kFour, "--vec", "1,1,0.5,0", "--recession", "--dual"}).out == "1,1,0.5,0\n");
  CHECK(run({"iterate", kCycle, "-k", "4"}).out == "2,2\n");
  const json m = json::parse(run({"--json", "iterate", kFour, "-k", "3000", "--mean-payoff"}).out);
  for (double x : m["mean_payoff"]) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(2e-3));
}

TEST_CASE("numeric failure exit code") {
  const std::string huge = write_file(
      "huge.json",
      R"({"states": ["1"], "dynamics": {"1": {"a": {"b": {"payment": 1e308, "transition": {"1": 1}}}}}})");
  const Outcome o = run({"iterate", huge, "-k", "5"});
  CHECK(o.code == ergo::cli::kExitNumeric);
  CHECK(o.err.find("numeric failure") != std::string::npos);
}

TEST_CASE("ergodic verdicts and certificates") {
  const Outcome o = run({"ergodic", kFour, "--witness"});
  CHECK(o.code == ergo::cli::kExitNo);
  CHECK(o.out.find("I = {1,2}, J = {4}") != std::string::npos);
  const json doc = json::parse(run({"--json", "ergodic", kFour, "--witness"}).out);
  CHECK(doc["verdict"] == "not-ergodic");
  CHECK(doc["witness"]["I"] == json::array({"1", "2"}));
  CHECK(doc["witness"]["J"] == json::array({"4"}));
  // Offline re-verification of the certificate.
  const ergo::GameSpec g = ergo::load_game(kFour);
  const ergo::ValueVector u = doc["fixed_point"].get<ergo::ValueVector>();
  CHECK(ergo::fixed_point_residual(g, u) <= 1e-8);
  CHECK(doc["residual"].get<double>() <= 1e-8);
  CHECK(ergo::argmin_set(u) == ergo::Subset{0, 1});
  CHECK(ergo::argmax_set(u) == ergo::Subset{3});

  const json cyc = json::parse(run({"--json", "ergodic", kCycle}).out);
  CHECK(cyc["verdict"] == "ergodic");
  CHECK(cyc["witness"].is_null());
  CHECK(run({"ergodic", kCycle}).code == ergo::cli::kExitOk);
  CHECK(run({"--jobs", "3", "ergodic", kIdentity}).code == ergo::cli::kExitNo);
  CHECK(run({"--debug-crosscheck", "ergodic", kFour}).code == ergo::cli::kExitNo);
}

TEST_CASE("galois and lattices") {
  CHECK(run({"galois", kFour, "--set", "1"}).out.find("{4}") != std::string::npos);
  const json d = json::parse(run({"--json", "galois", kFour, "--set", "4", "--dual"}).out);
  CHECK(d.dump().find("\"1\",\"2\"") != std::string::npos);
  const json lat = json::parse(run({"--json", "lattices", kFour}).out);
  CHECK(lat["lower"].size() == 4);
  CHECK(lat["conjugate_pairs"].size() == 1);
}

TEST_CASE("fixed-point subcommand") {
  const Outcome no = run({"fixed-point", kFour, "--argmin", "1", "--trail"});
  CHECK(no.code == ergo::cli::kExitNo);
  CHECK(no.out.find("-> reduce") != std::string::npos);
  CHECK(no.out.find("no:phi_empty") != std::string::npos);
  const Outcome yes = run({"--json", "fixed-point", kFour, "--argmin", "1,2", "--construct"});
  CHECK(yes.code == ergo::cli::kExitOk);
  const json doc = json::parse(yes.out);
  CHECK(doc["answer"] == "yes");
  const ergo::ValueVector u = doc["witness"].get<ergo::ValueVector>();
  CHECK(ergo::fixed_point_residual(ergo::load_game(kFour), u) <= 1e-8);
  CHECK(ergo::argmin_set(u) == ergo::Subset{0, 1});
  CHECK(run({"fixed-point", kFour, "--argmin", "1,2", "--argmax", "4"}).code == ergo::cli::kExitOk);
  const json t = json::parse(run({"--json", "fixed-point", kFour, "--argmin", "1", "--trail"}).out);
  CHECK(t["trail"].size() == 2);
}

TEST_CASE("hypergraph export") {
  const fs::path dot = scratch("plus.dot");
  fs::remove(dot);
  CHECK(run({"hypergraph", kThree, "--which", "plus", "--dot", dot.string()}).code == ergo::cli::kExitOk);
  std::ifstream in(dot);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().rfind("digraph", 0) == 0);
  CHECK(run({"hypergraph", kThree, "--which", "minus", "--merged", "--dot", dot.string()}).code == ergo::cli::kExitOk);
  CHECK(run({"hypergraph", kThree, "--which", "sideways", "--dot", dot.string()}).code == ergo::cli::kExitInput);
  CHECK(run({"hypergraph", kThree, "--which", "plus", "--dot", "/no/such/dir/x.dot"}).code == ergo::cli::kExitInput);
}

TEST_CASE("markov and simulate") {
  CHECK(run({"markov", kCycle}).code == ergo::cli::kExitOk);
  const Outcome id = run({"--json", "markov", kIdentity});
  CHECK(id.code == ergo::cli::kExitNo);
  CHECK(json::parse(id.out)["final_classes"].size() == 2);
  const Outcome s = run({"simulate", kCycle, "--start", "1", "--steps", "3", "--seed", "4"});
  CHECK(s.code == ergo::cli::kExitOk);
  CHECK(s.out.find("total payoff: 2") != std::string::npos);
  CHECK(run({"simulate", kCycle, "--steps", "3"}).code == ergo::cli::kExitInput);
}

TEST_CASE("output is byte-identical across runs") {
  const std::vector<std::vector<std::string>> commands = {
      {"--json", "ergodic", kFour, "--witness"},
      {"ergodic", kFour, "--witness"},
      {"--json", "lattices", kFour},
      {"--json", "fixed-point", kFour, "--argmin", "1,2", "--argmax", "4", "--construct", "--trail"},
      {"--json", "simulate", kFour, "--start", "2", "--steps", "50", "--seed", "11"},
      {"--json", "--jobs", "4", "ergodic", kThree, "--witness"},
  };
  for (const auto& c : commands) {
    const Outcome a = run(c), b = run(c);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
}
