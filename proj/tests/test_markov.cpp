#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ergo/errors.hpp"
#include "ergo/galois.hpp"
#include "ergo/markov.hpp"
#include "support.hpp"

using namespace ergo;

TEST_CASE("identity chain") {
  const GameSpec id = chain_game({{1, 0}, {0, 1}});
  const ChainAnalysis a = analyze_chain(id);
  CHECK(a.classes == std::vector<Subset>{Subset{0}, Subset{1}});
  CHECK(a.final_classes == std::vector<Subset>{Subset{0}, Subset{1}});
  CHECK_FALSE(a.ergodic);
  CHECK(spread(cesaro_average(id, {0, 1}, 1000)) == 1.0);
  CHECK_FALSE(harmonic_constant_check(id, 1000, 1e-4));
}

TEST_CASE("two-cycle") {
  const GameSpec cycle = chain_game({{0, 1}, {1, 0}});
  const ChainAnalysis a = analyze_chain(cycle);
  CHECK(a.final_classes == std::vector<Subset>{Subset{0, 1}});
  CHECK(a.ergodic);
  const ValueVector avg = cesaro_average(cycle, {1, 0}, 1000);
  CHECK(avg[0] == doctest::Approx(0.5));
  CHECK(avg[1] == doctest::Approx(0.5));
  CHECK(harmonic_constant_check(cycle, 100'000, 1e-4));
}

TEST_CASE("transient states feed one final class") {
  const GameSpec chain = chain_game({{0.5, 0.5, 0}, {0, 0, 1}, {0, 1, 0}});
  const ChainAnalysis a = analyze_chain(chain);
  CHECK(a.classes == std::vector<Subset>{Subset{0}, Subset{1, 2}});
  CHECK(a.final_classes == std::vector<Subset>{Subset{1, 2}});
  CHECK(a.ergodic);
}

TEST_CASE("games with choices are rejected") {
  const GameSpec g = load_game(testing::fixture("four_state.json"));
  CHECK_THROWS_AS(require_zero_player(g), PreconditionError);
  CHECK_THROWS_AS(analyze_chain(g), PreconditionError);
  CHECK_THROWS_AS(harmonic_constant_check(g, 10, 1e-4), PreconditionError);
  CHECK_NOTHROW(require_zero_player(chain_game({{1}})));
}

TEST_CASE("final classes match the reachability oracle") {
  testing::Rng rng(90);
  for (int t = 0; t < 300; ++t) {
    const int n = testing::uniform_int(rng, 1, 6);
    std::vector<std::vector<double>> P = testing::random_stochastic_matrix(rng, n, 0.35);
    if (t % 2 == 0) {
      // Upper-triangular rows: many small classes.
      for (int i = 0; i < n; ++i) {
        auto& row = P[static_cast<std::size_t>(i)];
        double mass = 0;
        for (int j = 0; j < i; ++j) mass += row[static_cast<std::size_t>(j)], row[static_cast<std::size_t>(j)] = 0;
        row[static_cast<std::size_t>(i)] += mass;
      }
    }
    const GameSpec chain = chain_game(P);
    const ChainAnalysis a = analyze_chain(chain);
    const auto expected = testing::naive_final_classes(extract_support(chain));
    CHECK(a.final_classes == expected);
    CHECK(a.ergodic == (expected.size() == 1));
    Subset all;
    for (Subset c : a.classes) {
      CHECK_FALSE(c.intersects(all));
      all = all | c;
    }
    CHECK(all == Subset::full(n));
  }
}

TEST_CASE("Cesaro averages agree with the combinatorial verdict") {
  testing::Rng rng(91);
  for (int t = 0; t < 200; ++t) {
    const int n = testing::uniform_int(rng, 1, 6);
    const GameSpec chain = chain_game(testing::random_stochastic_matrix(rng, n, 0.35));
    HarmonicCheckOptions opts;
    opts.seed = static_cast<std::uint64_t>(t) + 1;
    const bool verdict = harmonic_constant_check(chain, 100'000, 1e-4, opts);
    CHECK(verdict == analyze_chain(chain).ergodic);
    CHECK(verdict == is_ergodic(chain).ergodic);
    if (!verdict) {
      // Payment 1 on one final class and 0 elsewhere separates two classes.
      const auto finals = analyze_chain(chain).final_classes;
      const ValueVector avg = cesaro_average(chain, finals.front().indicator(n), 1000);
      CHECK(spread(avg) >= 1.0 - 1e-9);
    }
  }
}
