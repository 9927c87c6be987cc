#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ergo/boolean.hpp"
#include "ergo/errors.hpp"
#include "ergo/solver.hpp"
#include "support.hpp"

using namespace ergo;

namespace {

const GameSpec& four_state() {
  static const GameSpec g = load_game(testing::fixture("four_state.json"));
  return g;
}

const SupportSpec& four_support() {
  static const SupportSpec s = extract_support(four_state());
  return s;
}

SupportSpec three_support() { return extract_support(load_game(testing::fixture("three_state.json"))); }

std::vector<Subset> brute_lower(const GameSpec& g) {
  std::vector<Subset> out;
  for_each_subset(g.size(), [&](Subset I) {
    if (testing::real_h1(g, I)) out.push_back(I);
    return true;
  });
  return out;
}

std::vector<Subset> brute_upper(const GameSpec& g) {
  std::vector<Subset> out;
  for_each_subset(g.size(), [&](Subset J) {
    if (testing::real_h2(g, J)) out.push_back(J);
    return true;
  });
  return out;
}

}  // namespace

TEST_CASE("upper abstraction") {
  CHECK(f_plus(three_support(), Subset{1, 2}) == Subset{0, 2});
  CHECK(f_plus(four_support(), Subset::full(4)) == Subset::full(4));
  CHECK(f_plus(four_support(), Subset{}) == Subset{});
  CHECK(f_plus(four_support(), Subset{1, 2, 3}) == Subset{1, 2, 3});
}

TEST_CASE("lower abstraction") {
  CHECK(f_minus(four_support(), Subset{3}) == Subset{3});
  CHECK(f_minus(four_support(), Subset::full(4)) == Subset::full(4));
  CHECK(f_minus(four_support(), Subset{2, 3}) == Subset{3});
}

TEST_CASE("abstractions match the printed four-state formulas on every input") {
  for_each_subset(4, [&](Subset x) {
    auto b = [&](int i) { return x.contains(i - 1); };
    Subset plus, minus;
    if (b(1)) plus.insert(0);
    if (b(1) || (b(2) && b(3))) plus.insert(1);
    if (b(1) || b(2) || b(3) || b(4)) plus.insert(2);
    if (b(3) || b(4)) plus.insert(3);
    if (b(1) && b(2)) minus.insert(0);
    if (b(1) && b(3)) minus.insert(1);
    if ((b(1) && b(3)) || (b(2) && b(4))) minus.insert(2);
    if (b(4)) minus.insert(3);
    CHECK(f_plus(four_support(), x) == plus);
    CHECK(f_minus(four_support(), x) == minus);
    return true;
  });
}

TEST_CASE("lattice membership tests") {
  CHECK(check_h1(four_support(), Subset{0, 1}));
  CHECK(check_h1(four_support(), Subset{}));
  CHECK(check_h1(four_support(), Subset::full(4)));
  CHECK_FALSE(check_h1(four_support(), Subset{2}));
  CHECK(check_h2(four_support(), Subset{3}));
  CHECK(check_h2(four_support(), Subset::full(4)));
  CHECK_FALSE(check_h2(four_support(), Subset{0}));
}

TEST_CASE("Boolean Kleene iteration") {
  const auto minus = lower_abstraction(four_support());
  const auto plus = upper_abstraction(four_support());
  CHECK(boolean_kleene(minus, Subset{1, 2, 3}) == Subset{3});
  CHECK(boolean_kleene(plus, Subset{3}) == Subset{2, 3});
  CHECK(boolean_kleene(plus, Subset{2, 3}) == Subset{2, 3});
  // f_plus({1}) = {1,2}: neither above nor below the start.
  CHECK_THROWS_AS(boolean_kleene(plus, Subset{1}), PreconditionError);
}

TEST_CASE("Boolean Kleene terminates within n + 1 applications") {
  testing::Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    const int n = testing::uniform_int(rng, 1, 7);
    const SupportSpec s = testing::random_support(rng, n, 3, 3);
    const auto inner = upper_abstraction(s);
    int calls = 0;
    const BooleanOperator counted = [&](Subset x) {
      ++calls;
      return inner(x);
    };
    // Members of the upper lattice satisfy J <= F-(J) <= F+(J), a valid start.
    const auto upper = enumerate_lattices(s).upper;
    const Subset J = upper[static_cast<std::size_t>(testing::uniform_int(rng, 0, static_cast<int>(upper.size()) - 1))];
    const Subset limit = boolean_kleene(counted, J);
    CHECK(calls <= n + 1);
    CHECK(inner(limit) == limit);
  }
}

TEST_CASE("lattice enumeration") {
  SUBCASE("four-state game") {
    const LatticePair lat = enumerate_lattices(four_support());
    CHECK(lat.lower == std::vector<Subset>{Subset{}, Subset{0}, Subset{0, 1}, Subset::full(4)});
    // {1,2,3} satisfies the upper condition: F(1_{1,2,3}) = (1,1,1,1/2) >= 1_{1,2,3}.
    CHECK(lat.upper == std::vector<Subset>{Subset{}, Subset{3}, Subset{0, 1, 2}, Subset::full(4)});
    CHECK(lat.lower == brute_lower(four_state()));
    CHECK(lat.upper == brute_upper(four_state()));
  }
  SUBCASE("one state") {
    const SupportSpec s = extract_support(chain_game({{1}}));
    const LatticePair lat = enumerate_lattices(s);
    CHECK(lat.lower == std::vector<Subset>{Subset{}, Subset{0}});
    CHECK(lat.upper == std::vector<Subset>{Subset{}, Subset{0}});
  }
  SUBCASE("reduced four-state operator on {1,2}") {
    const ReducedGame red = reduce_operator(four_support(), Subset{0, 1});
    const LatticePair lat = enumerate_lattices(red.support);
    CHECK(lat.upper == std::vector<Subset>{Subset{}, Subset{0, 1}});
    CHECK(lat.lower == std::vector<Subset>{Subset{}, Subset{0}, Subset{0, 1}});
  }
  SUBCASE("guard") {
    SupportSpec big;
    big.n = 25;
    big.successors.assign(25, {{Subset{0}}});
    CHECK_THROWS_AS(enumerate_lattices(big), GuardError);
  }
}

TEST_CASE("properties on random supports") {
  testing::Rng rng(1009);
  for (int t = 0; t < 150; ++t) {
    const int n = testing::uniform_int(rng, 1, 6);
    const SupportSpec s = testing::random_support(rng, n, 3, 3);
    const GameSpec g = testing::game_on_support(rng, s, 0.0);
    const GameSpec g2 = testing::resample_probabilities(rng, g);
    SupportSpec swapped = s;
    swapped.order = Order::MaxMin;
    const auto conj_minus = boolean_conjugate(lower_abstraction(s), n);

    for_each_subset(n, [&](Subset x) {
      const Subset plus = f_plus(s, x), minus = f_minus(s, x);
      CHECK(plus == testing::naive_f_plus(s, x));
      CHECK(minus == testing::naive_f_minus(s, x));
      // Sandwich F- <= F <= F+ on Boolean points.
      const ValueVector y = recession_apply(g, x.indicator(n));
      for (int i = 0; i < n; ++i) {
        CHECK(y[static_cast<std::size_t>(i)] >= (minus.contains(i) ? 1.0 : 0.0) - 1e-12);
        CHECK(y[static_cast<std::size_t>(i)] <= (plus.contains(i) ? 1.0 : 0.0) + 1e-12);
      }
      // Duality: the upper abstraction of the swapped game is the conjugate of F-.
      CHECK(f_plus(swapped, x) == conj_minus(x));
      // Support-only dependence.
      const SupportSpec s2 = extract_support(g2);
      CHECK(f_plus(s2, x) == plus);
      CHECK(f_minus(s2, x) == minus);
      return true;
    });

    const LatticePair lat = enumerate_lattices(s);
    CHECK(lat.lower == brute_lower(g));
    CHECK(lat.upper == brute_upper(g));
    REQUIRE(!lat.lower.empty());
    CHECK(lat.lower.front() == Subset{});
    CHECK(lat.lower.back() == Subset::full(n));
    CHECK(lat.upper.front() == Subset{});
    CHECK(lat.upper.back() == Subset::full(n));
    for (Subset a : lat.lower)
      for (Subset b : lat.lower) CHECK(check_h1(s, a | b));
    for (Subset a : lat.upper)
      for (Subset b : lat.upper) CHECK(check_h2(s, a | b));
    for (std::size_t k = 1; k < lat.lower.size(); ++k) CHECK(canonical_less(lat.lower[k - 1], lat.lower[k]));
  }
}

TEST_CASE("confining policies") {
  const auto min_policy = confining_min_policy(four_support(), Subset{0, 1});
  REQUIRE(min_policy.has_value());
  CHECK(min_policy->min_policy[1] == 0);
  CHECK_FALSE(confining_min_policy(four_support(), Subset{2}).has_value());
  const auto max_policy = confining_max_policy(four_support(), Subset{3});
  REQUIRE(max_policy.has_value());
  CHECK(max_policy->max_policy[3][0] == 0);
}
