#include <doctest.h>

#include <algorithm>

#include "hdta/determinize.hpp"
#include "hdta/errors.hpp"
#include "support.hpp"

using namespace hdta;
using hdta::testing::fixture;

namespace {

bool has_atom(const Guard& g, GuardAtom want) {
  const auto& a = g.atoms();
  return std::find(a.begin(), a.end(), want) != a.end();
}

bool reaches_final(const TimedAutomaton& ta, const FiniteTimedWord& w) {
  RunTree t = reduced_run_tree(ta, initial_configuration(ta), w);
  for (const auto& n : t.nodes)
    if (ta.acceptance.marks[n.config.state]) return true;
  return false;
}

FiniteTimedWord random_word(std::mt19937_64& rng, int letters) {
  FiniteTimedWord w;
  const int n = std::uniform_int_distribution<int>(1, 6)(rng);
  for (int i = 0; i < n; ++i)
    w.push_back({Rational(std::uniform_int_distribution<int>(0, 10)(rng), 4),
                 std::uniform_int_distribution<int>(0, letters - 1)(rng)});
  return w;
}

}  // namespace

TEST_CASE("region guard examples") {
  const ClockBounds c{1, 1};
  Guard zero = region_guard(region_of({Rational(0)}, {1}), {1});
  CHECK(has_atom(zero, {0, kZeroClock, Relation::Le, 0}));
  CHECK(has_atom(zero, {0, kZeroClock, Relation::Ge, 0}));

  Guard xy = region_guard(region_of({Rational(1, 4), Rational(1, 2)}, c), c);
  CHECK(has_atom(xy, {0, kZeroClock, Relation::Gt, 0}));
  CHECK(has_atom(xy, {0, kZeroClock, Relation::Lt, 1}));
  CHECK(has_atom(xy, {1, kZeroClock, Relation::Gt, 0}));
  CHECK(has_atom(xy, {1, kZeroClock, Relation::Lt, 1}));
  CHECK(has_atom(xy, {0, 1, Relation::Lt, 0}));
}

TEST_CASE("region guards characterise their region") {
  std::mt19937_64 rng(503);
  for (int i = 0; i < 10000; ++i) {
    ClockBounds cmax{2, 1, 2};
    Region r = region_of(hdta::testing::random_valuation(rng, cmax, 3), cmax);
    ClockValuation nu = hdta::testing::random_valuation(rng, cmax, 3);
    CHECK(eval_guard(region_guard(r, cmax), nu) == (region_of(nu, cmax) == r));
  }
}

TEST_CASE("the two-clock fixture splits on the clock difference") {
  const TimedAutomaton f1 = fixture("fig1.ta");
  const TimedAutomaton d = determinize_hd(f1);
  CHECK(is_deterministic(d));
  CHECK(d.num_states() == complete(f1).num_states());
  const StateId q0 = *d.find_state("q0"), q2 = *d.find_state("q2"), q3 = *d.find_state("q3");
  const ClockId x = 0, y = 1;
  bool le = false, lt = false;
  for (const auto& t : d.transitions) {
    if (t.source != q0 || d.alphabet[t.letter] != "a") continue;
    le = le || (t.target == q2 && has_atom(t.guard, {x, y, Relation::Le, 0}));
    lt = lt || (t.target == q3 && has_atom(t.guard, {y, x, Relation::Lt, 0}));
  }
  CHECK(le);
  CHECK(lt);
  std::mt19937_64 rng(509);
  for (int i = 0; i < 2000; ++i) {
    ClockValuation nu = hdta::testing::random_valuation(rng, {1, 1}, 8);
    auto s = discrete_successors(d, {q0, nu}, 0);
    REQUIRE(s.size() == 1);
    if (nu[x] < nu[y] && nu[x] <= Rational(1)) CHECK(s[0].config.state == q2);
    if (nu[y] < nu[x] && nu[y] <= Rational(1)) CHECK(s[0].config.state == q3);
  }
}

TEST_CASE("determinizing a deterministic automaton keeps its language") {
  std::mt19937_64 rng(521);
  hdta::testing::RandomTaShape shape;
  shape.max_out = 1;
  int seen = 0;
  for (int i = 0; i < 100 && seen < 10; ++i) {
    TimedAutomaton ta = complete(hdta::testing::random_ta(rng, shape));
    if (!is_deterministic(ta)) continue;
    ++seen;
    TimedAutomaton d = determinize_hd(ta);
    CHECK(is_deterministic(d));
    // Unreached cells go to a rejecting sink, added only when none exists.
    const int extra = d.num_states() - ta.num_states();
    CHECK((extra == 0 || extra == 1));
    if (extra == 1) {
      const StateId s = ta.num_states();
      CHECK(d.acceptance.marks[s] == 0);
      for (const auto& t : d.transitions)
        if (t.source == s) CHECK(t.target == s);
    }
    CHECK(fair_simulation(ta, d).holds);
    CHECK(fair_simulation(d, ta).holds);
  }
}

TEST_CASE("determinization of random HD automata") {
  std::mt19937_64 rng(523);
  hdta::testing::RandomTaShape shape;
  for (int i = 0; i < 12; ++i) {
    shape.kind = i % 2 ? AcceptanceKind::Safety : AcceptanceKind::Reachability;
    TimedAutomaton ta = hdta::testing::random_hd_ta(rng, shape);
    TimedAutomaton d = determinize_hd(ta);
    CHECK(is_deterministic(d));
    CHECK(d.num_states() == ta.num_states());
    CHECK(fair_simulation(ta, d).holds);
    CHECK(fair_simulation(d, ta).holds);
    if (shape.kind != AcceptanceKind::Reachability) continue;
    for (int k = 0; k < 100; ++k) {
      FiniteTimedWord w = random_word(rng, ta.num_letters());
      // The deterministic run is one of the input's runs.
      if (reaches_final(d, w)) CHECK(reaches_final(ta, w));
    }
  }
}

TEST_CASE("determinization refuses what it cannot handle") {
  CHECK_THROWS_AS(determinize_hd(fixture("fig4.ta")), NotHistoryDeterministicError);
  CHECK_THROWS_AS(determinize_hd(fixture("fig2.ta")), UnsupportedError);
}
