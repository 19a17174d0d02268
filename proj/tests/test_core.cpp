#include <doctest.h>

#include <functional>

#include "hdta/errors.hpp"
#include "support.hpp"

using namespace hdta;
using hdta::testing::fixture;

namespace {

ClockValuation val(std::initializer_list<Rational> v) { return ClockValuation(v); }

TimedAutomaton one_state(Guard g) {
  TimedAutomaton ta;
  ta.name = "one";
  ta.states = {"q"};
  ta.clocks = {"x"};
  ta.alphabet = {"a"};
  ta.acceptance = {AcceptanceKind::Safety, {1}};
  ta.add_transition(0, std::move(g), 0, {}, 0);
  return ta;
}

// Every reduced run on w from c, by plain depth-first search.
void enumerate_runs(const TimedAutomaton& ta, const Configuration& c, const FiniteTimedWord& w,
                    std::size_t i, std::vector<TransitionId>& path,
                    std::vector<std::pair<std::vector<TransitionId>, Configuration>>& out) {
  if (i == w.size()) {
    out.emplace_back(path, c);
    return;
  }
  ClockValuation moved = c.valuation;
  for (auto& v : moved) v += w[i].delay;
  for (const auto& t : ta.transitions) {
    if (t.source != c.state || t.letter != w[i].letter || !eval_guard(t.guard, moved)) continue;
    path.push_back(t.id);
    enumerate_runs(ta, {t.target, apply_resets(moved, t.resets)}, w, i + 1, path, out);
    path.pop_back();
  }
}

}  // namespace

TEST_CASE("eval_guard on atoms") {
  CHECK(eval_guard(Guard(), val({Rational(5)})));
  Guard contra({{0, kZeroClock, Relation::Lt, 1}, {0, kZeroClock, Relation::Gt, 1}});
  CHECK_FALSE(eval_guard(contra, val({Rational(1)})));
  Guard diag({{0, 1, Relation::Le, 0}});
  CHECK(eval_guard(diag, val({Rational(1, 2), Rational(7, 10)})));
  CHECK_FALSE(eval_guard(diag, val({Rational(8, 10), Rational(7, 10)})));
}

TEST_CASE("equality atoms are sugar for two bounds") {
  Guard g = Guard::equal(0, 1);
  REQUIRE(g.atoms().size() == 2);
  CHECK(eval_guard(g, val({Rational(1)})));
  CHECK_FALSE(eval_guard(g, val({Rational(11, 10)})));
}

TEST_CASE("guard evaluation does not depend on atom order") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    std::vector<GuardAtom> atoms;
    for (int k = 0; k < 3; ++k)
      atoms.push_back({std::uniform_int_distribution<int>(0, 1)(rng), kZeroClock,
                       static_cast<Relation>(std::uniform_int_distribution<int>(0, 3)(rng)),
                       std::uniform_int_distribution<int>(0, 2)(rng)});
    std::vector<GuardAtom> reversed(atoms.rbegin(), atoms.rend());
    ClockValuation nu{Rational(std::uniform_int_distribution<int>(0, 12)(rng), 4),
                      Rational(std::uniform_int_distribution<int>(0, 12)(rng), 4)};
    bool direct = true;
    for (const auto& a : atoms) direct = direct && eval_atom(a, nu);
    CHECK(eval_guard(Guard(atoms), nu) == direct);
    CHECK(eval_guard(Guard(reversed), nu) == direct);
  }
}

TEST_CASE("delay axioms") {
  Configuration c{0, val({Rational(0)})};
  CHECK(delay(c, Rational(0)) == c);
  CHECK(delay({0, val({Rational(3, 10)})}, Rational(7, 10)).valuation == val({Rational(1)}));
  CHECK_THROWS_AS(delay(c, Rational(-1)), InputError);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    Configuration x{0, val({Rational(std::uniform_int_distribution<int>(0, 99)(rng), 7),
                            Rational(std::uniform_int_distribution<int>(0, 99)(rng), 11)})};
    Rational d1(std::uniform_int_distribution<int>(0, 50)(rng), 13);
    Rational d2(std::uniform_int_distribution<int>(0, 50)(rng), 3);
    CHECK(delay(delay(x, d1), d2) == delay(x, d1 + d2));
    CHECK(delay(x, Rational(0)) == x);
    CHECK(delay(x, d1) == delay(x, d1));
  }
}

TEST_CASE("discrete successors on the unit-distance automaton") {
  const TimedAutomaton f4 = fixture("fig4.ta");
  const StateId p0 = *f4.find_state("p0"), p1 = *f4.find_state("p1"), p2 = *f4.find_state("p2");
  auto succ = discrete_successors(f4, {p0, val({Rational(1, 2)})}, 0);
  REQUIRE(succ.size() == 2);
  CHECK(succ[0].config == Configuration{p0, val({Rational(1, 2)})});
  CHECK(succ[1].config == Configuration{p1, val({Rational(0)})});
  CHECK(succ[0].transition->id < succ[1].transition->id);
  auto at_one = discrete_successors(f4, {p1, val({Rational(1)})}, 0);
  REQUIRE(at_one.size() == 2);
  CHECK(at_one[0].config.state == p1);
  CHECK(at_one[1].config.state == p2);
}

TEST_CASE("deterministic automata have exactly one successor") {
  TimedAutomaton d = one_state(Guard({{0, kZeroClock, Relation::Lt, 1}}));
  d.add_transition(0, Guard({{0, kZeroClock, Relation::Ge, 1}}), 0, {0}, 0);
  REQUIRE(is_deterministic(d));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Configuration c{0, val({Rational(std::uniform_int_distribution<int>(0, 40)(rng), 8)})};
    CHECK(discrete_successors(d, c, 0).size() == 1);
    FiniteTimedWord w{{Rational(1, 3), 0}, {Rational(1), 0}, {Rational(0), 0}};
    CHECK(reduced_run_tree(d, c, w).leaves().size() == 1);
  }
}

TEST_CASE("reduced run tree on the unit-distance automaton") {
  const TimedAutomaton f4 = fixture("fig4.ta");
  RunTree t = reduced_run_tree(f4, initial_configuration(f4), {{Rational(1, 2), 0}});
  auto leaves = t.leaves();
  REQUIRE(leaves.size() == 2);
  std::vector<Configuration> got;
  for (int l : leaves) got.push_back(t.nodes[l].config);
  CHECK(std::count(got.begin(), got.end(), Configuration{0, val({Rational(1, 2)})}) == 1);
  CHECK(std::count(got.begin(), got.end(), Configuration{1, val({Rational(0)})}) == 1);
}

TEST_CASE("run tree leaves match an exhaustive run enumeration") {
  std::mt19937_64 rng(5);
  hdta::testing::RandomTaShape shape;
  shape.max_clocks = 2;
  for (int i = 0; i < 60; ++i) {
    TimedAutomaton ta = hdta::testing::random_ta(rng, shape);
    FiniteTimedWord w;
    const int n = std::uniform_int_distribution<int>(0, 4)(rng);
    for (int k = 0; k < n; ++k)
      w.push_back({Rational(std::uniform_int_distribution<int>(0, 6)(rng), 2),
                   std::uniform_int_distribution<int>(0, 1)(rng)});
    std::vector<std::pair<std::vector<TransitionId>, Configuration>> expected;
    std::vector<TransitionId> path;
    enumerate_runs(ta, initial_configuration(ta), w, 0, path, expected);
    RunTree t = reduced_run_tree(ta, initial_configuration(ta), w);
    std::vector<std::pair<std::vector<TransitionId>, Configuration>> got;
    for (int l : t.leaves())
      if (t.nodes[l].depth == static_cast<int>(w.size())) got.emplace_back(t.branch(l), t.nodes[l].config);
    auto key = [](const auto& a, const auto& b) { return a.first < b.first; };
    std::sort(expected.begin(), expected.end(), key);
    std::sort(got.begin(), got.end(), key);
    REQUIRE(got.size() == expected.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      CHECK(got[k].first == expected[k].first);
      CHECK(got[k].second == expected[k].second);
    }
  }
}

TEST_CASE("product with a trivial automaton") {
  const TimedAutomaton f4 = fixture("fig4.ta");
  TimedAutomaton trivial = one_state(Guard());
  trivial.clocks.clear();
  trivial.acceptance = {AcceptanceKind::Safety, {1}};
  TimedAutomaton p = product_intersection(f4, trivial);
  CHECK(p.num_states() == f4.num_states() * trivial.num_states());
  std::mt19937_64 rng(9);
  for (int i = 0; i < 40; ++i) {
    Lasso l = hdta::testing::random_lasso(rng, 1);
    CHECK(member_lasso(p, l) == member_lasso(f4, l));
  }
  CHECK_THROWS_AS(product_intersection(f4, f4), UnsupportedError);
}

TEST_CASE("validate reports gaps and completes") {
  const TimedAutomaton complete_det = []{
    TimedAutomaton t = one_state(Guard({{0, kZeroClock, Relation::Lt, 1}}));
    t.add_transition(0, Guard({{0, kZeroClock, Relation::Ge, 1}}), 0, {}, 0);
    return t;
  }();
  ValidationReport ok = validate(complete_det);
  CHECK(ok.complete());
  CHECK(ok.completed.num_states() == 1);
  CHECK(ok.completed.transitions.size() == 2);

  ValidationReport gap = validate(one_state(Guard({{0, kZeroClock, Relation::Lt, 1}})));
  REQUIRE(gap.gaps.size() == 1);
  CHECK(gap.sink == 1);
  CHECK_FALSE(gap.completed.acceptance.marks[gap.sink]);
  // x == 1 and x > 1 are the missing regions.
  CHECK(gap.gaps[0].regions.size() == 2);
  for (auto x : {Rational(0), Rational(1, 2), Rational(1), Rational(3)})
    CHECK_FALSE(discrete_successors(gap.completed, {0, val({x})}, 0).empty());

  const TimedAutomaton f1 = fixture("fig1.ta");
  ValidationReport r1 = validate(f1);
  CHECK_FALSE(r1.complete());
  CHECK_FALSE(r1.added.empty());
  CHECK(validate(r1.completed).complete());
  for (TransitionId id : r1.added) CHECK(r1.completed.transitions[id].target == r1.sink);
}

TEST_CASE("after completion every sampled configuration can move") {
  std::mt19937_64 rng(21);
  hdta::testing::RandomTaShape shape;
  for (int i = 0; i < 40; ++i) {
    TimedAutomaton ta = complete(hdta::testing::random_ta(rng, shape));
    for (int k = 0; k < 50; ++k) {
      Configuration c{std::uniform_int_distribution<int>(0, ta.num_states() - 1)(rng), {}};
      for (int x = 0; x < ta.num_clocks(); ++x)
        c.valuation.push_back(Rational(std::uniform_int_distribution<int>(0, 14)(rng), 4));
      for (LetterId a = 0; a < ta.num_letters(); ++a) CHECK_FALSE(discrete_successors(ta, c, a).empty());
    }
  }
}

TEST_CASE("determinism of the fixtures") {
  CHECK_FALSE(is_deterministic(fixture("fig4.ta")));
  CHECK_FALSE(is_deterministic(fixture("fig2.ta")));
  CHECK(is_deterministic(fixture("copy.ta")));
}
