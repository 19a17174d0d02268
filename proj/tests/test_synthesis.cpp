#include <doctest.h>

#include "hdta/determinize.hpp"
#include "hdta/errors.hpp"
#include "hdta/synthesis.hpp"
#include "support.hpp"

using namespace hdta;
using hdta::testing::fixture;

namespace {

// Letter s of `ta` becomes s/s; every other pair leads to a rejecting sink.
TimedAutomaton echo_lift(const TimedAutomaton& ta) {
  TimedAutomaton out = ta;
  out.alphabet.clear();
  for (const auto& i : ta.alphabet)
    for (const auto& o : ta.alphabet) out.alphabet.push_back(i + "/" + o);
  const int n = ta.num_letters();
  out.transitions.clear();
  for (const auto& t : ta.transitions)
    out.add_transition(t.source, t.guard, t.letter * n + t.letter, t.resets, t.target);
  return complete(out);
}

TimedAutomaton random_pair_spec(std::mt19937_64& rng) {
  hdta::testing::RandomTaShape shape;
  shape.letters = 4;
  shape.max_states = 3;
  TimedAutomaton ta = hdta::testing::random_hd_ta(rng, shape);
  ta.alphabet = {"0/0", "0/1", "1/0", "1/1"};
  return ta;
}

void check_controller(const TimedAutomaton& spec, const SynthesisResult& r, std::mt19937_64& rng, int plays) {
  REQUIRE(r.controller.has_value());
  const PairAlphabet letters = split_alphabet(spec);
  for (int i = 0; i < plays; ++i) {
    EnvironmentStrategy env = random_environment(*r.controller, static_cast<int>(letters.inputs.size()), rng);
    CHECK(controller_play_accepted(spec, letters, *r.controller, env));
  }
}

}  // namespace

TEST_CASE("copying the input is realisable") {
  const TimedAutomaton copy = fixture("copy.ta");
  SynthesisResult r = solve_synthesis(copy);
  REQUIRE(r.realisable);
  const PairAlphabet letters = split_alphabet(copy);
  for (const auto& row : r.controller->table)
    for (const auto& [key, entry] : row) CHECK(letters.outputs[entry.output] == letters.inputs[key.second]);
  std::mt19937_64 rng(601);
  check_controller(copy, r, rng, 100);
}

TEST_CASE("predicting the next input is not realisable") {
  SynthesisResult r = solve_synthesis(fixture("predict.ta"));
  CHECK_FALSE(r.realisable);
  CHECK_FALSE(r.controller.has_value());
}

TEST_CASE("a nondeterministic presentation of copying") {
  const TimedAutomaton dup = fixture("copy_dup.ta");
  SynthesisResult r = solve_synthesis(dup);
  REQUIRE(r.realisable);
  std::mt19937_64 rng(603);
  check_controller(complete(dup), r, rng, 100);
  CHECK(solve_synthesis(determinize_hd(dup)).realisable);
}

TEST_CASE("transition annotation") {
  for (const char* f : {"copy_dup.ta", "fig1.ta", "fig4.ta"}) {
    const TimedAutomaton ta = fixture(f);
    const TimedAutomaton ann = delta_annotate(ta);
    CHECK(ann.transitions.size() == ta.transitions.size());
    CHECK(is_deterministic(ann));
    for (const auto& t : ann.transitions) {
      const Transition& orig = ta.transitions[annotated_transition(ann, t.letter)];
      CHECK(orig.source == t.source);
      CHECK(orig.target == t.target);
      CHECK(orig.guard == t.guard);
    }
  }
}

TEST_CASE("accepted annotated words are accepting runs") {
  std::mt19937_64 rng(607);
  hdta::testing::RandomTaShape shape;
  const AcceptanceKind kinds[] = {AcceptanceKind::Safety, AcceptanceKind::Reachability, AcceptanceKind::Buchi};
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    shape.kind = kinds[i % 3];
    const TimedAutomaton ta = hdta::testing::random_ta(rng, shape);
    const TimedAutomaton ann = delta_annotate(ta);
    EmptinessResult e = emptiness(ann);
    if (e.empty) continue;
    ++checked;
    Lasso w = *e.word;
    TimedRun run;
    for (auto [from, to, ids] : {std::tuple{&e.word->prefix, &w.prefix, &run.prefix},
                                 std::tuple{&e.word->cycle, &w.cycle, &run.cycle}}) {
      for (std::size_t k = 0; k < from->size(); ++k) {
        const TransitionId t = annotated_transition(ann, (*from)[k].letter);
        (*to)[k].letter = ta.transitions[t].letter;
        ids->push_back(t);
      }
    }
    CHECK(replay_accepting(ta, w, run));
  }
  CHECK(checked > 10);
}

TEST_CASE("presentations agree on realisability") {
  std::mt19937_64 rng(611);
  for (int i = 0; i < 15; ++i) {
    const TimedAutomaton spec = random_pair_spec(rng);
    SynthesisResult hd = solve_synthesis(spec);
    SynthesisResult det = solve_synthesis(determinize_hd(spec));
    CHECK(hd.realisable == det.realisable);
    if (hd.realisable) check_controller(spec, hd, rng, 20);
  }
  const TimedAutomaton f1 = echo_lift(fixture("fig1.ta"));
  CHECK(solve_synthesis(f1).realisable == solve_synthesis(determinize_hd(f1)).realisable);
}

TEST_CASE("synthesis needs pair letters") {
  CHECK_THROWS_AS(split_alphabet(fixture("fig1.ta")), InputError);
  CHECK_THROWS_AS(solve_synthesis(fixture("fig4.ta")), InputError);
}
