#include "hdta/determinize.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "hdta/errors.hpp"
#include "hdta/validate.hpp"

namespace hdta {

namespace {

// x - y == d as atoms with nonnegative bounds.
void equal_difference(std::vector<GuardAtom>& atoms, ClockId x, ClockId y, std::int64_t d) {
  if (d < 0) {
    std::swap(x, y);
    d = -d;
  }
  atoms.push_back({x, y, Relation::Le, d});
  atoms.push_back({x, y, Relation::Ge, d});
}

// x - y < d, i.e. frac(x) < frac(y) for x, y with integer parts differing by d.
void less_difference(std::vector<GuardAtom>& atoms, ClockId x, ClockId y, std::int64_t d) {
  if (d >= 0)
    atoms.push_back({x, y, Relation::Lt, d});
  else
    atoms.push_back({y, x, Relation::Gt, -d});
}

}  // namespace

Guard region_guard(const Region& r, const ClockBounds& cmax) {
  std::vector<GuardAtom> atoms;
  for (ClockId c = 0; c < r.num_clocks(); ++c) {
    if (!r.bounded(c)) {
      atoms.push_back({c, kZeroClock, Relation::Gt, cmax[c]});
    } else if (r.rank(c) == 0) {
      atoms.push_back({c, kZeroClock, Relation::Le, r.int_part(c)});
      atoms.push_back({c, kZeroClock, Relation::Ge, r.int_part(c)});
    } else {
      atoms.push_back({c, kZeroClock, Relation::Gt, r.int_part(c)});
      atoms.push_back({c, kZeroClock, Relation::Lt, r.int_part(c) + 1});
    }
  }
  auto blocks = r.frac_order();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const ClockId head = blocks[b].front();
    for (std::size_t i = 1; i < blocks[b].size(); ++i) {
      const ClockId c = blocks[b][i];
      equal_difference(atoms, head, c, r.int_part(head) - r.int_part(c));
    }
    if (b + 1 < blocks.size()) {
      const ClockId next = blocks[b + 1].front();
      less_difference(atoms, head, next, r.int_part(head) - r.int_part(next));
    }
  }
  return Guard(std::move(atoms));
}

namespace {

constexpr TransitionId kToSink = -1;

bool covers(const Guard& term, const Region& r, const ClockBounds& cmax, bool& decided) {
  try {
    return region_satisfies(r, term, cmax);
  } catch (const DiagonalError&) {
    decided = false;
    return false;
  }
}

// Greedy cube merging: start from a region guard and drop atoms while the
// term still only covers regions of the same class.
std::vector<Guard> compact_cover(const std::vector<Region>& regions, const std::vector<TransitionId>& cls,
                                 TransitionId want, const ClockBounds& cmax) {
  std::vector<Guard> terms;
  std::vector<bool> taken(regions.size(), false);
  // Terms stay pairwise disjoint so the output is syntactically deterministic.
  auto exact = [&](const Guard& g) {
    for (std::size_t i = 0; i < regions.size(); ++i) {
      bool decided = true;
      bool in = covers(g, regions[i], cmax, decided);
      if (!decided || (in && (cls[i] != want || taken[i]))) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (cls[i] != want || taken[i]) continue;
    std::vector<GuardAtom> atoms = region_guard(regions[i], cmax).atoms();
    for (std::size_t k = atoms.size(); k-- > 0;) {
      std::vector<GuardAtom> fewer = atoms;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(k));
      if (exact(Guard(fewer))) atoms = std::move(fewer);
    }
    Guard term(std::move(atoms));
    for (std::size_t j = 0; j < regions.size(); ++j) {
      bool decided = true;
      if (covers(term, regions[j], cmax, decided)) taken[j] = true;
    }
    terms.push_back(std::move(term));
  }
  return terms;
}

std::optional<StateId> rejecting_sink_of(const TimedAutomaton& ta) {
  for (StateId q = 0; q < ta.num_states(); ++q) {
    if (ta.acceptance.marks[q] != rejecting_mark(ta.acceptance.kind)) continue;
    std::vector<bool> loop(ta.num_letters(), false);
    bool absorbing = true;
    for (const auto& t : ta.transitions)
      if (t.source == q) {
        if (t.target != q) absorbing = false;
        if (t.guard.is_true()) loop[t.letter] = true;
      }
    if (absorbing && std::find(loop.begin(), loop.end(), false) == loop.end()) return q;
  }
  return std::nullopt;
}

}  // namespace

TimedAutomaton determinize_with(const TimedAutomaton& completed, const RegionResolver& resolver) {
  const ClockBounds cmax = completed.cmax();
  TimedAutomaton out = completed;
  out.name = completed.name + "_det";
  out.transitions.clear();
  const std::vector<Region> regions = enumerate_regions(cmax);
  std::optional<StateId> sink = rejecting_sink_of(completed);
  const int original_states = out.num_states();
  for (StateId q = 0; q < original_states; ++q)
    for (LetterId a = 0; a < out.num_letters(); ++a) {
      std::vector<TransitionId> cls(regions.size(), kToSink);
      std::set<TransitionId> used;
      for (std::size_t i = 0; i < regions.size(); ++i) {
        auto t = resolver.choose(q, regions[i], a);
        if (t) cls[i] = *t;
        used.insert(cls[i]);
      }
      for (TransitionId id : used) {
        if (id == kToSink) continue;
        const Transition& t = completed.transitions[id];
        for (Guard& g : compact_cover(regions, cls, id, cmax))
          out.add_transition(q, std::move(g), a, t.resets, t.target);
      }
      if (used.count(kToSink)) {
        if (!sink) sink = add_rejecting_sink(out);
        for (Guard& g : compact_cover(regions, cls, kToSink, cmax)) out.add_transition(q, std::move(g), a, {}, *sink);
      }
    }
  return out;
}

TimedAutomaton determinize_hd(const TimedAutomaton& ta) {
  if (!ta.acceptance.is_safety_or_reach())
    throw UnsupportedError(std::string("determinization of ") + to_string(ta.acceptance.kind) +
                           " automata is not supported");
  const TimedAutomaton completed = complete(ta);
  if (!check_hd(completed))
    throw NotHistoryDeterministicError("automaton is not history-deterministic");
  return determinize_with(completed, extract_resolver(completed));
}

}  // namespace hdta
