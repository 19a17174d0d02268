#pragma once

#include <string>
#include <vector>

#include "hdta/automaton.hpp"

namespace hdta {

/// A (state, letter) pair whose guards leave some valuations uncovered.
struct CoverageGap {
  StateId state;
  LetterId letter;
  std::vector<std::string> regions;  // uncovered regions, empty if decided symbolically
};

struct ValidationReport {
  std::vector<CoverageGap> gaps;
  bool uses_diagonals = false;
  std::vector<TransitionId> diagonal_transitions;
  std::vector<TransitionId> added;  // completion edges in `completed`
  StateId sink = -1;                // -1 when no sink was needed
  TimedAutomaton completed;

  bool complete() const { return gaps.empty(); }
};

/// Checks references, reports coverage gaps region by region and returns a
/// copy completed by a fresh rejecting absorbing sink. Throws InputError on
/// malformed automata.
ValidationReport validate(const TimedAutomaton& ta);

/// Shorthand for validate(ta).completed.
TimedAutomaton complete(const TimedAutomaton& ta);

/// Mark that makes a state rejecting forever under the given acceptance.
int rejecting_mark(AcceptanceKind kind);

/// Appends a rejecting state with true-guarded self-loops on every letter.
StateId add_rejecting_sink(TimedAutomaton& ta, const std::string& base = "sink");

}  // namespace hdta
