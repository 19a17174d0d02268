#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hdta/automaton.hpp"
#include "hdta/parity.hpp"

namespace hdta {

/// Parsed `.ta` document: an automaton, optionally with state owners (a game).
struct TaDocument {
  TimedAutomaton ta;
  std::optional<std::vector<Player>> owners;
};

/// Grammar (one item per line, `#` starts a comment):
///   ta NAME
///   clocks x y ...
///   alphabet a b ...
///   acceptance safety|reachability|buchi|cobuchi|parity
///   initial q
///   state q [safe|unsafe|final|accepting|priority N] [owner P1|P2]
///   trans q -> q' on a [when GUARD] [reset {x,...}] [priority N]
/// GUARD combines `true`, `false` and atoms (`x < 3`, `x - y <= 0`,
/// `x == 1`, `x != 1`) with `&`, `|`, `!` and parentheses. Disjunctions
/// split the transition. Transition priorities (parity only) split target
/// states by incoming priority. Errors carry "line L, column C".
TaDocument parse_ta(std::string_view text);

TaDocument load_ta(const std::string& path);

/// Canonical text; parse_ta(print_ta(d)) reproduces d.
std::string print_ta(const TaDocument& doc);
std::string print_ta(const TimedAutomaton& ta);

std::string guard_to_string(const Guard& g, const std::vector<std::string>& clocks);

}  // namespace hdta
