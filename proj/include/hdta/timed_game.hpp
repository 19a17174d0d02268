#pragma once

#include <vector>

#include "hdta/automaton.hpp"
#include "hdta/parity.hpp"
#include "hdta/region.hpp"

namespace hdta {

/// Turn-based timed game: the owner of the current state delays and then
/// takes a transition. The winning condition is the automaton's acceptance,
/// read as a colouring of states (Player::Two wins accepting plays).
struct TimedGame {
  TimedAutomaton ta;
  std::vector<Player> owner;  // per state
};

/// One round: delay into `region` (on the time chain of the source region),
/// then take `transition`.
struct RoundMove {
  Region region;
  TransitionId transition;
};

struct CompiledGame {
  struct Node {
    ConfigRegion config;
    bool bit = false;  // acceptance monitor
  };
  GameArena arena;
  std::vector<Node> nodes;
  std::vector<std::vector<RoundMove>> moves;  // parallel to arena successors
  ClockBounds cmax;
  int initial = 0;
};

/// Region arena over reachable (state, region, monitor bit) triples; one
/// edge per round. Throws DiagonalError on undecidable diagonal guards.
CompiledGame compile_timed_game(const TimedGame& g);

struct TimedGameResult {
  Player winner;
  CompiledGame compiled;
  Solution solution;

  /// Region strategy of the winner, defined on its winning nodes it owns.
  const PositionalStrategy& strategy() const { return solution.strategy(winner); }
};

TimedGameResult solve_timed_game(const TimedGame& g);

/// Product of a game emitting letters with an automaton read by Player::Two.
/// After each round of g emitting letter a, Player::Two picks an a-transition
/// of `spec` without delaying (an extra clock forces zero delay). She wins iff
/// the run of `spec` is accepting; she loses when she cannot move.
TimedGame compose(const TimedGame& g, const TimedAutomaton& spec);

}  // namespace hdta
