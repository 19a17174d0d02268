#pragma once

#include <random>
#include <string>
#include <vector>

#include "hdta/automaton.hpp"
#include "hdta/timed_game.hpp"

namespace hdta {

/// Countdown game: from (p, n) Player 1 names l <= k - n, Player 2 picks a
/// transition (p, l, p') and the counter becomes n + l. Player 1 wins on
/// reaching exactly k. Play starts in state 0 with counter 0.
struct CountdownInstance {
  struct Move {
    int from;
    std::int64_t label;
    int to;
  };
  int num_states = 1;
  std::vector<Move> moves;
  std::int64_t k = 1;

  void check() const;
};

/// Dynamic program over (state, counter).
bool countdown_player1_wins(const CountdownInstance& c);

struct CountdownReduction {
  TimedAutomaton a;  // universal over {a, e}
  TimedAutomaton b;  // safety automaton tracking the counter in its clocks
  bool player1_wins;
};

/// A is simulated by B iff Player 2 wins the countdown game. B is returned
/// completed: the only gap (letter e at x1 == k, x2 == 0) leads to an
/// unsafe sink.
CountdownReduction gen_countdown(const CountdownInstance& c);

/// The countdown game as a timed safety game; Player::Two wins iff she wins
/// the countdown game.
TimedGame countdown_timed_game(const CountdownInstance& c);

CountdownInstance random_countdown(std::mt19937_64& rng, int max_states, std::int64_t max_label,
                                   std::int64_t max_k);

}  // namespace hdta
