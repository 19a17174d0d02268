#pragma once

#include <optional>
#include <vector>

#include "hdta/automaton.hpp"
#include "hdta/parity.hpp"
#include "hdta/region.hpp"

namespace hdta {

/// Fair simulation game of A by B over the combined clocks (A's first).
/// Player::One nodes (p, q, R) choose a delay region and an A-transition;
/// Player::Two nodes answer with a B-transition on the same letter.
struct SimulationArena {
  struct Node {
    bool spoiler = true;  // Player::One node
    StateId a_state = 0;
    StateId b_state = 0;
    Region region;
    LetterId letter = -1;  // set on Player::Two nodes
    bool a_bit = false;
    bool b_bit = false;
  };
  struct Move {
    Region region;  // delay target (Player::One moves)
    TransitionId transition;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<Move>> moves;  // parallel to base.successors
  GameArena base;                        // priorities unused when `lar` is set
  std::optional<RabinCondition> rabin;
  std::optional<LarArena> lar;
  ClockBounds cmax;
  int num_a_clocks = 0;
  int initial = 0;

  /// Arena that is actually solved (the LAR product or the base).
  const GameArena& solved() const { return lar ? lar->arena : base; }
  int solved_initial() const { return lar ? lar->entry[initial] : initial; }
  int base_of(int solved_node) const { return lar ? lar->base_node[solved_node] : solved_node; }
};

struct SimulationVerdict {
  bool holds = false;
  Player winner = Player::One;
  PositionalStrategy witness;  // winner's strategy on the solved arena
  SimulationArena arena;
  Solution solution;
};

/// Both operands are completed first; moves refer to the completed automata.
SimulationArena simulation_arena(const TimedAutomaton& a, StateId a0, const TimedAutomaton& b,
                                 StateId b0);

/// B fairly simulates A from (a0, b0).
SimulationVerdict fair_simulation(const TimedAutomaton& a, StateId a0, const TimedAutomaton& b,
                                  StateId b0);
SimulationVerdict fair_simulation(const TimedAutomaton& a, const TimedAutomaton& b);

/// L(A) is included in L(B). B must be history-deterministic; for safety and
/// reachability B this is checked and NotHistoryDeterministicError thrown.
bool language_inclusion_hd(const TimedAutomaton& a, const TimedAutomaton& b);

/// One-state automaton without clocks accepting every timed word.
TimedAutomaton universal_automaton(const std::vector<std::string>& alphabet);

bool universality_hd(const TimedAutomaton& ta);

/// Run of a lasso-shaped path through the automaton.
struct TimedRun {
  std::vector<TransitionId> prefix;
  std::vector<TransitionId> cycle;
};

struct EmptinessResult {
  bool empty = true;
  std::optional<Lasso> word;     // concrete witness
  std::optional<TimedRun> run;   // accepting run over `word`
  std::vector<ConfigRegion> region_stem;
  std::vector<ConfigRegion> region_cycle;
};

EmptinessResult emptiness(const TimedAutomaton& ta);

/// One letter of a region-level lasso: delay into `target`, read `letter`,
/// reset `resets`.
struct RegionStep {
  Region target;
  LetterId letter;
  std::vector<ClockId> resets;
};

/// Concrete delays for a region lasso, starting from the zero valuation. The
/// cycle is unrolled until the valuation at its start repeats up to clocks
/// above their maximum; the word then covers `stem`, `cycle` `unrolled_prefix`
/// times, and `cycle` `unrolled_period` more times as its period.
struct RealizedLasso {
  Lasso word;
  int unrolled_prefix = 0;
  int unrolled_period = 1;
};

std::optional<RealizedLasso> realize_lasso(const std::vector<RegionStep>& stem,
                                           const std::vector<RegionStep>& cycle, int num_clocks,
                                           const ClockBounds& cmax, int max_unroll = 64);

/// Replays `run` on `word` with exact arithmetic: every transition must be
/// enabled, read the right letter, and the cycle must return to the
/// configuration it started from. Returns true iff the run is accepting.
bool replay_accepting(const TimedAutomaton& ta, const Lasso& word, const TimedRun& run);

/// The ultimately periodic word of the lasso is accepted.
bool member_lasso(const TimedAutomaton& ta, const Lasso& word);

/// Deterministic one-clock automaton whose only infinite run reads the
/// lasso scaled by `factor` (all scaled delays must be integers).
TimedAutomaton lasso_encoder(const std::vector<std::string>& alphabet, const Lasso& word,
                             std::int64_t factor);

/// Concrete play of the simulation game that Player::One wins: the word
/// read, A's run and B's run (transition ids of the completed automata).
struct DistinguishingPlay {
  Lasso word;
  TimedRun a_run;
  TimedRun b_run;
};

/// Follows Player::One's winning strategy against Player::Two's first
/// choices and realises the resulting lasso with concrete delays.
std::optional<DistinguishingPlay> distinguishing_play(const SimulationVerdict& v,
                                                      const TimedAutomaton& a,
                                                      const TimedAutomaton& b);

}  // namespace hdta
