#pragma once

#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "hdta/automaton.hpp"
#include "hdta/parity.hpp"
#include "hdta/region.hpp"

namespace hdta {

/// One-token game on a safety or reachability automaton. Clocks of copy 1
/// come first, then copy 2. Each round: Player::One delays and picks a letter
/// (phase Letter); Player::Two moves copy 2 (phase Second); Player::One moves
/// copy 1 (phase First). Player::Two wins unless copy 1 accepts while copy 2
/// does not.
struct G1Arena {
  enum class Phase : std::uint8_t { Letter, Second, First };
  enum class Objective : std::uint8_t {
    Direct,        // acceptance of the automaton on infinite words
    AlmostFinal,   // reachability: copy 1 may never be almost final before copy 2
  };
  struct Node {
    Phase phase = Phase::Letter;
    StateId first = 0;
    StateId second = 0;
    Region region;
    LetterId letter = -1;
    bool first_bit = false;
    bool second_bit = false;
    bool violated = false;  // AlmostFinal objective only
  };
  struct Move {
    Region region;                 // Letter phase: delay target
    LetterId letter = -1;          // Letter phase
    TransitionId transition = -1;  // Second / First phases
  };
  Objective objective = Objective::Direct;
  GameArena arena;
  std::vector<Node> nodes;
  std::vector<std::vector<Move>> moves;  // parallel to arena successors
  ClockBounds cmax;                      // over both copies
  int initial = 0;

  std::optional<int> find(const Node& n) const;

 private:
  friend G1Arena g1_arena(const TimedAutomaton&, Objective, const std::set<std::pair<StateId, Region>>*);
  std::map<std::tuple<int, StateId, StateId, Region, LetterId, bool, bool, bool>, int> index_;
};

/// Throws UnsupportedError unless the acceptance is safety or reachability.
G1Arena g1_arena(const TimedAutomaton& ta,
                 G1Arena::Objective objective = G1Arena::Objective::Direct,
                 const std::set<std::pair<StateId, Region>>* almost_final = nullptr);

/// Single-copy reachability game: Player::One delays and picks a letter,
/// Player::Two picks a transition; she wins on reaching a final state.
struct ReachGame {
  struct Node {
    bool spoiler = true;
    StateId state = 0;
    Region region;
    LetterId letter = -1;
  };
  GameArena arena;
  std::vector<Node> nodes;
  std::vector<std::vector<TransitionId>> transition;  // Player::Two edges; -1 otherwise
  std::vector<bool> winning;                          // Player::Two's attractor
  PositionalStrategy strategy;                        // attractor strategy
  ClockBounds cmax;
  std::map<std::tuple<bool, StateId, Region, LetterId>, int> index;
};

ReachGame almost_final_game(const TimedAutomaton& ta);

/// Configuration regions (reachable in the single-copy game) from which
/// Player::Two forces a final state whatever letters and delays are played.
std::set<std::pair<StateId, Region>> almost_final_regions(const TimedAutomaton& ta);

struct HdVerdict {
  bool direct = false;
  bool almost_final = false;  // reachability only; equals `direct` otherwise
};

/// Both decision routes (the second only differs for reachability).
HdVerdict check_hd_routes(const TimedAutomaton& ta);

/// History-determinism of a safety or reachability automaton (auto-completed
/// first). Throws UnsupportedError for other acceptance conditions.
bool check_hd(const TimedAutomaton& ta);

/// Map (state, delay region, letter) -> transition.
struct RegionResolver {
  std::map<std::tuple<StateId, Region, LetterId>, TransitionId> table;

  std::optional<TransitionId> choose(StateId q, const Region& r, LetterId a) const;
};

/// Region-based resolver read off Player::Two's one-token strategy on the
/// diagonal (for reachability: until an almost-final region is reached, then
/// the almost-final game strategy). Expects a complete automaton. Throws
/// NotHistoryDeterministicError if Player::One wins.
RegionResolver extract_resolver(const TimedAutomaton& ta);

/// Run of the resolver on a concrete finite word; stops early (returning the
/// transitions so far) if no entry applies.
std::vector<TransitionId> resolver_run(const TimedAutomaton& ta, const RegionResolver& r,
                                       const FiniteTimedWord& w);

}  // namespace hdta
