#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hdta/automaton.hpp"
#include "hdta/parity.hpp"
#include "hdta/region.hpp"

namespace hdta {

/// Letters of the form "in/out".
struct PairAlphabet {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<int> input_of;   // per letter
  std::vector<int> output_of;  // per letter
};

/// Throws InputError unless every letter is a pair and all pairs occur.
PairAlphabet split_alphabet(const TimedAutomaton& ta);

/// Every transition gets its own letter "<letter>@t<id>".
TimedAutomaton delta_annotate(const TimedAutomaton& ta);

/// Original transition id behind an annotated letter.
TransitionId annotated_transition(const TimedAutomaton& annotated, LetterId letter);

/// Region-level Mealy machine. On (delay region, input) in node (state,
/// region) it emits an output and the transition of the specification.
struct Controller {
  struct Node {
    StateId state;
    Region region;
  };
  struct Entry {
    int output;
    TransitionId transition;
    int next;  // node index
  };
  std::vector<Node> nodes;  // node 0 is initial
  std::vector<std::map<std::pair<Region, int>, Entry>> table;
  ClockBounds cmax;

  std::optional<int> find(StateId q, const Region& r) const;
};

struct SynthesisResult {
  bool realisable = false;
  std::optional<Controller> controller;
  int arena_nodes = 0;
};

/// Synthesis game on the Delta-annotation of the specification: Player::One
/// delays and picks an input, Player::Two picks an output and a transition;
/// she wins iff the run is accepting.
SynthesisResult solve_synthesis(const TimedAutomaton& spec);

/// Environment choosing, per controller node, one delay region and input.
struct EnvironmentStrategy {
  std::vector<std::pair<Region, int>> choice;  // per controller node
};

EnvironmentStrategy random_environment(const Controller& c, int num_inputs, std::mt19937_64& rng);

/// Plays the controller against the environment with concrete delays.
/// Returns true iff every emitted transition is enabled, reads the chosen
/// input, and the resulting lasso run is accepting.
bool controller_play_accepted(const TimedAutomaton& spec, const PairAlphabet& letters,
                              const Controller& c, const EnvironmentStrategy& env);

}  // namespace hdta
