#pragma once

#include <string>

#include "hdta/automaton.hpp"
#include "hdta/parity.hpp"
#include "hdta/region.hpp"
#include "hdta/synthesis.hpp"

namespace hdta {

std::string to_dot(const TimedAutomaton& ta);
std::string to_dot(const RegionGraph& g, const TimedAutomaton& ta);
/// Strategy edges (if given) are drawn bold.
std::string to_dot(const GameArena& arena, const Solution* solution = nullptr);
std::string to_dot(const Controller& c, const TimedAutomaton& spec, const PairAlphabet& letters);

}  // namespace hdta
