#pragma once

#include "hdta/automaton.hpp"
#include "hdta/hd.hpp"
#include "hdta/region.hpp"

namespace hdta {

/// Guard satisfied exactly by the valuations of r (diagonal atoms encode
/// the fractional order).
Guard region_guard(const Region& r, const ClockBounds& cmax);

/// Deterministic automaton over the same states (plus a rejecting sink when
/// needed) and the same language as an HD safety or reachability automaton:
/// each transition the resolver picks on a region is kept with that region's
/// guard added. Throws NotHistoryDeterministicError / UnsupportedError.
TimedAutomaton determinize_hd(const TimedAutomaton& ta);

/// Same, from a given resolver for the (completed) automaton.
TimedAutomaton determinize_with(const TimedAutomaton& completed, const RegionResolver& resolver);

}  // namespace hdta
