#include "hdta/validate.hpp"

#include "hdta/errors.hpp"
#include "hdta/region.hpp"

namespace hdta {

int rejecting_mark(AcceptanceKind kind) {
  return kind == AcceptanceKind::Parity ? 1 : 0;
}

StateId add_rejecting_sink(TimedAutomaton& ta, const std::string& base) {
  std::string name = base;
  for (int i = 1; ta.find_state(name); ++i) name = base + std::to_string(i);
  ta.states.push_back(name);
  ta.acceptance.marks.push_back(rejecting_mark(ta.acceptance.kind));
  const StateId sink = ta.num_states() - 1;
  for (LetterId a = 0; a < ta.num_letters(); ++a) ta.add_transition(sink, Guard(), a, {}, sink);
  return sink;
}

ValidationReport validate(const TimedAutomaton& ta) {
  ta.check_well_formed();
  ValidationReport report;
  for (const auto& t : ta.transitions)
    if (t.guard.has_diagonal()) report.diagonal_transitions.push_back(t.id);
  report.uses_diagonals = !report.diagonal_transitions.empty();

  const ClockBounds cmax = ta.cmax();
  const std::vector<Region> regions = enumerate_regions(cmax);
  struct Pending {
    StateId q;
    LetterId a;
    std::vector<Guard> missing;
  };
  std::vector<Pending> pending;
  for (StateId q = 0; q < ta.num_states(); ++q)
    for (LetterId a = 0; a < ta.num_letters(); ++a) {
      auto out = ta.outgoing(q, a);
      std::vector<Guard> guards;
      for (const auto* t : out) guards.push_back(t->guard);
      CoverageGap gap{q, a, {}};
      bool symbolic = false;
      for (const auto& r : regions) {
        bool covered = false;
        try {
          for (const auto* t : out)
            if (region_satisfies(r, t->guard, cmax)) {
              covered = true;
              break;
            }
        } catch (const DiagonalError&) {
          symbolic = true;
          break;
        }
        if (!covered) gap.regions.push_back(r.to_string(ta.clocks));
      }
      std::vector<Guard> missing;
      if (symbolic || !gap.regions.empty()) {
        missing = complement(guards, ta.num_clocks());
        if (symbolic) gap.regions.clear();
      }
      if (missing.empty()) continue;
      report.gaps.push_back(std::move(gap));
      pending.push_back({q, a, std::move(missing)});
    }

  report.completed = ta;
  if (pending.empty()) return report;
  TimedAutomaton& out = report.completed;
  const TransitionId first_loop = static_cast<TransitionId>(out.transitions.size());
  report.sink = add_rejecting_sink(out);
  for (TransitionId id = first_loop; id < static_cast<TransitionId>(out.transitions.size()); ++id)
    report.added.push_back(id);
  for (auto& p : pending)
    for (auto& g : p.missing) report.added.push_back(out.add_transition(p.q, g, p.a, {}, report.sink));
  return report;
}

TimedAutomaton complete(const TimedAutomaton& ta) { return validate(ta).completed; }

}  // namespace hdta
