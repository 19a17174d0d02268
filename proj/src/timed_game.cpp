#include "hdta/timed_game.hpp"

#include <deque>
#include <unordered_map>

#include "hdta/errors.hpp"

namespace hdta {

namespace {

struct NodeKey {
  StateId q;
  Region r;
  bool bit;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const {
    return RegionHash{}(k.r) * 131 + static_cast<std::size_t>(k.q) * 2 + (k.bit ? 1 : 0);
  }
};

}  // namespace

CompiledGame compile_timed_game(const TimedGame& g) {
  const TimedAutomaton& ta = g.ta;
  ta.check_well_formed();
  if (static_cast<int>(g.owner.size()) != ta.num_states())
    throw InputError("game owner map does not cover all states");
  CompiledGame out;
  out.cmax = ta.cmax();
  const Acceptance& acc = ta.acceptance;
  std::unordered_map<NodeKey, int, NodeKeyHash> index;
  auto intern = [&](StateId q, const Region& r, bool bit) {
    NodeKey k{q, r, bit};
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    int id = out.arena.add_node(g.owner[q], acc.priority(q, bit));
    out.nodes.push_back({{q, r}, bit});
    out.moves.emplace_back();
    index.emplace(std::move(k), id);
    return id;
  };
  out.initial = intern(ta.initial, Region::zero(ta.num_clocks()), acc.monitor_start(ta.initial));
  for (int v = 0; v < out.arena.size(); ++v) {
    const StateId q = out.nodes[v].config.state;
    const Region r = out.nodes[v].config.region;
    const bool bit = out.nodes[v].bit;
    for (const Region& rr : time_chain(r, out.cmax))
      for (const auto& t : ta.transitions) {
        if (t.source != q || !region_satisfies(rr, t.guard, out.cmax)) continue;
        int w = intern(t.target, reset(rr, t.resets), acc.monitor_step(bit, t.target));
        out.arena.add_edge(v, w);
        out.moves[v].push_back({rr, t.id});
      }
  }
  return out;
}

TimedGameResult solve_timed_game(const TimedGame& g) {
  TimedGameResult res{Player::One, compile_timed_game(g), {}};
  res.solution = solve_parity(res.compiled.arena);
  res.winner = res.solution.winner[res.compiled.initial];
  return res;
}

TimedGame compose(const TimedGame& g, const TimedAutomaton& spec) {
  if (g.ta.alphabet != spec.alphabet) throw InputError("game and automaton alphabets differ");
  g.ta.check_well_formed();
  spec.check_well_formed();
  TimedGame out;
  TimedAutomaton& p = out.ta;
  p.name = g.ta.name + "_with_" + spec.name;
  p.alphabet = g.ta.alphabet;
  p.clocks = g.ta.clocks;
  for (const auto& c : spec.clocks) p.clocks.push_back(spec.name + "." + c);
  const ClockId z = p.num_clocks();
  p.clocks.push_back("z");
  const int off = g.ta.num_clocks();
  p.acceptance.kind = spec.acceptance.kind;

  const int ng = g.ta.num_states();
  const int ns = spec.num_states();
  const int nl = spec.num_letters();
  // Main states (s, q) first, then intermediate states (s, q, a).
  for (int s = 0; s < ng; ++s)
    for (int q = 0; q < ns; ++q) {
      p.states.push_back(g.ta.states[s] + ":" + spec.states[q]);
      p.acceptance.marks.push_back(spec.acceptance.marks[q]);
      out.owner.push_back(g.owner[s]);
    }
  auto main = [&](int s, int q) { return s * ns + q; };
  auto mid = [&](int s, int q, int a) { return ng * ns + (s * ns + q) * nl + a; };
  for (int s = 0; s < ng; ++s)
    for (int q = 0; q < ns; ++q)
      for (int a = 0; a < nl; ++a) {
        p.states.push_back(g.ta.states[s] + ":" + spec.states[q] + ":" + spec.alphabet[a]);
        p.acceptance.marks.push_back(spec.acceptance.marks[q]);
        out.owner.push_back(Player::Two);
      }
  p.initial = main(g.ta.initial, spec.initial);

  for (const auto& t : g.ta.transitions)
    for (int q = 0; q < ns; ++q) {
      std::vector<ClockId> resets = t.resets;
      resets.push_back(z);
      p.add_transition(main(t.source, q), t.guard, t.letter, resets, mid(t.target, q, t.letter));
    }
  for (int s = 0; s < ng; ++s)
    for (const auto& u : spec.transitions) {
      std::vector<GuardAtom> atoms{{z, kZeroClock, Relation::Le, 0}};
      for (auto atom : u.guard.atoms()) {
        atom.left += off;
        if (atom.right != kZeroClock) atom.right += off;
        atoms.push_back(atom);
      }
      std::vector<ClockId> resets;
      for (ClockId c : u.resets) resets.push_back(c + off);
      p.add_transition(mid(s, u.source, u.letter), Guard(std::move(atoms)), u.letter, resets,
                       main(s, u.target));
    }
  return out;
}

}  // namespace hdta
