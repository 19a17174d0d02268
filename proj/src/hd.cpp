#include "hdta/hd.hpp"

#include <deque>

#include "hdta/errors.hpp"
#include "hdta/validate.hpp"

namespace hdta {

namespace {

void require_safety_or_reach(const TimedAutomaton& ta) {
  if (!ta.acceptance.is_safety_or_reach())
    throw UnsupportedError(std::string("history-determinism of ") + to_string(ta.acceptance.kind) +
                           " automata is an open problem and not decided here");
}

bool bit_accepts(AcceptanceKind kind, bool bit) {
  return kind == AcceptanceKind::Safety ? !bit : bit;
}

auto key_of(const G1Arena::Node& n) {
  return std::make_tuple(static_cast<int>(n.phase), n.first, n.second, n.region, n.letter, n.first_bit,
                         n.second_bit, n.violated);
}

}  // namespace

std::optional<int> G1Arena::find(const Node& n) const {
  auto it = index_.find(key_of(n));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

G1Arena g1_arena(const TimedAutomaton& ta, G1Arena::Objective objective,
                 const std::set<std::pair<StateId, Region>>* almost_final) {
  require_safety_or_reach(ta);
  ta.check_well_formed();
  using Phase = G1Arena::Phase;
  const bool af_mode = objective == G1Arena::Objective::AlmostFinal;
  if (af_mode && (ta.acceptance.kind != AcceptanceKind::Reachability || !almost_final))
    throw InputError("almost-final objective needs a reachability automaton and its almost-final regions");
  G1Arena out;
  out.objective = objective;
  const int n = ta.num_clocks();
  const ClockBounds single = ta.cmax();
  out.cmax = single;
  out.cmax.insert(out.cmax.end(), single.begin(), single.end());
  const Acceptance& acc = ta.acceptance;

  auto is_af = [&](StateId q, const Region& r) { return almost_final->count({q, r}) > 0; };
  auto priority = [&](const G1Arena::Node& v) {
    if (af_mode) return v.violated ? 1 : 0;
    return (!bit_accepts(acc.kind, v.first_bit) || bit_accepts(acc.kind, v.second_bit)) ? 0 : 1;
  };
  auto intern = [&](G1Arena::Node v) {
    if (af_mode && v.phase == Phase::Letter && !v.violated) {
      v.second_bit = v.second_bit || is_af(v.second, project(v.region, n, n));
      v.violated = is_af(v.first, project(v.region, 0, n)) && !v.second_bit;
    }
    if (v.violated) {
      // Lost for Player::Two: collapse to a single sink.
      v = G1Arena::Node{};
      v.violated = true;
    }
    auto k = key_of(v);
    auto it = out.index_.find(k);
    if (it != out.index_.end()) return it->second;
    const Player owner = v.phase == Phase::Second ? Player::Two : Player::One;
    int id = out.arena.add_node(owner, priority(v));
    out.nodes.push_back(std::move(v));
    out.moves.emplace_back();
    out.index_.emplace(std::move(k), id);
    return id;
  };

  G1Arena::Node init;
  init.first = init.second = ta.initial;
  init.region = Region::zero(2 * n);
  init.first_bit = init.second_bit = af_mode ? false : acc.monitor_start(ta.initial);
  out.initial = intern(init);

  for (int v = 0; v < out.arena.size(); ++v) {
    const G1Arena::Node cur = out.nodes[v];
    if (cur.violated) {
      out.arena.add_edge(v, v);
      out.moves[v].push_back({});
      continue;
    }
    switch (cur.phase) {
      case Phase::Letter:
        for (const Region& rr : time_chain(cur.region, out.cmax))
          for (LetterId a = 0; a < ta.num_letters(); ++a) {
            G1Arena::Node next = cur;
            next.phase = Phase::Second;
            next.region = rr;
            next.letter = a;
            out.arena.add_edge(v, intern(next));
            out.moves[v].push_back({rr, a, -1});
          }
        break;
      case Phase::Second: {
        const Region r2 = project(cur.region, n, n);
        for (const Transition* t : ta.outgoing(cur.second, cur.letter)) {
          if (!region_satisfies(r2, t->guard, single)) continue;
          G1Arena::Node next = cur;
          next.phase = Phase::First;
          next.second = t->target;
          std::vector<ClockId> resets;
          for (ClockId c : t->resets) resets.push_back(c + n);
          next.region = reset(cur.region, resets);
          if (!af_mode) next.second_bit = acc.monitor_step(cur.second_bit, t->target);
          out.arena.add_edge(v, intern(next));
          out.moves[v].push_back({{}, -1, t->id});
        }
        break;
      }
      case Phase::First: {
        const Region r1 = project(cur.region, 0, n);
        for (const Transition* t : ta.outgoing(cur.first, cur.letter)) {
          if (!region_satisfies(r1, t->guard, single)) continue;
          G1Arena::Node next = cur;
          next.phase = Phase::Letter;
          next.letter = -1;
          next.first = t->target;
          next.region = reset(cur.region, t->resets);
          if (!af_mode) next.first_bit = acc.monitor_step(cur.first_bit, t->target);
          out.arena.add_edge(v, intern(next));
          out.moves[v].push_back({{}, -1, t->id});
        }
        break;
      }
    }
  }
  return out;
}

ReachGame almost_final_game(const TimedAutomaton& ta) {
  if (ta.acceptance.kind != AcceptanceKind::Reachability)
    throw InputError("almost-final regions are defined for reachability automata");
  ta.check_well_formed();
  ReachGame g;
  g.cmax = ta.cmax();
  auto intern = [&](ReachGame::Node v) {
    auto k = std::make_tuple(v.spoiler, v.state, v.region, v.letter);
    auto it = g.index.find(k);
    if (it != g.index.end()) return it->second;
    int id = g.arena.add_node(v.spoiler ? Player::One : Player::Two, 0);
    g.nodes.push_back(std::move(v));
    g.transition.emplace_back();
    g.index.emplace(std::move(k), id);
    return id;
  };
  intern({true, ta.initial, Region::zero(ta.num_clocks()), -1});
  for (int v = 0; v < g.arena.size(); ++v) {
    const ReachGame::Node cur = g.nodes[v];
    if (cur.spoiler) {
      for (const Region& rr : time_chain(cur.region, g.cmax))
        for (LetterId a = 0; a < ta.num_letters(); ++a) {
          g.arena.add_edge(v, intern({false, cur.state, rr, a}));
          g.transition[v].push_back(-1);
        }
    } else {
      for (const Transition* t : ta.outgoing(cur.state, cur.letter)) {
        if (!region_satisfies(cur.region, t->guard, g.cmax)) continue;
        g.arena.add_edge(v, intern({true, t->target, reset(cur.region, t->resets), -1}));
        g.transition[v].push_back(t->id);
      }
    }
  }
  std::vector<bool> target(g.arena.size());
  for (int v = 0; v < g.arena.size(); ++v) target[v] = ta.acceptance.marks[g.nodes[v].state] != 0;
  g.strategy.assign(g.arena.size(), -1);
  g.winning = attractor(g.arena, Player::Two, target, {}, &g.strategy);
  return g;
}

std::set<std::pair<StateId, Region>> almost_final_regions(const TimedAutomaton& ta) {
  ReachGame g = almost_final_game(ta);
  std::set<std::pair<StateId, Region>> out;
  for (int v = 0; v < g.arena.size(); ++v)
    if (g.nodes[v].spoiler && g.winning[v]) out.insert({g.nodes[v].state, g.nodes[v].region});
  return out;
}

HdVerdict check_hd_routes(const TimedAutomaton& input) {
  require_safety_or_reach(input);
  const TimedAutomaton ta = complete(input);
  HdVerdict v;
  G1Arena g = g1_arena(ta);
  v.direct = solve_parity(g.arena).winner[g.initial] == Player::Two;
  v.almost_final = v.direct;
  if (ta.acceptance.kind == AcceptanceKind::Reachability) {
    auto af = almost_final_regions(ta);
    G1Arena h = g1_arena(ta, G1Arena::Objective::AlmostFinal, &af);
    v.almost_final = solve_parity(h.arena).winner[h.initial] == Player::Two;
  }
  return v;
}

bool check_hd(const TimedAutomaton& input) {
  require_safety_or_reach(input);
  const TimedAutomaton ta = complete(input);
  G1Arena g = g1_arena(ta);
  return solve_parity(g.arena).winner[g.initial] == Player::Two;
}

std::optional<TransitionId> RegionResolver::choose(StateId q, const Region& r, LetterId a) const {
  auto it = table.find({q, r, a});
  if (it == table.end()) return std::nullopt;
  return it->second;
}

RegionResolver extract_resolver(const TimedAutomaton& ta) {
  require_safety_or_reach(ta);
  ta.check_well_formed();
  const bool reach = ta.acceptance.kind == AcceptanceKind::Reachability;
  const ClockBounds cmax = ta.cmax();

  std::optional<ReachGame> afg;
  G1Arena g;
  if (reach) {
    afg = almost_final_game(ta);
    std::set<std::pair<StateId, Region>> af;
    for (int v = 0; v < afg->arena.size(); ++v)
      if (afg->nodes[v].spoiler && afg->winning[v]) af.insert({afg->nodes[v].state, afg->nodes[v].region});
    g = g1_arena(ta, G1Arena::Objective::AlmostFinal, &af);
  } else {
    g = g1_arena(ta);
  }
  const Solution sol = solve_parity(g.arena);
  if (sol.winner[g.initial] != Player::Two)
    throw NotHistoryDeterministicError("Player 1 wins the one-token game");

  auto diagonal_choice = [&](StateId q, const Region& rr, LetterId a) -> TransitionId {
    G1Arena::Node node;
    node.phase = G1Arena::Phase::Second;
    node.first = node.second = q;
    node.region = embed_diagonal(rr);
    node.letter = a;
    for (bool bit : {false, true}) {
      node.second_bit = bit;
      node.first_bit = reach ? false : bit;
      auto id = g.find(node);
      if (!id || sol.winner[*id] != Player::Two) continue;
      int c = sol.strategy_two[*id];
      if (c >= 0) return g.moves[*id][c].transition;
    }
    return -1;
  };
  auto af_choice = [&](StateId q, const Region& rr, LetterId a) -> TransitionId {
    if (!afg) return -1;
    auto it = afg->index.find({false, q, rr, a});
    if (it == afg->index.end() || !afg->winning[it->second]) return -1;
    int c = afg->strategy[it->second];
    return c >= 0 ? afg->transition[it->second][c] : -1;
  };

  RegionResolver res;
  std::set<std::pair<StateId, Region>> seen;
  std::deque<std::pair<StateId, Region>> queue;
  auto push = [&](StateId q, Region r) {
    if (seen.insert({q, r}).second) queue.emplace_back(q, std::move(r));
  };
  push(ta.initial, Region::zero(ta.num_clocks()));
  while (!queue.empty()) {
    auto [q, r] = queue.front();
    queue.pop_front();
    for (const Region& rr : time_chain(r, cmax))
      for (LetterId a = 0; a < ta.num_letters(); ++a) {
        if (res.table.count({q, rr, a})) continue;
        TransitionId choice = af_choice(q, rr, a);
        if (choice < 0) choice = diagonal_choice(q, rr, a);
        if (choice < 0)
          for (const Transition* t : ta.outgoing(q, a))
            if (region_satisfies(rr, t->guard, cmax)) {
              choice = t->id;
              break;
            }
        if (choice < 0) continue;
        res.table[{q, rr, a}] = choice;
        const Transition& t = ta.transitions[choice];
        push(t.target, reset(rr, t.resets));
      }
  }
  return res;
}

std::vector<TransitionId> resolver_run(const TimedAutomaton& ta, const RegionResolver& r,
                                       const FiniteTimedWord& w) {
  const ClockBounds cmax = ta.cmax();
  Configuration c = initial_configuration(ta);
  std::vector<TransitionId> out;
  for (const auto& l : w) {
    c = delay(c, l.delay);
    auto t = r.choose(c.state, region_of(c.valuation, cmax), l.letter);
    if (!t) break;
    const Transition& tr = ta.transitions[*t];
    if (!eval_guard(tr.guard, c.valuation)) break;
    out.push_back(*t);
    c.state = tr.target;
    c.valuation = apply_resets(std::move(c.valuation), tr.resets);
  }
  return out;
}

}  // namespace hdta
