#include "hdta/analysis.hpp"

#include <map>
#include <numeric>
#include <unordered_map>

#include "hdta/errors.hpp"
#include "hdta/hd.hpp"
#include "hdta/validate.hpp"

namespace hdta {

namespace {

bool bit_accepts(AcceptanceKind kind, bool bit) {
  return kind == AcceptanceKind::Safety ? !bit : bit;
}

// Valuation summary that determines all future region behaviour.
struct ValuationKey {
  std::vector<Rational> bounded;
  std::vector<bool> above;
  bool operator<(const ValuationKey& o) const {
    if (above != o.above) return above < o.above;
    return bounded < o.bounded;
  }
};

ValuationKey key_of(const ClockValuation& nu, const ClockBounds& cmax) {
  ValuationKey k;
  for (std::size_t c = 0; c < nu.size(); ++c) {
    bool above = nu[c] > Rational(cmax[c]);
    k.above.push_back(above);
    k.bounded.push_back(above ? Rational(0) : nu[c]);
  }
  return k;
}

bool take_step(ClockValuation& nu, const RegionStep& s, const ClockBounds& cmax, Rational& d) {
  auto delay = delay_into(nu, s.target, cmax);
  if (!delay) return false;
  d = *delay;
  for (auto& v : nu) v += d;
  nu = apply_resets(std::move(nu), s.resets);
  return true;
}

std::vector<TransitionId> repeat(const std::vector<TransitionId>& v, int times) {
  std::vector<TransitionId> out;
  for (int i = 0; i < times; ++i) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace

std::optional<RealizedLasso> realize_lasso(const std::vector<RegionStep>& stem,
                                           const std::vector<RegionStep>& cycle, int num_clocks,
                                           const ClockBounds& cmax, int max_unroll) {
  if (cycle.empty()) return std::nullopt;
  ClockValuation nu(num_clocks, Rational(0));
  RealizedLasso out;
  for (const auto& s : stem) {
    Rational d;
    if (!take_step(nu, s, cmax, d)) return std::nullopt;
    out.word.prefix.push_back({d, s.letter});
  }
  std::map<ValuationKey, int> seen;
  std::vector<FiniteTimedWord> rounds;
  for (int k = 0; k <= max_unroll; ++k) {
    auto [it, fresh] = seen.emplace(key_of(nu, cmax), k);
    if (!fresh) {
      const int j = it->second;
      for (int i = 0; i < j; ++i)
        out.word.prefix.insert(out.word.prefix.end(), rounds[i].begin(), rounds[i].end());
      for (int i = j; i < k; ++i)
        out.word.cycle.insert(out.word.cycle.end(), rounds[i].begin(), rounds[i].end());
      out.unrolled_prefix = j;
      out.unrolled_period = k - j;
      return out;
    }
    FiniteTimedWord round;
    for (const auto& s : cycle) {
      Rational d;
      if (!take_step(nu, s, cmax, d)) return std::nullopt;
      round.push_back({d, s.letter});
    }
    rounds.push_back(std::move(round));
  }
  return std::nullopt;
}

SimulationArena simulation_arena(const TimedAutomaton& a_in, StateId a0, const TimedAutomaton& b_in,
                                 StateId b0) {
  if (a_in.alphabet != b_in.alphabet) throw InputError("simulation operands have different alphabets");
  const TimedAutomaton a = complete(a_in);
  const TimedAutomaton b = complete(b_in);
  SimulationArena out;
  const int na = a.num_clocks();
  const int nb = b.num_clocks();
  out.num_a_clocks = na;
  out.cmax = a.cmax();
  for (auto c : b.cmax()) out.cmax.push_back(c);
  const ClockBounds cmax_a(out.cmax.begin(), out.cmax.begin() + na);
  const ClockBounds cmax_b(out.cmax.begin() + na, out.cmax.end());
  const Acceptance& acc_a = a.acceptance;
  const Acceptance& acc_b = b.acceptance;
  const bool bits_a = acc_a.is_safety_or_reach();
  const bool bits_b = acc_b.is_safety_or_reach();

  auto priority = [&](StateId p, StateId q, bool ba, bool bb) {
    if (bits_a && bits_b) return (!bit_accepts(acc_a.kind, ba) || bit_accepts(acc_b.kind, bb)) ? 0 : 1;
    if (bits_a) return bit_accepts(acc_a.kind, ba) ? acc_b.priority(q, false) : 0;
    if (bits_b) return bit_accepts(acc_b.kind, bb) ? 0 : acc_a.priority(p, false) + 1;
    return 0;
  };

  using Key = std::tuple<bool, StateId, StateId, Region, LetterId, bool, bool>;
  std::map<Key, int> index;
  auto intern = [&](SimulationArena::Node n) {
    Key k{n.spoiler, n.a_state, n.b_state, n.region, n.letter, n.a_bit, n.b_bit};
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    int id = out.base.add_node(n.spoiler ? Player::One : Player::Two,
                               priority(n.a_state, n.b_state, n.a_bit, n.b_bit));
    out.nodes.push_back(std::move(n));
    out.moves.emplace_back();
    index.emplace(std::move(k), id);
    return id;
  };

  out.initial = intern({true, a0, b0, Region::zero(na + nb), -1, acc_a.monitor_start(a0),
                        acc_b.monitor_start(b0)});
  for (int v = 0; v < out.base.size(); ++v) {
    const SimulationArena::Node n = out.nodes[v];
    if (n.spoiler) {
      for (const Region& rr : time_chain(n.region, out.cmax)) {
        const Region ra = project(rr, 0, na);
        for (const auto& t : a.transitions) {
          if (t.source != n.a_state || !region_satisfies(ra, t.guard, cmax_a)) continue;
          int w = intern({false, t.target, n.b_state, reset(rr, t.resets), t.letter,
                          acc_a.monitor_step(n.a_bit, t.target), n.b_bit});
          out.base.add_edge(v, w);
          out.moves[v].push_back({rr, t.id});
        }
      }
    } else {
      const Region rb = project(n.region, na, nb);
      for (const auto& u : b.transitions) {
        if (u.source != n.b_state || u.letter != n.letter || !region_satisfies(rb, u.guard, cmax_b))
          continue;
        std::vector<ClockId> resets;
        for (ClockId c : u.resets) resets.push_back(c + na);
        int w = intern({true, n.a_state, u.target, reset(n.region, resets), -1, n.a_bit,
                        acc_b.monitor_step(n.b_bit, u.target)});
        out.base.add_edge(v, w);
        out.moves[v].push_back({n.region, u.id});
      }
    }
  }

  if (!bits_a && !bits_b) {
    // Not accepting in A (colours shifted by one) or accepting in B, each
    // as a Rabin chain; the union is turned into parity with a LAR.
    const int n = out.base.size();
    RabinCondition rabin;
    auto add_chain = [&](auto colour) {
      int top = 0;
      for (int v = 0; v < n; ++v) top = std::max(top, colour(v));
      for (int e = 0; e <= top; e += 2) {
        RabinPair pair{std::vector<bool>(n), std::vector<bool>(n)};
        bool any = false;
        for (int v = 0; v < n; ++v) {
          pair.fin[v] = colour(v) > e;
          pair.inf[v] = colour(v) == e;
          any = any || pair.inf[v];
        }
        if (any) rabin.push_back(std::move(pair));
      }
    };
    add_chain([&](int v) { return acc_a.priority(out.nodes[v].a_state, false) + 1; });
    add_chain([&](int v) { return acc_b.priority(out.nodes[v].b_state, false); });
    out.lar = rabin_to_parity_lar(out.base, rabin);
    out.rabin = std::move(rabin);
  }
  return out;
}

SimulationVerdict fair_simulation(const TimedAutomaton& a, StateId a0, const TimedAutomaton& b,
                                  StateId b0) {
  SimulationVerdict v;
  v.arena = simulation_arena(a, a0, b, b0);
  v.solution = solve_parity(v.arena.solved());
  v.winner = v.solution.winner[v.arena.solved_initial()];
  v.holds = v.winner == Player::Two;
  v.witness = v.solution.strategy(v.winner);
  return v;
}

SimulationVerdict fair_simulation(const TimedAutomaton& a, const TimedAutomaton& b) {
  return fair_simulation(a, a.initial, b, b.initial);
}

bool language_inclusion_hd(const TimedAutomaton& a, const TimedAutomaton& b) {
  if (b.acceptance.is_safety_or_reach() && !is_deterministic(b) && !check_hd(b))
    throw NotHistoryDeterministicError("right-hand automaton is not history-deterministic");
  return fair_simulation(a, b).holds;
}

TimedAutomaton universal_automaton(const std::vector<std::string>& alphabet) {
  TimedAutomaton u;
  u.name = "universal";
  u.states = {"u"};
  u.alphabet = alphabet;
  u.acceptance = {AcceptanceKind::Safety, {1}};
  for (LetterId l = 0; l < u.num_letters(); ++l) u.add_transition(0, Guard(), l, {}, 0);
  return u;
}

bool universality_hd(const TimedAutomaton& ta) {
  return language_inclusion_hd(universal_automaton(ta.alphabet), ta);
}

namespace {

struct RoundGraph {
  struct Node {
    StateId q;
    Region r;
    bool bit;
  };
  struct Edge {
    int to;
    Region region;
    TransitionId t;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<Edge>> edges;
};

RoundGraph round_graph(const TimedAutomaton& ta, const ClockBounds& cmax) {
  RoundGraph g;
  const Acceptance& acc = ta.acceptance;
  std::map<std::tuple<StateId, Region, bool>, int> index;
  auto intern = [&](StateId q, const Region& r, bool bit) {
    auto [it, fresh] = index.emplace(std::make_tuple(q, r, bit), static_cast<int>(g.nodes.size()));
    if (fresh) {
      g.nodes.push_back({q, r, bit});
      g.edges.emplace_back();
    }
    return it->second;
  };
  intern(ta.initial, Region::zero(ta.num_clocks()), acc.monitor_start(ta.initial));
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    const auto node = g.nodes[v];
    for (const Region& rr : time_chain(node.r, cmax))
      for (const auto& t : ta.transitions) {
        if (t.source != node.q || !region_satisfies(rr, t.guard, cmax)) continue;
        int w = intern(t.target, reset(rr, t.resets), acc.monitor_step(node.bit, t.target));
        g.edges[v].push_back({w, rr, t.id});
      }
  }
  return g;
}

EmptinessResult emptiness_impl(const TimedAutomaton& ta, bool concretize) {
  ta.check_well_formed();
  const ClockBounds cmax = ta.cmax();
  RoundGraph g = round_graph(ta, cmax);
  std::vector<std::vector<int>> succ(g.nodes.size());
  std::vector<int> prio(g.nodes.size());
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    for (const auto& e : g.edges[v]) succ[v].push_back(e.to);
    prio[v] = ta.acceptance.priority(g.nodes[v].q, g.nodes[v].bit);
  }
  EmptinessResult res;
  auto lasso = parity_nonemptiness(succ, prio, {0});
  if (!lasso) return res;
  res.empty = false;
  for (int v : lasso->stem) res.region_stem.push_back({g.nodes[v].q, g.nodes[v].r});
  for (int v : lasso->cycle) res.region_cycle.push_back({g.nodes[v].q, g.nodes[v].r});
  if (!concretize) return res;

  auto edge = [&](int from, int to) -> const RoundGraph::Edge& {
    for (const auto& e : g.edges[from])
      if (e.to == to) return e;
    throw std::logic_error("lasso uses a missing edge");
  };
  std::vector<int> path = lasso->stem;
  path.insert(path.end(), lasso->cycle.begin(), lasso->cycle.end());
  path.push_back(lasso->cycle.front());
  std::vector<RegionStep> stem, cycle;
  std::vector<TransitionId> stem_t, cycle_t;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto& e = edge(path[i], path[i + 1]);
    const Transition& t = ta.transitions[e.t];
    RegionStep s{e.region, t.letter, t.resets};
    if (i < lasso->stem.size()) {
      stem.push_back(std::move(s));
      stem_t.push_back(t.id);
    } else {
      cycle.push_back(std::move(s));
      cycle_t.push_back(t.id);
    }
  }
  auto real = realize_lasso(stem, cycle, ta.num_clocks(), cmax);
  if (!real) return res;
  res.word = real->word;
  TimedRun run;
  run.prefix = stem_t;
  auto pre = repeat(cycle_t, real->unrolled_prefix);
  run.prefix.insert(run.prefix.end(), pre.begin(), pre.end());
  run.cycle = repeat(cycle_t, real->unrolled_period);
  res.run = std::move(run);
  return res;
}

}  // namespace

EmptinessResult emptiness(const TimedAutomaton& ta) { return emptiness_impl(complete(ta), true); }

bool replay_accepting(const TimedAutomaton& ta, const Lasso& word, const TimedRun& run) {
  if (word.prefix.size() != run.prefix.size() || word.cycle.size() != run.cycle.size() ||
      word.cycle.empty())
    return false;
  const Acceptance& acc = ta.acceptance;
  const ClockBounds cmax = ta.cmax();
  Configuration c = initial_configuration(ta);
  bool bit = acc.monitor_start(c.state);
  auto step = [&](const TimedLetter& l, TransitionId id) {
    if (id < 0 || id >= static_cast<int>(ta.transitions.size())) return false;
    const Transition& t = ta.transitions[id];
    c = delay(c, l.delay);
    if (t.source != c.state || t.letter != l.letter || !eval_guard(t.guard, c.valuation)) return false;
    c.state = t.target;
    c.valuation = apply_resets(std::move(c.valuation), t.resets);
    bit = acc.monitor_step(bit, c.state);
    return true;
  };
  for (std::size_t i = 0; i < run.prefix.size(); ++i)
    if (!step(word.prefix[i], run.prefix[i])) return false;
  const StateId start_state = c.state;
  const ValuationKey start = key_of(c.valuation, cmax);
  std::vector<StateId> visited;
  for (std::size_t i = 0; i < run.cycle.size(); ++i) {
    if (!step(word.cycle[i], run.cycle[i])) return false;
    visited.push_back(c.state);
  }
  const ValuationKey end = key_of(c.valuation, cmax);
  if (c.state != start_state || start < end || end < start) return false;
  int top = -1;
  for (StateId q : visited) top = std::max(top, acc.priority(q, bit));
  return top % 2 == 0;
}

TimedAutomaton lasso_encoder(const std::vector<std::string>& alphabet, const Lasso& word,
                             std::int64_t factor) {
  TimedAutomaton e;
  e.name = "word";
  e.alphabet = alphabet;
  e.clocks = {"z"};
  const int np = static_cast<int>(word.prefix.size());
  const int nc = static_cast<int>(word.cycle.size());
  if (nc == 0) throw InputError("lasso cycle is empty");
  for (int i = 0; i < np + nc; ++i) e.states.push_back("w" + std::to_string(i));
  e.acceptance = {AcceptanceKind::Safety, std::vector<int>(np + nc, 1)};
  for (int i = 0; i < np + nc; ++i) {
    const TimedLetter& l = i < np ? word.prefix[i] : word.cycle[i - np];
    if (l.letter < 0 || l.letter >= e.num_letters()) throw InputError("lasso uses an unknown letter");
    Rational scaled = l.delay * factor;
    if (scaled.denominator() != 1) throw InputError("lasso delay is not integral after scaling");
    const int next = i + 1 < np + nc ? i + 1 : np;
    e.add_transition(i, Guard::equal(0, scaled.numerator()), l.letter, {0}, next);
  }
  return e;
}

bool member_lasso(const TimedAutomaton& ta, const Lasso& word) {
  std::int64_t factor = 1;
  for (const auto* part : {&word.prefix, &word.cycle})
    for (const auto& l : *part) {
      if (l.delay < Rational(0)) throw InputError("negative delay in lasso");
      factor = std::lcm(factor, l.delay.denominator());
    }
  TimedAutomaton scaled = scale_time(complete(ta), factor);
  TimedAutomaton enc = lasso_encoder(ta.alphabet, word, factor);
  return !emptiness_impl(product_intersection(scaled, enc), false).empty;
}

std::optional<DistinguishingPlay> distinguishing_play(const SimulationVerdict& v,
                                                      const TimedAutomaton& a_in,
                                                      const TimedAutomaton& b_in) {
  if (v.holds) return std::nullopt;
  const TimedAutomaton a = complete(a_in);
  const TimedAutomaton b = complete(b_in);
  const SimulationArena& sa = v.arena;
  const GameArena& g = sa.solved();
  // Player::One follows his strategy, Player::Two her first option.
  std::vector<int> order;
  std::vector<int> choice_index;
  std::map<int, int> pos;
  int node = sa.solved_initial();
  while (!pos.count(node)) {
    pos[node] = static_cast<int>(order.size());
    order.push_back(node);
    int c = g.owner(node) == Player::One ? v.solution.strategy_one[node] : 0;
    if (g.successors(node).empty() || c < 0) return std::nullopt;
    choice_index.push_back(c);
    node = g.successors(node)[c];
  }
  const int n = static_cast<int>(order.size());
  const int loop = pos[node];
  auto next = [&](int i) { return i + 1 < n ? i + 1 : loop; };
  struct Round {
    RegionStep step;
    TransitionId a_t;
    TransitionId b_t;
  };
  // A round is a Player::One move followed by Player::Two's answer.
  std::vector<Round> rounds;
  std::map<int, int> round_of;
  int i = 0;
  while (!round_of.count(i)) {
    round_of[i] = static_cast<int>(rounds.size());
    const int j = next(i);
    const auto& m1 = sa.moves[sa.base_of(order[i])][choice_index[i]];
    const auto& m2 = sa.moves[sa.base_of(order[j])][choice_index[j]];
    const Transition& t = a.transitions[m1.transition];
    const Transition& u = b.transitions[m2.transition];
    std::vector<ClockId> resets = t.resets;
    for (ClockId c : u.resets) resets.push_back(c + sa.num_a_clocks);
    rounds.push_back({{m1.region, t.letter, resets}, t.id, u.id});
    i = next(j);
  }
  const int first_cycle_round = round_of[i];
  std::vector<RegionStep> stem, cycle;
  std::vector<TransitionId> a_stem, a_cycle, b_stem, b_cycle;
  for (int r = 0; r < static_cast<int>(rounds.size()); ++r) {
    const bool in_cycle = r >= first_cycle_round;
    (in_cycle ? cycle : stem).push_back(rounds[r].step);
    (in_cycle ? a_cycle : a_stem).push_back(rounds[r].a_t);
    (in_cycle ? b_cycle : b_stem).push_back(rounds[r].b_t);
  }
  if (cycle.empty()) return std::nullopt;
  auto real = realize_lasso(stem, cycle, static_cast<int>(sa.cmax.size()), sa.cmax);
  if (!real) return std::nullopt;
  DistinguishingPlay play;
  play.word = real->word;
  auto finish = [&](std::vector<TransitionId> st, const std::vector<TransitionId>& cy) {
    TimedRun r;
    r.prefix = std::move(st);
    auto pre = repeat(cy, real->unrolled_prefix);
    r.prefix.insert(r.prefix.end(), pre.begin(), pre.end());
    r.cycle = repeat(cy, real->unrolled_period);
    return r;
  };
  play.a_run = finish(a_stem, a_cycle);
  play.b_run = finish(b_stem, b_cycle);
  return play;
}

}  // namespace hdta
