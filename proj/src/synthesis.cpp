#include "hdta/synthesis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "hdta/analysis.hpp"
#include "hdta/errors.hpp"

namespace hdta {

PairAlphabet split_alphabet(const TimedAutomaton& ta) {
  PairAlphabet p;
  auto intern = [](std::vector<std::string>& names, const std::string& n) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    names.push_back(n);
    return static_cast<int>(names.size()) - 1;
  };
  for (const auto& letter : ta.alphabet) {
    auto slash = letter.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == letter.size() ||
        letter.find('/', slash + 1) != std::string::npos)
      throw InputError("letter '" + letter + "' is not of the form input/output");
    p.input_of.push_back(intern(p.inputs, letter.substr(0, slash)));
    p.output_of.push_back(intern(p.outputs, letter.substr(slash + 1)));
  }
  if (p.inputs.size() * p.outputs.size() != ta.alphabet.size())
    throw InputError("alphabet is not the full product of inputs and outputs");
  return p;
}

TimedAutomaton delta_annotate(const TimedAutomaton& ta) {
  ta.check_well_formed();
  TimedAutomaton out = ta;
  out.name = ta.name + "_annotated";
  out.alphabet.clear();
  out.transitions.clear();
  for (const auto& t : ta.transitions) {
    out.alphabet.push_back(ta.alphabet[t.letter] + "@t" + std::to_string(t.id));
    out.add_transition(t.source, t.guard, t.id, t.resets, t.target);
  }
  return out;
}

TransitionId annotated_transition(const TimedAutomaton& annotated, LetterId letter) {
  const std::string& name = annotated.alphabet.at(letter);
  auto at = name.rfind("@t");
  if (at == std::string::npos) throw InputError("letter is not annotated");
  return std::stoi(name.substr(at + 2));
}

std::optional<int> Controller::find(StateId q, const Region& r) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].state == q && nodes[i].region == r) return static_cast<int>(i);
  return std::nullopt;
}

SynthesisResult solve_synthesis(const TimedAutomaton& spec) {
  spec.check_well_formed();
  const PairAlphabet letters = split_alphabet(spec);
  const TimedAutomaton annotated = delta_annotate(spec);
  const ClockBounds cmax = spec.cmax();
  const Acceptance& acc = spec.acceptance;
  const int num_inputs = static_cast<int>(letters.inputs.size());

  struct Node {
    bool env;
    StateId q;
    Region r;
    int input;
    bool bit;
  };
  struct Move {
    Region region;  // environment moves
    int input = -1;
    TransitionId transition = -1;  // controller moves (original id)
  };
  GameArena arena;
  std::vector<Node> nodes;
  std::vector<std::vector<Move>> moves;
  std::map<std::tuple<bool, StateId, Region, int, bool>, int> index;
  auto intern = [&](Node n) {
    auto k = std::make_tuple(n.env, n.q, n.r, n.input, n.bit);
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    int id = arena.add_node(n.env ? Player::One : Player::Two, acc.priority(n.q, n.bit));
    nodes.push_back(std::move(n));
    moves.emplace_back();
    index.emplace(std::move(k), id);
    return id;
  };
  const int initial =
      intern({true, spec.initial, Region::zero(spec.num_clocks()), -1, acc.monitor_start(spec.initial)});
  for (int v = 0; v < arena.size(); ++v) {
    const Node n = nodes[v];
    if (n.env) {
      for (const Region& rr : time_chain(n.r, cmax))
        for (int i = 0; i < num_inputs; ++i) {
          arena.add_edge(v, intern({false, n.q, rr, i, n.bit}));
          moves[v].push_back({rr, i, -1});
        }
      continue;
    }
    for (const auto& t : annotated.transitions) {
      const TransitionId orig = annotated_transition(annotated, t.letter);
      if (t.source != n.q || letters.input_of[spec.transitions[orig].letter] != n.input) continue;
      if (!region_satisfies(n.r, t.guard, cmax)) continue;
      arena.add_edge(v, intern({true, t.target, reset(n.r, t.resets), -1, acc.monitor_step(n.bit, t.target)}));
      moves[v].push_back({{}, -1, orig});
    }
  }

  SynthesisResult res;
  res.arena_nodes = arena.size();
  const Solution sol = solve_parity(arena);
  res.realisable = sol.winner[initial] == Player::Two;
  if (!res.realisable) return res;

  // Environment nodes reachable when Player::Two follows her strategy.
  std::vector<bool> visited(arena.size(), false);
  std::deque<int> queue{initial};
  visited[initial] = true;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : arena.successors(v)) {
      int c = sol.strategy_two[w];
      if (c < 0) continue;
      int x = arena.successors(w)[c];
      if (!visited[x]) {
        visited[x] = true;
        queue.push_back(x);
      }
    }
  }
  Controller ctl;
  ctl.cmax = cmax;
  std::map<std::pair<StateId, Region>, int> node_of;
  std::map<std::pair<StateId, Region>, int> game_node;
  auto node_id = [&](StateId q, const Region& r) {
    auto [it, fresh] = node_of.emplace(std::make_pair(q, r), static_cast<int>(ctl.nodes.size()));
    if (fresh) {
      ctl.nodes.push_back({q, r});
      ctl.table.emplace_back();
    }
    return it->second;
  };
  node_id(spec.initial, Region::zero(spec.num_clocks()));
  for (int v = 0; v < arena.size(); ++v) {
    if (!visited[v]) continue;
    auto key = std::make_pair(nodes[v].q, nodes[v].r);
    auto it = game_node.find(key);
    if (it == game_node.end() || (nodes[it->second].bit && !nodes[v].bit)) game_node[key] = v;
  }
  for (std::size_t k = 0; k < ctl.nodes.size(); ++k) {
    auto it = game_node.find({ctl.nodes[k].state, ctl.nodes[k].region});
    if (it == game_node.end()) continue;
    const int v = it->second;
    for (std::size_t e = 0; e < arena.successors(v).size(); ++e) {
      const int w = arena.successors(v)[e];
      const int c = sol.strategy_two[w];
      if (c < 0) continue;
      const Move& env = moves[v][e];
      const TransitionId t = moves[w][c].transition;
      const Transition& tr = spec.transitions[t];
      const int next = node_id(tr.target, reset(env.region, tr.resets));
      ctl.table[k][{env.region, env.input}] = {letters.output_of[tr.letter], t, next};
    }
  }
  res.controller = std::move(ctl);
  return res;
}

EnvironmentStrategy random_environment(const Controller& c, int num_inputs, std::mt19937_64& rng) {
  EnvironmentStrategy env;
  for (const auto& n : c.nodes) {
    auto chain = time_chain(n.region, c.cmax);
    std::uniform_int_distribution<std::size_t> pick_region(0, chain.size() - 1);
    std::uniform_int_distribution<int> pick_input(0, num_inputs - 1);
    env.choice.emplace_back(chain[pick_region(rng)], pick_input(rng));
  }
  return env;
}

bool controller_play_accepted(const TimedAutomaton& spec, const PairAlphabet& letters,
                              const Controller& c, const EnvironmentStrategy& env) {
  const Acceptance& acc = spec.acceptance;
  ClockValuation nu(spec.num_clocks(), Rational(0));
  StateId q = spec.initial;
  int node = 0;
  bool bit = acc.monitor_start(q);
  // Both strategies only look at regions, so the play is periodic as soon as
  // (node, region, monitor bit) repeats, even though valuations need not.
  std::map<std::tuple<int, Region, bool>, int> seen;
  std::vector<StateId> visited;
  for (;;) {
    auto [it, fresh] = seen.emplace(std::make_tuple(node, region_of(nu, c.cmax), bit), static_cast<int>(visited.size()));
    if (!fresh) {
      int top = -1;
      for (std::size_t i = it->second; i < visited.size(); ++i) top = std::max(top, acc.priority(visited[i], bit));
      return top % 2 == 0;
    }
    if (c.nodes[node].state != q) return false;
    const auto& [target, input] = env.choice[node];
    auto d = delay_into(nu, target, c.cmax);
    if (!d) return false;
    for (auto& v : nu) v += *d;
    auto entry = c.table[node].find({target, input});
    if (entry == c.table[node].end()) return false;
    const Transition& t = spec.transitions[entry->second.transition];
    if (t.source != q || letters.input_of[t.letter] != input ||
        letters.output_of[t.letter] != entry->second.output || !eval_guard(t.guard, nu))
      return false;
    nu = apply_resets(std::move(nu), t.resets);
    q = t.target;
    bit = acc.monitor_step(bit, q);
    visited.push_back(q);
    node = entry->second.next;
  }
}

}  // namespace hdta
