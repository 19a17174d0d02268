#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "hdta/analysis.hpp"
#include "hdta/countdown.hpp"
#include "hdta/determinize.hpp"
#include "hdta/dot.hpp"
#include "hdta/errors.hpp"
#include "hdta/hd.hpp"
#include "hdta/io.hpp"
#include "hdta/synthesis.hpp"
#include "hdta/timed_game.hpp"
#include "hdta/validate.hpp"

using nlohmann::json;
using namespace hdta;

namespace {

enum Exit { kHolds = 0, kFails = 1, kError = 2, kUnsupported = 3 };

int emit(const json& verdict, const json& witness, int code) {
  std::cout << json{{"verdict", verdict}, {"witness", witness}}.dump(2) << "\n";
  return code;
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

json word_json(const TimedAutomaton& ta, const FiniteTimedWord& w) {
  json out = json::array();
  for (const auto& l : w) out.push_back({{"delay", to_string(l.delay)}, {"letter", ta.alphabet[l.letter]}});
  return out;
}

json lasso_json(const TimedAutomaton& ta, const Lasso& l) {
  return {{"prefix", word_json(ta, l.prefix)}, {"cycle", word_json(ta, l.cycle)}};
}

json transitions_json(const TimedAutomaton& ta, const std::vector<TransitionId>& ids) {
  json out = json::array();
  for (TransitionId id : ids) {
    const Transition& t = ta.transitions[id];
    out.push_back({{"id", id}, {"source", ta.states[t.source]}, {"target", ta.states[t.target]},
                   {"letter", ta.alphabet[t.letter]}});
  }
  return out;
}

json run_json(const TimedAutomaton& ta, const TimedRun& r) {
  return {{"prefix", transitions_json(ta, r.prefix)}, {"cycle", transitions_json(ta, r.cycle)}};
}

json play_json(const SimulationVerdict& v, const TimedAutomaton& a, const TimedAutomaton& b) {
  auto play = distinguishing_play(v, a, b);
  if (!play) return nullptr;
  const TimedAutomaton ca = complete(a), cb = complete(b);
  return {{"word", lasso_json(ca, play->word)},
          {"a_run", run_json(ca, play->a_run)},
          {"b_run", run_json(cb, play->b_run)}};
}

// "3/10:a,1:a" -> timed letters; the delay ends at the first ':'.
FiniteTimedWord parse_word(const TimedAutomaton& ta, const std::string& text) {
  FiniteTimedWord w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon == std::string::npos) throw InputError("timed letter '" + item + "' is not DELAY:LETTER");
    auto letter = ta.find_letter(item.substr(colon + 1));
    if (!letter) throw InputError("unknown letter in '" + item + "'");
    w.push_back({parse_rational(item.substr(0, colon)), *letter});
  }
  return w;
}

json resolver_json(const TimedAutomaton& ta, const RegionResolver& r) {
  json out = json::array();
  for (const auto& [key, id] : r.table) {
    const auto& [q, region, a] = key;
    out.push_back({{"state", ta.states[q]},
                   {"region", region.to_string(ta.clocks)},
                   {"letter", ta.alphabet[a]},
                   {"transition", id},
                   {"target", ta.states[ta.transitions[id].target]}});
  }
  return out;
}

json controller_json(const Controller& c, const TimedAutomaton& spec, const PairAlphabet& letters) {
  json nodes = json::array();
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    json moves = json::array();
    for (const auto& [key, e] : c.table[i])
      moves.push_back({{"delay_region", key.first.to_string(spec.clocks)},
                       {"input", letters.inputs[key.second]},
                       {"output", letters.outputs[e.output]},
                       {"transition", e.transition},
                       {"next", e.next}});
    nodes.push_back({{"id", i},
                     {"state", spec.states[c.nodes[i].state]},
                     {"region", c.nodes[i].region.to_string(spec.clocks)},
                     {"moves", moves}});
  }
  return nodes;
}

TimedGame game_of(const TaDocument& doc) {
  if (!doc.owners) throw InputError("game file needs 'owner' on its states");
  return {doc.ta, *doc.owners};
}

std::string player_name(Player p) { return p == Player::One ? "P1" : "P2"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"History-deterministic timed automata toolkit"};
  app.require_subcommand(1);
  std::string file, file_b, dot, out_path, prefix, cycle;

  auto* validate_cmd = app.add_subcommand("validate", "check input-completeness; print the completed automaton");
  validate_cmd->add_option("file", file)->required();
  validate_cmd->add_option("-o,--output", out_path, "write the completed automaton");
  validate_cmd->add_option("--dot", dot);

  auto* regions_cmd = app.add_subcommand("regions", "reachable region graph");
  regions_cmd->add_option("file", file)->required();
  regions_cmd->add_option("--dot", dot);

  auto* empty_cmd = app.add_subcommand("empty", "language emptiness with a lasso witness");
  empty_cmd->add_option("file", file)->required();

  auto* member_cmd = app.add_subcommand("member", "membership of a lasso word DELAY:LETTER,...");
  member_cmd->add_option("file", file)->required();
  member_cmd->add_option("--prefix", prefix);
  member_cmd->add_option("--cycle", cycle)->required();

  auto* hd_cmd = app.add_subcommand("check-hd", "history-determinism (safety/reachability)");
  hd_cmd->add_option("file", file)->required();

  auto* resolver_cmd = app.add_subcommand("resolver", "region-based resolver table");
  resolver_cmd->add_option("file", file)->required();

  auto* det_cmd = app.add_subcommand("determinize", "determinize an HD safety/reachability automaton");
  det_cmd->add_option("file", file)->required();
  det_cmd->add_option("-o,--output", out_path);
  det_cmd->add_option("--dot", dot);

  auto* include_cmd = app.add_subcommand("include", "language inclusion L(A) in L(B), B history-deterministic");
  include_cmd->add_option("a", file)->required();
  include_cmd->add_option("b", file_b)->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "fair simulation of A by B");
  simulate_cmd->add_option("a", file)->required();
  simulate_cmd->add_option("b", file_b)->required();
  simulate_cmd->add_option("--dot", dot, "solved simulation arena");

  auto* universal_cmd = app.add_subcommand("universal", "universality of an HD automaton");
  universal_cmd->add_option("file", file)->required();

  auto* synth_cmd = app.add_subcommand("synth", "controller synthesis over input/output letters");
  synth_cmd->add_option("file", file)->required();
  synth_cmd->add_option("--dot", dot);

  auto* game_cmd = app.add_subcommand("solve-game", "solve a timed game (states need owners)");
  game_cmd->add_option("file", file)->required();
  game_cmd->add_option("--dot", dot);

  auto* compose_cmd = app.add_subcommand("compose", "compose a game with a specification automaton");
  compose_cmd->add_option("game", file)->required();
  compose_cmd->add_option("spec", file_b)->required();
  compose_cmd->add_option("-o,--output", out_path);

  auto* countdown_cmd = app.add_subcommand("gen-countdown", "countdown game and its simulation instance");
  std::vector<std::string> moves;
  std::int64_t k = 0;
  int states = 1;
  std::optional<std::uint64_t> seed;
  std::string out_b;
  countdown_cmd->add_option("--states", states);
  countdown_cmd->add_option("--move", moves, "FROM,LABEL,TO (repeatable)");
  countdown_cmd->add_option("--k", k);
  countdown_cmd->add_option("--seed", seed, "random instance (4 states, labels <= 8, k <= 12)");
  countdown_cmd->add_option("--out-a", out_path);
  countdown_cmd->add_option("--out-b", out_b);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (*validate_cmd) {
      const TimedAutomaton ta = load_ta(file).ta;
      ValidationReport rep = validate(ta);
      json gaps = json::array();
      for (const auto& g : rep.gaps)
        gaps.push_back({{"state", ta.states[g.state]}, {"letter", ta.alphabet[g.letter]}, {"regions", g.regions}});
      json added = json::array();
      for (TransitionId id : rep.added) {
        const Transition& t = rep.completed.transitions[id];
        added.push_back({{"source", rep.completed.states[t.source]},
                         {"letter", rep.completed.alphabet[t.letter]},
                         {"guard", guard_to_string(t.guard, rep.completed.clocks)},
                         {"target", rep.completed.states[t.target]}});
      }
      write_file(out_path, print_ta(rep.completed));
      write_file(dot, to_dot(rep.completed));
      return emit(rep.complete() ? "complete" : "incomplete",
                  {{"gaps", gaps}, {"added", added}, {"uses_diagonals", rep.uses_diagonals}},
                  rep.complete() ? kHolds : kFails);
    }
    if (*regions_cmd) {
      const TimedAutomaton ta = load_ta(file).ta;
      RegionGraph g = build_region_graph(ta);
      write_file(dot, to_dot(g, ta));
      return emit({{"nodes", g.nodes.size()}, {"edges", g.edges.size()}}, nullptr, kHolds);
    }
    if (*empty_cmd) {
      const TimedAutomaton ta = load_ta(file).ta;
      EmptinessResult r = emptiness(ta);
      if (r.empty) return emit("empty", nullptr, kHolds);
      json w = nullptr;
      if (r.word) w = {{"word", lasso_json(ta, *r.word)}, {"run", run_json(ta, *r.run)}};
      return emit("nonempty", w, kFails);
    }
    if (*member_cmd) {
      const TimedAutomaton ta = load_ta(file).ta;
      Lasso l{parse_word(ta, prefix), parse_word(ta, cycle)};
      if (l.cycle.empty()) throw InputError("the cycle must not be empty");
      const bool in = member_lasso(ta, l);
      return emit(in ? "member" : "not-member", lasso_json(ta, l), in ? kHolds : kFails);
    }
    if (*hd_cmd) {
      const TimedAutomaton ta = load_ta(file).ta;
      HdVerdict v = check_hd_routes(ta);
      return emit(v.direct, {{"direct", v.direct}, {"almost_final", v.almost_final}}, v.direct ? kHolds : kFails);
    }
    if (*resolver_cmd) {
      const TimedAutomaton ta = complete(load_ta(file).ta);
      try {
        RegionResolver r = extract_resolver(ta);
        return emit("resolver", resolver_json(ta, r), kHolds);
      } catch (const NotHistoryDeterministicError& e) {
        return emit("not-history-deterministic", e.what(), kFails);
      }
    }
    if (*det_cmd) {
      const TimedAutomaton ta = load_ta(file).ta;
      try {
        TimedAutomaton d = determinize_hd(ta);
        const std::string text = print_ta(d);
        write_file(out_path, text);
        write_file(dot, to_dot(d));
        return emit("deterministic", text, kHolds);
      } catch (const NotHistoryDeterministicError& e) {
        return emit("not-history-deterministic", e.what(), kFails);
      }
    }
    if (*include_cmd || *simulate_cmd) {
      const TimedAutomaton a = load_ta(file).ta;
      const TimedAutomaton b = load_ta(file_b).ta;
      if (*include_cmd && b.acceptance.is_safety_or_reach() && !is_deterministic(b) && !check_hd(b))
        return emit("error", "right-hand automaton is not history-deterministic", kError);
      SimulationVerdict v = fair_simulation(a, b);
      if (*simulate_cmd) write_file(dot, to_dot(v.arena.solved(), &v.solution));
      if (v.holds) return emit(true, nullptr, kHolds);
      return emit(false, play_json(v, a, b), kFails);
    }
    if (*universal_cmd) {
      const TimedAutomaton ta = load_ta(file).ta;
      const TimedAutomaton u = universal_automaton(ta.alphabet);
      SimulationVerdict v = fair_simulation(u, ta);
      if (v.holds) return emit(true, nullptr, kHolds);
      return emit(false, play_json(v, u, ta), kFails);
    }
    if (*synth_cmd) {
      const TimedAutomaton spec = load_ta(file).ta;
      const PairAlphabet letters = split_alphabet(spec);
      SynthesisResult r = solve_synthesis(spec);
      if (!r.realisable) return emit("unrealisable", {{"arena_nodes", r.arena_nodes}}, kFails);
      write_file(dot, to_dot(*r.controller, spec, letters));
      return emit("realisable",
                  {{"arena_nodes", r.arena_nodes}, {"controller", controller_json(*r.controller, spec, letters)}},
                  kHolds);
    }
    if (*game_cmd) {
      const TaDocument doc = load_ta(file);
      TimedGameResult r = solve_timed_game(game_of(doc));
      write_file(dot, to_dot(r.compiled.arena, &r.solution));
      json strategy = json::array();
      const auto& s = r.strategy();
      for (int v = 0; v < r.compiled.arena.size(); ++v) {
        if (r.compiled.arena.owner(v) != r.winner || r.solution.winner[v] != r.winner || s[v] < 0) continue;
        const auto& node = r.compiled.nodes[v];
        const RoundMove& m = r.compiled.moves[v][s[v]];
        strategy.push_back({{"state", doc.ta.states[node.config.state]},
                            {"region", node.config.region.to_string(doc.ta.clocks)},
                            {"monitor", node.bit},
                            {"delay_region", m.region.to_string(doc.ta.clocks)},
                            {"transition", m.transition}});
      }
      return emit({{"winner", player_name(r.winner)}}, {{"strategy", strategy}},
                  r.winner == Player::Two ? kHolds : kFails);
    }
    if (*compose_cmd) {
      TimedGame g = compose(game_of(load_ta(file)), load_ta(file_b).ta);
      const std::string text = print_ta(TaDocument{g.ta, g.owner});
      write_file(out_path, text);
      return emit("composed", text, kHolds);
    }
    if (*countdown_cmd) {
      CountdownInstance c;
      if (seed) {
        std::mt19937_64 rng(*seed);
        c = random_countdown(rng, 4, 8, 12);
      } else {
        c.num_states = states;
        c.k = k;
        for (const auto& m : moves) {
          std::stringstream ss(m);
          std::string p, l, q;
          if (!std::getline(ss, p, ',') || !std::getline(ss, l, ',') || !std::getline(ss, q))
            throw InputError("move '" + m + "' is not FROM,LABEL,TO");
          try {
            c.moves.push_back({std::stoi(p), std::stoll(l), std::stoi(q)});
          } catch (const std::exception&) {
            throw InputError("move '" + m + "' is not FROM,LABEL,TO");
          }
        }
      }
      CountdownReduction r = gen_countdown(c);
      write_file(out_path, print_ta(r.a));
      write_file(out_b, print_ta(r.b));
      json inst = json::array();
      for (const auto& m : c.moves) inst.push_back({m.from, m.label, m.to});
      return emit({{"player1_wins", r.player1_wins}, {"simulation_expected", !r.player1_wins}},
                  {{"states", c.num_states}, {"k", c.k}, {"moves", inst}}, kHolds);
    }
  } catch (const UnsupportedError& e) {
    return emit("unsupported", e.what(), kUnsupported);
  } catch (const NotHistoryDeterministicError& e) {
    return emit("error", e.what(), kError);
  } catch (const InputError& e) {
    return emit("error", e.what(), kError);
  }
  return kError;
}
