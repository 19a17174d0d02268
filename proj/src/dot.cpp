#include "hdta/dot.hpp"

#include <sstream>

#include "hdta/io.hpp"

namespace hdta {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string edge_label(const TimedAutomaton& ta, const Transition& t) {
  std::string s = ta.alphabet[t.letter];
  if (!t.guard.is_true()) s += ", " + guard_to_string(t.guard, ta.clocks);
  if (!t.resets.empty()) {
    s += ", {";
    for (std::size_t i = 0; i < t.resets.size(); ++i) s += (i ? "," : "") + ta.clocks[t.resets[i]];
    s += "}";
  }
  return s;
}

}  // namespace

std::string to_dot(const TimedAutomaton& ta) {
  std::ostringstream os;
  os << "digraph " << quote(ta.name) << " {\n  rankdir=LR;\n  __init [shape=point];\n";
  for (StateId q = 0; q < ta.num_states(); ++q) {
    os << "  s" << q << " [label=" << quote(ta.states[q] + " (" + std::to_string(ta.acceptance.marks[q]) + ")");
    if (ta.acceptance.kind != AcceptanceKind::Parity && ta.acceptance.marks[q] != 0) os << ", shape=doublecircle";
    os << "];\n";
  }
  os << "  __init -> s" << ta.initial << ";\n";
  for (const auto& t : ta.transitions)
    os << "  s" << t.source << " -> s" << t.target << " [label=" << quote(edge_label(ta, t)) << "];\n";
  os << "}\n";
  return os.str();
}

std::string to_dot(const RegionGraph& g, const TimedAutomaton& ta) {
  std::ostringstream os;
  os << "digraph regions {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    os << "  n" << i << " [label="
       << quote(ta.states[g.nodes[i].state] + "\\n" + g.nodes[i].region.to_string(ta.clocks)) << "];\n";
  for (const auto& e : g.edges) {
    os << "  n" << e.from << " -> n" << e.to;
    if (e.label == RegionGraph::kTimeEdge)
      os << " [style=dashed];\n";
    else
      os << " [label=" << quote(edge_label(ta, ta.transitions[e.label])) << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const GameArena& arena, const Solution* solution) {
  std::ostringstream os;
  os << "digraph arena {\n";
  for (int v = 0; v < arena.size(); ++v) {
    os << "  v" << v << " [label=\"" << v << ":" << arena.priority(v) << "\", shape="
       << (arena.owner(v) == Player::One ? "box" : "ellipse");
    if (solution) os << ", color=" << (solution->winner[v] == Player::One ? "red" : "blue");
    os << "];\n";
  }
  for (int v = 0; v < arena.size(); ++v) {
    const auto& succ = arena.successors(v);
    int chosen = -1;
    if (solution) chosen = solution->strategy(arena.owner(v))[v];
    for (std::size_t i = 0; i < succ.size(); ++i) {
      os << "  v" << v << " -> v" << succ[i];
      if (static_cast<int>(i) == chosen) os << " [style=bold]";
      os << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const Controller& c, const TimedAutomaton& spec, const PairAlphabet& letters) {
  std::ostringstream os;
  os << "digraph controller {\n  __init [shape=point];\n  __init -> c0;\n";
  for (std::size_t i = 0; i < c.nodes.size(); ++i)
    os << "  c" << i << " [label="
       << quote(spec.states[c.nodes[i].state] + "\\n" + c.nodes[i].region.to_string(spec.clocks)) << "];\n";
  for (std::size_t i = 0; i < c.table.size(); ++i)
    for (const auto& [key, entry] : c.table[i])
      os << "  c" << i << " -> c" << entry.next << " [label="
         << quote(key.first.to_string(spec.clocks) + " " + letters.inputs[key.second] + "/" +
                  letters.outputs[entry.output])
         << "];\n";
  os << "}\n";
  return os.str();
}

}  // namespace hdta
