#include "hdta/automaton.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "hdta/errors.hpp"

namespace hdta {

Relation negate(Relation rel) {
  switch (rel) {
    case Relation::Lt: return Relation::Ge;
    case Relation::Le: return Relation::Gt;
    case Relation::Gt: return Relation::Le;
    case Relation::Ge: return Relation::Lt;
  }
  return rel;
}

const char* symbol(Relation rel) {
  switch (rel) {
    case Relation::Lt: return "<";
    case Relation::Le: return "<=";
    case Relation::Gt: return ">";
    case Relation::Ge: return ">=";
  }
  return "?";
}

Guard::Guard(std::vector<GuardAtom> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

Guard Guard::equal(ClockId x, std::int64_t n) {
  return Guard({{x, kZeroClock, Relation::Le, n}, {x, kZeroClock, Relation::Ge, n}});
}

bool Guard::has_diagonal() const {
  return std::any_of(atoms_.begin(), atoms_.end(), [](const GuardAtom& a) { return a.is_diagonal(); });
}

Guard Guard::conjoin(const Guard& other) const {
  std::vector<GuardAtom> all = atoms_;
  all.insert(all.end(), other.atoms_.begin(), other.atoms_.end());
  return Guard(std::move(all));
}

bool eval_atom(const GuardAtom& atom, const ClockValuation& nu) {
  auto in_range = [&](ClockId c) { return c >= 0 && static_cast<std::size_t>(c) < nu.size(); };
  if (!in_range(atom.left) || (atom.is_diagonal() && !in_range(atom.right)))
    throw InputError("guard names a clock outside the valuation");
  Rational lhs = nu[atom.left];
  if (atom.is_diagonal()) lhs -= nu[atom.right];
  Rational n(atom.bound);
  switch (atom.rel) {
    case Relation::Lt: return lhs < n;
    case Relation::Le: return lhs <= n;
    case Relation::Gt: return lhs > n;
    case Relation::Ge: return lhs >= n;
  }
  return false;
}

bool eval_guard(const Guard& g, const ClockValuation& nu) {
  for (const auto& atom : g.atoms())
    if (!eval_atom(atom, nu)) return false;
  return true;
}

namespace {

// Difference bound (value, strict): represents "<= value" or "< value".
struct Bound {
  std::int64_t value = std::numeric_limits<std::int64_t>::max();
  bool strict = false;

  bool infinite() const { return value == std::numeric_limits<std::int64_t>::max(); }
  friend bool operator<(const Bound& a, const Bound& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.strict && !b.strict;
  }
};

Bound add(const Bound& a, const Bound& b) {
  if (a.infinite() || b.infinite()) return {};
  return {a.value + b.value, a.strict || b.strict};
}

}  // namespace

bool satisfiable(const Guard& g, int num_clocks) {
  const int n = num_clocks + 1;  // index 0 is the zero reference
  std::vector<Bound> m(static_cast<std::size_t>(n * n));
  auto at = [&](int i, int j) -> Bound& { return m[static_cast<std::size_t>(i * n + j)]; };
  for (int i = 0; i < n; ++i) at(i, i) = {0, false};
  for (int i = 1; i < n; ++i) at(0, i) = {0, false};  // 0 - x <= 0
  auto tighten = [&](int i, int j, Bound b) {
    if (b < at(i, j)) at(i, j) = b;
  };
  for (const auto& a : g.atoms()) {
    if (a.left < 0 || a.left >= num_clocks || a.right >= num_clocks)
      throw InputError("guard names an unknown clock");
    int i = a.left + 1;
    int j = a.right + 1;  // kZeroClock maps to 0
    switch (a.rel) {      // x_i - x_j rel n
      case Relation::Le: tighten(i, j, {a.bound, false}); break;
      case Relation::Lt: tighten(i, j, {a.bound, true}); break;
      case Relation::Ge: tighten(j, i, {-a.bound, false}); break;
      case Relation::Gt: tighten(j, i, {-a.bound, true}); break;
    }
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) tighten(i, j, add(at(i, k), at(k, j)));
  for (int i = 0; i < n; ++i)
    if (at(i, i) < Bound{0, false}) return false;
  return true;
}

std::vector<Guard> complement(const std::vector<Guard>& disjuncts, int num_clocks) {
  std::vector<Guard> result{Guard()};
  for (const auto& g : disjuncts) {
    if (g.is_true()) return {};
    std::vector<Guard> next;
    std::set<std::vector<GuardAtom>> seen;
    for (const auto& partial : result) {
      for (const auto& atom : g.atoms()) {
        Guard cand = partial.conjoin(Guard({atom.negated()}));
        if (!satisfiable(cand, num_clocks)) continue;
        if (seen.insert(cand.atoms()).second) next.push_back(std::move(cand));
      }
    }
    result = std::move(next);
    if (result.empty()) break;
  }
  return result;
}

const char* to_string(AcceptanceKind kind) {
  switch (kind) {
    case AcceptanceKind::Safety: return "safety";
    case AcceptanceKind::Reachability: return "reachability";
    case AcceptanceKind::Buchi: return "buchi";
    case AcceptanceKind::CoBuchi: return "cobuchi";
    case AcceptanceKind::Parity: return "parity";
  }
  return "?";
}

bool Acceptance::monitor_start(StateId q) const { return monitor_step(false, q); }

bool Acceptance::monitor_step(bool bit, StateId entered) const {
  switch (kind) {
    case AcceptanceKind::Safety: return bit || marks[entered] == 0;
    case AcceptanceKind::Reachability: return bit || marks[entered] != 0;
    default: return false;
  }
}

int Acceptance::priority(StateId q, bool bit) const {
  switch (kind) {
    case AcceptanceKind::Safety: return bit ? 1 : 0;
    case AcceptanceKind::Reachability: return bit ? 0 : 1;
    case AcceptanceKind::Buchi: return marks[q] ? 2 : 1;
    case AcceptanceKind::CoBuchi: return marks[q] ? 0 : 1;
    case AcceptanceKind::Parity: return marks[q];
  }
  return 1;
}

int Acceptance::max_priority() const {
  switch (kind) {
    case AcceptanceKind::Buchi: return 2;
    case AcceptanceKind::Parity:
      return marks.empty() ? 0 : *std::max_element(marks.begin(), marks.end());
    default: return 1;
  }
}

bool Acceptance::is_trivial() const {
  switch (kind) {
    case AcceptanceKind::Safety:
    case AcceptanceKind::Buchi:
    case AcceptanceKind::CoBuchi:
      return std::all_of(marks.begin(), marks.end(), [](int m) { return m != 0; });
    case AcceptanceKind::Parity:
      return std::all_of(marks.begin(), marks.end(), [](int m) { return m % 2 == 0; });
    case AcceptanceKind::Reachability:
      return false;
  }
  return false;
}

std::vector<std::int64_t> TimedAutomaton::cmax() const {
  std::vector<std::int64_t> c(clocks.size(), 0);
  for (const auto& t : transitions)
    for (const auto& a : t.guard.atoms()) {
      c[a.left] = std::max(c[a.left], a.bound);
      if (a.is_diagonal()) c[a.right] = std::max(c[a.right], a.bound);
    }
  return c;
}

bool TimedAutomaton::has_diagonal() const {
  return std::any_of(transitions.begin(), transitions.end(),
                     [](const Transition& t) { return t.guard.has_diagonal(); });
}

namespace {
template <class V>
std::optional<int> index_of(const V& v, const std::string& n) {
  auto it = std::find(v.begin(), v.end(), n);
  if (it == v.end()) return std::nullopt;
  return static_cast<int>(it - v.begin());
}
}  // namespace

std::optional<StateId> TimedAutomaton::find_state(const std::string& n) const { return index_of(states, n); }
std::optional<ClockId> TimedAutomaton::find_clock(const std::string& n) const { return index_of(clocks, n); }
std::optional<LetterId> TimedAutomaton::find_letter(const std::string& n) const { return index_of(alphabet, n); }

std::vector<const Transition*> TimedAutomaton::outgoing(StateId q, LetterId a) const {
  std::vector<const Transition*> out;
  for (const auto& t : transitions)
    if (t.source == q && t.letter == a) out.push_back(&t);
  return out;
}

TransitionId TimedAutomaton::add_transition(StateId src, Guard g, LetterId a,
                                            std::vector<ClockId> resets, StateId dst) {
  std::sort(resets.begin(), resets.end());
  resets.erase(std::unique(resets.begin(), resets.end()), resets.end());
  Transition t;
  t.id = static_cast<TransitionId>(transitions.size());
  t.source = src;
  t.guard = std::move(g);
  t.letter = a;
  t.resets = std::move(resets);
  t.target = dst;
  transitions.push_back(std::move(t));
  return transitions.back().id;
}

void TimedAutomaton::check_well_formed() const {
  const int nq = num_states();
  if (nq == 0) throw InputError("automaton has no states");
  if (initial < 0 || initial >= nq) throw InputError("initial state out of range");
  if (alphabet.empty()) throw InputError("empty alphabet");
  if (acceptance.marks.size() != states.size())
    throw InputError("acceptance marks do not cover all states");
  if (acceptance.kind == AcceptanceKind::Parity)
    for (int p : acceptance.marks)
      if (p < 0 || p > 2 * nq + 1) throw InputError("parity priority out of range");
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const auto& t = transitions[i];
    if (t.id != static_cast<TransitionId>(i)) throw InputError("transition ids are not dense");
    if (t.source < 0 || t.source >= nq || t.target < 0 || t.target >= nq)
      throw InputError("transition references an unknown state");
    if (t.letter < 0 || t.letter >= num_letters()) throw InputError("transition uses an unknown letter");
    for (ClockId c : t.resets)
      if (c < 0 || c >= num_clocks()) throw InputError("transition resets an unknown clock");
    for (const auto& a : t.guard.atoms()) {
      if (a.left < 0 || a.left >= num_clocks() || a.right >= num_clocks() || a.right < kZeroClock)
        throw InputError("guard names an unknown clock");
      if (a.left == a.right) throw InputError("diagonal atom compares a clock with itself");
      if (a.bound < 0) throw InputError("negative guard constant");
    }
  }
}

Configuration initial_configuration(const TimedAutomaton& ta) {
  return {ta.initial, ClockValuation(ta.clocks.size(), Rational(0))};
}

Configuration delay(const Configuration& c, const Rational& d) {
  if (d < Rational(0)) throw InputError("negative delay");
  Configuration out = c;
  for (auto& v : out.valuation) v += d;
  return out;
}

ClockValuation apply_resets(ClockValuation nu, const std::vector<ClockId>& resets) {
  for (ClockId c : resets) nu[c] = 0;
  return nu;
}

std::vector<Successor> discrete_successors(const TimedAutomaton& ta, const Configuration& c,
                                           LetterId a) {
  std::vector<Successor> out;
  for (const auto& t : ta.transitions) {
    if (t.source != c.state || t.letter != a) continue;
    if (!eval_guard(t.guard, c.valuation)) continue;
    out.push_back({&t, {t.target, apply_resets(c.valuation, t.resets)}});
  }
  return out;
}

std::vector<int> RunTree::leaves() const {
  std::vector<bool> has_child(nodes.size(), false);
  for (const auto& n : nodes)
    if (n.parent >= 0) has_child[n.parent] = true;
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!has_child[i]) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<TransitionId> RunTree::branch(int leaf) const {
  std::vector<TransitionId> out;
  for (int n = leaf; n > 0; n = nodes[n].parent)
    if (nodes[n].transition) out.push_back(nodes[n].transition->id);
  std::reverse(out.begin(), out.end());
  return out;
}

RunTree reduced_run_tree(const TimedAutomaton& ta, const Configuration& c,
                         const FiniteTimedWord& w) {
  RunTree tree;
  tree.nodes.push_back({c, -1, std::nullopt, nullptr, 0});
  std::vector<int> frontier{0};
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::vector<int> next;
    for (int leaf : frontier) {
      int from = leaf;
      // Zero delays are folded into the discrete step (no delay edge), which
      // keeps the tree reduced.
      if (w[i].delay != Rational(0)) {
        Configuration delayed = delay(tree.nodes[leaf].config, w[i].delay);
        tree.nodes.push_back({std::move(delayed), leaf, w[i].delay, nullptr, static_cast<int>(i)});
        from = static_cast<int>(tree.nodes.size()) - 1;
      }
      Configuration here = tree.nodes[from].config;
      for (auto& s : discrete_successors(ta, here, w[i].letter)) {
        tree.nodes.push_back({std::move(s.config), from, std::nullopt, s.transition,
                              static_cast<int>(i) + 1});
        next.push_back(static_cast<int>(tree.nodes.size()) - 1);
      }
    }
    frontier = std::move(next);
  }
  return tree;
}

TimedAutomaton product_intersection(const TimedAutomaton& a, const TimedAutomaton& b) {
  if (a.alphabet != b.alphabet) throw InputError("product operands have different alphabets");
  const bool a_triv = a.acceptance.is_trivial();
  const bool b_triv = b.acceptance.is_trivial();
  if (!a_triv && !b_triv)
    throw UnsupportedError("product of two non-trivial acceptance conditions is not supported");
  const TimedAutomaton& keeper = a_triv ? b : a;
  const bool keep_left = !a_triv;

  TimedAutomaton p;
  p.name = a.name + "_x_" + b.name;
  p.alphabet = a.alphabet;
  for (const auto& c : a.clocks) p.clocks.push_back(c);
  for (const auto& c : b.clocks) p.clocks.push_back(b.name + "." + c);
  const int nb = b.num_states();
  const int off = a.num_clocks();
  p.acceptance.kind = keeper.acceptance.kind;
  for (int i = 0; i < a.num_states(); ++i)
    for (int j = 0; j < nb; ++j) {
      p.states.push_back(a.states[i] + ":" + b.states[j]);
      p.acceptance.marks.push_back(keep_left ? keeper.acceptance.marks[i] : keeper.acceptance.marks[j]);
    }
  p.initial = a.initial * nb + b.initial;
  for (const auto& ta : a.transitions)
    for (const auto& tb : b.transitions) {
      if (ta.letter != tb.letter) continue;
      std::vector<GuardAtom> atoms = ta.guard.atoms();
      for (auto atom : tb.guard.atoms()) {
        atom.left += off;
        if (atom.right != kZeroClock) atom.right += off;
        atoms.push_back(atom);
      }
      std::vector<ClockId> resets = ta.resets;
      for (ClockId c : tb.resets) resets.push_back(c + off);
      p.add_transition(ta.source * nb + tb.source, Guard(std::move(atoms)), ta.letter,
                       std::move(resets), ta.target * nb + tb.target);
    }
  return p;
}

TimedAutomaton scale_time(const TimedAutomaton& ta, std::int64_t factor) {
  if (factor <= 0) throw InputError("time scale factor must be positive");
  TimedAutomaton out = ta;
  for (auto& t : out.transitions) {
    std::vector<GuardAtom> atoms = t.guard.atoms();
    for (auto& a : atoms) a.bound *= factor;
    t.guard = Guard(std::move(atoms));
  }
  return out;
}

bool is_deterministic(const TimedAutomaton& ta) {
  for (StateId q = 0; q < ta.num_states(); ++q)
    for (LetterId a = 0; a < ta.num_letters(); ++a) {
      auto out = ta.outgoing(q, a);
      for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
          if (satisfiable(out[i]->guard.conjoin(out[j]->guard), ta.num_clocks())) return false;
    }
  return true;
}

}  // namespace hdta
