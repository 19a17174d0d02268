#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hdta/rational.hpp"

namespace hdta {

using StateId = int;
using ClockId = int;
using LetterId = int;
using TransitionId = int;

/// Right operand of a non-diagonal atom.
inline constexpr ClockId kZeroClock = -1;

enum class Relation : std::uint8_t { Lt, Le, Gt, Ge };

Relation negate(Relation rel);
const char* symbol(Relation rel);

/// left - right <rel> bound, with right == kZeroClock for plain clock bounds.
struct GuardAtom {
  ClockId left = 0;
  ClockId right = kZeroClock;
  Relation rel = Relation::Le;
  std::int64_t bound = 0;

  bool is_diagonal() const { return right != kZeroClock; }
  GuardAtom negated() const { return {left, right, negate(rel), bound}; }

  friend auto operator<=>(const GuardAtom&, const GuardAtom&) = default;
};

/// Conjunction of atoms; empty means true. Atoms are kept sorted and unique
/// so that equal guards compare equal.
class Guard {
 public:
  Guard() = default;
  explicit Guard(std::vector<GuardAtom> atoms);

  static Guard equal(ClockId x, std::int64_t n);

  const std::vector<GuardAtom>& atoms() const { return atoms_; }
  bool is_true() const { return atoms_.empty(); }
  bool has_diagonal() const;
  Guard conjoin(const Guard& other) const;

  friend bool operator==(const Guard&, const Guard&) = default;

 private:
  std::vector<GuardAtom> atoms_;
};

using ClockValuation = std::vector<Rational>;

bool eval_atom(const GuardAtom& atom, const ClockValuation& nu);

/// Exact evaluation. Throws InputError if the guard names a clock outside nu.
bool eval_guard(const Guard& g, const ClockValuation& nu);

/// Nonempty over nonnegative reals, decided by difference-constraint closure.
bool satisfiable(const Guard& g, int num_clocks);

/// DNF of the complement of a disjunction of guards, with unsatisfiable
/// disjuncts pruned.
std::vector<Guard> complement(const std::vector<Guard>& disjuncts, int num_clocks);

struct Transition {
  TransitionId id = 0;
  StateId source = 0;
  Guard guard;
  LetterId letter = 0;
  std::vector<ClockId> resets;  // sorted
  StateId target = 0;
};

enum class AcceptanceKind : std::uint8_t { Safety, Reachability, Buchi, CoBuchi, Parity };

const char* to_string(AcceptanceKind kind);

/// State-based acceptance. `marks[q]` means: safe (Safety), final
/// (Reachability), accepting (Buchi: visited infinitely often; CoBuchi: the
/// run eventually stays among marked states), or the priority (Parity).
struct Acceptance {
  AcceptanceKind kind = AcceptanceKind::Safety;
  std::vector<int> marks;

  /// Absorbing one-bit history monitor. The bit records "an unsafe state was
  /// visited" (Safety) or "a final state was visited" (Reachability) and is
  /// always 0 for the other kinds. Together with `priority` this turns every
  /// kind into a max-parity condition over (state, bit).
  bool monitor_start(StateId q) const;
  bool monitor_step(bool bit, StateId entered) const;
  int priority(StateId q, bool bit) const;
  int max_priority() const;

  bool is_safety_or_reach() const {
    return kind == AcceptanceKind::Safety || kind == AcceptanceKind::Reachability;
  }
  /// Every run is accepting.
  bool is_trivial() const;
};

struct TimedAutomaton {
  std::string name = "ta";
  std::vector<std::string> states;
  StateId initial = 0;
  std::vector<std::string> clocks;
  std::vector<std::string> alphabet;
  std::vector<Transition> transitions;
  Acceptance acceptance;

  int num_states() const { return static_cast<int>(states.size()); }
  int num_clocks() const { return static_cast<int>(clocks.size()); }
  int num_letters() const { return static_cast<int>(alphabet.size()); }

  /// Largest constant compared against each clock (0 if never compared).
  std::vector<std::int64_t> cmax() const;
  bool has_diagonal() const;

  std::optional<StateId> find_state(const std::string& n) const;
  std::optional<ClockId> find_clock(const std::string& n) const;
  std::optional<LetterId> find_letter(const std::string& n) const;

  /// Transitions leaving q on a, in id order.
  std::vector<const Transition*> outgoing(StateId q, LetterId a) const;

  /// Appends a transition, assigning the next dense id.
  TransitionId add_transition(StateId src, Guard g, LetterId a, std::vector<ClockId> resets,
                              StateId dst);

  /// Checks dense ids and references. Throws InputError.
  void check_well_formed() const;
};

struct Configuration {
  StateId state = 0;
  ClockValuation valuation;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

Configuration initial_configuration(const TimedAutomaton& ta);

/// Delay step. Throws InputError on negative d.
Configuration delay(const Configuration& c, const Rational& d);

ClockValuation apply_resets(ClockValuation nu, const std::vector<ClockId>& resets);

struct Successor {
  const Transition* transition;
  Configuration config;
};

std::vector<Successor> discrete_successors(const TimedAutomaton& ta, const Configuration& c,
                                           LetterId a);

struct TimedLetter {
  Rational delay;
  LetterId letter = 0;

  friend bool operator==(const TimedLetter&, const TimedLetter&) = default;
};

using FiniteTimedWord = std::vector<TimedLetter>;

/// Ultimately periodic timed word prefix . cycle^omega.
struct Lasso {
  FiniteTimedWord prefix;
  FiniteTimedWord cycle;
};

/// Reduced run-tree: every root-to-leaf branch alternates one delay edge and
/// one discrete edge per letter of the word.
struct RunTree {
  struct Node {
    Configuration config;
    int parent = -1;
    std::optional<Rational> delay;             // set on delay edges
    const Transition* transition = nullptr;    // set on discrete edges
    int depth = 0;                             // letters read so far
  };
  std::vector<Node> nodes;  // nodes[0] is the root

  std::vector<int> leaves() const;
  /// Transitions along the branch ending in `leaf`.
  std::vector<TransitionId> branch(int leaf) const;
};

RunTree reduced_run_tree(const TimedAutomaton& ta, const Configuration& c,
                         const FiniteTimedWord& w);

/// Synchronized product over disjoint clock copies. One operand must have
/// trivial acceptance; the product inherits the other's.
TimedAutomaton product_intersection(const TimedAutomaton& a, const TimedAutomaton& b);

/// Multiplies every guard constant by `factor`, so that w is accepted iff
/// factor*w is accepted by the result.
TimedAutomaton scale_time(const TimedAutomaton& ta, std::int64_t factor);

/// Deterministic: for each state and letter, guards are pairwise disjoint.
bool is_deterministic(const TimedAutomaton& ta);

}  // namespace hdta
