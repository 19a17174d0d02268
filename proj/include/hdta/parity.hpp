#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace hdta {

/// Player::Two wins plays whose highest infinitely recurring priority is even;
/// Player::One wins the others. A player stuck in a dead end loses.
enum class Player : std::uint8_t { One, Two };

inline Player opponent(Player p) { return p == Player::One ? Player::Two : Player::One; }

class GameArena {
 public:
  int add_node(Player owner, int priority);
  void add_edge(int from, int to);

  int size() const { return static_cast<int>(owner_.size()); }
  Player owner(int v) const { return owner_[v]; }
  int priority(int v) const { return priority_[v]; }
  const std::vector<int>& successors(int v) const { return succ_[v]; }
  const std::vector<int>& predecessors(int v) const { return pred_[v]; }
  int max_priority() const;
  std::size_t num_edges() const;

 private:
  std::vector<Player> owner_;
  std::vector<int> priority_;
  std::vector<std::vector<int>> succ_;
  std::vector<std::vector<int>> pred_;
};

/// For each node, the index into successors(v) its owner picks, or -1.
using PositionalStrategy = std::vector<int>;

struct Solution {
  std::vector<Player> winner;           // per node
  PositionalStrategy strategy_one;      // defined on Player::One's winning nodes it owns
  PositionalStrategy strategy_two;

  const PositionalStrategy& strategy(Player p) const {
    return p == Player::One ? strategy_one : strategy_two;
  }
};

/// Least superset of `target` from which `player` forces a visit to `target`.
/// Only nodes with `within[v]` set are considered (empty = all nodes).
std::vector<bool> attractor(const GameArena& arena, Player player, const std::vector<bool>& target,
                            const std::vector<bool>& within = {},
                            PositionalStrategy* strategy = nullptr);

/// Zielonka's recursive algorithm.
Solution solve_parity(const GameArena& arena);

/// Winning regions by enumerating all positional strategy pairs. Throws
/// InputError above 12 nodes.
std::vector<Player> solve_brute_force(const GameArena& arena);

/// True iff `player` wins from every node in `claimed` when its nodes are
/// restricted to the strategy's choice. Throws InputError if the strategy is
/// undefined on a claimed node owned by `player` that has successors.
bool verify_strategy(const GameArena& arena, const PositionalStrategy& strategy, Player player,
                     const std::vector<bool>& claimed);

/// Pair (fin, inf): satisfied when fin is visited finitely often and inf
/// infinitely often. The condition holds if some pair is satisfied.
struct RabinPair {
  std::vector<bool> fin;
  std::vector<bool> inf;
};
using RabinCondition = std::vector<RabinPair>;

/// Index appearance record over pair indices: on visiting a node, pairs whose
/// `fin` contains it move to the front. The node priority is 2*p for the
/// deepest `inf`-hit position p when it lies behind every `fin` hit, and
/// 2*p'+1 for the deepest `fin` hit p' otherwise (1 when nothing is hit).
struct LarArena {
  GameArena arena;
  std::vector<int> base_node;            // product node -> arena node
  std::vector<std::vector<int>> record;  // product node -> permutation before the visit
  std::vector<int> entry;                // arena node -> product node with identity record
};

LarArena rabin_to_parity_lar(const GameArena& arena, const RabinCondition& rabin);

/// LAR memory update: the permutation after visiting `node`.
std::vector<int> lar_update(const std::vector<int>& perm, const RabinCondition& rabin, int node);
int lar_priority(const std::vector<int>& perm, const RabinCondition& rabin, int node);

struct NodeLasso {
  std::vector<int> stem;   // starts at an initial node, excludes cycle start
  std::vector<int> cycle;  // nonempty; cycle.front() follows stem.back()
};

/// One-player emptiness: a path from some initial node to a cycle whose
/// highest priority is even.
std::optional<NodeLasso> parity_nonemptiness(const std::vector<std::vector<int>>& succ,
                                             const std::vector<int>& priority,
                                             const std::vector<int>& initial);

}  // namespace hdta
