#include "hdta/parity.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

#include "hdta/errors.hpp"

namespace hdta {

int GameArena::add_node(Player owner, int priority) {
  owner_.push_back(owner);
  priority_.push_back(priority);
  succ_.emplace_back();
  pred_.emplace_back();
  return size() - 1;
}

void GameArena::add_edge(int from, int to) {
  succ_[from].push_back(to);
  pred_[to].push_back(from);
}

int GameArena::max_priority() const {
  return priority_.empty() ? 0 : *std::max_element(priority_.begin(), priority_.end());
}

std::size_t GameArena::num_edges() const {
  std::size_t n = 0;
  for (const auto& s : succ_) n += s.size();
  return n;
}

std::vector<bool> attractor(const GameArena& arena, Player player, const std::vector<bool>& target,
                            const std::vector<bool>& within, PositionalStrategy* strategy) {
  const int n = arena.size();
  auto inside = [&](int v) { return within.empty() || within[v]; };
  std::vector<bool> attr(n, false);
  std::vector<int> remaining(n, 0);
  std::deque<int> queue;
  for (int v = 0; v < n; ++v) {
    if (!inside(v)) continue;
    for (int w : arena.successors(v))
      if (inside(w)) ++remaining[v];
    if (target[v]) {
      attr[v] = true;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    int w = queue.front();
    queue.pop_front();
    for (int v : arena.predecessors(w)) {
      if (!inside(v) || attr[v]) continue;
      if (arena.owner(v) == player) {
        attr[v] = true;
        if (strategy) {
          const auto& s = arena.successors(v);
          (*strategy)[v] = static_cast<int>(std::find(s.begin(), s.end(), w) - s.begin());
        }
        queue.push_back(v);
      } else if (--remaining[v] == 0) {
        attr[v] = true;
        queue.push_back(v);
      }
    }
  }
  return attr;
}

namespace {

class Zielonka {
 public:
  explicit Zielonka(const GameArena& arena) : g_(arena) {
    strategy_[0].assign(g_.size(), -1);
    strategy_[1].assign(g_.size(), -1);
  }

  // Returns winner per node of `mask` (nodes outside are unspecified).
  std::vector<Player> solve(const std::vector<bool>& mask) {
    const int n = g_.size();
    std::vector<Player> win(n, Player::One);
    int top = -1;
    for (int v = 0; v < n; ++v)
      if (mask[v]) top = std::max(top, g_.priority(v));
    if (top < 0) return win;
    const Player p = top % 2 == 0 ? Player::Two : Player::One;
    const Player o = opponent(p);

    std::vector<bool> heads(n, false);
    for (int v = 0; v < n; ++v) heads[v] = mask[v] && g_.priority(v) == top;
    std::vector<bool> a = attractor(g_, p, heads, mask, &strat(p));
    std::vector<bool> rest = minus(mask, a);
    std::vector<Player> sub = solve(rest);

    bool opp_wins_some = false;
    for (int v = 0; v < n; ++v)
      if (rest[v] && sub[v] == o) opp_wins_some = true;

    if (!opp_wins_some) {
      for (int v = 0; v < n; ++v) {
        if (!mask[v]) continue;
        win[v] = p;
        if (heads[v] && g_.owner(v) == p) strat(p)[v] = first_inside(v, mask);
      }
      return win;
    }

    std::vector<bool> opp_dom(n, false);
    for (int v = 0; v < n; ++v) opp_dom[v] = rest[v] && sub[v] == o;
    std::vector<bool> b = attractor(g_, o, opp_dom, mask, &strat(o));
    std::vector<bool> rest2 = minus(mask, b);
    std::vector<Player> sub2 = solve(rest2);
    for (int v = 0; v < n; ++v) {
      if (!mask[v]) continue;
      win[v] = b[v] ? o : sub2[v];
    }
    return win;
  }

  PositionalStrategy& strat(Player p) { return strategy_[p == Player::One ? 0 : 1]; }

 private:
  static std::vector<bool> minus(const std::vector<bool>& a, const std::vector<bool>& b) {
    std::vector<bool> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && !b[i];
    return out;
  }

  int first_inside(int v, const std::vector<bool>& mask) const {
    const auto& s = g_.successors(v);
    for (std::size_t i = 0; i < s.size(); ++i)
      if (mask[s[i]]) return static_cast<int>(i);
    return -1;
  }

  const GameArena& g_;
  PositionalStrategy strategy_[2];
};

}  // namespace

Solution solve_parity(const GameArena& arena) {
  // Dead ends get an edge to a sink that is losing for their owner.
  GameArena g = arena;
  const int n = arena.size();
  int sink_odd = -1;
  int sink_even = -1;
  for (int v = 0; v < n; ++v) {
    if (!arena.successors(v).empty()) continue;
    if (arena.owner(v) == Player::Two) {
      if (sink_odd < 0) {
        sink_odd = g.add_node(Player::One, 1);
        g.add_edge(sink_odd, sink_odd);
      }
      g.add_edge(v, sink_odd);
    } else {
      if (sink_even < 0) {
        sink_even = g.add_node(Player::Two, 0);
        g.add_edge(sink_even, sink_even);
      }
      g.add_edge(v, sink_even);
    }
  }
  Zielonka z(g);
  std::vector<Player> win = z.solve(std::vector<bool>(g.size(), true));
  Solution s;
  s.winner.assign(win.begin(), win.begin() + n);
  s.strategy_one.assign(n, -1);
  s.strategy_two.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (arena.successors(v).empty()) continue;
    Player p = arena.owner(v);
    if (s.winner[v] != p) continue;
    int choice = z.strat(p)[v];
    if (p == Player::One)
      s.strategy_one[v] = choice;
    else
      s.strategy_two[v] = choice;
  }
  return s;
}

namespace {

// Winner of the play from v when both players follow fixed choices.
Player play_outcome(const GameArena& g, const std::vector<int>& choice, int v) {
  std::vector<int> seen_at(g.size(), -1);
  std::vector<int> path;
  while (seen_at[v] < 0) {
    seen_at[v] = static_cast<int>(path.size());
    path.push_back(v);
    if (g.successors(v).empty()) return opponent(g.owner(v));
    v = g.successors(v)[choice[v]];
  }
  int top = -1;
  for (std::size_t i = static_cast<std::size_t>(seen_at[v]); i < path.size(); ++i)
    top = std::max(top, g.priority(path[i]));
  return top % 2 == 0 ? Player::Two : Player::One;
}

}  // namespace

std::vector<Player> solve_brute_force(const GameArena& arena) {
  const int n = arena.size();
  if (n > 12) throw InputError("brute-force solver is limited to 12 nodes");
  std::vector<int> two_nodes, one_nodes;
  for (int v = 0; v < n; ++v) {
    if (arena.successors(v).empty()) continue;
    (arena.owner(v) == Player::Two ? two_nodes : one_nodes).push_back(v);
  }
  std::vector<int> choice(n, 0);
  std::vector<bool> two_wins(n, false);

  // Odometer over the choices of the given nodes.
  auto next = [&](const std::vector<int>& nodes) {
    for (int v : nodes) {
      if (++choice[v] < static_cast<int>(arena.successors(v).size())) return true;
      choice[v] = 0;
    }
    return false;
  };

  do {
    std::vector<bool> survives(n, true);  // Two wins against every One-strategy so far
    for (int v : one_nodes) choice[v] = 0;
    do {
      for (int v = 0; v < n; ++v)
        if (survives[v] && play_outcome(arena, choice, v) == Player::One) survives[v] = false;
    } while (next(one_nodes));
    for (int v = 0; v < n; ++v)
      if (survives[v]) two_wins[v] = true;
  } while (next(two_nodes));

  std::vector<Player> out(n);
  for (int v = 0; v < n; ++v) out[v] = two_wins[v] ? Player::Two : Player::One;
  return out;
}

bool verify_strategy(const GameArena& arena, const PositionalStrategy& strategy, Player player,
                     const std::vector<bool>& claimed) {
  GameArena restricted;
  const int n = arena.size();
  for (int v = 0; v < n; ++v) restricted.add_node(arena.owner(v), arena.priority(v));
  for (int v = 0; v < n; ++v) {
    const auto& s = arena.successors(v);
    if (arena.owner(v) != player || s.empty()) {
      for (int w : s) restricted.add_edge(v, w);
      continue;
    }
    int c = strategy.size() > static_cast<std::size_t>(v) ? strategy[v] : -1;
    if (c < 0 || c >= static_cast<int>(s.size())) {
      if (claimed[v]) throw InputError("strategy is undefined on a claimed node");
      continue;  // dead end: the player loses here
    }
    restricted.add_edge(v, s[c]);
  }
  Solution sol = solve_parity(restricted);
  for (int v = 0; v < n; ++v)
    if (claimed[v] && sol.winner[v] != player) return false;
  return true;
}

std::vector<int> lar_update(const std::vector<int>& perm, const RabinCondition& rabin, int node) {
  std::vector<int> hit, rest;
  for (int i : perm) (rabin[i].fin[node] ? hit : rest).push_back(i);
  hit.insert(hit.end(), rest.begin(), rest.end());
  return hit;
}

int lar_priority(const std::vector<int>& perm, const RabinCondition& rabin, int node) {
  int deepest_fin = 0;
  int deepest_inf = 0;
  for (std::size_t pos = 0; pos < perm.size(); ++pos) {
    const auto& pair = rabin[perm[pos]];
    if (pair.fin[node]) deepest_fin = static_cast<int>(pos) + 1;
    if (pair.inf[node]) deepest_inf = static_cast<int>(pos) + 1;
  }
  if (deepest_inf > deepest_fin) return 2 * deepest_inf;
  if (deepest_fin > 0) return 2 * deepest_fin + 1;
  return 1;
}

LarArena rabin_to_parity_lar(const GameArena& arena, const RabinCondition& rabin) {
  LarArena out;
  std::vector<int> identity(rabin.size());
  std::iota(identity.begin(), identity.end(), 0);
  std::map<std::pair<int, std::vector<int>>, int> index;
  auto intern = [&](int v, const std::vector<int>& perm) {
    auto key = std::make_pair(v, perm);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = out.arena.add_node(arena.owner(v), lar_priority(perm, rabin, v));
    out.base_node.push_back(v);
    out.record.push_back(perm);
    index.emplace(std::move(key), id);
    return id;
  };
  out.entry.resize(arena.size());
  for (int v = 0; v < arena.size(); ++v) out.entry[v] = intern(v, identity);
  for (int id = 0; id < out.arena.size(); ++id) {
    const int v = out.base_node[id];
    std::vector<int> next = lar_update(out.record[id], rabin, v);
    for (int w : arena.successors(v)) out.arena.add_edge(id, intern(w, next));
  }
  return out;
}

namespace {

// Iterative Tarjan over the nodes with allowed[v].
std::vector<int> scc_ids(const std::vector<std::vector<int>>& succ, const std::vector<bool>& allowed) {
  const int n = static_cast<int>(succ.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int counter = 0;
  int comps = 0;
  struct Frame {
    int v;
    std::size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (!allowed[root] || index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < succ[f.v].size()) {
        int w = succ[f.v][f.next++];
        if (!allowed[w]) continue;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const int v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
    }
  }
  return comp;
}

// BFS path from any source to `goal` through allowed nodes; includes both ends.
std::vector<int> bfs_path(const std::vector<std::vector<int>>& succ, const std::vector<int>& sources,
                          int goal, const std::vector<bool>& allowed) {
  const int n = static_cast<int>(succ.size());
  std::vector<int> parent(n, -2);
  std::deque<int> queue;
  for (int s : sources)
    if (allowed[s] && parent[s] == -2) {
      parent[s] = -1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (v == goal) break;
    for (int w : succ[v])
      if (allowed[w] && parent[w] == -2) {
        parent[w] = v;
        queue.push_back(w);
      }
  }
  std::vector<int> path;
  if (parent[goal] == -2) return path;
  for (int v = goal; v != -1; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::optional<NodeLasso> parity_nonemptiness(const std::vector<std::vector<int>>& succ,
                                             const std::vector<int>& priority,
                                             const std::vector<int>& initial) {
  const int n = static_cast<int>(succ.size());
  std::vector<bool> reach(n, false);
  std::deque<int> queue;
  for (int s : initial)
    if (!reach[s]) {
      reach[s] = true;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : succ[v])
      if (!reach[w]) {
        reach[w] = true;
        queue.push_back(w);
      }
  }
  int top = 0;
  for (int v = 0; v < n; ++v)
    if (reach[v]) top = std::max(top, priority[v]);
  const std::vector<bool> everything(n, true);
  for (int e = top - top % 2; e >= 0; e -= 2) {
    std::vector<bool> allowed(n);
    for (int v = 0; v < n; ++v) allowed[v] = reach[v] && priority[v] <= e;
    std::vector<int> comp = scc_ids(succ, allowed);
    for (int t = 0; t < n; ++t) {
      if (!allowed[t] || priority[t] != e) continue;
      std::vector<bool> in_comp(n, false);
      for (int v = 0; v < n; ++v) in_comp[v] = allowed[v] && comp[v] == comp[t];
      // Cycle through t inside its component.
      std::vector<int> best;
      for (int w : succ[t]) {
        if (!in_comp[w]) continue;
        std::vector<int> back = bfs_path(succ, {w}, t, in_comp);
        if (!back.empty() && (best.empty() || back.size() < best.size())) best = std::move(back);
      }
      if (best.empty()) continue;
      NodeLasso lasso;
      lasso.cycle.push_back(t);
      lasso.cycle.insert(lasso.cycle.end(), best.begin(), best.end() - 1);
      std::vector<int> stem = bfs_path(succ, initial, t, reach);
      lasso.stem.assign(stem.begin(), stem.end() - 1);
      return lasso;
    }
  }
  return std::nullopt;
}

}  // namespace hdta
