#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>

#include "hdta/errors.hpp"
#include "hdta/parity.hpp"
#include "support.hpp"

using namespace hdta;

namespace {

std::vector<bool> all(int n, bool v) { return std::vector<bool>(n, v); }

GameArena loop(Player owner, int priority) {
  GameArena g;
  g.add_node(owner, priority);
  g.add_edge(0, 0);
  return g;
}

GameArena random_total_arena(std::mt19937_64& rng, int max_nodes) {
  GameArena g;
  const int n = std::uniform_int_distribution<int>(1, max_nodes)(rng);
  for (int v = 0; v < n; ++v) g.add_node(Player::One, 0);
  for (int v = 0; v < n; ++v) {
    g.add_edge(v, std::uniform_int_distribution<int>(0, n - 1)(rng));
    if (std::bernoulli_distribution(0.6)(rng)) {
      int w = std::uniform_int_distribution<int>(0, n - 1)(rng);
      if (std::find(g.successors(v).begin(), g.successors(v).end(), w) == g.successors(v).end())
        g.add_edge(v, w);
    }
  }
  return g;
}

RabinCondition random_rabin(std::mt19937_64& rng, int n) {
  RabinCondition r(std::uniform_int_distribution<int>(0, 3)(rng));
  std::bernoulli_distribution coin(0.35);
  for (auto& p : r) {
    p.fin = all(n, false);
    p.inf = all(n, false);
    for (int v = 0; v < n; ++v) {
      p.fin[v] = coin(rng);
      p.inf[v] = coin(rng);
    }
  }
  return r;
}

// Walk until a node repeats; the repeated part is the cycle.
hdta::NodeLasso random_walk_lasso(std::mt19937_64& rng, const GameArena& g) {
  std::vector<int> path{std::uniform_int_distribution<int>(0, g.size() - 1)(rng)};
  for (;;) {
    const auto& s = g.successors(path.back());
    int w = s[std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng)];
    auto it = std::find(path.begin(), path.end(), w);
    if (it != path.end()) {
      hdta::NodeLasso l;
      l.stem.assign(path.begin(), it);
      l.cycle.assign(it, path.end());
      return l;
    }
    path.push_back(w);
  }
}

bool rabin_accepts(const RabinCondition& r, const std::vector<int>& cycle) {
  for (const auto& p : r) {
    bool fin_hit = false, inf_hit = false;
    for (int v : cycle) {
      fin_hit = fin_hit || p.fin[v];
      inf_hit = inf_hit || p.inf[v];
    }
    if (!fin_hit && inf_hit) return true;
  }
  return false;
}

// Follows the lasso through the product arena's own edges and returns the
// highest priority seen once the product play has become periodic.
int lar_lasso_priority(const LarArena& lar, const hdta::NodeLasso& l) {
  std::vector<int> seq = l.stem;
  seq.insert(seq.end(), l.cycle.begin(), l.cycle.end());
  int cur = lar.entry[seq.front()];
  auto step = [&](int next_base) {
    for (int s : lar.arena.successors(cur))
      if (lar.base_node[s] == next_base) {
        cur = s;
        return;
      }
    FAIL("product arena misses an edge");
  };
  for (std::size_t i = 1; i < seq.size(); ++i) step(seq[i]);
  // cur is the product node at the first cycle pass's last node; iterate
  // whole cycle passes until the product node at the cycle start repeats.
  std::map<int, int> seen;
  std::vector<int> pass_max;
  for (int pass = 0;; ++pass) {
    step(l.cycle.front());
    if (auto it = seen.find(cur); it != seen.end()) {
      return *std::max_element(pass_max.begin() + it->second, pass_max.end());
    }
    seen[cur] = pass;
    int m = lar.arena.priority(cur);
    for (std::size_t i = 1; i < l.cycle.size(); ++i) {
      step(l.cycle[i]);
      m = std::max(m, lar.arena.priority(cur));
    }
    pass_max.push_back(m);
  }
}

bool even_simple_cycle_reachable(const std::vector<std::vector<int>>& succ, const std::vector<int>& prio,
                                 const std::vector<int>& initial) {
  const int n = static_cast<int>(succ.size());
  std::vector<bool> reach(n, false);
  std::vector<int> todo(initial);
  for (int v : initial) reach[v] = true;
  while (!todo.empty()) {
    int v = todo.back();
    todo.pop_back();
    for (int w : succ[v])
      if (!reach[w]) {
        reach[w] = true;
        todo.push_back(w);
      }
  }
  bool found = false;
  std::vector<bool> on(n, false);
  std::function<void(int, int, int)> dfs = [&](int start, int v, int m) {
    for (int w : succ[v]) {
      if (w == start && std::max(m, prio[w]) % 2 == 0 && reach[start]) found = true;
      if (w > start && !on[w]) {
        on[w] = true;
        dfs(start, w, std::max(m, prio[w]));
        on[w] = false;
      }
    }
  };
  for (int s = 0; s < n && !found; ++s) {
    on[s] = true;
    dfs(s, s, prio[s]);
    on[s] = false;
  }
  return found;
}

}  // namespace

TEST_CASE("attractor examples") {
  GameArena chain;
  for (int i = 0; i < 3; ++i) chain.add_node(Player::One, 0);
  chain.add_edge(0, 1);
  chain.add_edge(1, 2);
  chain.add_edge(0, 0);
  CHECK(attractor(chain, Player::One, all(3, true)) == all(3, true));
  CHECK(attractor(chain, Player::One, all(3, false)) == all(3, false));
  CHECK(attractor(chain, Player::One, {false, false, true}) == all(3, true));
  // The opponent can stay on the self-loop.
  CHECK(attractor(chain, Player::Two, {false, false, true}) == std::vector<bool>{false, true, true});
}

TEST_CASE("single-node games") {
  CHECK(solve_parity(loop(Player::One, 0)).winner[0] == Player::Two);
  CHECK(solve_parity(loop(Player::Two, 1)).winner[0] == Player::One);
  CHECK(solve_brute_force(loop(Player::One, 0))[0] == Player::Two);
  CHECK(solve_brute_force(loop(Player::Two, 1))[0] == Player::One);
  GameArena dead;
  dead.add_node(Player::Two, 0);
  CHECK(solve_parity(dead).winner[0] == Player::One);
  CHECK(solve_brute_force(dead)[0] == Player::One);
}

TEST_CASE("brute force refuses large arenas") {
  GameArena g;
  for (int i = 0; i < 13; ++i) g.add_node(Player::One, 0);
  CHECK_THROWS_AS(solve_brute_force(g), InputError);
}

TEST_CASE("Zielonka agrees with brute force and its strategies verify") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 1000; ++i) {
    GameArena g = hdta::testing::random_arena(rng, 8, 3);
    Solution s = solve_parity(g);
    REQUIRE(s.winner == solve_brute_force(g));
    std::vector<bool> one(g.size()), two(g.size());
    for (int v = 0; v < g.size(); ++v) (s.winner[v] == Player::One ? one : two)[v] = true;
    CHECK(verify_strategy(g, s.strategy_one, Player::One, one));
    CHECK(verify_strategy(g, s.strategy_two, Player::Two, two));
  }
}

TEST_CASE("verify_strategy rejects a losing self-loop") {
  GameArena g;
  g.add_node(Player::Two, 0);
  g.add_node(Player::Two, 1);
  g.add_edge(0, 0);
  g.add_edge(0, 1);
  g.add_edge(1, 1);
  CHECK_FALSE(verify_strategy(g, {1, 0}, Player::Two, {true, false}));
  CHECK(verify_strategy(g, {0, 0}, Player::Two, {true, false}));
  CHECK_THROWS_AS(verify_strategy(g, {-1, 0}, Player::Two, {true, false}), InputError);
}

TEST_CASE("LAR examples") {
  GameArena g = loop(Player::One, 0);
  Solution none = solve_parity(rabin_to_parity_lar(g, {}).arena);
  CHECK(none.winner[0] == Player::One);
  RabinCondition trivial{{all(1, false), all(1, true)}};
  LarArena lar = rabin_to_parity_lar(g, trivial);
  CHECK(solve_parity(lar.arena).winner[lar.entry[0]] == Player::Two);
}

TEST_CASE("LAR preserves the Rabin verdict on lassos") {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 500; ++i) {
    GameArena g = random_total_arena(rng, 6);
    RabinCondition r = random_rabin(rng, g.size());
    LarArena lar = rabin_to_parity_lar(g, r);
    std::size_t fact = 1;
    for (std::size_t k = 2; k <= r.size(); ++k) fact *= k;
    CHECK(static_cast<std::size_t>(lar.arena.size()) <= g.size() * fact * std::max<std::size_t>(1, r.size()));
    auto l = random_walk_lasso(rng, g);
    CHECK((lar_lasso_priority(lar, l) % 2 == 0) == rabin_accepts(r, l.cycle));
  }
}

TEST_CASE("parity nonemptiness examples") {
  auto even = parity_nonemptiness({{0}}, {2}, {0});
  REQUIRE(even.has_value());
  CHECK(even->cycle == std::vector<int>{0});
  CHECK_FALSE(parity_nonemptiness({{1}, {0}}, {1, 3}, {0}).has_value());
}

TEST_CASE("parity nonemptiness agrees with cycle enumeration") {
  std::mt19937_64 rng(107);
  for (int i = 0; i < 1000; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 10)(rng);
    std::vector<std::vector<int>> succ(n);
    std::vector<int> prio(n);
    for (int v = 0; v < n; ++v) {
      prio[v] = std::uniform_int_distribution<int>(0, 3)(rng);
      const int d = std::uniform_int_distribution<int>(0, 2)(rng);
      for (int k = 0; k < d; ++k) {
        int w = std::uniform_int_distribution<int>(0, n - 1)(rng);
        if (std::find(succ[v].begin(), succ[v].end(), w) == succ[v].end()) succ[v].push_back(w);
      }
    }
    std::vector<int> init{0};
    auto got = parity_nonemptiness(succ, prio, init);
    REQUIRE(got.has_value() == even_simple_cycle_reachable(succ, prio, init));
    if (!got) continue;
    std::vector<int> seq = got->stem;
    seq.insert(seq.end(), got->cycle.begin(), got->cycle.end());
    seq.push_back(got->cycle.front());
    CHECK(seq.front() == 0);
    for (std::size_t k = 0; k + 1 < seq.size(); ++k)
      CHECK(std::find(succ[seq[k]].begin(), succ[seq[k]].end(), seq[k + 1]) != succ[seq[k]].end());
    int m = 0;
    for (int v : got->cycle) m = std::max(m, prio[v]);
    CHECK(m % 2 == 0);
  }
}
