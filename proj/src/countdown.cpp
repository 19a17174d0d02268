#include "hdta/countdown.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "hdta/errors.hpp"
#include "hdta/validate.hpp"

namespace hdta {

void CountdownInstance::check() const {
  if (num_states < 1) throw InputError("countdown instance needs a state");
  if (k < 1) throw InputError("countdown target must be positive");
  for (const auto& m : moves) {
    if (m.from < 0 || m.from >= num_states || m.to < 0 || m.to >= num_states)
      throw InputError("countdown move references an unknown state");
    if (m.label < 1) throw InputError("countdown labels must be positive");
  }
}

bool countdown_player1_wins(const CountdownInstance& c) {
  c.check();
  const std::int64_t k = c.k;
  std::vector<std::vector<bool>> win(c.num_states, std::vector<bool>(k + 1, false));
  for (int p = 0; p < c.num_states; ++p) win[p][k] = true;
  for (std::int64_t n = k - 1; n >= 0; --n)
    for (int p = 0; p < c.num_states; ++p) {
      std::set<std::int64_t> labels;
      for (const auto& m : c.moves)
        if (m.from == p && m.label <= k - n) labels.insert(m.label);
      for (std::int64_t l : labels) {
        bool all = true;
        for (const auto& m : c.moves)
          if (m.from == p && m.label == l && !win[m.to][n + l]) all = false;
        if (all) {
          win[p][n] = true;
          break;
        }
      }
    }
  return win[0][0];
}

namespace {

std::vector<std::int64_t> labels_from(const CountdownInstance& c, int p) {
  std::set<std::int64_t> s;
  for (const auto& m : c.moves)
    if (m.from == p) s.insert(m.label);
  return {s.begin(), s.end()};
}

// Disjuncts of "x differs from every label": the open gaps between labels.
std::vector<std::vector<GuardAtom>> avoid_labels(ClockId x, const std::vector<std::int64_t>& labels) {
  if (labels.empty()) return {{}};
  std::vector<std::vector<GuardAtom>> out;
  out.push_back({{x, kZeroClock, Relation::Lt, labels.front()}});
  for (std::size_t i = 0; i + 1 < labels.size(); ++i)
    out.push_back({{x, kZeroClock, Relation::Gt, labels[i]}, {x, kZeroClock, Relation::Lt, labels[i + 1]}});
  out.push_back({{x, kZeroClock, Relation::Gt, labels.back()}});
  return out;
}

}  // namespace

CountdownReduction gen_countdown(const CountdownInstance& c) {
  c.check();
  CountdownReduction r;
  r.player1_wins = countdown_player1_wins(c);

  TimedAutomaton& a = r.a;
  a.name = "countdown_words";
  a.states = {"s"};
  a.alphabet = {"a", "e"};
  a.acceptance = {AcceptanceKind::Safety, {1}};
  a.add_transition(0, Guard(), 0, {}, 0);
  a.add_transition(0, Guard(), 1, {}, 0);

  TimedAutomaton& b = r.b;
  b.name = "countdown_counter";
  b.alphabet = {"a", "e"};
  b.clocks = {"x1", "x2"};
  for (int p = 0; p < c.num_states; ++p) b.states.push_back("p" + std::to_string(p));
  b.states.push_back("win");
  const StateId win = c.num_states;
  b.acceptance = {AcceptanceKind::Safety, std::vector<int>(b.states.size(), 1)};
  const ClockId x1 = 0, x2 = 1;
  const LetterId la = 0, le = 1;
  for (int p = 0; p < c.num_states; ++p) {
    b.add_transition(p, Guard({{x1, kZeroClock, Relation::Gt, c.k}}), la, {}, win);
    for (auto& conj : avoid_labels(x2, labels_from(c, p))) b.add_transition(p, Guard(conj), la, {}, win);
    for (const auto& m : c.moves) {
      if (m.from != p) continue;
      Guard g = Guard::equal(x2, m.label).conjoin(Guard({{x1, kZeroClock, Relation::Le, c.k}}));
      b.add_transition(p, g, la, {x2}, m.to);
    }
    b.add_transition(p, Guard({{x1, kZeroClock, Relation::Lt, c.k}}), le, {}, win);
    b.add_transition(p, Guard({{x1, kZeroClock, Relation::Gt, c.k}}), le, {}, win);
    b.add_transition(p, Guard({{x2, kZeroClock, Relation::Gt, 0}}), le, {}, win);
  }
  b.add_transition(win, Guard(), la, {}, win);
  b.add_transition(win, Guard(), le, {}, win);
  b = complete(b);
  return r;
}

TimedGame countdown_timed_game(const CountdownInstance& c) {
  c.check();
  TimedGame g;
  TimedAutomaton& t = g.ta;
  t.name = "countdown_game";
  t.alphabet = {"a"};
  t.clocks = {"x1", "x2", "z"};
  const ClockId x1 = 0, x2 = 1, z = 2;
  const int n = c.num_states;
  for (int p = 0; p < n; ++p) {
    t.states.push_back("p" + std::to_string(p));
    g.owner.push_back(Player::One);
  }
  for (int p = 0; p < n; ++p) {
    t.states.push_back("m" + std::to_string(p));
    g.owner.push_back(Player::Two);
  }
  t.states.push_back("escape");
  g.owner.push_back(Player::Two);
  t.states.push_back("goal");
  g.owner.push_back(Player::One);
  const StateId escape = 2 * n, goal = 2 * n + 1;
  t.acceptance = {AcceptanceKind::Safety, std::vector<int>(t.states.size(), 1)};
  t.acceptance.marks[goal] = 0;
  const Guard now({{z, kZeroClock, Relation::Le, 0}});
  for (int p = 0; p < n; ++p) {
    t.add_transition(p, Guard(), 0, {z}, n + p);
    t.add_transition(p, Guard::equal(x1, c.k).conjoin(Guard::equal(x2, 0)), 0, {}, goal);
    t.add_transition(n + p, now.conjoin(Guard({{x1, kZeroClock, Relation::Gt, c.k}})), 0, {}, escape);
    for (auto& conj : avoid_labels(x2, labels_from(c, p))) t.add_transition(n + p, now.conjoin(Guard(conj)), 0, {}, escape);
    for (const auto& m : c.moves) {
      if (m.from != p) continue;
      Guard gd = now.conjoin(Guard::equal(x2, m.label)).conjoin(Guard({{x1, kZeroClock, Relation::Le, c.k}}));
      t.add_transition(n + p, gd, 0, {x2}, m.to);
    }
  }
  t.add_transition(escape, Guard(), 0, {}, escape);
  t.add_transition(goal, Guard(), 0, {}, goal);
  return g;
}

CountdownInstance random_countdown(std::mt19937_64& rng, int max_states, std::int64_t max_label,
                                   std::int64_t max_k) {
  CountdownInstance c;
  c.num_states = std::uniform_int_distribution<int>(1, max_states)(rng);
  c.k = std::uniform_int_distribution<std::int64_t>(1, max_k)(rng);
  const int moves = std::uniform_int_distribution<int>(1, 2 * c.num_states + 1)(rng);
  std::set<std::tuple<int, std::int64_t, int>> seen;
  for (int i = 0; i < moves; ++i) {
    int from = std::uniform_int_distribution<int>(0, c.num_states - 1)(rng);
    int to = std::uniform_int_distribution<int>(0, c.num_states - 1)(rng);
    std::int64_t l = std::uniform_int_distribution<std::int64_t>(1, max_label)(rng);
    if (seen.insert({from, l, to}).second) c.moves.push_back({from, l, to});
  }
  return c;
}

}  // namespace hdta
