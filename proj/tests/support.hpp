#pragma once

#include <functional>
#include <random>
#include <string>

#include "hdta/analysis.hpp"
#include "hdta/automaton.hpp"
#include "hdta/hd.hpp"
#include "hdta/io.hpp"
#include "hdta/parity.hpp"
#include "hdta/region.hpp"
#include "hdta/validate.hpp"

namespace hdta::testing {

inline TaDocument fixture_doc(const std::string& name) {
  return load_ta(std::string(HDTA_FIXTURES) + "/" + name);
}

inline TimedAutomaton fixture(const std::string& name) { return fixture_doc(name).ta; }

struct RandomTaShape {
  int max_states = 4;
  int min_clocks = 1;
  int max_clocks = 2;
  std::int64_t max_constant = 2;
  int letters = 2;
  AcceptanceKind kind = AcceptanceKind::Safety;
  int max_out = 2;  // transitions per (state, letter)
};

inline Guard random_guard(std::mt19937_64& rng, int clocks, std::int64_t max_constant) {
  std::vector<GuardAtom> atoms;
  if (clocks == 0) return Guard();
  const int n = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int i = 0; i < n; ++i) {
    ClockId x = std::uniform_int_distribution<int>(0, clocks - 1)(rng);
    auto rel = static_cast<Relation>(std::uniform_int_distribution<int>(0, 3)(rng));
    std::int64_t c = std::uniform_int_distribution<std::int64_t>(0, max_constant)(rng);
    if ((rel == Relation::Lt && c == 0)) rel = Relation::Le;
    atoms.push_back({x, kZeroClock, rel, c});
  }
  return Guard(std::move(atoms));
}

/// Random diagonal-free automaton; not necessarily complete.
inline TimedAutomaton random_ta(std::mt19937_64& rng, const RandomTaShape& shape) {
  TimedAutomaton ta;
  ta.name = "random";
  const int n = std::uniform_int_distribution<int>(1, shape.max_states)(rng);
  const int clocks = std::uniform_int_distribution<int>(shape.min_clocks, shape.max_clocks)(rng);
  for (int q = 0; q < n; ++q) ta.states.push_back("q" + std::to_string(q));
  for (int c = 0; c < clocks; ++c) ta.clocks.push_back(std::string(1, static_cast<char>('x' + c)));
  for (int a = 0; a < shape.letters; ++a) ta.alphabet.push_back(std::string(1, static_cast<char>('a' + a)));
  std::vector<int> marks(n);
  std::bernoulli_distribution coin(0.5);
  for (int q = 0; q < n; ++q) {
    if (shape.kind == AcceptanceKind::Parity)
      marks[q] = std::uniform_int_distribution<int>(0, 2)(rng);
    else
      marks[q] = coin(rng) ? 1 : 0;
  }
  if (shape.kind == AcceptanceKind::Safety) marks[0] = 1;
  ta.acceptance = {shape.kind, marks};
  for (StateId q = 0; q < n; ++q)
    for (LetterId a = 0; a < shape.letters; ++a) {
      const int k = std::uniform_int_distribution<int>(1, shape.max_out)(rng);
      for (int i = 0; i < k; ++i) {
        std::vector<ClockId> resets;
        for (ClockId c = 0; c < clocks; ++c)
          if (coin(rng)) resets.push_back(c);
        Guard g = i == 0 && coin(rng) ? Guard() : random_guard(rng, clocks, shape.max_constant);
        ta.add_transition(q, std::move(g), a, std::move(resets),
                          std::uniform_int_distribution<int>(0, n - 1)(rng));
      }
    }
  return ta;
}

/// Rejection sampling: random automata that are history-deterministic but
/// not syntactically deterministic.
inline TimedAutomaton random_hd_ta(std::mt19937_64& rng, const RandomTaShape& shape) {
  for (;;) {
    TimedAutomaton ta = complete(random_ta(rng, shape));
    if (!is_deterministic(ta) && check_hd(ta)) return ta;
  }
}

/// Random lasso word with delays on a quarter grid.
inline Lasso random_lasso(std::mt19937_64& rng, int letters, int max_prefix = 3, int max_cycle = 3) {
  Lasso l;
  auto letter = [&] {
    return TimedLetter{Rational(std::uniform_int_distribution<int>(0, 8)(rng), 4),
                       std::uniform_int_distribution<int>(0, letters - 1)(rng)};
  };
  const int p = std::uniform_int_distribution<int>(0, max_prefix)(rng);
  const int c = std::uniform_int_distribution<int>(1, max_cycle)(rng);
  for (int i = 0; i < p; ++i) l.prefix.push_back(letter());
  for (int i = 0; i < c; ++i) l.cycle.push_back(letter());
  return l;
}

inline GameArena random_arena(std::mt19937_64& rng, int max_nodes, int max_priority) {
  GameArena g;
  const int n = std::uniform_int_distribution<int>(1, max_nodes)(rng);
  for (int v = 0; v < n; ++v)
    g.add_node(std::bernoulli_distribution(0.5)(rng) ? Player::One : Player::Two,
               std::uniform_int_distribution<int>(0, max_priority)(rng));
  for (int v = 0; v < n; ++v) {
    const int deg = std::uniform_int_distribution<int>(0, 3)(rng);
    std::vector<bool> used(n, false);
    for (int i = 0; i < deg; ++i) {
      int w = std::uniform_int_distribution<int>(0, n - 1)(rng);
      if (!used[w]) g.add_edge(v, w);
      used[w] = true;
    }
  }
  return g;
}

/// `run` is a run of `ta` over `word`, ignoring acceptance.
inline bool is_run(const TimedAutomaton& ta, const Lasso& word, const TimedRun& run) {
  TimedAutomaton any = ta;
  any.acceptance = {AcceptanceKind::Safety, std::vector<int>(ta.num_states(), 1)};
  return replay_accepting(any, word, run);
}

/// Region equivalence by its three defining conditions, without regions.
inline bool equivalent(const ClockValuation& a, const ClockValuation& b, const ClockBounds& cmax) {
  const std::size_t n = a.size();
  auto big = [&](const ClockValuation& v, std::size_t x) { return v[x] > Rational(cmax[x]); };
  for (std::size_t x = 0; x < n; ++x) {
    if (big(a, x) != big(b, x)) return false;
    if (!big(a, x) && floor_of(a[x]) != floor_of(b[x])) return false;
    if (!big(a, x) && (frac_of(a[x]) == Rational(0)) != (frac_of(b[x]) == Rational(0))) return false;
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (big(a, x) || big(a, y)) continue;
      if ((frac_of(a[x]) <= frac_of(a[y])) != (frac_of(b[x]) <= frac_of(b[y]))) return false;
    }
  return true;
}

inline Rational max_frac(const ClockValuation& v) {
  Rational m(0);
  for (const auto& x : v) m = std::max(m, frac_of(x));
  return m;
}

inline ClockValuation random_valuation(std::mt19937_64& rng, const ClockBounds& cmax, int denominator = 8) {
  ClockValuation v;
  for (auto c : cmax)
    v.push_back(Rational(std::uniform_int_distribution<std::int64_t>(0, (c + 2) * denominator)(rng), denominator));
  return v;
}

/// Short-delay lemma for one valuation: for every delay strictly below
/// 1 - maxfrac the region does not change, provided no bounded clock sits on
/// an integer. Returns false on a violation.
inline bool short_delay_holds(std::mt19937_64& rng, const ClockValuation& nu, const ClockBounds& cmax) {
  for (std::size_t x = 0; x < nu.size(); ++x)
    if (nu[x] <= Rational(cmax[x]) && frac_of(nu[x]) == Rational(0))
      return true;  // only the zero delay qualifies
  const Rational bound = Rational(1) - max_frac(nu);
  const Rational d = bound * Rational(std::uniform_int_distribution<int>(0, 999)(rng), 1000);
  ClockValuation moved = nu;
  for (auto& x : moved) x += d;
  return region_of(nu, cmax) == region_of(moved, cmax);
}

/// Short-path lemma on one automaton: from region-equivalent configurations,
/// every reduced path (<= max_len transitions, duration below both
/// 1 - maxfrac bounds) replays with the same delays and transitions and ends
/// in equivalent configurations. Returns the number of violations.
inline int short_path_violations(std::mt19937_64& rng, const TimedAutomaton& ta, int samples, int max_len = 3) {
  const ClockBounds cmax = ta.cmax();
  int violations = 0;
  for (int s = 0; s < samples; ++s) {
    const ClockValuation nu = random_valuation(rng, cmax, 8);
    ClockValuation mu;
    bool found = false;
    for (int k = 0; k < 2000 && !found; ++k) {
      mu = random_valuation(rng, cmax, 24);
      found = equivalent(nu, mu, cmax);
    }
    if (!found) mu = nu;
    const StateId p = std::uniform_int_distribution<int>(0, ta.num_states() - 1)(rng);
    const Rational budget = Rational(1) - std::max(max_frac(nu), max_frac(mu));
    std::vector<Rational> delays{Rational(0), budget / 4, budget / 3};
    std::function<void(Configuration, Configuration, Rational, int)> walk =
        [&](Configuration a, Configuration b, Rational used, int depth) {
          if (a.state != b.state || !equivalent(a.valuation, b.valuation, cmax)) {
            ++violations;
            return;
          }
          if (depth == max_len) return;
          for (const Rational& d : delays) {
            if (used + d >= budget) continue;
            Configuration ad = delay(a, d), bd = delay(b, d);
            if (!equivalent(ad.valuation, bd.valuation, cmax)) {
              ++violations;
              continue;
            }
            for (const auto& t : ta.transitions) {
              if (t.source != ad.state || !eval_guard(t.guard, ad.valuation)) continue;
              if (!eval_guard(t.guard, bd.valuation)) {
                ++violations;
                continue;
              }
              walk({t.target, apply_resets(ad.valuation, t.resets)},
                   {t.target, apply_resets(bd.valuation, t.resets)}, used + d, depth + 1);
            }
          }
        };
    walk({p, nu}, {p, mu}, Rational(0), 0);
  }
  return violations;
}

}  // namespace hdta::testing
