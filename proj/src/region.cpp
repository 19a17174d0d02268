#include "hdta/region.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "hdta/errors.hpp"

namespace hdta {

namespace {

// Renumbers positive ranks densely (1, 2, ...) keeping their order.
void normalize_ranks(std::vector<int>& ranks) {
  std::set<int> used;
  for (int r : ranks)
    if (r > 0) used.insert(r);
  std::map<int, int> remap;
  int next = 1;
  for (int r : used) remap[r] = next++;
  for (int& r : ranks)
    if (r > 0) r = remap[r];
}

}  // namespace

Region::Region(std::vector<int> ints, std::vector<int> ranks)
    : ints_(std::move(ints)), ranks_(std::move(ranks)) {
  for (std::size_t i = 0; i < ints_.size(); ++i)
    if (ints_[i] == kUnbounded) ranks_[i] = kUnbounded;
  normalize_ranks(ranks_);
}

Region Region::zero(int num_clocks) {
  return Region(std::vector<int>(num_clocks, 0), std::vector<int>(num_clocks, 0));
}

int Region::num_blocks() const {
  int m = 0;
  for (int r : ranks_) m = std::max(m, r);
  return m;
}

std::vector<ClockId> Region::zero_frac() const {
  std::vector<ClockId> out;
  for (int c = 0; c < num_clocks(); ++c)
    if (ranks_[c] == 0) out.push_back(c);
  return out;
}

std::vector<std::vector<ClockId>> Region::frac_order() const {
  std::vector<std::vector<ClockId>> out(num_blocks());
  for (int c = 0; c < num_clocks(); ++c)
    if (ranks_[c] > 0) out[ranks_[c] - 1].push_back(c);
  return out;
}

bool Region::all_unbounded() const {
  return std::all_of(ints_.begin(), ints_.end(), [](int k) { return k == kUnbounded; });
}

std::string Region::to_string(const std::vector<std::string>& names) const {
  auto name = [&](int c) {
    return c < static_cast<int>(names.size()) ? names[c] : "c" + std::to_string(c);
  };
  std::string s;
  for (int c = 0; c < num_clocks(); ++c) {
    if (c) s += ' ';
    if (!bounded(c))
      s += name(c) + ">max";
    else if (ranks_[c] == 0)
      s += name(c) + "=" + std::to_string(ints_[c]);
    else
      s += name(c) + "(" + std::to_string(ints_[c]) + "," + std::to_string(ints_[c] + 1) + ")";
  }
  auto order = frac_order();
  if (!order.empty()) {
    s += " |";
    for (std::size_t b = 0; b < order.size(); ++b) {
      s += b ? " < {" : " {";
      for (std::size_t i = 0; i < order[b].size(); ++i) s += (i ? "," : "") + name(order[b][i]);
      s += "}";
    }
  }
  return s;
}

std::size_t RegionHash::operator()(const Region& r) const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  auto mix = [&](int v) { h ^= static_cast<std::size_t>(v + 7) + 0x9e3779b9 + (h << 6) + (h >> 2); };
  for (int v : r.ints()) mix(v);
  for (int v : r.ranks()) mix(v);
  return h;
}

Region region_of(const ClockValuation& nu, const ClockBounds& cmax) {
  const int n = static_cast<int>(nu.size());
  std::vector<int> ints(n);
  std::vector<int> ranks(n, 0);
  std::vector<Rational> fracs;
  for (int c = 0; c < n; ++c) {
    if (nu[c] > Rational(cmax[c])) {
      ints[c] = Region::kUnbounded;
      continue;
    }
    ints[c] = static_cast<int>(floor_of(nu[c]));
    Rational f = frac_of(nu[c]);
    if (f != Rational(0)) fracs.push_back(f);
  }
  std::sort(fracs.begin(), fracs.end());
  fracs.erase(std::unique(fracs.begin(), fracs.end()), fracs.end());
  for (int c = 0; c < n; ++c) {
    if (ints[c] == Region::kUnbounded) continue;
    Rational f = frac_of(nu[c]);
    if (f == Rational(0)) continue;
    ranks[c] = static_cast<int>(std::lower_bound(fracs.begin(), fracs.end(), f) - fracs.begin()) + 1;
  }
  return Region(std::move(ints), std::move(ranks));
}

Region time_successor(const Region& r, const ClockBounds& cmax) {
  std::vector<int> ints = r.ints();
  std::vector<int> ranks = r.ranks();
  const int n = r.num_clocks();
  auto zeros = r.zero_frac();
  if (!zeros.empty()) {
    // Integral clocks leave their integer: those at their maximum become
    // unbounded, the others form the new smallest fraction block.
    for (int& k : ranks)
      if (k > 0) ++k;
    for (ClockId c : zeros) {
      if (ints[c] >= cmax[c])
        ints[c] = Region::kUnbounded;
      else
        ranks[c] = 1;
    }
    return Region(std::move(ints), std::move(ranks));
  }
  const int top = r.num_blocks();
  if (top == 0) return r;  // every clock unbounded
  for (int c = 0; c < n; ++c)
    if (ranks[c] == top) {
      ints[c] += 1;
      ranks[c] = 0;
    }
  return Region(std::move(ints), std::move(ranks));
}

std::vector<Region> time_chain(const Region& r, const ClockBounds& cmax) {
  std::vector<Region> chain{r};
  for (;;) {
    Region next = time_successor(chain.back(), cmax);
    if (next == chain.back()) break;
    chain.push_back(std::move(next));
  }
  return chain;
}

Region reset(const Region& r, const std::vector<ClockId>& clocks) {
  if (clocks.empty()) return r;
  std::vector<int> ints = r.ints();
  std::vector<int> ranks = r.ranks();
  for (ClockId c : clocks) {
    ints[c] = 0;
    ranks[c] = 0;
  }
  return Region(std::move(ints), std::move(ranks));
}

namespace {

// Either exactly `lo`, or the open interval (lo, lo + 1).
struct Span {
  std::int64_t lo;
  bool exact;
};

bool decide(const Span& v, Relation rel, std::int64_t n) {
  if (v.exact) {
    switch (rel) {
      case Relation::Lt: return v.lo < n;
      case Relation::Le: return v.lo <= n;
      case Relation::Gt: return v.lo > n;
      case Relation::Ge: return v.lo >= n;
    }
  }
  // n is an integer, so the open unit interval lies entirely on one side.
  switch (rel) {
    case Relation::Lt:
    case Relation::Le: return v.lo + 1 <= n;
    case Relation::Gt:
    case Relation::Ge: return v.lo >= n;
  }
  return false;
}

bool plain_atom_holds(const Region& r, const GuardAtom& a, const ClockBounds& cmax) {
  if (!r.bounded(a.left)) {
    if (a.bound > cmax[a.left]) throw InputError("guard constant exceeds the clock's maximal constant");
    return a.rel == Relation::Gt || a.rel == Relation::Ge;
  }
  return decide({r.int_part(a.left), r.rank(a.left) == 0}, a.rel, a.bound);
}

bool diagonal_atom_holds(const Region& r, const GuardAtom& a) {
  if (!r.bounded(a.left) || !r.bounded(a.right))
    throw DiagonalError("diagonal atom undetermined on a region with an unbounded operand");
  std::int64_t d = static_cast<std::int64_t>(r.int_part(a.left)) - r.int_part(a.right);
  int fl = r.rank(a.left);
  int fr = r.rank(a.right);
  if (fl == fr) return decide({d, true}, a.rel, a.bound);
  if (fl > fr) return decide({d, false}, a.rel, a.bound);
  return decide({d - 1, false}, a.rel, a.bound);
}

}  // namespace

bool region_satisfies(const Region& r, const Guard& g, const ClockBounds& cmax) {
  for (const auto& a : g.atoms())
    if (!a.is_diagonal() && !plain_atom_holds(r, a, cmax)) return false;
  for (const auto& a : g.atoms())
    if (a.is_diagonal() && !diagonal_atom_holds(r, a)) return false;
  return true;
}

ClockValuation sample_valuation(const Region& r, const ClockBounds& cmax) {
  const int m = r.num_blocks();
  ClockValuation nu(r.num_clocks());
  for (int c = 0; c < r.num_clocks(); ++c) {
    if (!r.bounded(c))
      nu[c] = Rational(cmax[c] + 1);
    else
      nu[c] = Rational(r.int_part(c)) + Rational(r.rank(c), m + 1);
  }
  return nu;
}

std::optional<Rational> delay_into(const ClockValuation& nu, const Region& target,
                                   const ClockBounds& cmax) {
  std::vector<Rational> points{Rational(0)};
  // Only clocks at or below their maximum change region as time passes.
  for (std::size_t c = 0; c < nu.size(); ++c)
    for (std::int64_t m = floor_of(nu[c]) + 1; m <= cmax[c]; ++m) points.push_back(Rational(m) - nu[c]);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  auto region_after = [&](const Rational& d) {
    ClockValuation moved = nu;
    for (auto& v : moved) v += d;
    return region_of(moved, cmax);
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (region_after(points[i]) == target) return points[i];
    Rational hi = i + 1 < points.size() ? points[i + 1] : Rational(floor_of(points[i]) + 2);
    Rational mid = (points[i] + hi) / 2;
    if (region_after(mid) == target) {
      if (i + 1 == points.size()) return Rational(floor_of(points[i]) + 1);
      return simplest_between(points[i], hi);
    }
  }
  return std::nullopt;
}

namespace {

// All weak orderings of `items` as rank vectors 1..k.
void weak_orderings(const std::vector<ClockId>& items, std::size_t idx, std::vector<int>& ranks,
                    int blocks, const std::function<void(const std::vector<int>&, int)>& emit) {
  if (idx == items.size()) {
    emit(ranks, blocks);
    return;
  }
  ClockId c = items[idx];
  // join an existing block
  for (int b = 1; b <= blocks; ++b) {
    ranks[c] = b;
    weak_orderings(items, idx + 1, ranks, blocks, emit);
  }
  // open a new block at any position; shift blocks >= pos
  for (int pos = 1; pos <= blocks + 1; ++pos) {
    std::vector<int> saved = ranks;
    for (std::size_t j = 0; j < idx; ++j)
      if (ranks[items[j]] >= pos) ++ranks[items[j]];
    ranks[c] = pos;
    weak_orderings(items, idx + 1, ranks, blocks + 1, emit);
    ranks = saved;
  }
}

}  // namespace

std::vector<Region> enumerate_regions(const ClockBounds& cmax) {
  const int n = static_cast<int>(cmax.size());
  std::set<Region> out;
  // Per clock: code 2k = exactly k, 2k+1 = (k, k+1), 2*cmax+1 = unbounded
  // (the open interval past the maximum).
  std::vector<std::int64_t> code(n, 0);
  for (;;) {
    std::vector<int> ints(n);
    std::vector<int> ranks(n, 0);
    std::vector<ClockId> fractional;
    for (int c = 0; c < n; ++c) {
      if (code[c] == 2 * cmax[c] + 1) {
        ints[c] = Region::kUnbounded;
        ranks[c] = Region::kUnbounded;
      } else {
        ints[c] = static_cast<int>(code[c] / 2);
        if (code[c] % 2 == 1) fractional.push_back(c);
      }
    }
    weak_orderings(fractional, 0, ranks, 0, [&](const std::vector<int>& rk, int) {
      out.insert(Region(ints, rk));
    });
    int c = 0;
    while (c < n && ++code[c] > 2 * cmax[c] + 1) code[c++] = 0;
    if (c == n) break;
  }
  return {out.begin(), out.end()};
}

Region project(const Region& r, int first, int count) {
  std::vector<int> ints(r.ints().begin() + first, r.ints().begin() + first + count);
  std::vector<int> ranks(r.ranks().begin() + first, r.ranks().begin() + first + count);
  return Region(std::move(ints), std::move(ranks));
}

Region embed_diagonal(const Region& r) {
  std::vector<int> ints = r.ints();
  std::vector<int> ranks = r.ranks();
  ints.insert(ints.end(), r.ints().begin(), r.ints().end());
  ranks.insert(ranks.end(), r.ranks().begin(), r.ranks().end());
  return Region(std::move(ints), std::move(ranks));
}

std::optional<int> RegionGraph::find(const ConfigRegion& cr) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == cr) return static_cast<int>(i);
  return std::nullopt;
}

RegionGraph build_region_graph(const TimedAutomaton& ta) {
  RegionGraph g;
  g.cmax = ta.cmax();
  struct Key {
    StateId q;
    Region r;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return RegionHash{}(k.r) * 31 + static_cast<std::size_t>(k.q); }
  };
  std::unordered_map<Key, int, KeyHash> index;
  auto intern = [&](StateId q, Region r) {
    Key k{q, r};
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(g.nodes.size());
    index.emplace(std::move(k), id);
    g.nodes.push_back({q, std::move(r)});
    return id;
  };
  intern(ta.initial, Region::zero(ta.num_clocks()));
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const StateId q = g.nodes[i].state;
    const Region r = g.nodes[i].region;
    Region succ = time_successor(r, g.cmax);
    if (!(succ == r)) g.edges.push_back({static_cast<int>(i), intern(q, succ), RegionGraph::kTimeEdge});
    for (const auto& t : ta.transitions) {
      if (t.source != q || !region_satisfies(r, t.guard, g.cmax)) continue;
      g.edges.push_back({static_cast<int>(i), intern(t.target, reset(r, t.resets)), t.id});
    }
  }
  return g;
}

}  // namespace hdta
