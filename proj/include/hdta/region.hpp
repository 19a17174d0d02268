#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hdta/automaton.hpp"

namespace hdta {

using ClockBounds = std::vector<std::int64_t>;

/// Region of the classic clock equivalence with per-clock maximal constants.
///
/// Each clock is either above its maximal constant (unbounded) or carries an
/// integer part. Bounded clocks are ranked by fractional part: rank 0 means
/// fraction zero, ranks 1..num_blocks() order the positive fractions
/// ascending, with equal fractions sharing a rank.
class Region {
 public:
  static constexpr int kUnbounded = -1;

  Region() = default;
  Region(std::vector<int> ints, std::vector<int> ranks);

  /// All clocks zero.
  static Region zero(int num_clocks);

  int num_clocks() const { return static_cast<int>(ints_.size()); }
  bool bounded(ClockId c) const { return ints_[c] != kUnbounded; }
  int int_part(ClockId c) const { return ints_[c]; }
  int rank(ClockId c) const { return ranks_[c]; }
  int num_blocks() const;

  std::vector<ClockId> zero_frac() const;
  std::vector<std::vector<ClockId>> frac_order() const;
  bool all_unbounded() const;

  const std::vector<int>& ints() const { return ints_; }
  const std::vector<int>& ranks() const { return ranks_; }

  std::string to_string(const std::vector<std::string>& clock_names) const;

  friend bool operator==(const Region&, const Region&) = default;
  friend auto operator<=>(const Region&, const Region&) = default;

 private:
  std::vector<int> ints_;
  std::vector<int> ranks_;
};

struct RegionHash {
  std::size_t operator()(const Region& r) const;
};

Region region_of(const ClockValuation& nu, const ClockBounds& cmax);

/// Region reached by the least positive delay that leaves r; the
/// all-unbounded region is its own successor.
Region time_successor(const Region& r, const ClockBounds& cmax);

/// r, time_successor(r), ... up to and including the fixed point.
std::vector<Region> time_chain(const Region& r, const ClockBounds& cmax);

Region reset(const Region& r, const std::vector<ClockId>& clocks);

/// Every valuation of r satisfies g. Non-diagonal atoms are decided first;
/// a diagonal atom is only consulted when those all hold, and throws
/// DiagonalError if one of its operands is unbounded in r.
bool region_satisfies(const Region& r, const Guard& g, const ClockBounds& cmax);

/// A valuation inside r (fractions k/(num_blocks+1), unbounded clocks at
/// cmax + 1).
ClockValuation sample_valuation(const Region& r, const ClockBounds& cmax);

/// Canonical delay d with region_of(nu + d) == target, if target lies on the
/// time chain of nu: the exact boundary point, or the simplest rational of
/// the open delay interval.
std::optional<Rational> delay_into(const ClockValuation& nu, const Region& target,
                                   const ClockBounds& cmax);

/// Every region over the given constants, in a canonical order.
std::vector<Region> enumerate_regions(const ClockBounds& cmax);

/// Restriction to clocks [first, first + count).
Region project(const Region& r, int first, int count);

/// Region over two copies of the clocks in which both copies agree.
Region embed_diagonal(const Region& r);

struct ConfigRegion {
  StateId state = 0;
  Region region;

  friend bool operator==(const ConfigRegion&, const ConfigRegion&) = default;
};

struct RegionGraph {
  static constexpr TransitionId kTimeEdge = -1;
  struct Edge {
    int from;
    int to;
    TransitionId label;  // kTimeEdge for time-successor edges
  };
  std::vector<ConfigRegion> nodes;  // node 0 is (initial, zero)
  std::vector<Edge> edges;
  ClockBounds cmax;

  std::optional<int> find(const ConfigRegion& cr) const;
};

/// Reachable part of the region graph from the initial configuration.
RegionGraph build_region_graph(const TimedAutomaton& ta);

}  // namespace hdta
