#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace hdta {

/// Exact time quantity. Every delay and clock value in the library is one.
using Rational = boost::rational<std::int64_t>;

/// floor for nonnegative (and negative) rationals.
std::int64_t floor_of(const Rational& r);

/// Fractional part, always in [0, 1).
Rational frac_of(const Rational& r);

/// Parses "3", "3/2", "0.25". Throws InputError on anything else.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

/// The rational with the smallest denominator strictly inside (lo, hi).
/// Requires lo < hi.
Rational simplest_between(const Rational& lo, const Rational& hi);

}  // namespace hdta
