#include "hdta/rational.hpp"

#include <cctype>
#include <charconv>

#include "hdta/errors.hpp"

namespace hdta {

std::int64_t floor_of(const Rational& r) {
  std::int64_t n = r.numerator();
  std::int64_t d = r.denominator();  // always positive
  std::int64_t q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

Rational frac_of(const Rational& r) { return r - Rational(floor_of(r)); }

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw InputError("not a rational number: '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw InputError("empty rational");
  bool neg = false;
  std::string_view body = text;
  if (body.front() == '-') {
    neg = true;
    body.remove_prefix(1);
  }
  Rational r;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::int64_t n = parse_int(body.substr(0, slash), text);
    std::int64_t d = parse_int(body.substr(slash + 1), text);
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    r = Rational(n, d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view ip = body.substr(0, dot);
    std::string_view fp = body.substr(dot + 1);
    std::int64_t i = ip.empty() ? 0 : parse_int(ip, text);
    std::int64_t scale = 1;
    std::int64_t f = 0;
    if (!fp.empty()) {
      if (fp.size() > 15) throw InputError("too many decimals in '" + std::string(text) + "'");
      f = parse_int(fp, text);
      for (std::size_t k = 0; k < fp.size(); ++k) scale *= 10;
    }
    r = Rational(i) + Rational(f, scale);
  } else {
    r = Rational(parse_int(body, text));
  }
  return neg ? -r : r;
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational simplest_between(const Rational& lo, const Rational& hi) {
  // Smallest denominator first; for each denominator the least numerator
  // strictly above lo.
  for (std::int64_t d = 1;; ++d) {
    Rational scaled = lo * d;
    std::int64_t n = floor_of(scaled) + 1;
    Rational cand(n, d);
    if (cand > lo && cand < hi) return cand;
  }
}

}  // namespace hdta
