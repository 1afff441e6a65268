#ifndef TFM_RATIONAL_HPP
#define TFM_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

#include "tfm/error.hpp"

namespace tfm {

// Exact arbitrary-precision arithmetic throughout: the identities checked by
// the law suites are exact, so there is no floating point on any result path.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline std::string to_string(const Int& n) { return n.str(); }

// Rationals print as `p/q` in lowest terms, integers as `p`.
inline std::string to_string(const Rat& r) {
  const Int num = numerator(r);
  const Int den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline void skip_ws(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                               text[pos] == '\r'))
    ++pos;
}

inline Int parse_natural(std::string_view text, std::size_t& pos) {
  skip_ws(text, pos);
  if (pos >= text.size() || !is_digit(text[pos]))
    throw ParseError(pos, "expected a natural number");
  Int value = 0;
  while (pos < text.size() && is_digit(text[pos])) {
    value *= 10;
    value += text[pos] - '0';
    ++pos;
  }
  return value;
}

}  // namespace detail

// rat := ['-'] natural ['/' natural]
inline Rat parse_rat(std::string_view text, std::size_t& pos) {
  detail::skip_ws(text, pos);
  bool negative = false;
  if (pos < text.size() && text[pos] == '-') {
    negative = true;
    ++pos;
  }
  Int num = detail::parse_natural(text, pos);
  Int den = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    den = detail::parse_natural(text, pos);
    if (den == 0) throw ParseError(pos, "zero denominator");
  }
  Rat r(num, den);
  return negative ? Rat(-r) : r;
}

inline Rat parse_rat(std::string_view text) {
  std::size_t pos = 0;
  Rat r = parse_rat(text, pos);
  detail::skip_ws(text, pos);
  if (pos != text.size()) throw ParseError(pos, "trailing input after rational");
  return r;
}

}  // namespace tfm

#endif  // TFM_RATIONAL_HPP
