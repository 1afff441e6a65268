#ifndef TFM_ORDINAL_HPP
#define TFM_ORDINAL_HPP

// Ordinals strictly below epsilon_0 in Cantor normal form:
//   a = w^e1*c1 + ... + w^ek*ck   with e1 > e2 > ... > ek and every ci >= 1.
// Exponents are themselves Ordinals, so the representation is a finite tree
// and equality of values coincides with structural equality of term lists.

#include <compare>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tfm/error.hpp"
#include "tfm/rational.hpp"

namespace tfm {

class Ordinal {
 public:
  struct Term;

  Ordinal() = default;  // zero

  static Ordinal natural(Int n);
  static Ordinal natural(long n) { return natural(Int(n)); }
  static Ordinal omega();
  // w^exponent * coefficient; coefficient 0 yields zero.
  static Ordinal single(Ordinal exponent, Int coefficient);

  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  // Finite ordinals only.
  const Int& as_int() const;

  const std::vector<Term>& terms() const { return terms_; }
  const Ordinal& leading_exponent() const;
  const Int& leading_coefficient() const;
  // The ordinal with the leading CNF term removed.
  Ordinal tail() const;

  bool operator==(const Ordinal& o) const;
  bool operator!=(const Ordinal& o) const { return !(*this == o); }

 private:
  std::vector<Term> terms_;

  friend Ordinal ordinal_from_terms(std::vector<Term>&& terms);
};

struct Ordinal::Term {
  Ordinal exponent;
  Int coefficient;
};

// Unchecked builder: callers must supply strictly decreasing exponents and
// positive coefficients.
inline Ordinal ordinal_from_terms(std::vector<Ordinal::Term>&& terms) {
  Ordinal a;
  a.terms_ = std::move(terms);
  return a;
}

// Total order agreeing with the ordinal order: -1, 0, +1.
inline int compare(const Ordinal& a, const Ordinal& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  const std::size_t n = ta.size() < tb.size() ? ta.size() : tb.size();
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(ta[i].exponent, tb[i].exponent);
    if (c != 0) return c;
    if (ta[i].coefficient != tb[i].coefficient)
      return ta[i].coefficient < tb[i].coefficient ? -1 : 1;
  }
  if (ta.size() == tb.size()) return 0;
  return ta.size() < tb.size() ? -1 : 1;
}

inline bool Ordinal::operator==(const Ordinal& o) const { return compare(*this, o) == 0; }
inline bool operator<(const Ordinal& a, const Ordinal& b) { return compare(a, b) < 0; }
inline bool operator<=(const Ordinal& a, const Ordinal& b) { return compare(a, b) <= 0; }
inline bool operator>(const Ordinal& a, const Ordinal& b) { return compare(a, b) > 0; }
inline bool operator>=(const Ordinal& a, const Ordinal& b) { return compare(a, b) >= 0; }

inline Ordinal Ordinal::natural(Int n) {
  if (n < 0) throw Error(ErrorKind::ValidationError, "negative natural");
  Ordinal a;
  if (n > 0) a.terms_.push_back(Term{Ordinal(), std::move(n)});
  return a;
}

inline Ordinal Ordinal::omega() {
  Ordinal a;
  a.terms_.push_back(Term{natural(1), 1});
  return a;
}

inline Ordinal Ordinal::single(Ordinal exponent, Int coefficient) {
  if (coefficient < 0) throw Error(ErrorKind::ValidationError, "negative coefficient");
  Ordinal a;
  if (coefficient > 0) a.terms_.push_back(Term{std::move(exponent), std::move(coefficient)});
  return a;
}

inline bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

inline const Int& Ordinal::as_int() const {
  static const Int zero = 0;
  if (terms_.empty()) return zero;
  if (!is_finite()) throw Error(ErrorKind::ValidationError, "ordinal is not finite");
  return terms_[0].coefficient;
}

inline const Ordinal& Ordinal::leading_exponent() const {
  if (terms_.empty()) throw Error(ErrorKind::ZeroOrdinal, "zero ordinal has no leading term");
  return terms_[0].exponent;
}

inline const Int& Ordinal::leading_coefficient() const {
  if (terms_.empty()) throw Error(ErrorKind::ZeroOrdinal, "zero ordinal has no leading term");
  return terms_[0].coefficient;
}

inline Ordinal Ordinal::tail() const {
  if (terms_.empty()) throw Error(ErrorKind::ZeroOrdinal, "zero ordinal has no leading term");
  std::vector<Term> rest(terms_.begin() + 1, terms_.end());
  return ordinal_from_terms(std::move(rest));
}

// Ordinal sum a + b: terms of a of degree below b's leading degree are
// absorbed.
inline Ordinal operator+(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const Ordinal& e = b.leading_exponent();
  std::vector<Ordinal::Term> out;
  out.reserve(a.terms().size() + b.terms().size());
  std::size_t i = 0;
  while (i < a.terms().size() && compare(a.terms()[i].exponent, e) > 0) {
    out.push_back(a.terms()[i]);
    ++i;
  }
  Int lead = b.leading_coefficient();
  if (i < a.terms().size() && a.terms()[i].exponent == e) lead += a.terms()[i].coefficient;
  out.push_back(Ordinal::Term{e, std::move(lead)});
  for (std::size_t j = 1; j < b.terms().size(); ++j) out.push_back(b.terms()[j]);
  return ordinal_from_terms(std::move(out));
}

// Ordinal product a * b, distributing a over b's CNF terms from the left.
inline Ordinal operator*(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal();
  Ordinal result;
  for (const auto& t : b.terms()) {
    Ordinal partial;
    if (t.exponent.is_zero()) {
      // a * n for finite n >= 1: only the last copy's tail survives.
      std::vector<Ordinal::Term> terms(a.terms().begin(), a.terms().end());
      terms[0].coefficient *= t.coefficient;
      partial = ordinal_from_terms(std::move(terms));
    } else {
      partial = Ordinal::single(a.leading_exponent() + t.exponent, t.coefficient);
    }
    result = result + partial;
  }
  return result;
}

inline Ordinal omega_pow(const Ordinal& e) { return Ordinal::single(e, 1); }

// Nonzero single-term CNF with coefficient 1, i.e. not the sum of two
// strictly smaller ordinals.
inline bool is_indecomposable(const Ordinal& a) {
  return a.terms().size() == 1 && a.terms()[0].coefficient == 1;
}

struct StandardDecomposition {
  Ordinal sigma;  // a = w^sigma * n + rho
  Int n;
  Ordinal rho;
};

inline StandardDecomposition standard_decomposition(const Ordinal& a) {
  if (a.is_zero()) throw Error(ErrorKind::ZeroOrdinal, "standard decomposition of 0");
  return StandardDecomposition{a.leading_exponent(), a.leading_coefficient(), a.tail()};
}

// The unique g with b + g = a; requires b <= a.
inline Ordinal left_subtract(const Ordinal& b, const Ordinal& a) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t i = 0;
  while (i < ta.size() && i < tb.size()) {
    int ce = compare(ta[i].exponent, tb[i].exponent);
    if (ce > 0) {
      // b's remaining terms are absorbed by a's term i.
      return ordinal_from_terms({ta.begin() + i, ta.end()});
    }
    if (ce < 0) throw Error(ErrorKind::Underflow, "left_subtract: b > a");
    if (ta[i].coefficient != tb[i].coefficient) {
      if (tb[i].coefficient > ta[i].coefficient)
        throw Error(ErrorKind::Underflow, "left_subtract: b > a");
      std::vector<Ordinal::Term> out;
      out.push_back(Ordinal::Term{ta[i].exponent, ta[i].coefficient - tb[i].coefficient});
      out.insert(out.end(), ta.begin() + i + 1, ta.end());
      return ordinal_from_terms(std::move(out));
    }
    ++i;
  }
  if (i < tb.size()) throw Error(ErrorKind::Underflow, "left_subtract: b > a");
  return ordinal_from_terms({ta.begin() + i, ta.end()});
}

// b + a == a, i.e. a's leading degree strictly dominates b.
inline bool absorbs(const Ordinal& b, const Ordinal& a) { return b + a == a; }

struct LeftDivision {
  Ordinal quotient;
  Ordinal remainder;
};

// The unique (alpha, rho) with value = divisor*alpha + rho and rho < divisor.
// The long-division loop is fiddly, so the result is re-checked against the
// division law before it is returned.
inline LeftDivision left_divide(const Ordinal& divisor, const Ordinal& value) {
  if (divisor.is_zero()) throw Error(ErrorKind::ZeroDivisor, "left_divide by 0");
  Ordinal alpha;
  Ordinal rho = value;
  const Ordinal& be = divisor.leading_exponent();
  const Int& bc = divisor.leading_coefficient();
  while (compare(rho, divisor) >= 0) {
    int ce = compare(rho.leading_exponent(), be);
    if (ce > 0) {
      // divisor * w^gamma * c peels rho's leading term exactly.
      Ordinal gamma = left_subtract(be, rho.leading_exponent());
      alpha = alpha + Ordinal::single(std::move(gamma), rho.leading_coefficient());
      rho = rho.tail();
    } else {
      // Same leading degree; at most one more quotient step.
      Int q0 = rho.leading_coefficient() / bc;
      Ordinal t = divisor * Ordinal::natural(q0);
      if (compare(t, rho) > 0) {
        q0 -= 1;
        t = divisor * Ordinal::natural(q0);
      }
      alpha = alpha + Ordinal::natural(q0);
      rho = left_subtract(t, rho);
    }
  }
  if (divisor * alpha + rho != value || compare(rho, divisor) >= 0)
    throw Error(ErrorKind::InternalError, "left_divide failed its division-law check");
  return LeftDivision{std::move(alpha), std::move(rho)};
}

// --- text form ------------------------------------------------------------
//
//   ord  := term ('+' term)* | '0'
//   term := 'w' ('^' exponent)? ('*' natural)? | natural
//   exponent := natural | '(' ord ')' | 'w' ('^' exponent)?
//
// The grammar is whitespace-insensitive. Canonical printing lists terms in
// strictly descending exponent order as `w^(E)*c`, eliding `^1`, `*1`, and
// the parentheses around bare natural exponents.

inline std::string to_string(const Ordinal& a) {
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : a.terms()) {
    if (!first) out += " + ";
    first = false;
    if (t.exponent.is_zero()) {
      out += t.coefficient.str();
      continue;
    }
    out += 'w';
    if (t.exponent != Ordinal::natural(1)) {
      out += '^';
      if (t.exponent.is_finite())
        out += t.exponent.as_int().str();
      else
        out += "(" + to_string(t.exponent) + ")";
    }
    if (t.coefficient != 1) out += "*" + t.coefficient.str();
  }
  return out;
}

namespace detail {

inline Ordinal parse_ord(std::string_view text, std::size_t& pos);

inline Ordinal parse_ord_exponent(std::string_view text, std::size_t& pos) {
  skip_ws(text, pos);
  if (pos >= text.size()) throw ParseError(pos, "expected exponent");
  if (text[pos] == '(') {
    ++pos;
    Ordinal e = parse_ord(text, pos);
    skip_ws(text, pos);
    if (pos >= text.size() || text[pos] != ')') throw ParseError(pos, "expected ')'");
    ++pos;
    return e;
  }
  if (text[pos] == 'w') {
    // Bare `w^w`-style exponent chains, right-associated.
    ++pos;
    skip_ws(text, pos);
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      return omega_pow(parse_ord_exponent(text, pos));
    }
    return Ordinal::omega();
  }
  return Ordinal::natural(parse_natural(text, pos));
}

inline Ordinal parse_ord_term(std::string_view text, std::size_t& pos) {
  skip_ws(text, pos);
  if (pos >= text.size()) throw ParseError(pos, "expected ordinal term");
  if (text[pos] == 'w') {
    ++pos;
    Ordinal exponent = Ordinal::natural(1);
    skip_ws(text, pos);
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      exponent = parse_ord_exponent(text, pos);
    }
    Int coefficient = 1;
    skip_ws(text, pos);
    if (pos < text.size() && text[pos] == '*') {
      ++pos;
      coefficient = parse_natural(text, pos);
    }
    return Ordinal::single(std::move(exponent), std::move(coefficient));
  }
  if (is_digit(text[pos])) return Ordinal::natural(parse_natural(text, pos));
  throw ParseError(pos, "expected 'w' or a natural number");
}

inline Ordinal parse_ord(std::string_view text, std::size_t& pos) {
  Ordinal a = parse_ord_term(text, pos);
  while (true) {
    skip_ws(text, pos);
    if (pos < text.size() && text[pos] == '+') {
      ++pos;
      a = a + parse_ord_term(text, pos);
    } else {
      return a;
    }
  }
}

}  // namespace detail

inline Ordinal parse_ordinal(std::string_view text, std::size_t& pos) {
  return detail::parse_ord(text, pos);
}

inline Ordinal parse_ordinal(std::string_view text) {
  std::size_t pos = 0;
  Ordinal a = detail::parse_ord(text, pos);
  detail::skip_ws(text, pos);
  if (pos != text.size()) throw ParseError(pos, "trailing input after ordinal");
  return a;
}

}  // namespace tfm

#endif  // TFM_ORDINAL_HPP
