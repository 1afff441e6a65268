#ifndef TFM_SEQ_HPP
#define TFM_SEQ_HPP

// Symbolic bounded transfinite real sequences. The grammar
//   const(v; len) | cat(s, ...) | rep(s; k) | repw(s) | osc(lo, hi)
// is closed under the splits and suffixes the mean evaluator and block
// division need. Values are exact rationals or bare outcome labels; every
// expression has nonzero length and finitely many distinct values.
//
// Expressions are immutable shared trees; all operations are pure.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tfm/error.hpp"
#include "tfm/ordinal.hpp"
#include "tfm/rational.hpp"

namespace tfm {

using Label = std::string;
using Scalar = std::variant<Rat, Label>;

inline bool is_rat(const Scalar& s) { return std::holds_alternative<Rat>(s); }

inline std::string to_string(const Scalar& s) {
  if (is_rat(s)) return to_string(std::get<Rat>(s));
  return std::get<Label>(s);
}

struct SeqNode;

class SeqExpr {
 public:
  enum class Kind { Const, Concat, RepFin, RepOmega, Osc };

  Kind kind() const;
  const Ordinal& length() const;

  const Scalar& const_value() const;        // Const
  const std::vector<SeqExpr>& parts() const;  // Concat
  const SeqExpr& body() const;              // RepFin / RepOmega
  const Int& rep_count() const;             // RepFin
  const Rat& osc_lo() const;                // Osc
  const Rat& osc_hi() const;                // Osc

  bool operator==(const SeqExpr& o) const;
  bool operator!=(const SeqExpr& o) const { return !(*this == o); }

 private:
  std::shared_ptr<const SeqNode> node_;
  explicit SeqExpr(std::shared_ptr<const SeqNode> n) : node_(std::move(n)) {}

  friend SeqExpr make_node(SeqNode&& n);
};

struct SeqNode {
  SeqExpr::Kind kind;
  Ordinal length;
  Scalar value{Rat(0)};         // Const
  std::vector<SeqExpr> parts;   // Concat
  std::vector<SeqExpr> body;    // RepFin / RepOmega (0 or 1 entries)
  Int count{0};                 // RepFin
  Rat lo{0}, hi{0};             // Osc
};

inline SeqExpr make_node(SeqNode&& n) {
  return SeqExpr(std::make_shared<const SeqNode>(std::move(n)));
}

inline SeqExpr::Kind SeqExpr::kind() const { return node_->kind; }
inline const Ordinal& SeqExpr::length() const { return node_->length; }
inline const Scalar& SeqExpr::const_value() const { return node_->value; }
inline const std::vector<SeqExpr>& SeqExpr::parts() const { return node_->parts; }
inline const SeqExpr& SeqExpr::body() const { return node_->body.front(); }
inline const Int& SeqExpr::rep_count() const { return node_->count; }
inline const Rat& SeqExpr::osc_lo() const { return node_->lo; }
inline const Rat& SeqExpr::osc_hi() const { return node_->hi; }

inline bool SeqExpr::operator==(const SeqExpr& o) const {
  if (node_ == o.node_) return true;
  if (kind() != o.kind() || length() != o.length()) return false;
  switch (kind()) {
    case Kind::Const:
      return const_value() == o.const_value();
    case Kind::Concat: {
      if (parts().size() != o.parts().size()) return false;
      for (std::size_t i = 0; i < parts().size(); ++i)
        if (parts()[i] != o.parts()[i]) return false;
      return true;
    }
    case Kind::RepFin:
      return rep_count() == o.rep_count() && body() == o.body();
    case Kind::RepOmega:
      return body() == o.body();
    case Kind::Osc:
      return osc_lo() == o.osc_lo() && osc_hi() == o.osc_hi();
  }
  return false;
}

// --- constructors (normalizing) --------------------------------------------

inline SeqExpr seq_const(Scalar value, Ordinal length) {
  if (length.is_zero())
    throw Error(ErrorKind::ValidationError, "constant sequence must have nonzero length");
  SeqNode n;
  n.kind = SeqExpr::Kind::Const;
  n.length = std::move(length);
  n.value = std::move(value);
  return make_node(std::move(n));
}

inline SeqExpr seq_const(Rat value, Ordinal length) {
  return seq_const(Scalar(std::move(value)), std::move(length));
}

inline SeqExpr seq_const(long value, Ordinal length) {
  return seq_const(Scalar(Rat(value)), std::move(length));
}

inline SeqExpr seq_osc(Rat lo, Rat hi) {
  SeqNode n;
  n.kind = SeqExpr::Kind::Osc;
  n.length = Ordinal::omega();
  n.lo = std::move(lo);
  n.hi = std::move(hi);
  return make_node(std::move(n));
}

// Normal form: no Concat directly inside Concat, and no adjacent Const parts
// with equal value.
inline SeqExpr seq_cat(const std::vector<SeqExpr>& parts) {
  if (parts.empty()) throw Error(ErrorKind::EmptyList, "cat of an empty list");
  std::vector<SeqExpr> flat;
  for (const auto& p : parts) {
    if (p.kind() == SeqExpr::Kind::Concat)
      flat.insert(flat.end(), p.parts().begin(), p.parts().end());
    else
      flat.push_back(p);
  }
  std::vector<SeqExpr> out;
  for (auto& p : flat) {
    if (!out.empty() && out.back().kind() == SeqExpr::Kind::Const &&
        p.kind() == SeqExpr::Kind::Const && out.back().const_value() == p.const_value()) {
      out.back() = seq_const(p.const_value(), out.back().length() + p.length());
    } else {
      out.push_back(std::move(p));
    }
  }
  if (out.size() == 1) return out.front();
  SeqNode n;
  n.kind = SeqExpr::Kind::Concat;
  Ordinal len;
  for (const auto& p : out) len = len + p.length();
  n.length = std::move(len);
  n.parts = std::move(out);
  return make_node(std::move(n));
}

inline SeqExpr seq_cat(const SeqExpr& a, const SeqExpr& b) {
  return seq_cat(std::vector<SeqExpr>{a, b});
}

// Normal form: no RepFin of Const; rep(s; 1) is s itself.
inline SeqExpr seq_rep(const SeqExpr& body, Int count) {
  if (count < 1) throw Error(ErrorKind::ValidationError, "rep count must be >= 1");
  if (count == 1) return body;
  if (body.kind() == SeqExpr::Kind::Const)
    return seq_const(body.const_value(), body.length() * Ordinal::natural(count));
  SeqNode n;
  n.kind = SeqExpr::Kind::RepFin;
  n.length = body.length() * Ordinal::natural(count);
  n.body.push_back(body);
  n.count = std::move(count);
  return make_node(std::move(n));
}

inline SeqExpr seq_repw(const SeqExpr& body) {
  if (body.kind() == SeqExpr::Kind::Const)
    return seq_const(body.const_value(), body.length() * Ordinal::omega());
  SeqNode n;
  n.kind = SeqExpr::Kind::RepOmega;
  n.length = body.length() * Ordinal::omega();
  n.body.push_back(body);
  return make_node(std::move(n));
}

inline const Ordinal& length(const SeqExpr& s) { return s.length(); }

// --- values -----------------------------------------------------------------

inline void collect_values(const SeqExpr& s, std::set<Scalar>& out) {
  switch (s.kind()) {
    case SeqExpr::Kind::Const:
      out.insert(s.const_value());
      break;
    case SeqExpr::Kind::Concat:
      for (const auto& p : s.parts()) collect_values(p, out);
      break;
    case SeqExpr::Kind::RepFin:
    case SeqExpr::Kind::RepOmega:
      collect_values(s.body(), out);
      break;
    case SeqExpr::Kind::Osc:
      out.insert(Scalar(s.osc_lo()));
      out.insert(Scalar(s.osc_hi()));
      break;
  }
}

inline std::set<Scalar> value_set(const SeqExpr& s) {
  std::set<Scalar> out;
  collect_values(s, out);
  return out;
}

inline bool is_numeric(const SeqExpr& s) {
  for (const auto& v : value_set(s))
    if (!is_rat(v)) return false;
  return true;
}

// Exact min/max over the finitely many values of a numeric sequence.
inline std::pair<Rat, Rat> value_range(const SeqExpr& s) {
  bool first = true;
  Rat lo, hi;
  for (const auto& v : value_set(s)) {
    if (!is_rat(v))
      throw Error(ErrorKind::LabelValued, "value_range of a label-valued sequence");
    const Rat& r = std::get<Rat>(v);
    if (first || r < lo) lo = r;
    if (first || r > hi) hi = r;
    first = false;
  }
  return {lo, hi};
}

// --- split / prefix / suffix -------------------------------------------------

inline std::pair<SeqExpr, SeqExpr> split(const SeqExpr& s, const Ordinal& xi);

namespace detail {

inline std::pair<SeqExpr, SeqExpr> split_concat(const std::vector<SeqExpr>& parts,
                                                const Ordinal& xi) {
  Ordinal acc;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    Ordinal next = acc + parts[i].length();
    if (compare(xi, next) < 0) {
      Ordinal offset = left_subtract(acc, xi);
      std::vector<SeqExpr> before(parts.begin(), parts.begin() + i);
      std::vector<SeqExpr> after(parts.begin() + i + 1, parts.end());
      if (offset.is_zero()) {
        after.insert(after.begin(), parts[i]);
      } else {
        auto cut = split(parts[i], offset);
        before.push_back(cut.first);
        after.insert(after.begin(), cut.second);
      }
      return {seq_cat(before), seq_cat(after)};
    }
    acc = std::move(next);
  }
  throw Error(ErrorKind::InternalError, "split_concat: cut beyond total length");
}

}  // namespace detail

// Cuts s into (prefix of length xi, suffix). The suffix of repw(a) cut at
// a copy offset is the rest of that copy followed by repw(a) again. Cuts
// strictly inside an osc atom are unrepresentable and rejected; the evaluator
// and divide only ever cut at limit ordinals or inside const blocks.
inline std::pair<SeqExpr, SeqExpr> split(const SeqExpr& s, const Ordinal& xi) {
  if (xi.is_zero() || compare(xi, s.length()) >= 0)
    throw Error(ErrorKind::OutOfRange, "split at " + to_string(xi) + " of a sequence of length " +
                                           to_string(s.length()));
  switch (s.kind()) {
    case SeqExpr::Kind::Const:
      return {seq_const(s.const_value(), xi),
              seq_const(s.const_value(), left_subtract(xi, s.length()))};
    case SeqExpr::Kind::Osc:
      throw Error(ErrorKind::UnsplittableAtom, "cut strictly inside an osc atom");
    case SeqExpr::Kind::Concat:
      return detail::split_concat(s.parts(), xi);
    case SeqExpr::Kind::RepFin: {
      auto dv = left_divide(s.body().length(), xi);
      Int copies = dv.quotient.as_int();  // xi < len(body)*count forces a finite quotient
      std::vector<SeqExpr> before, after;
      if (copies > 0) before.push_back(seq_rep(s.body(), copies));
      Int remaining = s.rep_count() - copies;
      if (!dv.remainder.is_zero()) {
        auto cut = split(s.body(), dv.remainder);
        before.push_back(cut.first);
        after.push_back(cut.second);
        remaining -= 1;
      }
      if (remaining > 0) after.push_back(seq_rep(s.body(), remaining));
      return {seq_cat(before), seq_cat(after)};
    }
    case SeqExpr::Kind::RepOmega: {
      auto dv = left_divide(s.body().length(), xi);
      Int copies = dv.quotient.as_int();
      std::vector<SeqExpr> before, after;
      if (copies > 0) before.push_back(seq_rep(s.body(), copies));
      if (!dv.remainder.is_zero()) {
        auto cut = split(s.body(), dv.remainder);
        before.push_back(cut.first);
        after.push_back(cut.second);
      }
      after.push_back(s);
      return {seq_cat(before), seq_cat(after)};
    }
  }
  throw Error(ErrorKind::InternalError, "split: unknown node kind");
}

// Initial segment of length xi; xi == length(s) returns s. Unlike split, a
// finite cut into an osc atom is fine here: the cut-off runs materialize as
// const blocks.
inline SeqExpr prefix(const SeqExpr& s, const Ordinal& xi) {
  if (xi.is_zero() || compare(xi, s.length()) > 0)
    throw Error(ErrorKind::OutOfRange, "prefix of length " + to_string(xi));
  if (xi == s.length()) return s;
  switch (s.kind()) {
    case SeqExpr::Kind::Const:
      return seq_const(s.const_value(), xi);
    case SeqExpr::Kind::Osc: {
      Int n = xi.as_int();
      std::vector<SeqExpr> runs;
      Int run_len = 1;
      for (int j = 0; n > 0; ++j) {
        Int take = run_len < n ? run_len : n;
        runs.push_back(seq_const(j % 2 == 0 ? s.osc_lo() : s.osc_hi(), Ordinal::natural(take)));
        n -= take;
        run_len *= 2;
      }
      return seq_cat(runs);
    }
    case SeqExpr::Kind::Concat: {
      Ordinal acc;
      const auto& parts = s.parts();
      for (std::size_t i = 0; i < parts.size(); ++i) {
        Ordinal next = acc + parts[i].length();
        if (compare(xi, next) <= 0) {
          std::vector<SeqExpr> before(parts.begin(), parts.begin() + i);
          Ordinal offset = left_subtract(acc, xi);
          if (!offset.is_zero()) before.push_back(prefix(parts[i], offset));
          return seq_cat(before);
        }
        acc = std::move(next);
      }
      throw Error(ErrorKind::InternalError, "prefix: cut beyond total length");
    }
    case SeqExpr::Kind::RepFin:
    case SeqExpr::Kind::RepOmega: {
      auto dv = left_divide(s.body().length(), xi);
      Int copies = dv.quotient.as_int();
      std::vector<SeqExpr> out;
      if (copies > 0) out.push_back(seq_rep(s.body(), copies));
      if (!dv.remainder.is_zero()) out.push_back(prefix(s.body(), dv.remainder));
      return seq_cat(out);
    }
  }
  throw Error(ErrorKind::InternalError, "prefix: unknown node kind");
}

inline SeqExpr suffix(const SeqExpr& s, const Ordinal& xi) {
  if (xi.is_zero()) return s;
  return split(s, xi).second;
}

// --- pointwise maps -----------------------------------------------------------

// Total relabeling table; applications are structure-preserving, so even an
// osc atom whose two values collide stays an osc atom.
using ValueTable = std::map<Scalar, Rat>;

namespace detail {

inline const Rat& table_lookup(const ValueTable& table, const Scalar& v) {
  auto it = table.find(v);
  if (it == table.end())
    throw Error(ErrorKind::MissingValue, "value table is missing " + to_string(v));
  return it->second;
}

}  // namespace detail

inline SeqExpr map_values(const SeqExpr& s, const ValueTable& table) {
  SeqNode n;
  n.kind = s.kind();
  n.length = s.length();
  switch (s.kind()) {
    case SeqExpr::Kind::Const:
      n.value = Scalar(detail::table_lookup(table, s.const_value()));
      break;
    case SeqExpr::Kind::Concat:
      for (const auto& p : s.parts()) n.parts.push_back(map_values(p, table));
      break;
    case SeqExpr::Kind::RepFin:
      n.count = s.rep_count();
      n.body.push_back(map_values(s.body(), table));
      break;
    case SeqExpr::Kind::RepOmega:
      n.body.push_back(map_values(s.body(), table));
      break;
    case SeqExpr::Kind::Osc:
      n.lo = detail::table_lookup(table, Scalar(s.osc_lo()));
      n.hi = detail::table_lookup(table, Scalar(s.osc_hi()));
      break;
  }
  return make_node(std::move(n));
}

// Pointwise a*s + b for numeric s.
inline SeqExpr affine_map(const SeqExpr& s, const Rat& a, const Rat& b) {
  ValueTable table;
  for (const auto& v : value_set(s)) {
    if (!is_rat(v)) throw Error(ErrorKind::LabelValued, "affine map of a label-valued sequence");
    table[v] = a * std::get<Rat>(v) + b;
  }
  return map_values(s, table);
}

inline SeqExpr negate(const SeqExpr& s) { return affine_map(s, Rat(-1), Rat(0)); }

// --- pointwise combination -----------------------------------------------------

namespace detail {

inline SeqExpr zip_rec(const SeqExpr& r, const SeqExpr& s, const Rat& ca, const Rat& cb);

// swap_sides keeps the coefficient order straight when s is the Concat.
inline SeqExpr zip_against_concat(const SeqExpr& r, const SeqExpr& s, const Rat& ca,
                                  const Rat& cb, bool swap_sides) {
  // r is the Concat; cut s at r's part boundaries. A non-last part is always
  // strictly shorter than what remains, so each split below is in range.
  std::vector<SeqExpr> out;
  SeqExpr rest = s;
  const auto& parts = r.parts();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    SeqExpr piece = rest;
    if (i + 1 < parts.size()) {
      auto cut = split(rest, parts[i].length());
      piece = cut.first;
      rest = cut.second;
    }
    out.push_back(swap_sides ? zip_rec(piece, parts[i], ca, cb)
                             : zip_rec(parts[i], piece, ca, cb));
  }
  return seq_cat(out);
}

inline SeqExpr zip_rec(const SeqExpr& r, const SeqExpr& s, const Rat& ca, const Rat& cb) {
  using K = SeqExpr::Kind;
  if (r.kind() == K::Const) {
    const Rat& v = std::get<Rat>(r.const_value());
    ValueTable table;
    for (const auto& w : value_set(s)) table[w] = ca * v + cb * std::get<Rat>(w);
    return map_values(s, table);
  }
  if (s.kind() == K::Const) {
    const Rat& v = std::get<Rat>(s.const_value());
    ValueTable table;
    for (const auto& w : value_set(r)) table[w] = ca * std::get<Rat>(w) + cb * v;
    return map_values(r, table);
  }
  if (r.kind() == K::Concat) return zip_against_concat(r, s, ca, cb, false);
  if (s.kind() == K::Concat) return zip_against_concat(s, r, ca, cb, true);
  if (r.kind() == K::RepFin || s.kind() == K::RepFin) {
    if (r.kind() == K::RepFin && s.kind() == K::RepFin &&
        r.body().length() == s.body().length() && r.rep_count() == s.rep_count())
      return seq_rep(zip_rec(r.body(), s.body(), ca, cb), r.rep_count());
    const SeqExpr& fin = r.kind() == K::RepFin ? r : s;
    if (fin.rep_count() > 64)
      throw Error(ErrorKind::Unalignable, "rep count too large to unroll");
    std::vector<SeqExpr> copies(static_cast<std::size_t>(fin.rep_count()), fin.body());
    SeqNode unrolled;
    unrolled.kind = K::Concat;
    unrolled.length = fin.length();
    unrolled.parts = std::move(copies);
    SeqExpr u = make_node(std::move(unrolled));
    return r.kind() == K::RepFin ? zip_rec(u, s, ca, cb) : zip_rec(r, u, ca, cb);
  }
  if (r.kind() == K::RepOmega && s.kind() == K::RepOmega) {
    if (r.body().length() == s.body().length())
      return seq_repw(zip_rec(r.body(), s.body(), ca, cb));
    // Search for a common period len(rb)*i == len(sb)*j within the bound.
    for (int i = 1; i <= 64; ++i) {
      Ordinal target = r.body().length() * Ordinal::natural(i);
      for (int j = 1; j <= 64; ++j) {
        if (target == s.body().length() * Ordinal::natural(j)) {
          SeqExpr rb = seq_rep(r.body(), i);
          SeqExpr sb = seq_rep(s.body(), j);
          return seq_repw(zip_rec(rb, sb, ca, cb));
        }
      }
    }
    throw Error(ErrorKind::Unalignable, "no common period within bounds");
  }
  if (r.kind() == K::Osc && s.kind() == K::Osc) {
    return seq_osc(ca * r.osc_lo() + cb * s.osc_lo(), ca * r.osc_hi() + cb * s.osc_hi());
  }
  throw Error(ErrorKind::Unalignable,
              "no structural alignment between the operands");
}

}  // namespace detail

// The pointwise sequence ca*r + cb*s, computed by structural alignment.
inline SeqExpr zip_affine(const SeqExpr& r, const SeqExpr& s, const Rat& ca, const Rat& cb) {
  if (r.length() != s.length())
    throw Error(ErrorKind::LengthMismatch, "zip of sequences of different lengths");
  if (!is_numeric(r) || !is_numeric(s))
    throw Error(ErrorKind::LabelValued, "zip of a label-valued sequence");
  try {
    return detail::zip_rec(r, s, ca, cb);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::UnsplittableAtom || e.kind() == ErrorKind::OutOfRange)
      throw Error(ErrorKind::Unalignable, e.what());
    throw;
  }
}

// --- materialization -----------------------------------------------------------

namespace detail {

inline void fill_prefix(const SeqExpr& s, long long& need, std::vector<Scalar>& out) {
  if (need <= 0) return;
  switch (s.kind()) {
    case SeqExpr::Kind::Const: {
      long long take = need;
      if (s.length().is_finite() && s.length().as_int() < take)
        take = static_cast<long long>(s.length().as_int());
      for (long long i = 0; i < take; ++i) out.push_back(s.const_value());
      need -= take;
      return;
    }
    case SeqExpr::Kind::Concat:
      for (const auto& p : s.parts()) {
        fill_prefix(p, need, out);
        if (need <= 0) return;
        if (!p.length().is_finite()) return;  // past the first limit position
      }
      return;
    case SeqExpr::Kind::RepFin: {
      for (Int i = 0; i < s.rep_count() && need > 0; ++i) {
        fill_prefix(s.body(), need, out);
        if (!s.body().length().is_finite()) return;
      }
      return;
    }
    case SeqExpr::Kind::RepOmega:
      while (need > 0) {
        fill_prefix(s.body(), need, out);
        if (!s.body().length().is_finite()) return;
      }
      return;
    case SeqExpr::Kind::Osc: {
      Int run_len = 1;
      for (int j = 0; need > 0; ++j) {
        long long take = need;
        if (run_len < take) take = static_cast<long long>(run_len);
        const Rat& v = j % 2 == 0 ? s.osc_lo() : s.osc_hi();
        for (long long i = 0; i < take; ++i) out.push_back(Scalar(v));
        need -= take;
        run_len *= 2;
      }
      return;
    }
  }
}

}  // namespace detail

// First min(n, reachable) values of s, reading left to right up to the first
// limit position beyond the materialized region. Oracle and golden-test
// plumbing.
inline std::vector<Scalar> materialize_prefix(const SeqExpr& s, long long n) {
  if (n < 1) throw Error(ErrorKind::ValidationError, "materialize_prefix needs n >= 1");
  std::vector<Scalar> out;
  out.reserve(static_cast<std::size_t>(n < 4096 ? n : 4096));
  long long need = n;
  detail::fill_prefix(s, need, out);
  return out;
}

inline std::vector<Rat> materialize_prefix_rat(const SeqExpr& s, long long n) {
  std::vector<Rat> out;
  for (auto& v : materialize_prefix(s, n)) {
    if (!is_rat(v))
      throw Error(ErrorKind::LabelValued, "materializing a label-valued sequence as rationals");
    out.push_back(std::get<Rat>(v));
  }
  return out;
}

// --- text form -------------------------------------------------------------------

inline std::string to_string(const SeqExpr& s) {
  switch (s.kind()) {
    case SeqExpr::Kind::Const:
      return "const(" + to_string(s.const_value()) + ";" + to_string(s.length()) + ")";
    case SeqExpr::Kind::Concat: {
      std::string out = "cat(";
      bool first = true;
      for (const auto& p : s.parts()) {
        if (!first) out += ", ";
        first = false;
        out += to_string(p);
      }
      return out + ")";
    }
    case SeqExpr::Kind::RepFin:
      return "rep(" + to_string(s.body()) + ";" + s.rep_count().str() + ")";
    case SeqExpr::Kind::RepOmega:
      return "repw(" + to_string(s.body()) + ")";
    case SeqExpr::Kind::Osc:
      return "osc(" + to_string(s.osc_lo()) + ", " + to_string(s.osc_hi()) + ")";
  }
  return "";
}

namespace detail {

inline SeqExpr parse_seq(std::string_view text, std::size_t& pos);

inline void expect_char(std::string_view text, std::size_t& pos, char c) {
  skip_ws(text, pos);
  if (pos >= text.size() || text[pos] != c)
    throw ParseError(pos, std::string("expected '") + c + "'");
  ++pos;
}

inline bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

inline std::string parse_ident(std::string_view text, std::size_t& pos) {
  skip_ws(text, pos);
  std::size_t start = pos;
  while (pos < text.size() && is_ident_char(text[pos])) ++pos;
  if (pos == start) throw ParseError(pos, "expected an identifier");
  return std::string(text.substr(start, pos - start));
}

// Scalar values are rationals or bare outcome labels.
inline Scalar parse_scalar(std::string_view text, std::size_t& pos) {
  skip_ws(text, pos);
  if (pos < text.size() && (is_digit(text[pos]) || text[pos] == '-'))
    return Scalar(parse_rat(text, pos));
  return Scalar(parse_ident(text, pos));
}

inline SeqExpr parse_seq(std::string_view text, std::size_t& pos) {
  skip_ws(text, pos);
  std::size_t at = pos;
  std::string head = parse_ident(text, pos);
  expect_char(text, pos, '(');
  if (head == "const") {
    Scalar v = parse_scalar(text, pos);
    expect_char(text, pos, ';');
    Ordinal len = parse_ord(text, pos);
    expect_char(text, pos, ')');
    return seq_const(std::move(v), std::move(len));
  }
  if (head == "cat") {
    std::vector<SeqExpr> parts;
    parts.push_back(parse_seq(text, pos));
    skip_ws(text, pos);
    while (pos < text.size() && text[pos] == ',') {
      ++pos;
      parts.push_back(parse_seq(text, pos));
      skip_ws(text, pos);
    }
    expect_char(text, pos, ')');
    if (parts.size() < 2) throw ParseError(at, "cat needs at least two parts");
    return seq_cat(parts);
  }
  if (head == "rep") {
    SeqExpr body = parse_seq(text, pos);
    expect_char(text, pos, ';');
    Int count = parse_natural(text, pos);
    expect_char(text, pos, ')');
    if (count < 1) throw ParseError(at, "rep count must be >= 1");
    return seq_rep(body, count);
  }
  if (head == "repw") {
    SeqExpr body = parse_seq(text, pos);
    expect_char(text, pos, ')');
    return seq_repw(body);
  }
  if (head == "osc") {
    std::size_t p0 = pos;
    Scalar lo = parse_scalar(text, pos);
    expect_char(text, pos, ',');
    std::size_t p1 = pos;
    Scalar hi = parse_scalar(text, pos);
    expect_char(text, pos, ')');
    if (!is_rat(lo)) throw ParseError(p0, "osc values must be rationals");
    if (!is_rat(hi)) throw ParseError(p1, "osc values must be rationals");
    return seq_osc(std::get<Rat>(lo), std::get<Rat>(hi));
  }
  throw ParseError(at, "unknown sequence constructor '" + head + "'");
}

}  // namespace detail

inline SeqExpr parse_seq(std::string_view text) {
  std::size_t pos = 0;
  SeqExpr s = detail::parse_seq(text, pos);
  detail::skip_ws(text, pos);
  if (pos != text.size()) throw ParseError(pos, "trailing input after sequence");
  return s;
}

}  // namespace tfm

#endif  // TFM_SEQ_HPP
