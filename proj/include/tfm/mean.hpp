#ifndef TFM_MEAN_HPP
#define TFM_MEAN_HPP

// Exact evaluator for the upper mean, lower mean, and mean of symbolic
// transfinite sequences, block division s/beta, and an independent numeric
// truncation oracle.
//
// The evaluator follows the defining recursion: a sequence of length
// w^sigma*n + rho splits into n blocks of indecomposable length w^sigma
// (the remainder does not contribute), and the mean is the arithmetic mean
// of the block means. Inside a block of indecomposable length, everything
// before the final atom is absorbed (it has strictly smaller degree), so the
// block mean is the final atom's mean; for a repeated body the grid-block
// means are periodic with the body's own block means, which makes all block
// sums computable without unrolling.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tfm/error.hpp"
#include "tfm/ordinal.hpp"
#include "tfm/rational.hpp"
#include "tfm/seq.hpp"

namespace tfm {

struct MeanPair {
  Rat lower;
  Rat upper;
};

namespace detail {

struct WeightedSum {
  Rat sum;
  Int count;
};

inline WeightedSum finite_weighted_sum(const SeqExpr& s) {
  switch (s.kind()) {
    case SeqExpr::Kind::Const: {
      Int count = s.length().as_int();
      return {std::get<Rat>(s.const_value()) * Rat(count), count};
    }
    case SeqExpr::Kind::Concat: {
      WeightedSum acc{Rat(0), Int(0)};
      for (const auto& p : s.parts()) {
        WeightedSum w = finite_weighted_sum(p);
        acc.sum += w.sum;
        acc.count += w.count;
      }
      return acc;
    }
    case SeqExpr::Kind::RepFin: {
      WeightedSum w = finite_weighted_sum(s.body());
      return {w.sum * Rat(s.rep_count()), w.count * s.rep_count()};
    }
    default:
      throw Error(ErrorKind::InternalError, "finite sum of an infinite sequence");
  }
}

inline Rat upper_rec(const SeqExpr& s);

// Sum of the upper means of the first `count` length-`block` segments of s.
// Requires length(s) >= block*count; `block` is indecomposable.
inline Rat block_mean_sum(const SeqExpr& s, const Ordinal& block, const Int& count) {
  if (count == 0) return Rat(0);
  if (count == 1 && block == s.length()) return upper_rec(s);
  switch (s.kind()) {
    case SeqExpr::Kind::Const:
      return std::get<Rat>(s.const_value()) * Rat(count);
    case SeqExpr::Kind::RepFin:
    case SeqExpr::Kind::RepOmega: {
      // len(body) = block*c + r. The unrolled grid-block means repeat the
      // body's first c block means with period c: a boundary block is a
      // dominated tail glued to the next copy's first block.
      auto dv = left_divide(block, s.body().length());
      Int c = dv.quotient.as_int();
      if (c == 0)
        throw Error(ErrorKind::InternalError, "block larger than a repeated body");
      Int f = count / c;
      Int p = count % c;
      Rat out(0);
      if (f > 0) out += block_mean_sum(s.body(), block, c) * Rat(f);
      if (p > 0) out += block_mean_sum(s.body(), block, p);
      return out;
    }
    case SeqExpr::Kind::Concat: {
      Rat sum(0);
      Int done(0);
      SeqExpr rest = s;
      while (done < count) {
        if (rest.kind() != SeqExpr::Kind::Concat) {
          sum += block_mean_sum(rest, block, count - done);
          break;
        }
        const SeqExpr head = rest.parts().front();
        auto dv = left_divide(block, head.length());
        if (!dv.quotient.is_zero()) {
          Int remaining = count - done;
          Int take = (!dv.quotient.is_finite() || dv.quotient.as_int() >= remaining)
                         ? remaining
                         : dv.quotient.as_int();
          sum += block_mean_sum(head, block, take);
          done += take;
          if (done == count) break;
          rest = suffix(rest, block * Ordinal::natural(take));
        } else {
          // Head is shorter than a block; it is dominated junk merged into
          // the block that follows it.
          sum += upper_rec(prefix(rest, block));
          done += 1;
          if (done == count) break;
          rest = suffix(rest, block);
        }
      }
      return sum;
    }
    case SeqExpr::Kind::Osc:
      throw Error(ErrorKind::InternalError, "osc atom misaligned with the block grid");
  }
  throw Error(ErrorKind::InternalError, "block_mean_sum: unknown node kind");
}

inline Rat upper_rec(const SeqExpr& s) {
  const Ordinal& len = s.length();
  if (len.is_finite()) {
    WeightedSum w = finite_weighted_sum(s);
    return w.sum / Rat(w.count);
  }
  switch (s.kind()) {
    case SeqExpr::Kind::Const:
      return std::get<Rat>(s.const_value());
    case SeqExpr::Kind::Osc: {
      // Doubling runs: at the end of every high run the prefix mean is
      // exactly (2*max+min)/3, and that is the largest cluster value.
      const Rat& a = s.osc_lo();
      const Rat& b = s.osc_hi();
      const Rat& mx = a < b ? b : a;
      const Rat& mn = a < b ? a : b;
      return (2 * mx + mn) / 3;
    }
    case SeqExpr::Kind::RepFin:
    case SeqExpr::Kind::RepOmega:
      // Grid-block means of the unrolling are periodic with the body's block
      // means, so the Cesaro value is the body's mean.
      return upper_rec(s.body());
    case SeqExpr::Kind::Concat: {
      auto sd = standard_decomposition(len);
      Ordinal block = omega_pow(sd.sigma);
      if (sd.n == 1 && sd.rho.is_zero()) {
        // Indecomposable: every earlier part is absorbed by the final one.
        const SeqExpr& last = s.parts().back();
        if (last.length() != len)
          throw Error(ErrorKind::InternalError,
                      "indecomposable concat whose final atom does not carry its length");
        return upper_rec(last);
      }
      return block_mean_sum(s, block, sd.n) / Rat(sd.n);
    }
  }
  throw Error(ErrorKind::InternalError, "upper_rec: unknown node kind");
}

}  // namespace detail

inline Rat upper_mean(const SeqExpr& s) {
  if (!is_numeric(s)) throw Error(ErrorKind::LabelValued, "mean of a label-valued sequence");
  return detail::upper_rec(s);
}

inline Rat lower_mean(const SeqExpr& s) { return -upper_mean(negate(s)); }

inline MeanPair mean_pair(const SeqExpr& s) { return MeanPair{lower_mean(s), upper_mean(s)}; }

// The common value of the lower and upper means, when they coincide.
inline std::optional<Rat> mean(const SeqExpr& s) {
  MeanPair p = mean_pair(s);
  if (p.lower == p.upper) return p.upper;
  return std::nullopt;
}

// --- block division s/beta ---------------------------------------------------

namespace detail {

inline SeqExpr block_to_const(const SeqExpr& blk, Ordinal quotient_len, bool strict) {
  if (strict) {
    MeanPair p = mean_pair(blk);
    if (p.lower != p.upper)
      throw Error(ErrorKind::BlockHasNoMean, "block " + to_string(blk) + " has no mean");
  }
  return seq_const(upper_mean(blk), std::move(quotient_len));
}

inline bool divisible(const Ordinal& beta, const Ordinal& len) {
  return left_divide(beta, len).remainder.is_zero();
}

}  // namespace detail

inline SeqExpr divide(const SeqExpr& s, const Ordinal& beta, bool strict);

namespace detail {

inline SeqExpr divide_impl(const SeqExpr& s, const Ordinal& beta, bool strict) {
  if (beta.is_zero()) throw Error(ErrorKind::ZeroDivisor, "division by the zero ordinal");
  auto dv = left_divide(beta, s.length());
  if (!dv.remainder.is_zero())
    throw Error(ErrorKind::NotDivisible,
                to_string(beta) + " does not divide " + to_string(s.length()));
  Ordinal alpha = dv.quotient;
  if (beta == Ordinal::natural(1)) return s;
  if (s.kind() == SeqExpr::Kind::Const) return seq_const(s.const_value(), alpha);
  if (!is_numeric(s))
    throw Error(ErrorKind::LabelValued, "dividing a non-constant label-valued sequence");
  if (alpha == Ordinal::natural(1)) return detail::block_to_const(s, Ordinal::natural(1), strict);

  switch (s.kind()) {
    case SeqExpr::Kind::Osc:
      // Blocks of an osc atom have aperiodic means; not representable.
      throw Error(ErrorKind::UnsupportedDivision, "dividing an osc atom by a finite ordinal");
    case SeqExpr::Kind::RepFin:
    case SeqExpr::Kind::RepOmega: {
      const SeqExpr& body = s.body();
      bool is_omega = s.kind() == SeqExpr::Kind::RepOmega;
      if (detail::divisible(beta, body.length())) {
        SeqExpr inner = divide(body, beta, strict);
        return is_omega ? seq_repw(inner) : seq_rep(inner, s.rep_count());
      }
      auto whole = left_divide(body.length(), beta);
      if (whole.remainder.is_zero() && !whole.quotient.is_zero() && whole.quotient.is_finite() &&
          !body.length().is_finite()) {
        // beta = len(body)*m: every block is m glued copies, whose upper
        // mean is the body's.
        if (strict) {
          MeanPair p = mean_pair(body);
          if (p.lower != p.upper)
            throw Error(ErrorKind::BlockHasNoMean, "block has no mean");
        }
        return seq_const(upper_mean(body), alpha);
      }
      if (body.length().is_finite() && beta.is_finite()) {
        // Re-cut at the common period, dividing one unrolled period as a
        // concatenation so the recursion strictly shrinks.
        Int blen = body.length().as_int();
        Int period = boost::multiprecision::lcm(blen, beta.as_int());
        Int copies = period / blen;
        if (copies <= 64 && (is_omega || s.rep_count() % copies == 0)) {
          std::vector<SeqExpr> unrolled(static_cast<std::size_t>(copies), body);
          SeqExpr quotient_period = divide(seq_cat(unrolled), beta, strict);
          if (is_omega) return seq_repw(quotient_period);
          return seq_rep(quotient_period, s.rep_count() / copies);
        }
      }
      if (!is_omega && s.rep_count() <= 64) {
        // Unroll a small finite repetition and re-cut as a concatenation.
        std::vector<SeqExpr> copies(static_cast<std::size_t>(s.rep_count()), s.body());
        return divide(seq_cat(copies), beta, strict);
      }
      throw Error(ErrorKind::UnsupportedDivision,
                  "no structural rule divides " + to_string(s.length()) + " by " +
                      to_string(beta));
    }
    case SeqExpr::Kind::Concat: {
      bool all_divisible = true;
      for (const auto& p : s.parts())
        if (!detail::divisible(beta, p.length())) {
          all_divisible = false;
          break;
        }
      if (all_divisible) {
        std::vector<SeqExpr> out;
        for (const auto& p : s.parts()) out.push_back(divide(p, beta, strict));
        SeqExpr result = seq_cat(out);
        if (result.length() != alpha)
          throw Error(ErrorKind::InternalError, "division produced the wrong quotient length");
        return result;
      }
      // Re-cut at the beta-grid: emit whole multiples of beta from the head
      // part when possible, otherwise materialize one merged block.
      std::vector<SeqExpr> out;
      SeqExpr rest = s;
      while (true) {
        if (rest.kind() != SeqExpr::Kind::Concat) {
          out.push_back(divide(rest, beta, strict));
          break;
        }
        const SeqExpr head = rest.parts().front();
        auto hd = left_divide(beta, head.length());
        if (hd.remainder.is_zero()) {
          out.push_back(divide(head, beta, strict));
          std::vector<SeqExpr> tail_parts(rest.parts().begin() + 1, rest.parts().end());
          rest = seq_cat(tail_parts);
          continue;
        }
        if (!hd.quotient.is_zero()) {
          Ordinal cut = beta * hd.quotient;
          auto pieces = split(head, cut);
          out.push_back(divide(pieces.first, beta, strict));
          std::vector<SeqExpr> tail_parts(rest.parts().begin(), rest.parts().end());
          tail_parts.front() = pieces.second;
          rest = seq_cat(tail_parts);
          continue;
        }
        if (rest.length() == beta) {
          out.push_back(detail::block_to_const(rest, Ordinal::natural(1), strict));
          break;
        }
        out.push_back(detail::block_to_const(prefix(rest, beta), Ordinal::natural(1), strict));
        rest = suffix(rest, beta);
      }
      SeqExpr result = seq_cat(out);
      if (result.length() != alpha)
        throw Error(ErrorKind::InternalError, "division produced the wrong quotient length");
      return result;
    }
    default:
      throw Error(ErrorKind::InternalError, "divide: unexpected node kind");
  }
}

}  // namespace detail

// The sequence of upper means of consecutive beta-blocks of s; defined when
// beta divides length(s) and a structural rule applies. With strict set,
// every block must have a true mean. A grid cut that lands inside an osc
// atom means no structural rule exists, hence UnsupportedDivision.
inline SeqExpr divide(const SeqExpr& s, const Ordinal& beta, bool strict = false) {
  try {
    return detail::divide_impl(s, beta, strict);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::UnsplittableAtom)
      throw Error(ErrorKind::UnsupportedDivision, e.what());
    throw;
  }
}

// --- numeric truncation oracle ----------------------------------------------

// Interval believed to contain (lower mean, upper mean), computed without the
// evaluator's absorption or final-atom reasoning: it only splits, materializes
// and averages.
struct OracleInterval {
  Rat lo;
  Rat hi;
};

namespace detail {

struct OracleCtx {
  const std::vector<long>& widths;
  long long budget;
  long long spent = 0;
  std::map<std::string, OracleInterval> cache;

  void charge(long long units) {
    spent += units;
    if (spent > budget)
      throw Error(ErrorKind::BudgetExceeded, "truncation oracle exceeded its cost budget");
  }
};

// limsup/liminf of running prefix averages of an eventually periodic or
// otherwise tame array of (lo, hi) pairs. Exact rational periodicity is
// detected first: for a periodic tail both limits equal the period average.
// Otherwise scan window maxima of interval averages over a grid of head
// offsets, which neutralizes short dominated-junk prefixes.
inline OracleInterval estimate_array(const std::vector<OracleInterval>& xs) {
  const long W = static_cast<long>(xs.size());
  if (W == 0) throw Error(ErrorKind::InternalError, "empty oracle sample");
  if (W == 1) return xs[0];

  const long pmax = std::min<long>(24, W / 3);
  const long hmax_periodic = std::min<long>(8, W / 4);
  for (long p = 1; p <= pmax; ++p) {
    long h = 0;
    for (long j = W - p - 1; j >= 0; --j) {
      if (xs[j].lo != xs[j + p].lo || xs[j].hi != xs[j + p].hi) {
        h = j + 1;
        break;
      }
    }
    if (h <= hmax_periodic && W - h >= 3 * p) {
      Rat lo(0), hi(0);
      for (long j = h; j < h + p; ++j) {
        lo += xs[j].lo;
        hi += xs[j].hi;
      }
      return OracleInterval{lo / p, hi / p};
    }
  }

  std::vector<Rat> slo(W + 1, Rat(0)), shi(W + 1, Rat(0));
  for (long i = 0; i < W; ++i) {
    slo[i + 1] = slo[i] + xs[i].lo;
    shi[i + 1] = shi[i] + xs[i].hi;
  }
  // Nonzero head offsets neutralize short dominated-junk prefixes; the
  // k >= 64h constraint keeps their window averages within range/63 of a
  // true prefix mean, so they can rescue a deficit but barely overshoot.
  const long burn_in = std::max<long>(4, W / 16);
  const long offsets[] = {0, 2, 4, 8, 16};
  bool first = true;
  Rat lo(0), hi(0);
  for (long h : offsets) {
    if (h >= W / 4) continue;
    for (long k = std::max({burn_in, 64 * h, h + 1}); k <= W; ++k) {
      Rat mlo = (slo[k] - slo[h]) / (k - h);
      Rat mhi = (shi[k] - shi[h]) / (k - h);
      if (first || mlo < lo) lo = mlo;
      if (first || mhi > hi) hi = mhi;
      first = false;
    }
  }
  return OracleInterval{lo, hi};
}

inline OracleInterval oracle_estimate(const SeqExpr& s, OracleCtx& ctx) {
  const Ordinal& len = s.length();
  if (len.is_finite()) {
    WeightedSum w = finite_weighted_sum(s);
    Rat m = w.sum / Rat(w.count);
    return OracleInterval{m, m};
  }
  auto sd = standard_decomposition(len);
  if (!(sd.n == 1 && sd.rho.is_zero())) {
    // Average the n full segments; the remainder does not contribute.
    if (sd.n > 1'000'000)
      throw Error(ErrorKind::BudgetExceeded, "too many segments to estimate");
    ctx.charge(static_cast<long long>(sd.n));
    Rat lo(0), hi(0);
    SeqExpr rest = s;
    Ordinal block = omega_pow(sd.sigma);
    for (Int i = 0; i < sd.n; ++i) {
      SeqExpr piece = rest;
      if (i + 1 < sd.n || !sd.rho.is_zero()) {
        auto cut = split(rest, block);
        piece = cut.first;
        rest = cut.second;
      }
      OracleInterval e = oracle_estimate(piece, ctx);
      lo += e.lo;
      hi += e.hi;
    }
    return OracleInterval{lo / Rat(sd.n), hi / Rat(sd.n)};
  }
  if (!sd.sigma.is_finite() || sd.sigma.as_int() > ctx.widths.size())
    throw Error(ErrorKind::ValidationError, "width list shorter than the CNF degree");
  long level = static_cast<long>(sd.sigma.as_int());
  long W = ctx.widths[static_cast<std::size_t>(level - 1)];
  if (W < 8) throw Error(ErrorKind::ValidationError, "oracle width too small");

  std::string key = std::to_string(level) + "|" + to_string(s);
  auto hit = ctx.cache.find(key);
  if (hit != ctx.cache.end()) return hit->second;

  OracleInterval result{Rat(0), Rat(0)};
  if (level == 1) {
    ctx.charge(W);
    std::vector<OracleInterval> xs;
    xs.reserve(static_cast<std::size_t>(W));
    for (auto& v : materialize_prefix_rat(s, W)) xs.push_back(OracleInterval{v, v});
    result = estimate_array(xs);
  } else {
    Ordinal grid = omega_pow(left_subtract(Ordinal::natural(1), sd.sigma));
    std::vector<OracleInterval> xs;
    xs.reserve(static_cast<std::size_t>(W));
    SeqExpr rest = s;
    for (long k = 0; k < W; ++k) {
      ctx.charge(1);
      auto cut = split(rest, grid);
      xs.push_back(oracle_estimate(cut.first, ctx));
      rest = cut.second;
    }
    result = estimate_array(xs);
  }
  ctx.cache.emplace(std::move(key), result);
  return result;
}

}  // namespace detail

inline OracleInterval truncation_oracle(const SeqExpr& s, const std::vector<long>& widths,
                                        long long budget = 50'000'000) {
  if (!is_numeric(s)) throw Error(ErrorKind::LabelValued, "oracle on a label-valued sequence");
  detail::OracleCtx ctx{widths, budget};
  return detail::oracle_estimate(s, ctx);
}

}  // namespace tfm

#endif  // TFM_MEAN_HPP
