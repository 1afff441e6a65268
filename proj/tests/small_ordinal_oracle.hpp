#ifndef TFM_TESTS_SMALL_ORDINAL_ORACLE_HPP
#define TFM_TESTS_SMALL_ORDINAL_ORACLE_HPP

// Independent oracle for ordinal arithmetic on small ordinals (all finite
// exponents, here below w^5). An ordinal is materialized as an explicit
// well-order: a finite list of lexicographically ordered tuple blocks, where
// a block of rank r and count m is the set {0..m-1} x N^r under the
// lexicographic order (order type w^r * m). The oracle computes sums and
// products by constructing the combined order and then reads off its order
// type; it shares no code with the production CNF arithmetic.

#include <array>
#include <cstdint>
#include <vector>

#include "tfm/ordinal.hpp"

namespace oracle {

constexpr int kRanks = 5;  // enough for products of degree <= 2 inputs

// digits[r] = coefficient of w^r.
using Digits = std::array<std::int64_t, kRanks>;

struct Block {
  int rank;
  std::int64_t count;
};
using BlockList = std::vector<Block>;

inline Digits zero() { return Digits{0, 0, 0, 0, 0}; }

inline bool is_zero(const Digits& d) {
  for (auto v : d)
    if (v != 0) return false;
  return true;
}

// Materialize as blocks, largest rank first (the canonical presentation of
// the predecessor order).
inline BlockList blocks_of(const Digits& d) {
  BlockList out;
  for (int r = kRanks - 1; r >= 0; --r)
    if (d[r] != 0) out.push_back(Block{r, d[r]});
  return out;
}

// Order type of a block concatenation, scanned right to left. A block lying
// strictly before a block of larger rank is absorbed: w^s + w^r*m = w^r*m
// whenever s < r. That absorption fact is the only ordinal arithmetic the
// collapse uses.
inline Digits collapse(const BlockList& blocks) {
  Digits d = zero();
  int max_rank_seen = -1;
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    if (it->rank < max_rank_seen) continue;  // absorbed by the suffix
    d[it->rank] += it->count;
    if (it->rank > max_rank_seen) max_rank_seen = it->rank;
  }
  return d;
}

inline int max_rank(const BlockList& blocks) {
  int m = -1;
  for (const auto& b : blocks)
    if (b.rank > m) m = b.rank;
  return m;
}

// a < b iff the tuple position of a precedes the tuple position of b.
inline int cmp(const Digits& a, const Digits& b) {
  for (int r = kRanks - 1; r >= 0; --r) {
    if (a[r] != b[r]) return a[r] < b[r] ? -1 : 1;
  }
  return 0;
}

// Order type of (predecessors of a) followed by (predecessors of b): plain
// list concatenation of the two presentations.
inline Digits add(const Digits& a, const Digits& b) {
  BlockList joined = blocks_of(a);
  BlockList rhs = blocks_of(b);
  joined.insert(joined.end(), rhs.begin(), rhs.end());
  return collapse(joined);
}

// Order type of the product order (pairs (y, x), y from b, x from a, ordered
// by y first). Distributes over b's blocks: a copy of the whole a-order for
// each point of a rank-0 block, and a * w^r = w^(max rank of a + r) for
// blocks of positive rank, since N^r many stacked copies of a collapse to a
// single limit power.
inline Digits mul(const Digits& a, const Digits& b) {
  if (is_zero(a) || is_zero(b)) return zero();
  BlockList base = blocks_of(a);
  int deg = max_rank(base);
  BlockList out;
  for (const auto& block : blocks_of(b)) {
    if (block.rank == 0) {
      for (std::int64_t i = 0; i < block.count; ++i)
        out.insert(out.end(), base.begin(), base.end());
    } else {
      out.push_back(Block{deg + block.rank, block.count});
    }
  }
  return collapse(out);
}

// Bridge to the production representation; requires finite exponents < kRanks.
inline Digits from_ordinal(const tfm::Ordinal& a) {
  Digits d = zero();
  for (const auto& t : a.terms()) {
    auto r = static_cast<std::int64_t>(t.exponent.as_int());
    d[static_cast<std::size_t>(r)] = static_cast<std::int64_t>(t.coefficient);
  }
  return d;
}

inline tfm::Ordinal to_ordinal(const Digits& d) {
  tfm::Ordinal out;
  for (int r = kRanks - 1; r >= 0; --r)
    if (d[r] != 0)
      out = out + tfm::Ordinal::single(tfm::Ordinal::natural(r), tfm::Int(d[r]));
  return out;
}

// The exhaustive test domain: CNF degree <= 2, every coefficient <= 4.
inline std::vector<tfm::Ordinal> test_domain() {
  std::vector<tfm::Ordinal> out;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      for (int c = 0; c <= 4; ++c) {
        tfm::Ordinal x = tfm::Ordinal::single(tfm::Ordinal::natural(2), a) +
                         tfm::Ordinal::single(tfm::Ordinal::natural(1), b) +
                         tfm::Ordinal::natural(c);
        out.push_back(x);
      }
  return out;
}

}  // namespace oracle

#endif  // TFM_TESTS_SMALL_ORDINAL_ORACLE_HPP
