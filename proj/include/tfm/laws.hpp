#ifndef TFM_LAWS_HPP
#define TFM_LAWS_HPP

// Executable checkers for the mean laws over seeded, randomly generated
// symbolic sequences. Every law is exact rational equality or inequality
// except the numeric-oracle containment check, which carries a stated
// tolerance. Failures are data, not exceptions: suites run to completion and
// a failure report carries the reproducing case index.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tfm/mean.hpp"
#include "tfm/seq.hpp"

namespace tfm {

struct GenConfig {
  std::uint64_t seed = 42;
  long cases = 100;
  int max_depth = 3;
  int max_parts = 3;
  int degree_cap = 2;
  // Small pool keeps counterexamples readable and rationals small.
  std::vector<Rat> value_pool = {Rat(-2), Rat(-1), Rat(0), Rat(1, 3), Rat(1, 2), Rat(1), Rat(2)};
  // Finite blocks stay short so dominated junk cannot drown the numeric
  // oracle's windows.
  int max_finite_len = 4;
  int osc_percent = 20;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t u64() { return eng_(); }
  long below(long n) {
    return n <= 1 ? 0 : static_cast<long>(u64() % static_cast<std::uint64_t>(n));
  }
  bool chance(int percent) { return below(100) < percent; }
  const Rat& pick(const std::vector<Rat>& pool) {
    return pool[static_cast<std::size_t>(below(static_cast<long>(pool.size())))];
  }

 private:
  std::mt19937_64 eng_;
};

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  };
  return mix(mix(mix(a) ^ b) ^ c);
}

// --- generators -----------------------------------------------------------

inline Ordinal gen_length(Rng& rng, const GenConfig& cfg, int degree_cap) {
  Ordinal out;
  for (int e = degree_cap; e >= 1; --e)
    if (rng.chance(50)) out = out + Ordinal::single(Ordinal::natural(e), 1 + rng.below(3));
  if (rng.chance(60)) out = out + Ordinal::natural(1 + rng.below(cfg.max_finite_len));
  if (out.is_zero()) {
    if (degree_cap >= 1)
      out = Ordinal::single(Ordinal::natural(1 + rng.below(degree_cap)), 1 + rng.below(3));
    else
      out = Ordinal::natural(1 + rng.below(cfg.max_finite_len));
  }
  return out;
}

inline Ordinal gen_length_exact_degree(Rng& rng, const GenConfig& cfg, int degree) {
  if (degree <= 0) return Ordinal::natural(1 + rng.below(cfg.max_finite_len));
  Ordinal lead = Ordinal::single(Ordinal::natural(degree), 1 + rng.below(3));
  if (rng.chance(50)) return lead + gen_length(rng, cfg, degree - 1);
  return lead;
}

inline SeqExpr gen_seq(Rng& rng, const GenConfig& cfg, int depth, int degree_cap) {
  long roll = rng.below(100);
  if (depth <= 0 || roll < 30) {
    int d = static_cast<int>(rng.below(degree_cap + 1));
    return seq_const(rng.pick(cfg.value_pool), gen_length(rng, cfg, d));
  }
  if (degree_cap >= 1 && roll < 30 + cfg.osc_percent)
    return seq_osc(rng.pick(cfg.value_pool), rng.pick(cfg.value_pool));
  if (roll < 70) {
    long k = 2 + rng.below(cfg.max_parts - 1);
    std::vector<SeqExpr> parts;
    for (long i = 0; i < k; ++i) parts.push_back(gen_seq(rng, cfg, depth - 1, degree_cap));
    return seq_cat(parts);
  }
  if (roll < 85 || degree_cap < 1)
    return seq_rep(gen_seq(rng, cfg, depth - 1, degree_cap), Int(2 + rng.below(3)));
  return seq_repw(gen_seq(rng, cfg, depth - 1, degree_cap - 1));
}

inline SeqExpr gen_seq_with_length(Rng& rng, const GenConfig& cfg, const Ordinal& len, int depth);

// A sequence of exactly the indecomposable length w^degree.
inline SeqExpr gen_piece(Rng& rng, const GenConfig& cfg, int degree, int depth) {
  if (degree == 0) return seq_const(rng.pick(cfg.value_pool), Ordinal::natural(1));
  long roll = rng.below(100);
  if (depth <= 0 || roll < 35)
    return seq_const(rng.pick(cfg.value_pool), omega_pow(Ordinal::natural(degree)));
  if (degree == 1 && roll < 35 + cfg.osc_percent)
    return seq_osc(rng.pick(cfg.value_pool), rng.pick(cfg.value_pool));
  if (roll < 75) {
    // repw of a body whose length has degree exactly one less.
    Ordinal body_len = gen_length_exact_degree(rng, cfg, degree - 1);
    return seq_repw(gen_seq_with_length(rng, cfg, body_len, depth - 1));
  }
  // Dominated junk in front of a full-length piece.
  Ordinal junk_len = degree >= 2 ? gen_length(rng, cfg, degree - 1)
                                 : Ordinal::natural(1 + rng.below(cfg.max_finite_len));
  SeqExpr junk = gen_seq_with_length(rng, cfg, junk_len, depth - 1);
  return seq_cat(junk, gen_piece(rng, cfg, degree, depth - 1));
}

inline SeqExpr gen_seq_with_length(Rng& rng, const GenConfig& cfg, const Ordinal& len,
                                   int depth) {
  std::vector<SeqExpr> parts;
  for (const auto& term : len.terms()) {
    if (term.exponent.is_zero()) {
      parts.push_back(seq_const(rng.pick(cfg.value_pool), Ordinal::single(Ordinal(), term.coefficient)));
      continue;
    }
    int degree = static_cast<int>(term.exponent.as_int());
    for (Int j = 0; j < term.coefficient; ++j)
      parts.push_back(gen_piece(rng, cfg, degree, depth));
  }
  return seq_cat(parts);
}

// Two sequences sharing one structural skeleton with independent values;
// zip_affine succeeds on every emitted pair by construction.
inline std::pair<SeqExpr, SeqExpr> gen_aligned_pair(Rng& rng, const GenConfig& cfg, int depth,
                                                    int degree_cap, bool allow_osc) {
  long roll = rng.below(100);
  if (depth <= 0 || roll < 35) {
    int d = static_cast<int>(rng.below(degree_cap + 1));
    Ordinal len = gen_length(rng, cfg, d);
    return {seq_const(rng.pick(cfg.value_pool), len), seq_const(rng.pick(cfg.value_pool), len)};
  }
  if (allow_osc && degree_cap >= 1 && roll < 35 + cfg.osc_percent) {
    return {seq_osc(rng.pick(cfg.value_pool), rng.pick(cfg.value_pool)),
            seq_osc(rng.pick(cfg.value_pool), rng.pick(cfg.value_pool))};
  }
  if (roll < 70) {
    long k = 2 + rng.below(cfg.max_parts - 1);
    std::vector<SeqExpr> left, right;
    for (long i = 0; i < k; ++i) {
      auto [a, b] = gen_aligned_pair(rng, cfg, depth - 1, degree_cap, allow_osc);
      left.push_back(a);
      right.push_back(b);
    }
    return {seq_cat(left), seq_cat(right)};
  }
  if (roll < 85 || degree_cap < 1) {
    Int k(2 + rng.below(3));
    auto [a, b] = gen_aligned_pair(rng, cfg, depth - 1, degree_cap, allow_osc);
    return {seq_rep(a, k), seq_rep(b, k)};
  }
  auto [a, b] = gen_aligned_pair(rng, cfg, depth - 1, degree_cap - 1, allow_osc);
  return {seq_repw(a), seq_repw(b)};
}

// --- reports ----------------------------------------------------------------

struct LawFailure {
  long case_index;
  std::string message;
};

struct LawReport {
  std::string law;
  long cases_run = 0;
  long skipped = 0;
  std::vector<LawFailure> failures;
  bool passed() const { return failures.empty(); }
};

inline std::string law_line(const LawReport& r) {
  return "LAW " + r.law + " " + (r.passed() ? "PASS" : "FAIL") + " cases=" +
         std::to_string(r.cases_run) + " failures=" + std::to_string(r.failures.size());
}

struct LawOptions {
  // Evaluator hook; substituting a broken evaluator here must make the
  // suites fail, which is itself tested.
  std::function<Rat(const SeqExpr&)> upper_fn = [](const SeqExpr& s) { return upper_mean(s); };
  std::vector<long> oracle_widths = {600, 60, 20};
  long oracle_stride = 5;
  double oracle_tolerance = 0.05;
};

namespace detail {

struct Eval {
  const LawOptions& opts;
  Rat upper(const SeqExpr& s) const { return opts.upper_fn(s); }
  Rat lower(const SeqExpr& s) const { return -opts.upper_fn(negate(s)); }
  std::optional<Rat> mean(const SeqExpr& s) const {
    Rat u = upper(s);
    Rat l = lower(s);
    if (u == l) return u;
    return std::nullopt;
  }
};

constexpr std::uint64_t kLawDomination = 1;
constexpr std::uint64_t kLawAxioms = 2;
constexpr std::uint64_t kLawSubadditivity = 3;
constexpr std::uint64_t kLawDivision = 4;
constexpr std::uint64_t kLawExcision = 5;
constexpr std::uint64_t kLawUniformLimit = 6;

template <class Fn>
inline LawReport run_law(const std::string& name, std::uint64_t law_id, const GenConfig& cfg,
                         Fn&& case_fn) {
  LawReport report;
  report.law = name;
  for (long i = 0; i < cfg.cases; ++i) {
    Rng rng(mix_seed(cfg.seed, law_id, static_cast<std::uint64_t>(i)));
    report.cases_run += 1;
    try {
      case_fn(rng, i, report);
    } catch (const Error& e) {
      report.failures.push_back({i, std::string("unexpected error: ") + e.what()});
    }
  }
  return report;
}

}  // namespace detail

// --- law checkers --------------------------------------------------------------

// upper(r + s-tail) = upper(s) whenever length(r) is absorbed by length(s).
inline LawReport check_domination(const GenConfig& cfg, const LawOptions& opts = {}) {
  detail::Eval ev{opts};
  return detail::run_law(
      "domination", detail::kLawDomination, cfg, [&](Rng& rng, long i, LawReport& report) {
        int sdeg = 1 + static_cast<int>(rng.below(cfg.degree_cap));
        Ordinal slen = gen_length_exact_degree(rng, cfg, sdeg);
        SeqExpr s = gen_seq_with_length(rng, cfg, slen, cfg.max_depth);
        SeqExpr r = gen_seq(rng, cfg, cfg.max_depth - 1, sdeg - 1);
        if (!absorbs(r.length(), s.length())) {
          report.skipped += 1;
          return;
        }
        SeqExpr joined = seq_cat(r, s);
        if (ev.upper(joined) != ev.upper(s))
          report.failures.push_back(
              {i, "upper mean changed by a dominated prefix: " + to_string(joined)});
        if (ev.lower(joined) != ev.lower(s))
          report.failures.push_back(
              {i, "lower mean changed by a dominated prefix: " + to_string(joined)});
      });
}

// Identity on singletons, commutation, equal-length averaging, remainder
// folding, and numeric-oracle containment for the limsup clause.
inline LawReport check_axioms(const GenConfig& cfg, const LawOptions& opts = {}) {
  detail::Eval ev{opts};
  return detail::run_law(
      "axioms", detail::kLawAxioms, cfg, [&](Rng& rng, long i, LawReport& report) {
        Rat c = rng.pick(cfg.value_pool);
        if (ev.upper(seq_const(c, Ordinal::natural(1))) != c)
          report.failures.push_back({i, "length-1 identity failed for " + to_string(c)});

        SeqExpr a = gen_seq(rng, cfg, cfg.max_depth - 1, cfg.degree_cap);
        SeqExpr b = gen_seq(rng, cfg, cfg.max_depth - 1, cfg.degree_cap);
        if (ev.upper(seq_cat(a, b)) != ev.upper(seq_cat(b, a)))
          report.failures.push_back(
              {i, "commutation failed: " + to_string(a) + " vs " + to_string(b)});

        long n = 2 + rng.below(3);
        Ordinal len = gen_length(rng, cfg, static_cast<int>(rng.below(cfg.degree_cap + 1)));
        std::vector<SeqExpr> parts;
        Rat part_sum(0);
        for (long j = 0; j < n; ++j) {
          parts.push_back(gen_seq_with_length(rng, cfg, len, cfg.max_depth - 1));
          part_sum += ev.upper(parts.back());
        }
        if (ev.upper(seq_cat(parts)) != part_sum / n)
          report.failures.push_back({i, "equal-length averaging failed at n=" + std::to_string(n)});

        // Remainder folding: with s = s_0 + ... + s_{n-1} + t, the mean also
        // equals the average of (t + s_0), s_1, ..., s_{n-1}.
        int sdeg = 1 + static_cast<int>(rng.below(cfg.degree_cap));
        Int blocks = 1 + rng.below(3);
        Ordinal rho = gen_length(rng, cfg, sdeg - 1);
        Ordinal block = omega_pow(Ordinal::natural(sdeg));
        Ordinal total = block * Ordinal::natural(blocks) + rho;
        SeqExpr s = gen_seq_with_length(rng, cfg, total, cfg.max_depth - 1);
        SeqExpr rest = s;
        std::vector<SeqExpr> pieces;
        for (Int j = 0; j < blocks; ++j) {
          auto cut = split(rest, block);
          pieces.push_back(cut.first);
          rest = cut.second;
        }
        Rat folded = ev.upper(seq_cat(rest, pieces.front()));
        for (std::size_t j = 1; j < pieces.size(); ++j) folded += ev.upper(pieces[j]);
        if (ev.upper(s) != folded / Rat(blocks))
          report.failures.push_back({i, "remainder folding failed: " + to_string(s)});

        if (opts.oracle_stride > 0 && i % opts.oracle_stride == 0) {
          SeqExpr probe = gen_seq(rng, cfg, cfg.max_depth - 1, std::min(cfg.degree_cap, 2));
          try {
            OracleInterval iv = truncation_oracle(probe, opts.oracle_widths);
            Rat tol(static_cast<long>(opts.oracle_tolerance * 10000), 10000);
            if (ev.lower(probe) < iv.lo - tol || iv.hi + tol < ev.upper(probe))
              report.failures.push_back(
                  {i, "numeric oracle disagrees with the evaluator on " + to_string(probe)});
          } catch (const Error& e) {
            if (e.kind() == ErrorKind::BudgetExceeded)
              report.skipped += 1;
            else
              throw;
          }
        }
      });
}

// Subadditivity of the upper mean on aligned pairs; linearity of the mean
// where both operands have one.
inline LawReport check_subadditivity_linearity(const GenConfig& cfg,
                                               const LawOptions& opts = {}) {
  detail::Eval ev{opts};
  return detail::run_law(
      "subadditivity_linearity", detail::kLawSubadditivity, cfg,
      [&](Rng& rng, long i, LawReport& report) {
        auto [r, s] =
            gen_aligned_pair(rng, cfg, cfg.max_depth, cfg.degree_cap, /*allow_osc=*/true);
        SeqExpr sum = zip_affine(r, s, Rat(1), Rat(1));
        if (ev.upper(sum) > ev.upper(r) + ev.upper(s))
          report.failures.push_back(
              {i, "subadditivity failed: " + to_string(r) + " + " + to_string(s)});

        auto [p, q] =
            gen_aligned_pair(rng, cfg, cfg.max_depth - 1, cfg.degree_cap, /*allow_osc=*/false);
        auto mp = ev.mean(p);
        auto mq = ev.mean(q);
        if (!mp || !mq) {
          report.failures.push_back({i, "osc-free sequence without a mean: " + to_string(p)});
          return;
        }
        Rat ca(static_cast<long>(rng.below(5)) - 2);
        Rat cb(static_cast<long>(rng.below(5)) - 2);
        SeqExpr combo = zip_affine(p, q, ca, cb);
        auto mc = ev.mean(combo);
        if (!mc || *mc != ca * *mp + cb * *mq)
          report.failures.push_back({i, "linearity failed on " + to_string(combo)});
      });
}

// (s/beta)/alpha = s/(beta*alpha) pointwise, and division preserves the
// upper mean. Unsupported structural divisions are skipped, not failed.
inline LawReport check_division(const GenConfig& cfg, const LawOptions& opts = {}) {
  detail::Eval ev{opts};
  return detail::run_law(
      "division", detail::kLawDivision, cfg, [&](Rng& rng, long i, LawReport& report) {
        static const char* divisor_pool[] = {"2", "3", "w", "w*2", "w^2"};
        Ordinal beta = parse_ordinal(divisor_pool[rng.below(5)]);
        Ordinal alpha = parse_ordinal(divisor_pool[rng.below(5)]);
        static const char* tail_pool[] = {"1", "2", "w"};
        Ordinal gamma = parse_ordinal(tail_pool[rng.below(3)]);
        Ordinal total = beta * alpha * gamma;
        SeqExpr s = rng.chance(30)
                        ? seq_const(rng.pick(cfg.value_pool), total)
                        : gen_seq_with_length(rng, cfg, total, cfg.max_depth - 1);
        try {
          SeqExpr q1 = divide(s, beta);
          SeqExpr q2 = divide(q1, alpha);
          SeqExpr q3 = divide(s, beta * alpha);
          bool equal = q2 == q3;
          if (!equal) {
            equal = q2.length() == q3.length() && ev.upper(q2) == ev.upper(q3) &&
                    ev.lower(q2) == ev.lower(q3) &&
                    materialize_prefix(q2, 48) == materialize_prefix(q3, 48);
          }
          if (!equal)
            report.failures.push_back(
                {i, "division composition failed on " + to_string(s) + " by " + to_string(beta) +
                        " then " + to_string(alpha)});
          if (ev.upper(q1) != ev.upper(s))
            report.failures.push_back(
                {i, "division did not preserve the upper mean of " + to_string(s)});
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::UnsupportedDivision) {
            report.skipped += 1;
            return;
          }
          throw;
        }
      });
}

// Inserting finitely many scalars in front of infinite segments never moves
// either mean: the inserted junk has absorbed order type.
inline LawReport check_excision(const GenConfig& cfg, const LawOptions& opts = {}) {
  detail::Eval ev{opts};
  return detail::run_law(
      "excision", detail::kLawExcision, cfg, [&](Rng& rng, long i, LawReport& report) {
        int sdeg = 1 + static_cast<int>(rng.below(cfg.degree_cap));
        Ordinal slen = gen_length_exact_degree(rng, cfg, sdeg);
        SeqExpr s = gen_seq_with_length(rng, cfg, slen, cfg.max_depth - 1);
        auto sd = standard_decomposition(s.length());
        Ordinal block = omega_pow(sd.sigma);

        std::vector<SeqExpr> parts;
        SeqExpr rest = s;
        bool exhausted = false;
        for (Int j = 0; j < sd.n; ++j) {
          if (rng.chance(60))
            parts.push_back(seq_const(rng.pick(cfg.value_pool),
                                      Ordinal::natural(1 + rng.below(3))));
          if (j + 1 == sd.n && sd.rho.is_zero()) {
            parts.push_back(rest);
            exhausted = true;
          } else {
            auto cut = split(rest, block);
            parts.push_back(cut.first);
            rest = cut.second;
          }
        }
        if (!exhausted) parts.push_back(rest);
        SeqExpr t = seq_cat(parts);
        if (ev.upper(t) != ev.upper(s) || ev.lower(t) != ev.lower(s))
          report.failures.push_back({i, "excision moved a mean: " + to_string(t)});
      });
}

// For s with a mean, mean(s + 1/k) = mean(s) + 1/k for every k in the
// schedule, witnessing the uniform-limit property exactly.
inline LawReport check_uniform_limit(const GenConfig& cfg, const LawOptions& opts = {}) {
  detail::Eval ev{opts};
  GenConfig no_osc = cfg;
  no_osc.osc_percent = 0;
  return detail::run_law(
      "uniform_limit", detail::kLawUniformLimit, cfg, [&](Rng& rng, long i, LawReport& report) {
        SeqExpr s = gen_seq(rng, no_osc, no_osc.max_depth - 1, no_osc.degree_cap);
        auto m = ev.mean(s);
        if (!m) {
          report.failures.push_back({i, "osc-free sequence without a mean: " + to_string(s)});
          return;
        }
        for (long k = 1; k <= 32; ++k) {
          SeqExpr shifted = affine_map(s, Rat(1), Rat(1, k));
          auto mk = ev.mean(shifted);
          if (!mk || *mk != *m + Rat(1, k)) {
            report.failures.push_back(
                {i, "uniform limit failed at k=" + std::to_string(k) + " on " + to_string(s)});
            return;
          }
        }
      });
}

inline std::vector<LawReport> run_all_laws(const GenConfig& cfg, const LawOptions& opts = {}) {
  return {check_domination(cfg, opts),       check_axioms(cfg, opts),
          check_subadditivity_linearity(cfg, opts), check_division(cfg, opts),
          check_excision(cfg, opts),         check_uniform_limit(cfg, opts)};
}

}  // namespace tfm

#endif  // TFM_LAWS_HPP
