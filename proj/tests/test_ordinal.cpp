#include <catch2/catch_amalgamated.hpp>

#include "small_ordinal_oracle.hpp"
#include "tfm/ordinal.hpp"

using namespace tfm;

namespace {

Ordinal O(const char* text) { return parse_ordinal(text); }

}  // namespace

TEST_CASE("comparison") {
  CHECK(compare(O("w"), O("w")) == 0);
  CHECK(compare(O("w*2+3"), O("w^2")) < 0);
  CHECK(compare(O("w^w"), O("w^5*9+w")) > 0);
  CHECK(O("0") < O("1"));
  CHECK(O("w+1") > O("w"));
}

TEST_CASE("addition") {
  CHECK(O("1") + O("w") == O("w"));
  CHECK(O("w") + O("1") == O("w+1"));
  CHECK(O("w^2*3+w") + O("w^2") == O("w^2*4"));
  CHECK((O("w") + O("w")) == O("w*2"));
}

TEST_CASE("multiplication") {
  CHECK(O("w") * O("2") == O("w*2"));
  CHECK(O("2") * O("w") == O("w"));
  // Verified against the small-ordinal oracle below; frozen here.
  CHECK(O("w*2+1") * O("w") == O("w^2"));
  CHECK(O("w+1") * O("w+1") == O("w^2+w+1"));
}

TEST_CASE("omega powers and indecomposability") {
  CHECK(omega_pow(O("0")) == O("1"));
  CHECK(omega_pow(O("1")) == O("w"));
  CHECK(omega_pow(O("w")) == O("w^w"));
  CHECK(is_indecomposable(O("w^2")));
  CHECK_FALSE(is_indecomposable(O("w*2")));
  CHECK(is_indecomposable(O("1")));
  CHECK_FALSE(is_indecomposable(O("0")));
}

TEST_CASE("standard decomposition") {
  auto d = standard_decomposition(O("w^2*3 + w*2 + 5"));
  CHECK(d.sigma == O("2"));
  CHECK(d.n == 3);
  CHECK(d.rho == O("w*2+5"));

  auto fin = standard_decomposition(O("7"));
  CHECK(fin.sigma == O("0"));
  CHECK(fin.n == 7);
  CHECK(fin.rho == O("0"));

  auto ind = standard_decomposition(O("w^w"));
  CHECK(ind.sigma == O("w"));
  CHECK(ind.n == 1);
  CHECK(ind.rho == O("0"));

  CHECK_THROWS_MATCHES(standard_decomposition(O("0")), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::ZeroOrdinal;
                       }));
}

TEST_CASE("left subtraction") {
  CHECK(left_subtract(O("w"), O("w*2")) == O("w"));
  CHECK(left_subtract(O("3"), O("w")) == O("w"));
  CHECK(left_subtract(O("w"), O("w+5")) == O("5"));
  CHECK(left_subtract(O("w^2+w"), O("w^2+w*4+1")) == O("w*3+1"));
  CHECK_THROWS_MATCHES(left_subtract(O("w^2"), O("w")), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::Underflow;
                       }));
}

TEST_CASE("left division") {
  auto d1 = left_divide(O("w"), O("w^2"));
  CHECK(d1.quotient == O("w"));
  CHECK(d1.remainder == O("0"));

  auto d2 = left_divide(O("w"), O("w*2+3"));
  CHECK(d2.quotient == O("2"));
  CHECK(d2.remainder == O("3"));

  auto d3 = left_divide(O("2"), O("5"));
  CHECK(d3.quotient == O("2"));
  CHECK(d3.remainder == O("1"));

  auto d4 = left_divide(O("w*2+1"), O("w^2"));
  CHECK(O("w*2+1") * d4.quotient + d4.remainder == O("w^2"));

  CHECK_THROWS_MATCHES(left_divide(O("0"), O("w")), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::ZeroDivisor;
                       }));
}

TEST_CASE("absorption") {
  CHECK(absorbs(O("3"), O("w")));
  CHECK_FALSE(absorbs(O("w"), O("w")));
  CHECK(absorbs(O("w*5+9"), O("w^2")));
}

TEST_CASE("parse and print round-trip") {
  CHECK(to_string(O("w^2*3 + w*2 + 5")) == "w^2*3 + w*2 + 5");
  CHECK(to_string(O("w^(w+1)")) == "w^(w + 1)");
  CHECK(to_string(O("0")) == "0");
  CHECK(to_string(O("w^w")) == "w^(w)");
  CHECK(O("w^(w)") == O("w^w"));
  CHECK(to_string(O("1 + w")) == "w");

  CHECK_THROWS_AS(parse_ordinal("w^"), ParseError);
  CHECK_THROWS_AS(parse_ordinal("q"), ParseError);
  CHECK_THROWS_AS(parse_ordinal("w+"), ParseError);
  CHECK_THROWS_AS(parse_ordinal("w 3"), ParseError);
  try {
    parse_ordinal("w^(w");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("division and subtraction laws on random ordinals") {
  // Deterministic exhaustive-ish sweep over the oracle domain used as a
  // generator; checks the module's algebraic contracts.
  auto domain = oracle::test_domain();
  for (const auto& a : domain) {
    for (const auto& b : domain) {
      if (!a.is_zero()) {
        auto d = left_divide(a, b);
        CHECK(a * d.quotient + d.remainder == b);
        CHECK(compare(d.remainder, a) < 0);
      }
      if (compare(b, a) <= 0) {
        CHECK(b + left_subtract(b, a) == a);
      }
    }
  }
}

TEST_CASE("associativity and distributivity spot checks") {
  auto domain = oracle::test_domain();
  // A thinned triple loop keeps the runtime reasonable.
  for (std::size_t i = 0; i < domain.size(); i += 7)
    for (std::size_t j = 0; j < domain.size(); j += 11)
      for (std::size_t k = 0; k < domain.size(); k += 13) {
        const auto& a = domain[i];
        const auto& b = domain[j];
        const auto& c = domain[k];
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
      }
  CHECK(O("1") + O("w") != O("w") + O("1"));
}

TEST_CASE("agreement with the explicit well-order oracle") {
  auto domain = oracle::test_domain();
  for (const auto& a : domain) {
    for (const auto& b : domain) {
      auto da = oracle::from_ordinal(a);
      auto db = oracle::from_ordinal(b);
      CHECK(oracle::to_ordinal(oracle::add(da, db)) == a + b);
      CHECK(oracle::to_ordinal(oracle::mul(da, db)) == a * b);
      int production = compare(a, b);
      CHECK(oracle::cmp(da, db) == production);
    }
  }
}

TEST_CASE("indecomposability is absence of smaller decompositions") {
  auto domain = oracle::test_domain();
  for (const auto& a : domain) {
    if (a.is_zero()) continue;
    bool has_decomposition = false;
    for (const auto& b : domain) {
      if (b.is_zero() || compare(b, a) >= 0) continue;
      for (const auto& c : domain) {
        if (c.is_zero() || compare(c, a) >= 0) continue;
        if (b + c == a) {
          has_decomposition = true;
          break;
        }
      }
      if (has_decomposition) break;
    }
    CHECK(is_indecomposable(a) == !has_decomposition);
  }
}
