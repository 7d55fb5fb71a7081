#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "isocat/padic.hpp"

using namespace isocat;

namespace {

// Random rational with denominator a power of p, numerator in [-bound, bound].
Rat random_p_rational(std::mt19937_64& rng, std::int64_t p, long bound) {
  std::uniform_int_distribution<long> num(-bound, bound);
  std::uniform_int_distribution<int> dpow(0, 4);
  Rat r(num(rng), 1);
  return r / Rat(ipow(BigInt(p), dpow(rng)), 1);
}

}  // namespace

TEST_CASE("exgcd solves the Bezout identity on random inputs") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long> d(-1000000, 1000000);
  for (int i = 0; i < 2000; ++i) {
    BigInt a = d(rng), b = d(rng), x, y;
    BigInt g = exgcd(a, b, x, y);
    CHECK(a * x + b * y == g);
    if (a != 0 || b != 0) {
      CHECK(g != 0);
      CHECK(a % g == 0);
      CHECK(b % g == 0);
    }
  }
}

TEST_CASE("inv_mod agrees with brute force modulo small prime powers") {
  for (BigInt m : {BigInt(8), BigInt(27), BigInt(125), BigInt(49)}) {
    for (BigInt u = 1; u < m; ++u) {
      BigInt g, x, y;
      g = exgcd(u, m, x, y);
      if (g != 1) continue;
      BigInt inv = inv_mod(u, m);
      CHECK(u * inv % m == 1);
      CHECK(inv >= 0);
      CHECK(inv < m);
    }
  }
}

TEST_CASE("exact construction round-trips through the representative") {
  for (std::int64_t p : {2, 3, 5}) {
    PadicScalar x = PadicScalar::exact_rat(p, 20, Rat(7, p * p));
    CHECK(x.abs_precision() == 20);
    CHECK(x.denom_shift() == 2);
    CHECK(x.valuation() == Val(Rat(-2)));
    // representative differs from 7/p^2 by a multiple of p^20
    Rat diff = x.representative() - Rat(7, p * p);
    CHECK((diff == 0 || val_p_rat(diff, BigInt(p)) >= 20));
  }
}

TEST_CASE("prime-to-p denominators are absorbed exactly") {
  PadicScalar x = PadicScalar::exact_rat(5, 12, Rat(1, 3));
  CHECK(x.is_integral());
  CHECK(x.abs_precision() == 12);
  PadicScalar three = PadicScalar::exact_int(5, 12, 3);
  CHECK((x * three).congruent(PadicScalar::one(5, 12)));
}

TEST_CASE("field arithmetic matches exact rational arithmetic") {
  std::mt19937_64 rng(987654321);
  const int cap = 18;
  for (std::int64_t p : {2, 3, 5, 7}) {
    for (int i = 0; i < 2500; ++i) {
      Rat qa = random_p_rational(rng, p, 5000);
      Rat qb = random_p_rational(rng, p, 5000);
      PadicScalar a = PadicScalar::exact_rat(p, cap, qa);
      PadicScalar b = PadicScalar::exact_rat(p, cap, qb);

      PadicScalar s = a + b, d = a - b, m = a * b;
      CHECK(s.congruent(PadicScalar::exact_rat(p, cap, qa + qb)));
      CHECK(d.congruent(PadicScalar::exact_rat(p, cap, qa - qb)));
      CHECK(m.congruent(PadicScalar::exact_rat(p, cap, qa * qb)));
      if (qb != 0) {
        PadicScalar q = a / b;
        CHECK(q.congruent(PadicScalar::exact_rat(p, cap, qa / qb).reduce_to(q.abs_precision())));
      }
      if (qa != 0) CHECK(a.valuation() == Val(Rat(val_p_rat(qa, BigInt(p)))));
    }
  }
}

TEST_CASE("normal form is unique for exact inputs") {
  // the same rational reached along different exact paths yields the
  // identical (mantissa, shift, precision) triple
  PadicScalar x = PadicScalar::exact_rat(3, 15, Rat(22, 27));
  PadicScalar y = PadicScalar::exact_rat(3, 15, Rat(44, 54));
  CHECK(x.mantissa() == y.mantissa());
  CHECK(x.denom_shift() == y.denom_shift());
  CHECK(x.abs_precision() == y.abs_precision());

  PadicScalar z = PadicScalar::exact_int(3, 15, 22).mul_p_pow(-3);
  CHECK(z.denom_shift() == 3);
  CHECK(z.abs_precision() == 12);  // division by p^3 costs three digits
  CHECK(z.congruent(x));
}

TEST_CASE("precision accounting for products and inverses") {
  const std::int64_t p = 5;
  const int cap = 30;
  PadicScalar u = PadicScalar::exact_int(p, cap, 7);

  SUBCASE("multiplying by p^k raises absolute precision up to the cap") {
    PadicScalar x = u.mul_p_pow(-4);  // 7/5^4, precision cap-4
    CHECK(x.abs_precision() == cap - 4);
    PadicScalar y = x.mul_p_pow(4);
    CHECK(y.abs_precision() == cap);
    CHECK(y.congruent(u));
  }

  SUBCASE("inverting p^v * unit costs 2v digits") {
    PadicScalar x = PadicScalar::exact_rat(p, cap, Rat(3 * 125, 1));  // val 3
    PadicScalar xi = x.inverse();
    CHECK(xi.abs_precision() == cap - 6);
    CHECK(xi.valuation() == Val(Rat(-3)));
    CHECK((x * xi).congruent(PadicScalar::one(p, cap)));
  }

  SUBCASE("inverting a unit is lossless") {
    PadicScalar xi = u.inverse();
    CHECK(xi.abs_precision() == cap);
    CHECK((u * xi).congruent(PadicScalar::one(p, cap)));
  }
}

TEST_CASE("zero at precision behaves as an honest unknown") {
  const std::int64_t p = 2;
  PadicScalar a = PadicScalar::exact_int(p, 10, 1024);  // 2^10: zero mod 2^10
  PadicScalar z = a.reduce_to(10);
  // at cap 10 the value 2^10 is indistinguishable from 0
  CHECK(PadicScalar(p, 10, 1024, 0, 10).is_zero_at_precision());
  CHECK(PadicScalar(p, 10, 1024, 0, 10).valuation() == Val::inf());
  CHECK_THROWS_AS(PadicScalar(p, 10, 1024, 0, 10).valuation_strict(), PrecisionExhausted);
  CHECK_THROWS_AS(PadicScalar(p, 10, 1024, 0, 10).inverse(), InvertNonUnit);
  CHECK(z.valuation_lower_bound() >= 10);
}

TEST_CASE("polar digits survive even when integral precision reaches zero") {
  const std::int64_t p = 3;
  PadicScalar x = PadicScalar::exact_int(p, 8, 1).mul_p_pow(-8);
  // 1/3^8 with no integral digits left: the fractional expansion is still
  // fully known, so the valuation stays exact
  CHECK(x.abs_precision() == 0);
  CHECK(x.valuation() == Val(Rat(-8)));
  CHECK_THROWS_AS(x.residue(), DomainViolation);

  PadicScalar tiny = PadicScalar::exact_int(p, 8, 3 * 81);  // val 5
  PadicScalar ti = tiny.inverse();                          // costs 2*5 digits
  CHECK(ti.abs_precision() == -2);
  CHECK(ti.valuation() == Val(Rat(-5)));
}

TEST_CASE("operations that would leave no digits throw") {
  const std::int64_t p = 3;
  CHECK_THROWS_AS(PadicScalar::zero(p, 8).mul_p_pow(-8), PrecisionExhausted);
  PadicScalar x = PadicScalar::exact_int(p, 8, 1).mul_p_pow(-8);
  // cancellation at zero integral digits leaves no information at all
  CHECK_THROWS_AS(x - x, PrecisionExhausted);
}

TEST_CASE("pow matches repeated multiplication and handles negatives") {
  PadicScalar x = PadicScalar::exact_rat(7, 16, Rat(3, 7));
  PadicScalar acc = PadicScalar::one(7, 16);
  for (int e = 0; e <= 5; ++e) {
    CHECK(x.pow(e).congruent(acc.reduce_to(x.pow(e).abs_precision())));
    acc = acc * x;
  }
  PadicScalar xm2 = x.pow(-2);
  CHECK((xm2 * x * x).congruent(PadicScalar::one(7, 16).reduce_to((xm2 * x * x).abs_precision())));
}

TEST_CASE("residue extraction") {
  PadicScalar x = PadicScalar::exact_rat(5, 10, Rat(12, 1));
  CHECK(x.residue() == 2);
  PadicScalar y = PadicScalar::exact_rat(5, 10, Rat(1, 5));
  CHECK_THROWS_AS(y.residue(), DomainViolation);
}
