#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "isocat/residue.hpp"

using namespace isocat;

TEST_CASE("prime field arithmetic matches integer arithmetic") {
  FqContext F(7, {0, 1});
  for (std::int64_t a = 0; a < 7; ++a)
    for (std::int64_t b = 0; b < 7; ++b) {
      CHECK(F.add(F.from_int(a), F.from_int(b))[0] == (a + b) % 7);
      CHECK(F.mul(F.from_int(a), F.from_int(b))[0] == (a * b) % 7);
      if (b != 0) {
        auto q = F.mul(F.from_int(a), F.inv(F.from_int(b)));
        CHECK(F.mul(q, F.from_int(b))[0] == a);
      }
    }
}

TEST_CASE("F9 multiplication table spot checks") {
  FqContext F(3, {1, 0, 1});  // x^2 + 1
  auto x = F.gen();
  CHECK(F.mul(x, x) == F.from_int(2));  // x^2 = -1
  CHECK(F.inv(x) == F.mul(F.from_int(2), x));
  CHECK(F.eq(F.mul(x, F.inv(x)), F.one()));
}

TEST_CASE("Fermat: a^q == a in several fields") {
  std::vector<FqContext> fields;
  fields.emplace_back(2, std::vector<std::int64_t>{1, 1, 1});     // F_4
  fields.emplace_back(2, std::vector<std::int64_t>{1, 1, 0, 1});  // F_8
  fields.emplace_back(3, std::vector<std::int64_t>{1, 0, 1});     // F_9
  fields.emplace_back(5, std::vector<std::int64_t>{2, 0, 1});     // F_25
  for (const auto& F : fields) {
    for (BigInt i = 0; i < F.q(); ++i) {
      auto a = F.element_at(i);
      CHECK(F.eq(F.pow(a, F.q()), a));
    }
  }
}

TEST_CASE("reducible minpoly is rejected") {
  CHECK_THROWS_AS(FqContext(5, std::vector<std::int64_t>{4, 0, 1}), NotUnramified);  // x^2-1
  CHECK_THROWS_AS(FqContext(2, std::vector<std::int64_t>{0, 1, 1}), NotUnramified);  // x^2+x
}

TEST_CASE("sqrt finds exactly the squares") {
  for (auto F : {FqContext(3, {1, 0, 1}), FqContext(5, {2, 0, 1}), FqContext(7, {0, 1}),
                 FqContext(2, {1, 1, 0, 1})}) {
    std::set<std::vector<std::int64_t>> squares;
    for (BigInt i = 0; i < F.q(); ++i) {
      auto a = F.element_at(i);
      squares.insert(F.mul(a, a));
    }
    long found = 0;
    for (BigInt i = 0; i < F.q(); ++i) {
      auto a = F.element_at(i);
      FqContext::Elem r;
      bool ok = F.sqrt(a, r);
      CHECK(ok == (squares.count(a) > 0));
      if (ok) {
        CHECK(F.eq(F.mul(r, r), a));
        ++found;
      }
    }
    if (F.p == 2)
      CHECK(BigInt(found) == F.q());  // squaring is a bijection
    else
      CHECK(BigInt(2 * found) == F.q() + 1);
  }
}

TEST_CASE("trace of the generator of F4") {
  FqContext F(2, {1, 1, 1});
  CHECK(F.trace(F.gen()) == 1);  // x + x^2 = x + (x+1) = 1
  CHECK(F.trace(F.one()) == 0);  // 1 + 1
}

TEST_CASE("polynomial division invariant on random inputs") {
  FqContext F(5, {2, 0, 1});
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::int64_t> d(0, 4);
  auto randPoly = [&](long n) {
    FqPoly r;
    for (long i = 0; i < n; ++i) r.push_back(FqContext::Elem{d(rng), d(rng)});
    return fq_poly_trim(F, r);
  };
  for (int t = 0; t < 300; ++t) {
    FqPoly a = randPoly(8), b = randPoly(4);
    if (fq_poly_deg(F, b) < 0) continue;
    FqPoly q, r;
    fq_poly_divrem(F, a, b, q, r);
    CHECK(fq_poly_deg(F, r) < fq_poly_deg(F, b));
    FqPoly back = fq_poly_add(F, fq_poly_mul(F, q, b), r);
    CHECK(fq_poly_deg(F, fq_poly_sub(F, back, a)) == -1);
  }
}

TEST_CASE("irreducible quadratic count over prime fields") {
  // the number of monic irreducible quadratics over F_p is p(p-1)/2
  for (std::int64_t p : {2, 3, 5, 7}) {
    FqContext F(p, {0, 1});
    long count = 0;
    for (std::int64_t c0 = 0; c0 < p; ++c0)
      for (std::int64_t c1 = 0; c1 < p; ++c1) {
        FqPoly f = {F.from_int(c0), F.from_int(c1), F.one()};
        if (fq_poly_irreducible(F, f)) ++count;
      }
    CHECK(count == p * (p - 1) / 2);
  }
}

TEST_CASE("roots of y^q - y are all field elements") {
  FqContext F(3, {1, 0, 1});
  std::mt19937_64 rng(7);
  FqPoly f(static_cast<size_t>(10), F.zero());  // y^9 - y
  f[9] = F.one();
  f[1] = F.neg(F.one());
  auto roots = fq_poly_roots(F, f, rng);
  CHECK(roots.size() == 9);
  std::set<std::vector<std::int64_t>> unique(roots.begin(), roots.end());
  CHECK(unique.size() == 9);
}

TEST_CASE("factorization recovers a known multiset of irreducibles") {
  std::mt19937_64 rng(2024);
  for (auto F : {FqContext(2, {1, 1, 1}), FqContext(3, {1, 0, 1}), FqContext(5, {0, 1})}) {
    // assemble all monic irreducibles of degree <= 2 in this field
    std::vector<FqPoly> irr;
    for (BigInt i = 0; i < F.q(); ++i) irr.push_back(FqPoly{F.neg(F.element_at(i)), F.one()});
    for (BigInt i = 0; i < F.q(); ++i)
      for (BigInt j = 0; j < F.q(); ++j) {
        FqPoly f = {F.element_at(i), F.element_at(j), F.one()};
        if (fq_poly_irreducible(F, f)) irr.push_back(f);
      }
    std::uniform_int_distribution<size_t> pick(0, irr.size() - 1);
    std::uniform_int_distribution<long> multDist(1, 3);
    for (int trial = 0; trial < 25; ++trial) {
      std::map<size_t, long> chosen;
      int nFactors = 1 + trial % 3;
      for (int k = 0; k < nFactors; ++k) chosen[pick(rng)] += multDist(rng);
      FqPoly prod = {F.one()};
      for (auto [idx, m] : chosen)
        for (long k = 0; k < m; ++k) prod = fq_poly_mul(F, prod, irr[idx]);
      auto factors = fq_poly_factor(F, prod, rng);
      long totalDeg = 0;
      for (const auto& fac : factors) {
        CHECK(fq_poly_irreducible(F, fac.poly));
        totalDeg += fac.multiplicity * fq_poly_deg(F, fac.poly);
        // each reported factor divides the product with the right multiplicity
        FqPoly rem = prod;
        for (long k = 0; k < fac.multiplicity; ++k) {
          FqPoly q, r;
          fq_poly_divrem(F, rem, fac.poly, q, r);
          CHECK(fq_poly_deg(F, r) == -1);
          rem = q;
        }
        FqPoly q, r;
        fq_poly_divrem(F, rem, fac.poly, q, r);
        CHECK(fq_poly_deg(F, r) >= 0);  // one more division must fail
      }
      CHECK(totalDeg == fq_poly_deg(F, prod));
    }
  }
}

TEST_CASE("factorization output is deterministic across rng seeds") {
  FqContext F(3, {1, 0, 1});
  // (y^2+1)(y-1)^2 (y^2+1 has the root x in F9, so it splits there)
  FqPoly f = {F.one(), F.zero(), F.one()};
  FqPoly lin = {F.neg(F.one()), F.one()};
  f = fq_poly_mul(F, f, fq_poly_mul(F, lin, lin));
  std::mt19937_64 r1(1), r2(99999);
  auto f1 = fq_poly_factor(F, f, r1);
  auto f2 = fq_poly_factor(F, f, r2);
  REQUIRE(f1.size() == f2.size());
  for (size_t i = 0; i < f1.size(); ++i) {
    CHECK(f1[i].poly == f2[i].poly);
    CHECK(f1[i].multiplicity == f2[i].multiplicity);
  }
}
