#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "isocat/tower.hpp"

using namespace isocat;

namespace {

PrecisionContext ctx(std::int64_t p, int M = 12) {
  PrecisionContext c;
  c.p = p;
  c.pPrecision = M;
  return c;
}

FieldTowerElement random_element(const TowerPtr& T, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-50, 50);
  std::vector<std::vector<Rat>> grid;
  for (long i = 0; i < T->e(); ++i) {
    grid.emplace_back();
    for (long j = 0; j < T->f(); ++j) grid.back().push_back(Rat(d(rng)));
  }
  return T->from_grid(grid);
}

}  // namespace

TEST_CASE("the base field Q_p works as plain p-adics") {
  auto T = FieldTower::qp(ctx(5));
  auto x = T->from_rational(Rat(7, 5));
  CHECK(x.valuation() == Val(Rat(-1)));
  CHECK((x * x.inverse()).congruent(T->one()));
  CHECK(T->pi().congruent(T->from_rational(Rat(5))));
}

TEST_CASE("ramified quadratic: pi^2 = 3 in Q_3(sqrt 3)") {
  auto T = FieldTower::make(ctx(3), {Rat(0), Rat(1)}, {Rat(-3), Rat(0), Rat(1)});
  auto pi = T->pi();
  CHECK((pi * pi).congruent(T->from_rational(Rat(3))));
  CHECK(pi.valuation() == Val(Rat(1, 2)));
  CHECK((T->from_rational(Rat(3)) + pi).valuation() == Val(Rat(1, 2)));

  // (a + b pi)^2 = a^2 + 3 b^2 + 2ab pi
  auto x = T->from_grid({{Rat(2)}, {Rat(5)}});
  auto sq = x * x;
  CHECK(sq.congruent(T->from_grid({{Rat(4 + 75)}, {Rat(20)}})));

  // (1 + pi)^(-1) = (1 - pi)/(1 - 3) = -1/2 + pi/2
  auto y = T->one() + pi;
  CHECK(y.inverse().congruent(T->from_grid({{Rat(-1, 2)}, {Rat(1, 2)}})));
  CHECK((y * y.inverse()).congruent(T->one()));
}

TEST_CASE("unramified quadratic: Frobenius conjugates sqrt 2 over Q_5") {
  auto T = FieldTower::make(ctx(5), {Rat(-2), Rat(0), Rat(1)}, {Rat(-5), Rat(1)});
  auto w = T->omega();
  CHECK((w * w).congruent(T->from_rational(Rat(2))));
  CHECK(w.valuation() == Val(Rat(0)));

  auto sw = w.frobenius_K0();
  CHECK(sw.congruent(-w));  // the other root of x^2 - 2
  auto x = T->from_grid({{Rat(3), Rat(4)}});
  auto sx = x.frobenius_K0();
  CHECK(sx.congruent(T->from_grid({{Rat(3), Rat(-4)}})));
  CHECK(sx.frobenius_K0().congruent(x));  // order two

  // the norm x * sigma(x) lands in Q_p
  auto norm = x * sx;
  CHECK(norm.congruent(T->from_rational(Rat(9 - 2 * 16))));
}

TEST_CASE("frobenius fixes the prime field and rejects ramified input") {
  auto T = FieldTower::make(ctx(3), {Rat(-2), Rat(0), Rat(1)}, {Rat(-3), Rat(0), Rat(1)});
  CHECK(T->degree() == 4);
  auto c = T->from_rational(Rat(7, 9));
  CHECK(c.frobenius_K0().congruent(c));
  CHECK_THROWS_AS(T->pi().frobenius_K0(), NotUnramified);
  CHECK_THROWS_AS((T->omega() + T->pi()).frobenius_K0(), NotUnramified);
}

TEST_CASE("valuations on a mixed tower are exact") {
  auto T = FieldTower::make(ctx(3), {Rat(-2), Rat(0), Rat(1)}, {Rat(-3), Rat(0), Rat(1)});
  auto x = T->pi() * T->omega();  // val 1/2
  CHECK(x.valuation() == Val(Rat(1, 2)));
  auto y = x + T->from_rational(Rat(9));  // min(1/2, 2)
  CHECK(y.valuation() == Val(Rat(1, 2)));
  auto z = x.inverse();
  CHECK(z.valuation() == Val(Rat(-1, 2)));
  CHECK((T->from_rational(Rat(3)) * T->pi().pow(-2)).valuation() == Val(Rat(0)));
}

TEST_CASE("Eisenstein polynomial with unramified coefficients") {
  // E(u) = u^2 - 3*omega over Q_3(omega), omega^2 = 2
  auto T = FieldTower::make(
      ctx(3), {Rat(-2), Rat(0), Rat(1)},
      std::vector<std::vector<Rat>>{{Rat(0), Rat(-3)}, {Rat(0), Rat(0)}, {Rat(1)}});
  auto pi = T->pi();
  auto rhs = T->omega() * T->from_rational(Rat(3));
  CHECK((pi * pi).congruent(rhs));
  CHECK(pi.valuation() == Val(Rat(1, 2)));
}

TEST_CASE("Eisenstein validation rejects bad polynomials") {
  // constant term valuation 2
  CHECK_THROWS_AS(FieldTower::make(ctx(3), {Rat(0), Rat(1)}, {Rat(9), Rat(0), Rat(1)}),
                  PreconditionViolated);
  // unit middle coefficient
  CHECK_THROWS_AS(FieldTower::make(ctx(3), {Rat(0), Rat(1)}, {Rat(3), Rat(1), Rat(1)}),
                  PreconditionViolated);
  // reducible unramified polynomial
  CHECK_THROWS_AS(FieldTower::make(ctx(5), {Rat(-1), Rat(0), Rat(1)}, {Rat(-5), Rat(1)}),
                  NotUnramified);
}

TEST_CASE("field axioms hold on random elements") {
  std::mt19937_64 rng(77);
  std::vector<TowerPtr> towers = {
      FieldTower::qp(ctx(2)),
      FieldTower::make(ctx(2), {Rat(1), Rat(1), Rat(1)}, {Rat(-2), Rat(1)}),
      FieldTower::make(ctx(3), {Rat(-2), Rat(0), Rat(1)}, {Rat(-3), Rat(0), Rat(1)}),
      FieldTower::make(ctx(5), {Rat(0), Rat(1)}, {Rat(-5), Rat(0), Rat(0), Rat(1)}),
  };
  for (const auto& T : towers) {
    for (int trial = 0; trial < 40; ++trial) {
      auto x = random_element(T, rng), y = random_element(T, rng), z = random_element(T, rng);
      CHECK(((x + y) * z).congruent(x * z + y * z));
      CHECK((x * y).congruent(y * x));
      CHECK(((x * y) * z).congruent(x * (y * z)));
      if (!x.is_zero_at_precision()) {
        auto xi = x.inverse();
        CHECK((x * xi).congruent(T->one()));
      }
    }
  }
}

TEST_CASE("inverse of pi runs down the ladder exactly") {
  auto T = FieldTower::make(ctx(2), {Rat(0), Rat(1)},
                            {Rat(-2), Rat(0), Rat(0), Rat(0), Rat(1)});  // u^4 = 2
  auto pi = T->pi();
  CHECK(pi.valuation() == Val(Rat(1, 4)));
  auto inv = pi.inverse();
  CHECK(inv.valuation() == Val(Rat(-1, 4)));
  CHECK((pi.pow(4)).congruent(T->from_rational(Rat(2))));
  CHECK((inv.pow(4) * T->from_rational(Rat(2))).congruent(T->one()));
}

TEST_CASE("residue images") {
  auto T = FieldTower::make(ctx(3), {Rat(-2), Rat(0), Rat(1)}, {Rat(-3), Rat(0), Rat(1)});
  auto x = T->one() + T->omega() + T->pi().scale(PadicScalar::exact_int(3, T->cap(), 7));
  auto r = x.residue_image();
  CHECK(r == FqContext::Elem{1, 1});
  CHECK_THROWS_AS(T->pi().inverse().residue_image(), DomainViolation);
}

TEST_CASE("precision: hidden digits block strict valuations") {
  auto T = FieldTower::qp(ctx(2, 6));
  // 2^6 becomes invisible once the element is cut to six digits
  auto tiny = T->from_rational(Rat(64)).reduce_to(6);
  CHECK(tiny.valuation() == Val::inf());
  CHECK_THROWS_AS(tiny.valuation_strict(), PrecisionExhausted);
  CHECK(tiny.valuation_lower_bound() >= Rat(6));

  auto visible = T->from_rational(Rat(4)) + tiny;
  CHECK(visible.valuation() == Val(Rat(2)));
  CHECK(visible.valuation_strict() == Rat(2));  // 2 < 6: certified
}
