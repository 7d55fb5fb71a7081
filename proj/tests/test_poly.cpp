#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "isocat/poly.hpp"

using namespace isocat;

namespace {

TowerPtr qp(std::int64_t p, int prec = 12) {
  PrecisionContext ctx;
  ctx.p = p;
  ctx.pPrecision = prec;
  return FieldTower::qp(ctx);
}

TowerPtr ramified2(std::int64_t p, int prec = 12) {
  PrecisionContext ctx;
  ctx.p = p;
  ctx.pPrecision = prec;
  return FieldTower::make(ctx, {Rat(0), Rat(1)}, std::vector<Rat>{Rat(-static_cast<long>(p)), Rat(0), Rat(1)});
}

TowerPoly mk(const TowerPtr& T, const std::vector<Rat>& cs) { return tp_from_rationals(T, cs); }

// multiset comparison of roots at 6 certified digits
void check_roots(const TowerPoly& f, std::vector<FieldTowerElement> expected) {
  auto roots = tp_find_roots(f);
  long total = 0;
  for (const auto& [r, m] : roots) total += m;
  CHECK(total == static_cast<long>(expected.size()));
  for (const auto& [r, m] : roots) {
    for (long i = 0; i < m; ++i) {
      bool found = false;
      for (size_t j = 0; j < expected.size(); ++j) {
        if (r.congruent(expected[j], 6)) {
          expected.erase(expected.begin() + static_cast<long>(j));
          found = true;
          break;
        }
      }
      CHECK(found);
    }
  }
  CHECK(expected.empty());
}

}  // namespace

TEST_CASE("arithmetic matches hand-expanded products and division inverts") {
  auto T = qp(7);
  // (x^2 + 1)(x - 3) = x^3 - 3x^2 + x - 3
  auto prod = tp_mul(mk(T, {Rat(1), Rat(0), Rat(1)}), mk(T, {Rat(-3), Rat(1)}));
  CHECK(tp_zero_at_precision(tp_sub(prod, mk(T, {Rat(-3), Rat(1), Rat(-3), Rat(1)}))));

  auto f = mk(T, {Rat(1), Rat(-2), Rat(0), Rat(1)});  // x^3 - 2x + 1
  CHECK(tp_eval(f, T->from_rational(Rat(2))).congruent(T->from_rational(Rat(5))));
  CHECK(tp_eval(tp_derivative(f), T->from_rational(Rat(2))).congruent(T->from_rational(Rat(10))));

  std::mt19937 rng(3);
  std::uniform_int_distribution<int> coef(-10, 10);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Rat> ac(6), bc(4);
    for (auto& c : ac) c = coef(rng);
    for (auto& c : bc) c = coef(rng);
    bc.back() = 1 + std::abs(coef(rng));  // keep the divisor's degree visible
    auto A = mk(T, ac), B = mk(T, bc);
    if (tp_deg(B) < 1) continue;
    TowerPoly q, r;
    tp_divrem(A, B, q, r);
    CHECK(tp_deg(r) < tp_deg(B));
    CHECK(tp_zero_at_precision(tp_sub(A, tp_add(tp_mul(q, B), r))));
  }

  // composition: f(x+1) at 1 equals f at 2
  auto shifted = tp_compose(f, mk(T, {Rat(1), Rat(1)}));
  CHECK(tp_eval(shifted, T->one()).congruent(T->from_rational(Rat(5))));
}

TEST_CASE("resultants and discriminant valuations match frozen values") {
  auto T2 = qp(2), T3 = qp(3);
  // res(x - a, x - b) = a - b
  auto r1 = tp_resultant(mk(T2, {Rat(-5), Rat(1)}), mk(T2, {Rat(-3), Rat(1)}));
  CHECK(r1.congruent(T2->from_rational(Rat(2))));
  // res((x-1)(x-2), x-3) = (1-3)(2-3) = 2
  auto r2 = tp_resultant(mk(T2, {Rat(2), Rat(-3), Rat(1)}), mk(T2, {Rat(-3), Rat(1)}));
  CHECK(r2.congruent(T2->from_rational(Rat(2))));

  // disc(x^2 - p) = 4p
  auto d3 = tp_disc_valuation(mk(T3, {Rat(-3), Rat(0), Rat(1)}));
  CHECK(d3.is_finite());
  CHECK(d3.finite() == Rat(1));
  auto d2 = tp_disc_valuation(mk(T2, {Rat(-2), Rat(0), Rat(1)}));
  CHECK(d2.finite() == Rat(3));
  // disc((x-1)(x-2)) = 1
  CHECK(tp_disc_valuation(mk(T2, {Rat(2), Rat(-3), Rat(1)})).finite() == Rat(0));
  // (x-2)^2 has discriminant zero
  CHECK_FALSE(tp_disc_valuation(mk(T2, {Rat(4), Rat(-4), Rat(1)})).is_finite());
}

TEST_CASE("newton polygons recover root valuations") {
  auto T5 = qp(5);
  // (x-1)(x-5)(x-25): root valuations 0, 1, 2
  auto f = tp_mul(tp_mul(mk(T5, {Rat(-1), Rat(1)}), mk(T5, {Rat(-5), Rat(1)})), mk(T5, {Rat(-25), Rat(1)}));
  auto segs = tp_newton_polygon(f);
  REQUIRE(segs.size() == 3);
  CHECK(segs[0] == PolygonSegment{Rat(0), 1});
  CHECK(segs[1] == PolygonSegment{Rat(1), 1});
  CHECK(segs[2] == PolygonSegment{Rat(2), 1});

  // x^2 - 5: one segment of length 2 at valuation 1/2
  auto g = tp_newton_polygon(mk(T5, {Rat(-5), Rat(0), Rat(1)}));
  REQUIRE(g.size() == 1);
  CHECK(g[0] == PolygonSegment{Rat(1, 2), 2});

  // (x-5)(x-1/5): valuations -1 and 1
  auto h = tp_newton_polygon(mk(T5, {Rat(1), Rat(-26, 5), Rat(1)}));
  REQUIRE(h.size() == 2);
  CHECK(h[0] == PolygonSegment{Rat(-1), 1});
  CHECK(h[1] == PolygonSegment{Rat(1), 1});
}

TEST_CASE("hidden coefficients below the hull are refused in strict mode") {
  auto T5 = qp(5);
  auto x = T5->from_rational(Rat(3));
  auto shallow = x.reduce_to(1) - x.reduce_to(1);  // zero known only mod 5
  TowerPoly f{T5->from_rational(Rat(125)), shallow, T5->one()};
  CHECK_THROWS_AS(tp_newton_polygon(f, true), PrecisionExhausted);
  auto segs = tp_newton_polygon(f, false);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0] == PolygonSegment{Rat(3, 2), 2});

  // the same hidden coefficient known one digit deeper sits above the hull
  auto deep = x.reduce_to(2) - x.reduce_to(2);
  TowerPoly g{T5->from_rational(Rat(125)), deep, T5->one()};
  auto segsOk = tp_newton_polygon(g, true);
  REQUIRE(segsOk.size() == 1);
  CHECK(segsOk[0] == PolygonSegment{Rat(3, 2), 2});
}

TEST_CASE("modular inverses verify and reject non-coprime input") {
  auto T7 = qp(7);
  // inverse of (x-1) modulo x^2 is -x-1
  auto inv = tp_modinv(mk(T7, {Rat(-1), Rat(1)}), mk(T7, {Rat(0), Rat(0), Rat(1)}));
  CHECK(tp_zero_at_precision(tp_sub(inv, mk(T7, {Rat(-1), Rat(-1)}))));

  auto m = mk(T7, {Rat(-2), Rat(0), Rat(0), Rat(1)});  // x^3 - 2, irreducible residue
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> coef(-6, 6);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<Rat> ac{coef(rng), coef(rng), coef(rng)};
    auto a = mk(T7, ac);
    if (tp_deg(a) < 0) continue;
    auto u = tp_modinv(a, m);
    TowerPoly q, r;
    tp_divrem(tp_mul(a, u), m, q, r);
    CHECK(tp_zero_at_precision(tp_sub(r, TowerPoly{T7->one()})));
  }

  // shared factor (x-1): no inverse
  auto mm = mk(T7, {Rat(1), Rat(-2), Rat(1)});  // (x-1)^2
  CHECK_THROWS_AS(tp_modinv(mk(T7, {Rat(-1), Rat(1)}), mm), InvertNonUnit);
}

TEST_CASE("factoring splits residues that only collide modulo p") {
  auto T2 = qp(2);
  // (x-1)(x-3): both roots are 1 mod 2, separated by a recentering shift
  auto f = mk(T2, {Rat(3), Rat(-4), Rat(1)});
  check_roots(f, {T2->from_rational(Rat(1)), T2->from_rational(Rat(3))});
}

TEST_CASE("factoring handles distinct residues, slope splits, and chains") {
  auto T5 = qp(5);
  check_roots(mk(T5, {Rat(2), Rat(-3), Rat(1)}), {T5->from_rational(Rat(1)), T5->from_rational(Rat(2))});

  auto T3 = qp(3);
  check_roots(mk(T3, {Rat(3), Rat(-4), Rat(1)}), {T3->from_rational(Rat(1)), T3->from_rational(Rat(3))});

  // three distinct slopes
  auto f = tp_mul(tp_mul(mk(T5, {Rat(-1), Rat(1)}), mk(T5, {Rat(-5), Rat(1)})), mk(T5, {Rat(-25), Rat(1)}));
  check_roots(f, {T5->from_rational(Rat(1)), T5->from_rational(Rat(5)), T5->from_rational(Rat(25))});

  // negative slope: (x-3)(x-1/3)
  check_roots(mk(T3, {Rat(1), Rat(-10, 3), Rat(1)}),
              {T3->from_rational(Rat(3)), T3->from_rational(Rat(1, 3))});
}

TEST_CASE("irreducibility certificates: fractional slope and inert residue") {
  auto T2 = qp(2);
  auto fs = tp_factor_monic(mk(T2, {Rat(-2), Rat(0), Rat(1)}));  // x^2 - 2
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].multiplicity == 1);
  CHECK(fs[0].certifiedIrreducible);
  CHECK(fs[0].poly.size() == 3);

  auto gs = tp_factor_monic(mk(T2, {Rat(1), Rat(1), Rat(1)}));  // x^2 + x + 1
  REQUIRE(gs.size() == 1);
  CHECK(gs[0].certifiedIrreducible);
  CHECK(tp_find_roots(mk(T2, {Rat(1), Rat(1), Rat(1)})).empty());
}

TEST_CASE("repeated factors are recovered with honest multiplicities") {
  auto T2 = qp(2);
  // (x-2)^2
  auto fs = tp_factor_monic(mk(T2, {Rat(4), Rat(-4), Rat(1)}));
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].multiplicity == 2);
  check_roots(mk(T2, {Rat(4), Rat(-4), Rat(1)}), {T2->from_rational(Rat(2)), T2->from_rational(Rat(2))});

  // (x-2)^2 (x-1): mixed multiplicities whose residues also collide mod 2
  auto g = tp_mul(mk(T2, {Rat(4), Rat(-4), Rat(1)}), mk(T2, {Rat(-1), Rat(1)}));
  check_roots(g, {T2->from_rational(Rat(2)), T2->from_rational(Rat(2)), T2->from_rational(Rat(1))});

  // (x^2 - 2)^2: repeated irreducible quadratic
  auto h = tp_mul(mk(T2, {Rat(-2), Rat(0), Rat(1)}), mk(T2, {Rat(-2), Rat(0), Rat(1)}));
  auto hf = tp_factor_monic(h);
  REQUIRE(hf.size() == 1);
  CHECK(hf[0].multiplicity == 2);
  CHECK(hf[0].certifiedIrreducible);
  CHECK(hf[0].poly.size() == 3);

  // roots at zero are stripped exactly: x^2 (x-1)
  auto z = mk(T2, {Rat(0), Rat(0), Rat(-1), Rat(1)});
  check_roots(z, {T2->zero(), T2->zero(), T2->from_rational(Rat(1))});
}

TEST_CASE("reciprocal transform reaches polygons whose top slope is integral") {
  auto T2 = qp(2);
  // (x^2 - 2)(x - 2): lowest slope 1/2 is fractional, highest slope 1 is not
  auto f = tp_mul(mk(T2, {Rat(-2), Rat(0), Rat(1)}), mk(T2, {Rat(-2), Rat(1)}));
  auto fs = tp_factor_monic(f);
  REQUIRE(fs.size() == 2);
  CHECK(fs[0].poly.size() == 2);  // x - 2
  CHECK((-fs[0].poly[0]).congruent(T2->from_rational(Rat(2)), 6));
  CHECK(fs[1].poly.size() == 3);  // x^2 - 2
  CHECK(fs[1].certifiedIrreducible);
}

TEST_CASE("uniformizer roots of eisenstein polynomials in ramified towers") {
  auto T2 = ramified2(2);  // u^2 = 2
  auto E2 = mk(T2, {Rat(-2), Rat(0), Rat(1)});
  check_roots(E2, {T2->pi(), -T2->pi()});

  auto T3 = ramified2(3);  // u^2 = 3
  auto E3 = mk(T3, {Rat(-3), Rat(0), Rat(1)});
  check_roots(E3, {T3->pi(), -T3->pi()});
}

TEST_CASE("eisenstein roots with an unramified coefficient layer") {
  PrecisionContext ctx;
  ctx.p = 3;
  ctx.pPrecision = 12;
  // K0 = Q_3(omega) with omega^2 + 1 = 0; pi^2 = 3 omega
  auto T = FieldTower::make(ctx, {Rat(1), Rat(0), Rat(1)},
                            std::vector<std::vector<Rat>>{{Rat(0), Rat(-3)}, {Rat(0), Rat(0)}, {Rat(1), Rat(0)}});
  TowerPoly E{-(T->omega().scale(PadicScalar::exact_int(3, T->cap(), 3))), T->zero(), T->one()};
  check_roots(E, {T->pi(), -T->pi()});
}

TEST_CASE("close roots in a ramified tower separate through deep shifts") {
  auto T = ramified2(3, 12);  // pi^2 = 3
  auto pi = T->pi();
  auto one = T->one();
  auto a = pi * (one + pi);
  auto b = pi * (one + pi).inverse();
  // (x - a)(x - b) with a*b = 3 and both roots congruent to pi mod pi^2
  TowerPoly f{a * b, -(a + b), one};
  auto roots = tp_find_roots(f);
  REQUIRE(roots.size() == 2);
  bool matchA = roots[0].first.congruent(a, 8) || roots[1].first.congruent(a, 8);
  bool matchB = roots[0].first.congruent(b, 8) || roots[1].first.congruent(b, 8);
  CHECK(matchA);
  CHECK(matchB);
}

TEST_CASE("random split polynomials factor back to their roots") {
  auto T5 = qp(5, 10);
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> unit(1, 4);
  std::uniform_int_distribution<int> vald(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<FieldTowerElement> roots;
    TowerPoly f{T5->one()};
    int d = 2 + trial % 2;
    for (int i = 0; i < d; ++i) {
      Rat r = Rat(unit(rng) + 5 * unit(rng)) * ipow(BigInt(5), vald(rng));
      roots.push_back(T5->from_rational(r));
      f = tp_mul(f, TowerPoly{-roots.back(), T5->one()});
    }
    // collisions modulo 5 are likely; the factorizer must undo them
    check_roots(f, roots);
  }
}

TEST_CASE("factorization output is deterministic") {
  auto T2 = qp(2);
  auto f = tp_mul(tp_mul(mk(T2, {Rat(-1), Rat(1)}), mk(T2, {Rat(-3), Rat(1)})), mk(T2, {Rat(-2), Rat(0), Rat(1)}));
  auto s1 = tp_factor_monic(f);
  auto s2 = tp_factor_monic(f);
  REQUIRE(s1.size() == s2.size());
  for (size_t i = 0; i < s1.size(); ++i) CHECK(tp_str(s1[i].poly) == tp_str(s2[i].poly));
}

TEST_CASE("residue lifts embed the residue field") {
  PrecisionContext ctx;
  ctx.p = 3;
  ctx.pPrecision = 8;
  auto T = FieldTower::make(ctx, {Rat(1), Rat(0), Rat(1)}, std::vector<Rat>{Rat(-3), Rat(1)});
  const FqContext& F = T->residue_field();
  for (long v = 0; v < 9; ++v) {
    auto elem = F.element_at(BigInt(v));
    auto lifted = tower_lift_residue(T, elem);
    CHECK(F.eq(lifted.residue_image(), elem));
  }
}
