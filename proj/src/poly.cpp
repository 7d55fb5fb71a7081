#include "isocat/poly.hpp"

#include <algorithm>
#include <random>

#include "isocat/matrix.hpp"
#include "isocat/rings.hpp"

namespace isocat {
namespace {

bool exact_zero(const FieldTowerElement& x) { return TowerOps(x.tower()).exactly_zero(x); }

long rat_ceil(const Rat& q) {
  BigInt n = boost::multiprecision::numerator(q), d = boost::multiprecision::denominator(q);
  BigInt t = n / d;
  if (n % d != 0 && n > 0) ++t;
  return t.convert_to<long>();
}

bool is_tower_integer(const Rat& q) { return boost::multiprecision::denominator(q) == 1; }

// leading coefficient must be visibly nonzero for the degree to be meaningful
void require_visible_lead(const TowerPoly& a, const char* who) {
  if (a.empty()) throw DomainViolation(std::string(who) + ": zero polynomial");
  if (a.back().is_zero_at_precision())
    throw PrecisionExhausted(std::string(who) + ": leading coefficient is hidden below working precision");
}

TowerPoly force_monic_exact(TowerPoly a) {
  a.back() = a.back().tower()->one();
  return a;
}

FqPoly fq_poly_pow(const FqContext& F, const FqPoly& base, long m) {
  FqPoly r{F.one()};
  for (long i = 0; i < m; ++i) r = fq_poly_mul(F, r, base);
  return r;
}

TowerPoly lift_fq_poly(const TowerPtr& T, const FqPoly& a) {
  TowerPoly r;
  r.reserve(a.size());
  for (const auto& c : a) r.push_back(tower_lift_residue(T, c));
  return tp_trim(std::move(r));
}

FqPoly residue_poly(const TowerPoly& a) {
  FqPoly r;
  r.reserve(a.size());
  for (const auto& c : a) r.push_back(c.residue_image());
  return r;
}

// y = x / pi^sve applied to a monic polynomial whose lowest slope is sve/e:
// h_i = g_i * pi^((i-d)*sve), monic with integral coefficients by convexity
TowerPoly to_slope_frame(const TowerPoly& g, long sve) {
  const TowerPtr& T = g[0].tower();
  long d = static_cast<long>(g.size()) - 1;
  TowerPoly h(g.size(), T->zero());
  h[static_cast<size_t>(d)] = T->one();
  FieldTowerElement step = T->pi().pow(-sve), pw = T->one();
  for (long t = 1; t <= d; ++t) {
    pw = pw * step;
    h[static_cast<size_t>(d - t)] = g[static_cast<size_t>(d - t)] * pw;
  }
  return h;
}

// inverse of to_slope_frame on a monic factor of h
TowerPoly from_slope_frame(const TowerPoly& hFactor, long sve) {
  const TowerPtr& T = hFactor[0].tower();
  long r = static_cast<long>(hFactor.size()) - 1;
  TowerPoly f(hFactor.size(), T->zero());
  f[static_cast<size_t>(r)] = T->one();
  FieldTowerElement step = T->pi().pow(sve), pw = T->one();
  for (long t = 1; t <= r; ++t) {
    pw = pw * step;
    f[static_cast<size_t>(r - t)] = hFactor[static_cast<size_t>(r - t)] * pw;
  }
  return f;
}

// linear Hensel lift of the coprime residue split hbar = g1bar * g2bar with
// g1bar monic; returns the lifted monic factor corresponding to g1bar
TowerPoly hensel_lift_first(const TowerPtr& T, const TowerPoly& h, const FqPoly& g1bar,
                            const FqPoly& g2bar) {
  const FqContext& F = T->residue_field();
  FqPoly a1bar, a2bar;
  FqPoly gc = fq_poly_exgcd(F, g1bar, g2bar, a1bar, a2bar);
  if (fq_poly_deg(F, gc) != 0)
    throw NonGenericFrobenius("residue factors are not coprime; cannot lift the split");

  TowerPoly g1 = force_monic_exact(lift_fq_poly(T, g1bar));
  TowerPoly g2 = lift_fq_poly(T, g2bar);
  TowerPoly a2 = lift_fq_poly(T, a2bar);
  long itMax = (T->cap() + 6) * T->e() + 12;
  for (long it = 0;; ++it) {
    TowerPoly err = tp_sub(h, tp_mul(g1, g2));
    if (tp_zero_at_precision(err)) break;
    if (it > itMax) throw NoConvergence("factor lifting stalled before reaching working precision");
    TowerPoly q, d1;
    tp_divrem(tp_mul(a2, err), g1, q, d1);
    TowerPoly t = tp_sub(err, tp_mul(d1, g2));
    TowerPoly d2, rem;
    tp_divrem(t, g1, d2, rem);  // remainder is next iteration's business
    g1 = tp_add(g1, d1);
    g2 = tp_add(g2, d2);
  }
  return g1;
}

// exact-arithmetic Euclid used only to separate repeated spectral parts; any
// precision ambiguity along the chain aborts the attempt
TowerPoly repeated_part_gcd(TowerPoly a, TowerPoly b) {
  a = tp_trim(std::move(a));
  b = tp_trim(std::move(b));
  while (!b.empty()) {
    if (tp_zero_at_precision(b)) break;
    if (b.back().is_zero_at_precision())
      throw NonGenericFrobenius("repeated spectral part is not separable at working precision");
    TowerPoly q, r;
    tp_divrem(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<TowerFactor> factor_rec(const TowerPtr& T, TowerPoly f, long& budget);

// disc(f) is zero at precision: strip the repeated part with gcd(f, f'),
// factor the squarefree part, and recover multiplicities by division
std::vector<TowerFactor> factor_repeated(const TowerPtr& T, const TowerPoly& g, long& budget) {
  long d = tp_deg(g);
  TowerPoly u = repeated_part_gcd(g, tp_derivative(g));
  if (tp_deg(u) <= 0)
    throw NonGenericFrobenius("discriminant vanishes at working precision but no repeated part is visible");
  u = tp_monic(u);
  TowerPoly w, rem;
  tp_divrem(g, u, w, rem);
  if (!tp_zero_at_precision(rem))
    throw NonGenericFrobenius("repeated spectral part does not divide at working precision");
  Val vdw = tp_disc_valuation(w);
  if (!vdw.is_finite())
    throw NonGenericFrobenius("squarefree part is still degenerate at working precision");
  if (vdw.finite() > 0) budget += T->e() * (rat_ceil(vdw.finite()) + 1);
  std::vector<TowerFactor> base = factor_rec(T, force_monic_exact(tp_monic(w)), budget);
  std::vector<TowerFactor> out;
  long total = 0;
  for (auto& fac : base) {
    if (fac.multiplicity != 1)
      throw NonGenericFrobenius("squarefree part factored with unexpected multiplicity");
    long m = 0;
    TowerPoly h = g;
    for (;;) {
      TowerPoly q, r;
      if (tp_deg(h) < tp_deg(fac.poly)) break;
      tp_divrem(h, fac.poly, q, r);
      if (!tp_zero_at_precision(r)) break;
      ++m;
      h = tp_trim(std::move(q));
    }
    if (m < 1) throw NonGenericFrobenius("factor of the squarefree part does not divide the input");
    total += m * tp_deg(fac.poly);
    out.push_back({fac.poly, m, fac.certifiedIrreducible});
  }
  if (total != d) throw NonGenericFrobenius("multiplicities do not account for the full degree");
  return out;
}

TowerPoly reciprocal_monic(const TowerPoly& g) {
  TowerPoly r(g.rbegin(), g.rend());
  require_visible_lead(r, "reciprocal");
  return force_monic_exact(tp_monic(r));
}

// f is monic with exact-one leading coefficient and trimmed
std::vector<TowerFactor> factor_rec(const TowerPtr& T, TowerPoly f, long& budget) {
  long d = tp_deg(f);
  if (d <= 0) return {};
  if (d == 1) return {{f, 1, true}};

  // split off roots at zero
  size_t k = 0;
  while (k < f.size() && exact_zero(f[k])) ++k;
  if (k > 0) {
    if (f[k].is_zero_at_precision())
      throw PrecisionExhausted("root at zero is not separable at working precision");
    TowerPoly g(f.begin() + static_cast<long>(k), f.end());
    std::vector<TowerFactor> out{{TowerPoly{T->zero(), T->one()}, static_cast<long>(k), true}};
    if (tp_deg(g) > 0)
      for (auto& fac : factor_rec(T, std::move(g), budget)) out.push_back(std::move(fac));
    return out;
  }

  Val vd = tp_disc_valuation(f);
  if (!vd.is_finite()) return factor_repeated(T, f, budget);

  auto polygon = tp_newton_polygon(f, true);
  Rat v = polygon.front().rootValuation;
  Rat ve = v * T->e();
  if (!is_tower_integer(ve)) {
    Rat vre = -polygon.back().rootValuation * T->e();
    if (is_tower_integer(vre)) {
      // work with the reciprocal polynomial, whose lowest slope is tower-rational
      std::vector<TowerFactor> sub = factor_rec(T, reciprocal_monic(f), budget);
      std::vector<TowerFactor> out;
      for (auto& fac : sub) out.push_back({reciprocal_monic(fac.poly), fac.multiplicity, fac.certifiedIrreducible});
      return out;
    }
    if (polygon.size() == 1) {
      // a root would generate ramification of order den(ve), so every factor
      // has degree divisible by it
      if (boost::multiprecision::denominator(ve) == d) return {{f, 1, true}};
      throw NonGenericFrobenius("fractional slope does not pin down the factor degrees");
    }
    throw NonGenericFrobenius("no tower-rational slope available to split the polygon");
  }

  long sve = boost::multiprecision::numerator(ve).convert_to<long>();
  TowerPoly h = to_slope_frame(f, sve);
  const FqContext& F = T->residue_field();
  FqPoly hbar = fq_poly_trim(F, residue_poly(h));
  if (fq_poly_deg(F, hbar) != d)
    throw PrecisionExhausted("slope-frame residue lost its degree");  // cannot happen for monic input

  std::mt19937_64 rng(0x15eedULL);
  std::vector<FqFactor> rf = fq_poly_factor(F, hbar, rng);

  if (rf.size() >= 2) {
    // lift the coprime split (first factor power) vs (everything else)
    FqPoly g1bar = fq_poly_pow(F, rf[0].poly, rf[0].multiplicity);
    FqPoly g2bar{F.one()};
    for (size_t i = 1; i < rf.size(); ++i)
      g2bar = fq_poly_mul(F, g2bar, fq_poly_pow(F, rf[i].poly, rf[i].multiplicity));
    TowerPoly g1 = hensel_lift_first(T, h, g1bar, g2bar);
    TowerPoly g2, rem;
    tp_divrem(h, g1, g2, rem);
    if (!tp_zero_at_precision(rem))
      throw NoConvergence("lifted factor does not divide at working precision");
    std::vector<TowerFactor> out;
    for (TowerPoly part : {from_slope_frame(g1, sve), from_slope_frame(tp_trim(std::move(g2)), sve)})
      for (auto& fac : factor_rec(T, force_monic_exact(std::move(part)), budget))
        out.push_back(std::move(fac));
    return out;
  }

  const FqFactor& only = rf[0];
  if (only.multiplicity == 1) return {{f, 1, true}};  // irreducible residue, monic: irreducible

  if (fq_poly_deg(F, only.poly) == 1) {
    // all residue roots collide: recenter at the lifted root and go deeper.
    // The shift happens in the original coordinates so that exact input
    // coefficients stay exact; the slope frame would taint them with the
    // precision loss of inverting powers of the uniformizer.
    if (--budget < 0) throw NoConvergence("shift recursion exceeded its discriminant budget");
    FieldTowerElement center = tower_lift_residue(T, F.neg(only.poly[0])) * T->pi().pow(sve);
    TowerPoly shifted = tp_compose(f, TowerPoly{center, T->one()});
    std::vector<TowerFactor> sub = factor_rec(T, force_monic_exact(tp_trim(std::move(shifted))), budget);
    std::vector<TowerFactor> out;
    TowerPoly unshift{-center, T->one()};
    for (auto& fac : sub)
      out.push_back({tp_compose(fac.poly, unshift), fac.multiplicity, fac.certifiedIrreducible});
    return out;
  }
  throw NonGenericFrobenius("repeated non-linear residue factor needs an unramified shift");
}

}  // namespace

TowerPoly tp_from_rationals(const TowerPtr& T, const std::vector<Rat>& coeffs) {
  TowerPoly r;
  r.reserve(coeffs.size());
  for (const auto& q : coeffs) r.push_back(T->from_rational(q));
  return tp_trim(std::move(r));
}

TowerPoly tp_trim(TowerPoly a) {
  while (!a.empty() && exact_zero(a.back())) a.pop_back();
  return a;
}

long tp_deg(const TowerPoly& a) {
  TowerPoly t = tp_trim(a);
  return static_cast<long>(t.size()) - 1;
}

bool tp_zero_at_precision(const TowerPoly& a) {
  for (const auto& c : a)
    if (!c.is_zero_at_precision()) return false;
  return true;
}

std::string tp_str(const TowerPoly& a, const std::string& var) {
  if (a.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!s.empty()) s += " + ";
    s += "(" + a[i].str() + ")";
    if (i == 1) s += "*" + var;
    if (i > 1) s += "*" + var + "^" + std::to_string(i);
  }
  return s;
}

TowerPoly tp_add(const TowerPoly& a, const TowerPoly& b) {
  TowerPoly r = a.size() >= b.size() ? a : b;
  const TowerPoly& s = a.size() >= b.size() ? b : a;
  for (size_t i = 0; i < s.size(); ++i) r[i] = r[i] + s[i];
  return tp_trim(std::move(r));
}

TowerPoly tp_neg(TowerPoly a) {
  for (auto& c : a) c = -c;
  return a;
}

TowerPoly tp_sub(const TowerPoly& a, const TowerPoly& b) { return tp_add(a, tp_neg(b)); }

TowerPoly tp_mul(const TowerPoly& a, const TowerPoly& b) {
  if (a.empty() || b.empty()) return {};
  const TowerPtr& T = a[0].tower();
  TowerPoly r(a.size() + b.size() - 1, T->zero());
  for (size_t i = 0; i < a.size(); ++i) {
    if (exact_zero(a[i])) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  }
  return tp_trim(std::move(r));
}

TowerPoly tp_scale(TowerPoly a, const FieldTowerElement& c) {
  for (auto& x : a) x = x * c;
  return tp_trim(std::move(a));
}

TowerPoly tp_monic(const TowerPoly& a) {
  TowerPoly t = tp_trim(a);
  require_visible_lead(t, "tp_monic");
  FieldTowerElement inv = t.back().inverse();
  for (auto& c : t) c = c * inv;
  // the leading coefficient is one at working precision; normalize it exactly
  t.back() = t.back().tower()->one();
  return t;
}

void tp_divrem(const TowerPoly& num, const TowerPoly& den, TowerPoly& quo, TowerPoly& rem) {
  TowerPoly d = tp_trim(den);
  require_visible_lead(d, "tp_divrem");
  TowerPoly r = num;
  long dn = static_cast<long>(d.size()) - 1;
  long top = static_cast<long>(r.size()) - 1;
  if (top < dn) {
    quo = {};
    rem = tp_trim(std::move(r));
    return;
  }
  const TowerPtr& T = d[0].tower();
  FieldTowerElement lcInv = d.back().inverse();
  quo.assign(static_cast<size_t>(top - dn + 1), T->zero());
  for (long i = top; i >= dn; --i) {
    if (exact_zero(r[static_cast<size_t>(i)])) continue;
    FieldTowerElement c = r[static_cast<size_t>(i)] * lcInv;
    quo[static_cast<size_t>(i - dn)] = c;
    for (long t = 0; t <= dn; ++t)
      r[static_cast<size_t>(i - dn + t)] = r[static_cast<size_t>(i - dn + t)] - c * d[static_cast<size_t>(t)];
  }
  // slots at or above the divisor degree are zero at working precision now
  r.resize(static_cast<size_t>(dn));
  quo = tp_trim(std::move(quo));
  rem = tp_trim(std::move(r));
}

FieldTowerElement tp_eval(const TowerPoly& a, const FieldTowerElement& x) {
  const TowerPtr& T = x.tower();
  FieldTowerElement r = T->zero();
  for (size_t i = a.size(); i-- > 0;) r = r * x + a[i];
  return r;
}

TowerPoly tp_derivative(const TowerPoly& a) {
  if (a.size() <= 1) return {};
  const TowerPtr& T = a[0].tower();
  TowerPoly r;
  r.reserve(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i)
    r.push_back(a[i].scale(PadicScalar::exact_int(T->p(), T->cap(), BigInt(i))));
  return tp_trim(std::move(r));
}

TowerPoly tp_compose(const TowerPoly& f, const TowerPoly& g) {
  if (f.empty()) return {};
  TowerPoly r{f.back()};
  for (size_t i = f.size() - 1; i-- > 0;) r = tp_add(tp_mul(r, g), TowerPoly{f[i]});
  return tp_trim(std::move(r));
}

TowerPoly tp_modinv(const TowerPoly& a, const TowerPoly& m) {
  TowerPoly mm = tp_trim(m);
  require_visible_lead(mm, "tp_modinv");
  if (tp_deg(mm) < 1) throw DomainViolation("tp_modinv: modulus must have positive degree");
  const TowerPtr& T = mm[0].tower();
  TowerPoly q0, r1;
  tp_divrem(a, mm, q0, r1);
  TowerPoly r0 = mm;
  TowerPoly u0, u1{T->one()};
  while (true) {
    if (r1.empty() || tp_zero_at_precision(r1))
      throw InvertNonUnit("tp_modinv: not coprime at working precision");
    if (r1.back().is_zero_at_precision())
      throw PrecisionExhausted("tp_modinv: gcd chain degree is ambiguous at working precision");
    if (static_cast<long>(r1.size()) - 1 == 0) {
      FieldTowerElement inv = r1[0].inverse();
      TowerPoly res = tp_scale(u1, inv);
      TowerPoly q, resm;
      tp_divrem(res, mm, q, resm);
      // a-posteriori certificate: a * res = 1 (mod m) at working precision
      TowerPoly check = tp_sub(tp_mul(a, resm), TowerPoly{T->one()});
      TowerPoly cq, cr;
      tp_divrem(check, mm, cq, cr);
      if (!tp_zero_at_precision(cr))
        throw PrecisionExhausted("tp_modinv: inverse failed its verification");
      return resm;
    }
    TowerPoly q, r2;
    tp_divrem(r0, r1, q, r2);
    TowerPoly u2 = tp_sub(u0, tp_mul(q, u1));
    r0 = std::move(r1);
    r1 = std::move(r2);
    u0 = std::move(u1);
    u1 = std::move(u2);
  }
}

FieldTowerElement tp_resultant(const TowerPoly& f, const TowerPoly& g) {
  TowerPoly a = tp_trim(f), b = tp_trim(g);
  if (a.empty() || b.empty()) {
    const TowerPtr& T = (a.empty() ? b : a)[0].tower();
    return T->zero();
  }
  const TowerPtr& T = a[0].tower();
  long da = static_cast<long>(a.size()) - 1, db = static_cast<long>(b.size()) - 1;
  if (da == 0) return a[0].pow(db);
  if (db == 0) return b[0].pow(da);
  TowerOps R{T};
  Mat<TowerOps> syl = mat_zero(R, static_cast<size_t>(da + db), static_cast<size_t>(da + db));
  for (long r = 0; r < db; ++r)
    for (long t = 0; t <= da; ++t) syl[static_cast<size_t>(r)][static_cast<size_t>(r + t)] = a[static_cast<size_t>(da - t)];
  for (long r = 0; r < da; ++r)
    for (long t = 0; t <= db; ++t)
      syl[static_cast<size_t>(db + r)][static_cast<size_t>(r + t)] = b[static_cast<size_t>(db - t)];
  return mat_det(R, syl);
}

Val tp_disc_valuation(const TowerPoly& f) {
  TowerPoly a = tp_trim(f);
  require_visible_lead(a, "tp_disc_valuation");
  if (tp_deg(a) <= 1) return Val(Rat(0));
  return tp_resultant(a, tp_derivative(a)).valuation();
}

std::vector<PolygonSegment> tp_newton_polygon(const TowerPoly& f, bool strict) {
  TowerPoly a = tp_trim(f);
  require_visible_lead(a, "tp_newton_polygon");
  if (a.size() < 2) return {};
  if (a[0].is_zero_at_precision()) {
    if (exact_zero(a[0])) throw DomainViolation("tp_newton_polygon: strip roots at zero first");
    if (strict) throw PrecisionExhausted("tp_newton_polygon: constant term is hidden below working precision");
  }
  struct Pt {
    Rat x, y;
  };
  std::vector<Pt> pts;
  std::vector<Pt> hidden;  // lower bounds for coefficients invisible at precision
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero_at_precision()) {
      hidden.push_back({Rat(i), a[i].valuation_lower_bound()});
      continue;
    }
    Rat v = strict ? a[i].valuation_strict() : a[i].valuation().finite();
    pts.push_back({Rat(i), v});
  }
  // lower convex hull, left to right (slopes strictly increasing)
  std::vector<Pt> hull;
  auto cross = [](const Pt& o, const Pt& p, const Pt& q) {
    return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x);
  };
  for (const auto& pt : pts) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), pt) <= 0) hull.pop_back();
    hull.push_back(pt);
  }
  if (strict) {
    // a hidden coefficient must not be able to dip below the hull
    for (const auto& hd : hidden) {
      for (size_t s = 0; s + 1 < hull.size(); ++s) {
        if (hd.x <= hull[s].x || hd.x >= hull[s + 1].x) continue;
        Rat height = hull[s].y + (hull[s + 1].y - hull[s].y) * (hd.x - hull[s].x) / (hull[s + 1].x - hull[s].x);
        if (hd.y < height)
          throw PrecisionExhausted("tp_newton_polygon: hidden coefficient could change the hull");
      }
    }
  }
  std::vector<PolygonSegment> segs;
  for (size_t s = 0; s + 1 < hull.size(); ++s) {
    Rat slope = (hull[s + 1].y - hull[s].y) / (hull[s + 1].x - hull[s].x);
    long len = rat_ceil(hull[s + 1].x - hull[s].x);
    segs.push_back({-slope, len});
  }
  std::reverse(segs.begin(), segs.end());
  return segs;
}

std::vector<TowerFactor> tp_factor_monic(const TowerPoly& f) {
  TowerPoly a = tp_trim(f);
  require_visible_lead(a, "tp_factor_monic");
  const TowerPtr& T = a[0].tower();
  TowerPoly g = force_monic_exact(tp_monic(a));
  long d = tp_deg(g);
  if (d <= 0) return {};

  Val vd = (d >= 2) ? tp_disc_valuation(g) : Val(Rat(0));
  long budget = d + 16;
  if (vd.is_finite() && vd.finite() > 0) budget += T->e() * (rat_ceil(vd.finite()) + 1);
  std::vector<TowerFactor> out = factor_rec(T, g, budget);

  // the product of the factors must reproduce the input at working precision
  TowerPoly prod{T->one()};
  for (const auto& fac : out)
    for (long m = 0; m < fac.multiplicity; ++m) prod = tp_mul(prod, fac.poly);
  if (!tp_zero_at_precision(tp_sub(prod, g)))
    throw NoConvergence("tp_factor_monic: factor product failed verification");

  std::stable_sort(out.begin(), out.end(), [](const TowerFactor& x, const TowerFactor& y) {
    if (x.poly.size() != y.poly.size()) return x.poly.size() < y.poly.size();
    return tp_str(x.poly) < tp_str(y.poly);
  });
  return out;
}

std::vector<std::pair<FieldTowerElement, long>> tp_find_roots(const TowerPoly& f) {
  std::vector<std::pair<FieldTowerElement, long>> roots;
  for (const auto& fac : tp_factor_monic(f))
    if (fac.poly.size() == 2) roots.emplace_back(-fac.poly[0], fac.multiplicity);
  return roots;
}

FieldTowerElement tower_lift_residue(const TowerPtr& T, const FqContext::Elem& r) {
  FieldTowerElement x = T->zero();
  for (size_t j = 0; j < r.size() && j < static_cast<size_t>(T->f()); ++j) {
    if (r[j] == 0) continue;
    x = x + T->basis_element(0, static_cast<long>(j)).scale(PadicScalar::exact_int(T->p(), T->cap(), r[j]));
  }
  return x;
}

}  // namespace isocat
