#include "isocat/residue.hpp"

#include <algorithm>

namespace isocat {

namespace {

std::int64_t mod_p(std::int64_t x, std::int64_t p) {
  std::int64_t r = x % p;
  return r < 0 ? r + p : r;
}

// index of an element in the fixed enumeration (base-p digit order)
BigInt elem_index(const FqContext& F, const FqContext::Elem& a) {
  BigInt idx = 0;
  for (long i = F.f - 1; i >= 0; --i) idx = idx * F.p + a[static_cast<size_t>(i)];
  return idx;
}

}  // namespace

FqContext::FqContext(std::int64_t p_, std::vector<std::int64_t> minpolyModP)
    : p(p_), f(static_cast<long>(minpolyModP.size()) - 1), minpoly(std::move(minpolyModP)) {
  if (p < 2) throw DomainViolation("FqContext: bad characteristic");
  if (f < 1) throw DomainViolation("FqContext: minpoly must have degree >= 1");
  for (auto& c : minpoly) c = mod_p(c, p);
  if (minpoly.back() != 1) throw DomainViolation("FqContext: minpoly must be monic");
  if (f >= 2) {
    // irreducibility over the prime field certifies that this really is F_q
    FqContext Fp(p, {0, 1});
    FqPoly lifted;
    for (auto c : minpoly) lifted.push_back(Fp.from_int(c));
    if (!fq_poly_irreducible(Fp, lifted))
      throw NotUnramified("FqContext: minpoly is reducible modulo p");
  }
}

FqContext::Elem FqContext::one() const {
  Elem r(f, 0);
  r[0] = 1;
  return r;
}

FqContext::Elem FqContext::gen() const {
  Elem r(f, 0);
  if (f == 1)
    r[0] = 1;
  else
    r[1] = 1;
  return r;
}

FqContext::Elem FqContext::from_int(std::int64_t n) const {
  Elem r(f, 0);
  r[0] = mod_p(n, p);
  return r;
}

bool FqContext::is_zero(const Elem& a) const {
  return std::all_of(a.begin(), a.end(), [](std::int64_t c) { return c == 0; });
}

bool FqContext::eq(const Elem& a, const Elem& b) const { return a == b; }

FqContext::Elem FqContext::add(const Elem& a, const Elem& b) const {
  Elem r(f);
  for (long i = 0; i < f; ++i) r[i] = mod_p(a[i] + b[i], p);
  return r;
}

FqContext::Elem FqContext::sub(const Elem& a, const Elem& b) const {
  Elem r(f);
  for (long i = 0; i < f; ++i) r[i] = mod_p(a[i] - b[i], p);
  return r;
}

FqContext::Elem FqContext::neg(const Elem& a) const {
  Elem r(f);
  for (long i = 0; i < f; ++i) r[i] = mod_p(-a[i], p);
  return r;
}

FqContext::Elem FqContext::mul(const Elem& a, const Elem& b) const {
  std::vector<std::int64_t> prod(2 * f - 1, 0);
  for (long i = 0; i < f; ++i) {
    if (a[i] == 0) continue;
    for (long j = 0; j < f; ++j) prod[i + j] = mod_p(prod[i + j] + a[i] * b[j], p);
  }
  // reduce by the monic minimal polynomial
  for (long k = 2 * f - 2; k >= f; --k) {
    std::int64_t c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    for (long i = 0; i < f; ++i) prod[k - f + i] = mod_p(prod[k - f + i] - c * minpoly[i], p);
  }
  prod.resize(f);
  return prod;
}

FqContext::Elem FqContext::pow(const Elem& a, BigInt e) const {
  if (e < 0) throw DomainViolation("FqContext::pow: negative exponent");
  Elem r = one(), b = a;
  while (e > 0) {
    if ((e & 1) != 0) r = mul(r, b);
    e >>= 1;
    if (e > 0) b = mul(b, b);
  }
  return r;
}

FqContext::Elem FqContext::inv(const Elem& a) const {
  if (is_zero(a)) throw InvertNonUnit("FqContext::inv: zero");
  return pow(a, q() - 2);
}

FqContext::Elem FqContext::element_at(const BigInt& index) const {
  Elem r(f, 0);
  BigInt n = index;
  for (long i = 0; i < f; ++i) {
    r[i] = static_cast<std::int64_t>(n % p);
    n /= p;
  }
  return r;
}

std::int64_t FqContext::trace(const Elem& a) const {
  Elem acc = a, cur = a;
  for (long k = 1; k < f; ++k) {
    cur = frob(cur);
    acc = add(acc, cur);
  }
  // the trace lies in F_p
  for (long i = 1; i < f; ++i)
    if (acc[i] != 0) throw DomainViolation("FqContext::trace: not rational");
  return acc[0];
}

bool FqContext::sqrt(const Elem& a, Elem& r) const {
  if (is_zero(a)) {
    r = zero();
    return true;
  }
  if (p == 2) {
    // squaring is bijective in characteristic 2
    r = pow(a, q() / 2);
    return true;
  }
  BigInt exponent = (q() - 1) / 2;
  if (!eq(pow(a, exponent), one())) return false;
  // Tonelli-Shanks with the first non-residue in enumeration order
  BigInt Q = q() - 1;
  long s = 0;
  while (Q % 2 == 0) {
    Q /= 2;
    ++s;
  }
  Elem z = zero();
  for (BigInt i = 1; i < q(); ++i) {
    Elem cand = element_at(i);
    if (!eq(pow(cand, exponent), one())) {
      z = cand;
      break;
    }
  }
  Elem c = pow(z, Q);
  Elem t = pow(a, Q);
  Elem x = pow(a, (Q + 1) / 2);
  long m = s;
  while (!eq(t, one())) {
    Elem t2 = t;
    long i = 0;
    while (!eq(t2, one())) {
      t2 = mul(t2, t2);
      ++i;
      if (i == m) throw DomainViolation("FqContext::sqrt: internal failure");
    }
    Elem b = c;
    for (long k = 0; k < m - i - 1; ++k) b = mul(b, b);
    x = mul(x, b);
    c = mul(b, b);
    t = mul(t, c);
    m = i;
  }
  r = x;
  return true;
}

long fq_poly_deg(const FqContext& F, const FqPoly& a) {
  for (long i = static_cast<long>(a.size()) - 1; i >= 0; --i)
    if (!F.is_zero(a[i])) return i;
  return -1;
}

FqPoly fq_poly_trim(const FqContext& F, FqPoly a) {
  a.resize(static_cast<size_t>(fq_poly_deg(F, a) + 1));
  return a;
}

FqPoly fq_poly_add(const FqContext& F, const FqPoly& a, const FqPoly& b) {
  FqPoly r(std::max(a.size(), b.size()), F.zero());
  for (size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] = F.add(r[i], a[i]);
    if (i < b.size()) r[i] = F.add(r[i], b[i]);
  }
  return fq_poly_trim(F, r);
}

FqPoly fq_poly_sub(const FqContext& F, const FqPoly& a, const FqPoly& b) {
  FqPoly nb = b;
  for (auto& c : nb) c = F.neg(c);
  return fq_poly_add(F, a, nb);
}

FqPoly fq_poly_mul(const FqContext& F, const FqPoly& a, const FqPoly& b) {
  if (a.empty() || b.empty()) return {};
  FqPoly r(a.size() + b.size() - 1, F.zero());
  for (size_t i = 0; i < a.size(); ++i) {
    if (F.is_zero(a[i])) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  return fq_poly_trim(F, r);
}

FqPoly fq_poly_scale(const FqContext& F, const FqPoly& a, const FqContext::Elem& c) {
  FqPoly r = a;
  for (auto& x : r) x = F.mul(x, c);
  return fq_poly_trim(F, r);
}

void fq_poly_divrem(const FqContext& F, const FqPoly& a, const FqPoly& b, FqPoly& quo,
                    FqPoly& rem) {
  long db = fq_poly_deg(F, b);
  if (db < 0) throw DomainViolation("fq_poly_divrem: division by zero");
  FqContext::Elem lcInv = F.inv(b[db]);
  rem = fq_poly_trim(F, a);
  long da = fq_poly_deg(F, rem);
  quo.assign(da >= db ? da - db + 1 : 0, F.zero());
  while (da >= db) {
    FqContext::Elem c = F.mul(rem[da], lcInv);
    quo[da - db] = c;
    for (long i = 0; i <= db; ++i) rem[da - db + i] = F.sub(rem[da - db + i], F.mul(c, b[i]));
    rem = fq_poly_trim(F, rem);
    da = fq_poly_deg(F, rem);
  }
}

FqPoly fq_poly_rem(const FqContext& F, const FqPoly& a, const FqPoly& b) {
  FqPoly q, r;
  fq_poly_divrem(F, a, b, q, r);
  return r;
}

FqPoly fq_poly_monic(const FqContext& F, const FqPoly& a) {
  long d = fq_poly_deg(F, a);
  if (d < 0) return {};
  return fq_poly_scale(F, fq_poly_trim(F, a), F.inv(a[d]));
}

FqPoly fq_poly_gcd(const FqContext& F, FqPoly a, FqPoly b) {
  a = fq_poly_trim(F, a);
  b = fq_poly_trim(F, b);
  while (fq_poly_deg(F, b) >= 0) {
    FqPoly r = fq_poly_rem(F, a, b);
    a = b;
    b = r;
  }
  return fq_poly_monic(F, a);
}

FqPoly fq_poly_exgcd(const FqContext& F, const FqPoly& a, const FqPoly& b, FqPoly& u, FqPoly& v) {
  FqPoly r0 = fq_poly_trim(F, a), r1 = fq_poly_trim(F, b);
  FqPoly u0{F.one()}, v0{}, u1{}, v1{F.one()};
  while (fq_poly_deg(F, r1) >= 0) {
    FqPoly q, r2;
    fq_poly_divrem(F, r0, r1, q, r2);
    FqPoly u2 = fq_poly_sub(F, u0, fq_poly_mul(F, q, u1));
    FqPoly v2 = fq_poly_sub(F, v0, fq_poly_mul(F, q, v1));
    r0 = r1; r1 = r2;
    u0 = u1; u1 = u2;
    v0 = v1; v1 = v2;
  }
  long d = fq_poly_deg(F, r0);
  if (d < 0) {
    u = {};
    v = {};
    return {};
  }
  FqContext::Elem lcInv = F.inv(r0[static_cast<size_t>(d)]);
  u = fq_poly_scale(F, u0, lcInv);
  v = fq_poly_scale(F, v0, lcInv);
  return fq_poly_scale(F, r0, lcInv);
}

FqPoly fq_poly_derivative(const FqContext& F, const FqPoly& a) {
  FqPoly r;
  for (size_t i = 1; i < a.size(); ++i)
    r.push_back(F.mul(a[i], F.from_int(static_cast<std::int64_t>(i % F.p))));
  return fq_poly_trim(F, r);
}

FqPoly fq_poly_powmod(const FqContext& F, FqPoly base, BigInt e, const FqPoly& mod) {
  FqPoly r = {F.one()};
  base = fq_poly_rem(F, base, mod);
  while (e > 0) {
    if ((e & 1) != 0) r = fq_poly_rem(F, fq_poly_mul(F, r, base), mod);
    e >>= 1;
    if (e > 0) base = fq_poly_rem(F, fq_poly_mul(F, base, base), mod);
  }
  return r;
}

FqContext::Elem fq_poly_eval(const FqContext& F, const FqPoly& a, const FqContext::Elem& x) {
  FqContext::Elem r = F.zero();
  for (long i = static_cast<long>(a.size()) - 1; i >= 0; --i) r = F.add(F.mul(r, x), a[i]);
  return r;
}

bool fq_poly_irreducible(const FqContext& F, const FqPoly& a) {
  long d = fq_poly_deg(F, a);
  if (d <= 0) return false;
  if (d == 1) return true;
  FqPoly y = {F.zero(), F.one()};
  // y^(q^d) == y (mod a)
  FqPoly t = y;
  for (long k = 0; k < d; ++k) t = fq_poly_powmod(F, t, F.q(), a);
  if (fq_poly_deg(F, fq_poly_sub(F, t, y)) >= 0) return false;
  // no factor of degree d/r for prime divisors r of d
  for (long r = 2; r <= d; ++r) {
    if (d % r != 0) continue;
    bool rIsPrime = true;
    for (long s = 2; s * s <= r; ++s)
      if (r % s == 0) rIsPrime = false;
    if (!rIsPrime) continue;
    FqPoly u = y;
    for (long k = 0; k < d / r; ++k) u = fq_poly_powmod(F, u, F.q(), a);
    FqPoly g = fq_poly_gcd(F, fq_poly_sub(F, u, y), a);
    if (fq_poly_deg(F, g) != 0) return false;
  }
  return true;
}

namespace {

FqPoly fq_random_poly(const FqContext& F, long degBound, std::mt19937_64& rng) {
  FqPoly r;
  std::uniform_int_distribution<std::int64_t> d(0, F.p - 1);
  for (long i = 0; i < degBound; ++i) {
    FqContext::Elem c(F.f);
    for (long j = 0; j < F.f; ++j) c[j] = d(rng);
    r.push_back(c);
  }
  return fq_poly_trim(F, r);
}

// splits a monic product of distinct irreducible factors of equal degree d
void fq_edf(const FqContext& F, const FqPoly& a, long d, std::mt19937_64& rng,
            std::vector<FqPoly>& out) {
  long da = fq_poly_deg(F, a);
  if (da == 0) return;
  if (da == d) {
    out.push_back(fq_poly_monic(F, a));
    return;
  }
  for (int attempt = 0; attempt < 256; ++attempt) {
    FqPoly t = fq_random_poly(F, da, rng);
    if (fq_poly_deg(F, t) < 1) continue;
    FqPoly g;
    if (F.p == 2) {
      // trace map: sum of t^(2^k) over k < d*f
      FqPoly acc = fq_poly_rem(F, t, a), cur = acc;
      long bits = d * F.f;
      for (long k = 1; k < bits; ++k) {
        cur = fq_poly_rem(F, fq_poly_mul(F, cur, cur), a);
        acc = fq_poly_add(F, acc, cur);
      }
      g = fq_poly_gcd(F, acc, a);
    } else {
      BigInt e = (ipow(F.q(), d) - 1) / 2;
      FqPoly s = fq_poly_powmod(F, t, e, a);
      g = fq_poly_gcd(F, fq_poly_sub(F, s, {F.one()}), a);
    }
    long dg = fq_poly_deg(F, g);
    if (dg > 0 && dg < da) {
      FqPoly q, r;
      fq_poly_divrem(F, a, g, q, r);
      fq_edf(F, g, d, rng, out);
      fq_edf(F, q, d, rng, out);
      return;
    }
  }
  throw NoConvergence("equal-degree splitting failed to find a separating element");
}

FqPoly fq_pth_root(const FqContext& F, const FqPoly& a) {
  // a is a polynomial in y^p; take the p-th root coefficientwise
  FqPoly r;
  BigInt e = F.q() / F.p;  // inverse of Frobenius exponent
  for (size_t i = 0; i < a.size(); i += static_cast<size_t>(F.p))
    r.push_back(F.pow(a[i], e));
  return fq_poly_trim(F, r);
}

void fq_squarefree_decompose(const FqContext& F, const FqPoly& a, long multiplier,
                             std::vector<std::pair<FqPoly, long>>& out) {
  FqPoly f = fq_poly_monic(F, a);
  if (fq_poly_deg(F, f) <= 0) return;
  FqPoly fp = fq_poly_derivative(F, f);
  if (fq_poly_deg(F, fp) < 0) {
    fq_squarefree_decompose(F, fq_pth_root(F, f), multiplier * static_cast<long>(F.p), out);
    return;
  }
  FqPoly c = fq_poly_gcd(F, f, fp);
  FqPoly w, dump;
  fq_poly_divrem(F, f, c, w, dump);
  long i = 1;
  while (fq_poly_deg(F, w) > 0) {
    FqPoly y = fq_poly_gcd(F, w, c);
    FqPoly z;
    fq_poly_divrem(F, w, y, z, dump);
    if (fq_poly_deg(F, z) > 0) out.emplace_back(fq_poly_monic(F, z), multiplier * i);
    FqPoly cNew;
    fq_poly_divrem(F, c, y, cNew, dump);
    w = y;
    c = cNew;
    ++i;
  }
  if (fq_poly_deg(F, c) > 0)
    fq_squarefree_decompose(F, fq_pth_root(F, c), multiplier * static_cast<long>(F.p), out);
}

bool fq_poly_less(const FqContext& F, const FqPoly& a, const FqPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (size_t i = a.size(); i-- > 0;) {
    BigInt ia = elem_index(F, a[i]), ib = elem_index(F, b[i]);
    if (ia != ib) return ia < ib;
  }
  return false;
}

}  // namespace

std::vector<FqContext::Elem> fq_poly_roots(const FqContext& F, const FqPoly& a,
                                           std::mt19937_64& rng) {
  FqPoly f = fq_poly_monic(F, a);
  if (fq_poly_deg(F, f) < 0) throw DomainViolation("fq_poly_roots: zero polynomial");
  FqPoly y = {F.zero(), F.one()};
  FqPoly yq = fq_poly_powmod(F, y, F.q(), f);
  FqPoly g = fq_poly_gcd(F, fq_poly_sub(F, yq, y), f);
  std::vector<FqPoly> linear;
  if (fq_poly_deg(F, g) > 0) fq_edf(F, g, 1, rng, linear);
  std::vector<FqContext::Elem> roots;
  for (const auto& l : linear) roots.push_back(F.neg(l[0]));
  std::sort(roots.begin(), roots.end(),
            [&](const FqContext::Elem& x, const FqContext::Elem& y2) {
              return elem_index(F, x) < elem_index(F, y2);
            });
  return roots;
}

std::vector<FqFactor> fq_poly_factor(const FqContext& F, const FqPoly& a, std::mt19937_64& rng) {
  if (fq_poly_deg(F, a) < 0) throw DomainViolation("fq_poly_factor: zero polynomial");
  std::vector<std::pair<FqPoly, long>> sqfree;
  fq_squarefree_decompose(F, a, 1, sqfree);
  std::vector<FqFactor> out;
  for (const auto& [part, mult] : sqfree) {
    // distinct-degree splitting of the squarefree part
    FqPoly f = part;
    FqPoly y = {F.zero(), F.one()};
    FqPoly h = y;
    long d = 0;
    while (fq_poly_deg(F, f) > 0) {
      ++d;
      if (2 * d > fq_poly_deg(F, f)) {
        out.push_back({fq_poly_monic(F, f), mult});
        break;
      }
      h = fq_poly_powmod(F, h, F.q(), f);
      FqPoly g = fq_poly_gcd(F, fq_poly_sub(F, h, y), f);
      if (fq_poly_deg(F, g) > 0) {
        std::vector<FqPoly> pieces;
        fq_edf(F, g, d, rng, pieces);
        for (auto& piece : pieces) out.push_back({piece, mult});
        FqPoly dump;
        FqPoly fNew;
        fq_poly_divrem(F, f, g, fNew, dump);
        f = fNew;
        h = fq_poly_rem(F, h, f);
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [&](const FqFactor& x, const FqFactor& y2) { return fq_poly_less(F, x.poly, y2.poly); });
  return out;
}

}  // namespace isocat
