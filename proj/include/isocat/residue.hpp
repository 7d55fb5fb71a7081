#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "isocat/errors.hpp"
#include "isocat/rational.hpp"

namespace isocat {

// Arithmetic in the finite field F_q, q = p^f, presented as
// F_p[x] / (minpoly) for a monic irreducible minpoly of degree f.
// Elements are coefficient vectors of length f with entries in [0, p).
struct FqContext {
  std::int64_t p = 2;
  long f = 1;
  std::vector<std::int64_t> minpoly;  // degree f monic: f+1 entries, last == 1

  using Elem = std::vector<std::int64_t>;

  FqContext() = default;
  FqContext(std::int64_t p_, std::vector<std::int64_t> minpolyModP);

  BigInt q() const { return ipow(BigInt(p), f); }

  Elem zero() const { return Elem(f, 0); }
  Elem one() const;
  Elem gen() const;  // the class of x (or 1 when f == 1)
  Elem from_int(std::int64_t n) const;

  bool is_zero(const Elem& a) const;
  bool eq(const Elem& a, const Elem& b) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(const Elem& a, BigInt e) const;  // e >= 0
  Elem inv(const Elem& a) const;
  Elem frob(const Elem& a) const { return pow(a, BigInt(p)); }

  // Enumerates field elements in a fixed order; index in [0, q).
  Elem element_at(const BigInt& index) const;

  // Square root: returns true and writes r with r*r == a when a is a square.
  // Deterministic (Tonelli-Shanks with the first non-residue in enumeration
  // order for odd p; the Frobenius inverse for p == 2).
  bool sqrt(const Elem& a, Elem& r) const;

  // Trace to F_p, as an integer in [0, p).
  std::int64_t trace(const Elem& a) const;
};

// Dense polynomials over F_q: c[i] is the coefficient of y^i.
using FqPoly = std::vector<FqContext::Elem>;

long fq_poly_deg(const FqContext& F, const FqPoly& a);  // -1 for zero
FqPoly fq_poly_trim(const FqContext& F, FqPoly a);
FqPoly fq_poly_add(const FqContext& F, const FqPoly& a, const FqPoly& b);
FqPoly fq_poly_sub(const FqContext& F, const FqPoly& a, const FqPoly& b);
FqPoly fq_poly_mul(const FqContext& F, const FqPoly& a, const FqPoly& b);
FqPoly fq_poly_scale(const FqContext& F, const FqPoly& a, const FqContext::Elem& c);
// division with remainder by a nonzero divisor
void fq_poly_divrem(const FqContext& F, const FqPoly& a, const FqPoly& b, FqPoly& quo, FqPoly& rem);
FqPoly fq_poly_rem(const FqContext& F, const FqPoly& a, const FqPoly& b);
FqPoly fq_poly_gcd(const FqContext& F, FqPoly a, FqPoly b);  // monic gcd
// monic gcd g together with u, v satisfying u*a + v*b = g
FqPoly fq_poly_exgcd(const FqContext& F, const FqPoly& a, const FqPoly& b, FqPoly& u, FqPoly& v);
FqPoly fq_poly_monic(const FqContext& F, const FqPoly& a);
FqPoly fq_poly_derivative(const FqContext& F, const FqPoly& a);
FqPoly fq_poly_powmod(const FqContext& F, FqPoly base, BigInt e, const FqPoly& mod);
FqContext::Elem fq_poly_eval(const FqContext& F, const FqPoly& a, const FqContext::Elem& x);

bool fq_poly_irreducible(const FqContext& F, const FqPoly& a);

// Roots in F_q of a nonzero polynomial, each listed once, in enumeration
// order.  Uses gcd with y^q - y followed by splitting, so it is complete.
std::vector<FqContext::Elem> fq_poly_roots(const FqContext& F, const FqPoly& a,
                                           std::mt19937_64& rng);

// Full factorization of a nonzero polynomial into monic irreducibles with
// multiplicities (squarefree decomposition + distinct-degree + equal-degree
// splitting).  Deterministic given the rng state; factors are returned
// sorted by (degree, coefficient sequence) so the output is reproducible.
struct FqFactor {
  FqPoly poly;  // monic irreducible
  long multiplicity;
};
std::vector<FqFactor> fq_poly_factor(const FqContext& F, const FqPoly& a, std::mt19937_64& rng);

}  // namespace isocat
