#pragma once

#include <cstdint>
#include <string>

#include "isocat/errors.hpp"
#include "isocat/precision.hpp"
#include "isocat/rational.hpp"

namespace isocat {

// Extended gcd: returns g = gcd(a,b) and writes x,y with a*x + b*y = g.
BigInt exgcd(const BigInt& a, const BigInt& b, BigInt& x, BigInt& y);

// Inverse of u modulo m (m > 1); throws InvertNonUnit if gcd(u, m) != 1.
BigInt inv_mod(const BigInt& u, const BigInt& m);

// Element of Q_p tracked at capped absolute precision.
//
// Represents the congruence class  mant / p^d  (mod p^a), i.e. the set
// { (mant + t*p^(a+d)) / p^d : t in Z }.  Normal form: 0 <= mant < p^(a+d);
// if d > 0 then p does not divide mant; if mant == 0 then d == 0.  `a` never
// exceeds `cap`; exact inputs enter with a == cap, and every operation
// propagates the best provable absolute precision.  Any operation that would
// leave no information (a + d <= 0) throws PrecisionExhausted.
class PadicScalar {
 public:
  PadicScalar() = default;
  PadicScalar(std::int64_t p, int cap, BigInt mant, int d, int a);

  static PadicScalar exact_int(std::int64_t p, int cap, const BigInt& n);
  static PadicScalar exact_rat(std::int64_t p, int cap, const Rat& q);
  static PadicScalar zero(std::int64_t p, int cap) { return exact_int(p, cap, 0); }
  static PadicScalar one(std::int64_t p, int cap) { return exact_int(p, cap, 1); }

  std::int64_t p() const { return p_; }
  int cap() const { return cap_; }
  int abs_precision() const { return a_; }
  int denom_shift() const { return d_; }
  const BigInt& mantissa() const { return mant_; }

  bool is_zero_at_precision() const { return mant_ == 0; }
  bool is_integral() const { return d_ == 0; }

  // Exact valuation when the mantissa is visibly nonzero; otherwise the
  // infinite marker (the value is 0 modulo p^a, so val >= a).
  Val valuation() const;
  // Lower bound on the valuation, always finite: a_ when zero-at-precision.
  Rat valuation_lower_bound() const;
  // Valuation that must be exact; throws PrecisionExhausted when the value
  // is indistinguishable from 0 at working precision.
  Rat valuation_strict() const;

  PadicScalar operator+(const PadicScalar& o) const;
  PadicScalar operator-(const PadicScalar& o) const;
  PadicScalar operator*(const PadicScalar& o) const;
  PadicScalar operator/(const PadicScalar& o) const { return *this * o.inverse(); }
  PadicScalar operator-() const;
  PadicScalar inverse() const;
  PadicScalar pow(long e) const;

  PadicScalar mul_p_pow(long k) const;  // multiply by p^k (k may be negative)

  // Forget digits: lower the absolute precision to aNew (<= current).
  PadicScalar reduce_to(int aNew) const;

  // True when (*this - o) is 0 at the shared precision.
  bool congruent(const PadicScalar& o) const;
  // Representative in [0, p^(a+d)) as an exact rational mant/p^d.
  Rat representative() const;
  // Residue in [0, p); requires integrality and a >= 1.
  std::int64_t residue() const;

  std::string str() const;

 private:
  void normalize();
  void check_compat(const PadicScalar& o) const;

  std::int64_t p_ = 0;
  int cap_ = 0;
  int a_ = 0;    // absolute precision
  int d_ = 0;    // denominator shift
  BigInt mant_ = 0;
};

}  // namespace isocat
