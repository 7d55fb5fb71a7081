#include "isocat/padic.hpp"

#include <algorithm>
#include <sstream>

namespace isocat {

BigInt exgcd(const BigInt& a, const BigInt& b, BigInt& x, BigInt& y) {
  BigInt r0 = a, r1 = b, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
  while (r1 != 0) {
    BigInt q = r0 / r1;
    BigInt t = r0 - q * r1;
    r0 = r1; r1 = t;
    t = x0 - q * x1; x0 = x1; x1 = t;
    t = y0 - q * y1; y0 = y1; y1 = t;
  }
  x = x0; y = y0;
  return r0;
}

BigInt inv_mod(const BigInt& u, const BigInt& m) {
  BigInt x, y;
  BigInt g = exgcd(((u % m) + m) % m, m, x, y);
  if (g != 1 && g != -1) throw InvertNonUnit("inv_mod: gcd != 1");
  if (g == -1) x = -x;
  return ((x % m) + m) % m;
}

PadicScalar::PadicScalar(std::int64_t p, int cap, BigInt mant, int d, int a)
    : p_(p), cap_(cap), a_(a), d_(d), mant_(std::move(mant)) {
  if (p_ < 2) throw DomainViolation("PadicScalar: bad prime");
  if (cap_ < 1) throw DomainViolation("PadicScalar: bad cap");
  if (d_ < 0) {
    // fold a negative shift into the mantissa
    mant_ *= pow_p_cached(p_, -d_);
    d_ = 0;
  }
  a_ = std::min(a_, cap_);
  normalize();
}

PadicScalar PadicScalar::exact_int(std::int64_t p, int cap, const BigInt& n) {
  return PadicScalar(p, cap, n, 0, cap);
}

PadicScalar PadicScalar::exact_rat(std::int64_t p, int cap, const Rat& q) {
  if (q == 0) return exact_int(p, cap, 0);
  BigInt num = numerator(q), den = denominator(q);
  BigInt P(p);
  long dv = val_p_int(den, P);
  BigInt denUnit = den / ipow(P, dv);
  // the prime-to-p part of the denominator is a unit: invert it exactly
  // modulo the full working modulus
  BigInt mod = ipow(P, cap + dv);
  BigInt m = ((num % mod) + mod) % mod;
  if (denUnit != 1) m = m * inv_mod(denUnit, mod) % mod;
  return PadicScalar(p, cap, m, static_cast<int>(dv), cap);
}

void PadicScalar::normalize() {
  if (a_ + d_ <= 0)
    throw PrecisionExhausted("p-adic scalar retains no digits (abs precision " +
                             std::to_string(a_) + ", shift " + std::to_string(d_) + ")");
  if (mant_ == 0) {
    d_ = 0;
    if (a_ <= 0)
      throw PrecisionExhausted("p-adic scalar retains no digits (abs precision " +
                               std::to_string(a_) + ")");
    return;
  }
  const BigInt& mod = pow_p_cached(p_, a_ + d_);
  mant_ = ((mant_ % mod) + mod) % mod;
  if (mant_ == 0) {
    d_ = 0;
    if (a_ <= 0)
      throw PrecisionExhausted("p-adic scalar retains no digits (abs precision " +
                               std::to_string(a_) + ")");
    return;
  }
  while (d_ > 0 && mant_ % p_ == 0) {
    mant_ /= p_;
    --d_;
  }
}

void PadicScalar::check_compat(const PadicScalar& o) const {
  if (p_ != o.p_) throw DomainViolation("PadicScalar: mixed primes");
}

Val PadicScalar::valuation() const {
  if (mant_ == 0) return Val::inf();
  return Val(Rat(val_p_int(mant_, BigInt(p_)) - d_));
}

Rat PadicScalar::valuation_lower_bound() const {
  if (mant_ == 0) return Rat(a_);
  return Rat(val_p_int(mant_, BigInt(p_)) - d_);
}

Rat PadicScalar::valuation_strict() const {
  if (mant_ == 0)
    throw PrecisionExhausted("valuation_strict: zero at absolute precision " + std::to_string(a_));
  return Rat(val_p_int(mant_, BigInt(p_)) - d_);
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
  check_compat(o);
  int cap = std::min(cap_, o.cap_);
  int d = std::max(d_, o.d_);
  BigInt m = mant_ * pow_p_cached(p_, d - d_) + o.mant_ * pow_p_cached(p_, d - o.d_);
  return PadicScalar(p_, cap, m, d, std::min(a_, o.a_));
}

PadicScalar PadicScalar::operator-(const PadicScalar& o) const { return *this + (-o); }

PadicScalar PadicScalar::operator-() const {
  return PadicScalar(p_, cap_, -mant_, d_, a_);
}

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
  check_compat(o);
  int cap = std::min(cap_, o.cap_);
  // error term analysis: (x+e1)(y+e2) - xy has valuation
  // >= min(v(x)+a2, v(y)+a1) with v the (lower-bound) valuations
  Rat v1 = valuation_lower_bound(), v2 = o.valuation_lower_bound();
  Rat aR = std::min(Rat(a_) + v2, Rat(o.a_) + v1);
  long aNew = std::min<long>(static_cast<long>(numerator(aR) / denominator(aR)), cap);
  return PadicScalar(p_, cap, mant_ * o.mant_, d_ + o.d_, static_cast<int>(aNew));
}

PadicScalar PadicScalar::inverse() const {
  if (mant_ == 0) throw InvertNonUnit("inverse of 0 at absolute precision " + std::to_string(a_));
  BigInt P(p_);
  long vm = val_p_int(mant_, P);
  long v = vm - d_;                 // exact valuation
  BigInt u = mant_ / ipow(P, vm);   // unit part, known mod p^(a-v)
  long ua = a_ - v;                 // absolute precision of the unit part
  long aNew = std::min<long>(a_ - 2 * v, cap_);
  if (ua <= 0 || aNew + std::max<long>(v, 0) <= 0)
    throw PrecisionExhausted("inverse: unit part has no digits");
  BigInt uinv = inv_mod(u, ipow(P, ua));
  if (v >= 0) return PadicScalar(p_, cap_, uinv, static_cast<int>(v), static_cast<int>(aNew));
  return PadicScalar(p_, cap_, uinv * ipow(P, -v), 0, static_cast<int>(aNew));
}

PadicScalar PadicScalar::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  PadicScalar r = PadicScalar::one(p_, cap_), b = *this;
  for (long k = e; k > 0; k >>= 1) {
    if (k & 1) r = r * b;
    if (k > 1) b = b * b;
  }
  return r;
}

PadicScalar PadicScalar::mul_p_pow(long k) const {
  if (mant_ == 0) {
    long aNew = std::min<long>(static_cast<long>(a_) + k, cap_);
    return PadicScalar(p_, cap_, 0, 0, static_cast<int>(aNew));
  }
  long d = d_ - k;
  long aNew = std::min<long>(static_cast<long>(a_) + k, cap_);
  if (d >= 0) return PadicScalar(p_, cap_, mant_, static_cast<int>(d), static_cast<int>(aNew));
  return PadicScalar(p_, cap_, mant_ * pow_p_cached(p_, -d), 0, static_cast<int>(aNew));
}

PadicScalar PadicScalar::reduce_to(int aNew) const {
  if (aNew > a_) throw DomainViolation("reduce_to: cannot raise precision");
  return PadicScalar(p_, cap_, mant_, d_, aNew);
}

bool PadicScalar::congruent(const PadicScalar& o) const {
  return (*this - o).is_zero_at_precision();
}

Rat PadicScalar::representative() const {
  return Rat(mant_, pow_p_cached(p_, d_));
}

std::int64_t PadicScalar::residue() const {
  if (d_ != 0) throw DomainViolation("residue of a non-integral scalar");
  if (a_ < 1) throw PrecisionExhausted("residue needs one integral digit");
  return static_cast<std::int64_t>(mant_ % p_);
}

std::string PadicScalar::str() const {
  std::ostringstream os;
  os << mant_.str();
  if (d_ > 0) os << "/" << p_ << "^" << d_;
  os << " + O(" << p_ << "^" << a_ << ")";
  return os.str();
}

}  // namespace isocat
