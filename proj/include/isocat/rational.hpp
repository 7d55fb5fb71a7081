#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

#include "isocat/errors.hpp"

namespace isocat {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt ipow(const BigInt& base, long exp) {
  if (exp < 0) throw DomainViolation("ipow: negative exponent");
  BigInt r = 1, b = base;
  for (long e = exp; e > 0; e >>= 1) {
    if (e & 1) r *= b;
    if (e > 1) b *= b;
  }
  return r;
}

// Cached powers of a small prime; the hot path of scalar normalization.
const BigInt& pow_p_cached(std::int64_t p, long k);

// Exact p-adic valuation of a nonzero integer.
inline long val_p_int(BigInt n, const BigInt& p) {
  if (n == 0) throw DomainViolation("val_p_int: zero");
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline long val_p_rat(const Rat& q, const BigInt& p) {
  if (q == 0) throw DomainViolation("val_p_rat: zero");
  return val_p_int(numerator(q), p) - val_p_int(denominator(q), p);
}

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Rational extended with +infinity; the value of a valuation map.  Infinity
// compares greater than every finite value and absorbs addition.
struct Val {
  bool infinite = false;
  Rat v = 0;

  Val() = default;
  Val(const Rat& r) : infinite(false), v(r) {}  // NOLINT: implicit on purpose
  Val(long n) : infinite(false), v(n) {}        // NOLINT
  static Val inf() {
    Val x;
    x.infinite = true;
    return x;
  }

  bool is_finite() const { return !infinite; }
  const Rat& finite() const {
    if (infinite) throw PrecisionExhausted("valuation is infinite at working precision");
    return v;
  }

  Val operator+(const Val& o) const {
    if (infinite || o.infinite) return inf();
    return Val(v + o.v);
  }
  Val operator-() const {
    if (infinite) throw DomainViolation("negating infinite valuation");
    return Val(-v);
  }
  bool operator==(const Val& o) const {
    if (infinite || o.infinite) return infinite == o.infinite;
    return v == o.v;
  }
  bool operator!=(const Val& o) const { return !(*this == o); }
  bool operator<(const Val& o) const {
    if (infinite) return false;
    if (o.infinite) return true;
    return v < o.v;
  }
  bool operator<=(const Val& o) const { return *this == o || *this < o; }
  bool operator>(const Val& o) const { return o < *this; }
  bool operator>=(const Val& o) const { return o <= *this; }
};

inline Val min(const Val& a, const Val& b) { return a <= b ? a : b; }
inline Val max(const Val& a, const Val& b) { return a >= b ? a : b; }

inline std::string to_string(const Val& x) {
  if (x.infinite) return "inf";
  std::string s = numerator(x.v).str();
  if (denominator(x.v) != 1) s += "/" + denominator(x.v).str();
  return s;
}

inline std::string rat_to_string(const Rat& q) {
  std::string s = numerator(q).str();
  if (denominator(q) != 1) s += "/" + denominator(q).str();
  return s;
}

inline Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(BigInt(s));
  BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
  if (den == 0) throw SchemaError("rational with zero denominator: " + s);
  return Rat(num, den);
}

}  // namespace isocat
