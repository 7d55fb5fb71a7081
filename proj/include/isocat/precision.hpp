#pragma once

#include <cstdint>

#include "isocat/errors.hpp"
#include "isocat/rational.hpp"

namespace isocat {

// Working precision for every computation: p-adic coefficients are tracked
// modulo p^pPrecision (absolute), u-expansions live on the window
// [uWindow.lo, uWindow.hi], and annulus radii are indexed by annulusIndex.
struct PrecisionContext {
  std::int64_t p = 2;
  int pPrecision = 8;  // M >= 1
  long uLo = 0;
  long uHi = 16;
  int annulusIndex = 0;  // n >= 0

  // Extra absolute precision carried internally beyond pPrecision so that
  // intermediate divisions by powers of p do not eat into reportable digits.
  static constexpr int kGuard = 40;

  void validate() const {
    if (p < 2 || !is_prime_u64(static_cast<std::uint64_t>(p)))
      throw PreconditionViolated("PrecisionContext: p must be prime");
    if (pPrecision < 1) throw PreconditionViolated("PrecisionContext: pPrecision must be >= 1");
    if (uLo > uHi) throw PreconditionViolated("PrecisionContext: empty u-window");
    if (annulusIndex < 0) throw PreconditionViolated("PrecisionContext: annulusIndex must be >= 0");
  }

  int cap() const { return pPrecision + kGuard; }

  // Radius ladder r_n = p^{-rho_n} with rho_n = rho_0 / p^n and
  // rho_0 = (1 + 1/p) / (2e): strictly inside the disc, outside the zero set
  // of the period series for the ramification degree e at hand.
  Rat rho(long e, int n) const {
    if (e < 1 || n < 0) throw DomainViolation("rho: bad arguments");
    return Rat(BigInt(p) + 1, 2 * e * BigInt(p) * ipow(BigInt(p), n));
  }
};

}  // namespace isocat
