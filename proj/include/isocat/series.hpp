#pragma once

#include <string>
#include <vector>

#include "isocat/matrix.hpp"
#include "isocat/poly.hpp"
#include "isocat/rings.hpp"
#include "isocat/tower.hpp"

namespace isocat {

// Truncated Laurent series over a field tower: coefficients for u-exponents
// lo, lo+1, ..., lo+c.size()-1 are known at their stored p-adic precision.
// Exponents below lo are exactly zero. Exponents above the window are exactly
// zero when exactTail is set (the series is a genuine Laurent polynomial) and
// unknown otherwise.
struct TruncatedSeries {
  TowerPtr tower;
  long lo = 0;
  bool exactTail = true;
  std::vector<FieldTowerElement> c;

  long hi() const { return lo + static_cast<long>(c.size()) - 1; }
  bool empty_window() const { return c.empty(); }
};

TruncatedSeries ts_zero(const TowerPtr& T);
TruncatedSeries ts_const(const FieldTowerElement& a);
TruncatedSeries ts_one(const TowerPtr& T);
TruncatedSeries ts_monomial(const FieldTowerElement& a, long k);
TruncatedSeries ts_from_poly(const TowerPtr& T, const TowerPoly& f, long shift = 0);

// Window duties: the coefficient at k. Returns exact zeros outside the known
// range when that is justified; throws WindowOverflow when the value is not
// determined by the window.
FieldTowerElement ts_coeff(const TruncatedSeries& f, long k);

// True if every known coefficient is zero at precision (says nothing about an
// inexact tail).
bool ts_window_zero(const TruncatedSeries& f);

// Drops exact-zero coefficients at both window edges as far as soundness
// allows and canonicalizes empty exact series to window [0, -1].
TruncatedSeries ts_trim(TruncatedSeries f);

// Restricts to [newLo, newHi] (fills with exact zeros where justified; throws
// WindowOverflow when asked to materialize unknown coefficients).
TruncatedSeries ts_window(const TruncatedSeries& f, long newLo, long newHi);

TruncatedSeries ts_neg(TruncatedSeries f);
TruncatedSeries ts_add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries ts_sub(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries ts_mul(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries ts_scale(TruncatedSeries f, const FieldTowerElement& s);
TruncatedSeries ts_shift(TruncatedSeries f, long k);  // multiply by u^k

// Coefficientwise Frobenius of the tower's unramified part composed with
// u -> u^p.
TruncatedSeries ts_phi(const TruncatedSeries& f);

// Inverse of a series whose lowest window coefficient is invertible in the
// tower: result window is [-f.lo, -f.lo + count - 1].
TruncatedSeries ts_inverse(const TruncatedSeries& f, long count);

// Inverse normalized at a caller-chosen dominant exponent, for Laurent units
// on an annulus where the dominant term need not be the lowest one. Newton
// iteration clipped to [outLo, outHi], verified a posteriori: the residual
// f * result - 1 must have Gauss valuation >= minGain at both window radii
// p^{-rhoInner} and p^{-rhoOuter}; otherwise NoConvergence. Truncation
// residues hence count with their u-weight, exactly as the annulus norm sees
// them.
TruncatedSeries ts_inverse_at(const TruncatedSeries& f, long pivotExp, long outLo, long outHi,
                              const Rat& rhoInner, const Rat& rhoOuter, const Rat& minGain);

FieldTowerElement ts_eval(const TruncatedSeries& f, const FieldTowerElement& x);

// min over known coefficients of val(c_i) + i * rho (the additive Gauss
// valuation at radius p^{-rho}); coefficients with no visible valuation are
// skipped (they contribute nothing), and a window with no visible
// coefficients yields the infinite valuation.
Val ts_gauss_val(const TruncatedSeries& f, const Rat& rho);

struct DominantTerm {
  long exponent = 0;
  Rat value;
  bool strict = false;  // unique minimizer among known coefficients
};
DominantTerm ts_dominant(const TruncatedSeries& f, const Rat& rho);

// Weierstrass shape across a radius window: the same strict dominant exponent
// at both radii certifies f = u^k * c * (1 + small) on the annulus.
struct UnitShape {
  bool isUnit = false;
  long exponent = 0;
  Rat unitValuation;
};
UnitShape ts_unit_shape(const TruncatedSeries& f, const Rat& rhoInner, const Rat& rhoOuter);

std::string ts_str(const TruncatedSeries& f);
bool ts_congruent(const TruncatedSeries& a, const TruncatedSeries& b, int pPrec);

// --- matrices over truncated series ---

using SMat = std::vector<std::vector<TruncatedSeries>>;

SMat smat_zero(const TowerPtr& T, std::size_t r, std::size_t cols);
SMat smat_id(const TowerPtr& T, std::size_t n);
SMat smat_from_tower(const Mat<TowerOps>& m);
SMat smat_add(const SMat& a, const SMat& b);
SMat smat_sub(const SMat& a, const SMat& b);
SMat smat_mul(const SMat& a, const SMat& b);
SMat smat_scale(SMat a, const TruncatedSeries& s);
SMat smat_phi(const SMat& a);
SMat smat_window(const SMat& a, long lo, long hi);
Mat<TowerOps> smat_eval(const SMat& a, const FieldTowerElement& x);
TruncatedSeries smat_det(const SMat& a);

// Solves A X = B over power-series windows by the degree recursion; needs
// A(0) invertible over the tower and all windows starting at 0.
SMat smat_solve_unit(const SMat& A, const SMat& B, long count);
SMat smat_inverse_unit(const SMat& A, long count);

}  // namespace isocat
