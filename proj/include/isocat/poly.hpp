#pragma once

#include <string>
#include <utility>
#include <vector>

#include "isocat/tower.hpp"

namespace isocat {

// Polynomials over a field tower, coefficients ascending: a[0] + a[1] x + ...
using TowerPoly = std::vector<FieldTowerElement>;

TowerPoly tp_from_rationals(const TowerPtr& T, const std::vector<Rat>& coeffs);
TowerPoly tp_trim(TowerPoly a);   // strips trailing exactly-zero coefficients
long tp_deg(const TowerPoly& a);  // degree after trimming, -1 for zero
bool tp_zero_at_precision(const TowerPoly& a);
std::string tp_str(const TowerPoly& a, const std::string& var = "x");

TowerPoly tp_add(const TowerPoly& a, const TowerPoly& b);
TowerPoly tp_sub(const TowerPoly& a, const TowerPoly& b);
TowerPoly tp_neg(TowerPoly a);
TowerPoly tp_mul(const TowerPoly& a, const TowerPoly& b);
TowerPoly tp_scale(TowerPoly a, const FieldTowerElement& c);
TowerPoly tp_monic(const TowerPoly& a);  // divide by the leading coefficient
// long division; the divisor's leading coefficient must be visibly nonzero
void tp_divrem(const TowerPoly& num, const TowerPoly& den, TowerPoly& quo, TowerPoly& rem);
FieldTowerElement tp_eval(const TowerPoly& a, const FieldTowerElement& x);
TowerPoly tp_derivative(const TowerPoly& a);
TowerPoly tp_compose(const TowerPoly& f, const TowerPoly& g);  // f(g(x))

// inverse of a modulo m, verified a posteriori: a * result = 1 (mod m) at
// working precision; throws InvertNonUnit when not coprime at precision
TowerPoly tp_modinv(const TowerPoly& a, const TowerPoly& m);

FieldTowerElement tp_resultant(const TowerPoly& f, const TowerPoly& g);
// valuation of disc(f) for monic f; infinite when zero at working precision
Val tp_disc_valuation(const TowerPoly& f);

struct PolygonSegment {
  Rat rootValuation;
  long length;
  bool operator==(const PolygonSegment&) const = default;
};
// Slope decomposition of a polynomial with invertible leading coefficient and
// nonzero constant term, as segments (root valuation, number of roots) in
// ascending root valuation.  In strict mode a coefficient hidden below working
// precision that could alter the hull raises PrecisionExhausted; otherwise
// hidden coefficients are treated as zero.
std::vector<PolygonSegment> tp_newton_polygon(const TowerPoly& f, bool strict = true);

struct TowerFactor {
  TowerPoly poly;  // monic
  long multiplicity;
  bool certifiedIrreducible;
};
// Monic factorization at working precision.  Factors whose irreducibility
// cannot be certified raise NonGenericFrobenius; coefficient uncertainty that
// blocks a decision raises PrecisionExhausted.  The product of the returned
// factors is re-verified against the input before returning.
std::vector<TowerFactor> tp_factor_monic(const TowerPoly& f);
// roots lying in the tower itself, with multiplicities
std::vector<std::pair<FieldTowerElement, long>> tp_find_roots(const TowerPoly& f);

// lift of a residue-field element along the coefficient basis (omega-digits
// lifted to exact integers)
FieldTowerElement tower_lift_residue(const TowerPtr& T, const FqContext::Elem& r);

}  // namespace isocat
