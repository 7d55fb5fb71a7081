#pragma once

#include <memory>
#include <string>
#include <vector>

#include "isocat/padic.hpp"
#include "isocat/precision.hpp"
#include "isocat/residue.hpp"

namespace isocat {

class FieldTowerElement;

// A two-stage extension of Q_p at working precision:
//
//   Q_p  --(unramified, degree f, generator omega)-->  K0
//   K0   --(totally ramified, degree e, uniformizer pi, Eisenstein E)-->  K
//
// Elements are e x f coefficient grids over Q_p in the basis pi^i * omega^j.
// The basis has the no-cancellation property: distinct basis positions
// contribute terms with different valuations mod 1 (across i) and without
// residual cancellation (across j, since omega generates the residue field),
// so valuations of elements are computed exactly from the grid.
class FieldTower : public std::enable_shared_from_this<FieldTower> {
 public:
  // unramMinPoly: monic degree f with integer coefficients, irreducible
  // mod p.  eisenstein: monic degree e; coefficient i is given as an
  // f-vector of rationals over the K0-basis; all non-leading coefficients
  // must have valuation >= 1 and the constant term valuation exactly 1.
  static std::shared_ptr<const FieldTower> make(const PrecisionContext& ctx,
                                                const std::vector<Rat>& unramMinPoly,
                                                const std::vector<std::vector<Rat>>& eisenstein);
  // convenience: Eisenstein polynomial with plain rational coefficients
  static std::shared_ptr<const FieldTower> make(const PrecisionContext& ctx,
                                                const std::vector<Rat>& unramMinPoly,
                                                const std::vector<Rat>& eisensteinQp);
  // the base field Q_p itself
  static std::shared_ptr<const FieldTower> qp(const PrecisionContext& ctx);

  std::int64_t p() const { return p_; }
  int cap() const { return cap_; }
  long f() const { return f_; }
  long e() const { return e_; }
  long degree() const { return e_ * f_; }
  const PrecisionContext& context() const { return ctx_; }
  const FqContext& residue_field() const { return residue_; }
  const std::vector<Rat>& unram_min_poly() const { return unramPoly_; }
  const std::vector<std::vector<Rat>>& eisenstein() const { return eisPoly_; }

  FieldTowerElement zero() const;
  FieldTowerElement one() const;
  FieldTowerElement from_rational(const Rat& q) const;
  FieldTowerElement from_grid(const std::vector<std::vector<Rat>>& grid) const;
  FieldTowerElement pi() const;     // uniformizer (valuation 1/e)
  FieldTowerElement omega() const;  // unramified generator
  FieldTowerElement basis_element(long i, long j) const;  // pi^i * omega^j

  // image of omega under the lift of the residue Frobenius x -> x^p
  const std::vector<PadicScalar>& frobenius_omega_powers() const { return frobOmegaPow_; }

 private:
  friend class FieldTowerElement;
  FieldTower() = default;

  PrecisionContext ctx_;
  std::int64_t p_ = 2;
  int cap_ = 1;
  long f_ = 1, e_ = 1;
  std::vector<Rat> unramPoly_;
  std::vector<std::vector<Rat>> eisPoly_;
  FqContext residue_;
  std::vector<std::vector<PadicScalar>> unramCoeff_;  // minpoly coefficients, exact
  std::vector<std::vector<PadicScalar>> eisCoeff_;    // K0-vectors, exact
  std::vector<PadicScalar> frobOmegaPow_;  // sigma(omega)^j for j < f, flattened f x f
};

using TowerPtr = std::shared_ptr<const FieldTower>;

class FieldTowerElement {
 public:
  FieldTowerElement() = default;
  FieldTowerElement(TowerPtr tower, std::vector<PadicScalar> flat);

  const TowerPtr& tower() const { return T_; }
  const PadicScalar& coeff(long i, long j) const { return c_[static_cast<size_t>(i * T_->f() + j)]; }

  bool is_zero_at_precision() const;
  bool congruent(const FieldTowerElement& o) const { return (*this - o).is_zero_at_precision(); }
  // agreement certified modulo p^prec: the difference provably has valuation >= prec
  bool congruent(const FieldTowerElement& o, int prec) const {
    return (*this - o).valuation_lower_bound() >= prec;
  }

  // valuation normalized so that val(p) = 1 and val(pi) = 1/e:
  //   valuation()           treats invisible coefficients as zero,
  //   valuation_lower_bound includes what hidden digits could contribute,
  //   valuation_strict      throws PrecisionExhausted unless certified exact.
  Val valuation() const;
  Rat valuation_lower_bound() const;
  Rat valuation_strict() const;

  FieldTowerElement operator+(const FieldTowerElement& o) const;
  FieldTowerElement operator-(const FieldTowerElement& o) const;
  FieldTowerElement operator*(const FieldTowerElement& o) const;
  FieldTowerElement operator/(const FieldTowerElement& o) const { return *this * o.inverse(); }
  FieldTowerElement operator-() const;
  FieldTowerElement inverse() const;
  FieldTowerElement pow(long e) const;
  FieldTowerElement scale(const PadicScalar& s) const;
  FieldTowerElement mul_p_pow(long k) const;

  FieldTowerElement reduce_to(int aNew) const;

  // Frobenius of the unramified stage.  Precondition: the element lies in
  // K0, i.e. every pi-row above the first is zero (at precision); visible
  // pi-components raise NotUnramified.
  FieldTowerElement frobenius_K0() const;

  // image in the residue field; requires an integral element
  FqContext::Elem residue_image() const;

  std::string str() const;

 private:
  TowerPtr T_;
  std::vector<PadicScalar> c_;  // e*f entries, row-major over (i, j)
};

// Solves A x = b over Q_p by Gaussian elimination with best-valuation
// pivoting; throws InvertNonUnit when A is singular at working precision.
std::vector<PadicScalar> qp_solve(std::vector<std::vector<PadicScalar>> A,
                                  std::vector<PadicScalar> b);

}  // namespace isocat
