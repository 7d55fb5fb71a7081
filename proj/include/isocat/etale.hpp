#pragma once

#include <optional>
#include <string>

#include "isocat/disc.hpp"
#include "isocat/series.hpp"

namespace isocat {

// Phi-modules on closed annuli near the boundary of the unit u-disc, with
// Gauss-valuation bookkeeping, the successive-approximation construction of
// integral lattices, and the etale-at-a-point decision with certificates.
//
// Radius convention: a radius is recorded by the additive valuation
// rho = -log_p |u|, so the annulus [index+span, index] of the ladder
// rho_n = (p+1)/(2 e p^{n+1}) means rho_outer <= val(u) <= rho_inner with
// rho_outer = rho_{index+span} (closer to the boundary).  The Gauss
// valuation of sum c_k u^k at rho is min_k val(c_k) + k*rho.
//
// All certificates are statements about the stored Laurent windows: a
// truncated tail is norm-negligible throughout the annulus by construction
// (helpers only discard terms whose Gauss valuation clears the working
// precision by a wide margin at both edge radii).

// Certified lower bound for the Gauss valuation of the stored window;
// invisible coefficients contribute their precision floor.  Infinite for an
// empty window.
Val radius_norm_floor(const TruncatedSeries& f, const Rat& rho);

struct DominantTerm {
  long exponent = 0;
  Rat norm;            // val(c_k) + k*rho of the minimizing visible term
  bool strict = false; // unique minimizer, below every precision floor
};
// The term realizing the Gauss valuation at rho, or nullopt when no
// coefficient is visible at working precision.
std::optional<DominantTerm> dominant_term(const TruncatedSeries& f, const Rat& rho);

// min over entries of radius_norm_floor
Val matrix_norm_floor(const SMat& m, const Rat& rho);

// Phi-module of finite rank on a closed annulus with ladder-aligned radii.
// phiMatrix columns give Phi on the basis: Phi(m_k) = sum_i M_{ik} m_i.
struct AnnulusModule {
  TowerPtr tower;
  long eDegree = 1;   // ramification degree entering the radius ladder
  long rank = 0;
  int ladderIndex = 0;
  int ladderSpan = 2; // outer edge ladderSpan rungs past the inner edge
  SMat phiMatrix;     // Laurent windows
  std::string basisLabel;

  Rat rhoInner() const;
  Rat rhoOuter() const;
};

// Restriction of a disc module to the boundary-side annulus at the given
// ladder index.  The index must be at least the disc level so every zero of
// the retained Eisenstein factors stays strictly inside the annulus
// (NonUnitDenominator otherwise); WindowOverflow when the disc window is
// empty or does not determine the annulus matrix.
AnnulusModule restrict_disc_to_annulus(const DiscModule& M, int annulusIndex);

struct ApproxResult {
  SMat U;  // change of basis over the one-rung annulus [sTilde, sTilde/p]
  SMat W;  // defect U^{-1} F phi(U) D^{-1} - I, certified small
};

// One approximation run at the rung with inner edge sTilde (additive).
// Preconditions (additive translation of the closeness hypotheses):
//   gamma := nu_s((F-D)D^{-1}) - val_h (p-1)/p > 0   where
//   val_h := -(nu_s(D) + nu_s(D^{-1})) >= 0, and
//   2 (p-1) sTilde <= p * gamma.
// Iterates U <- U (I + X), X the non-integral part of the defect, until the
// certificates hold: every W coefficient has val >= 1 for u-exponent >= 0
// and val + k*sTilde >= 1 for u-exponent k < 0 (entries in p times the
// integral ring of the [sTilde, boundary) window).
// Errors: PreconditionViolated, PrecisionExhausted, NoConvergence (budget
// of 64 sweeps exhausted, or windows exploded).
ApproxResult approx_step(const SMat& D, const SMat& F, const Rat& sTilde);

struct EtaleCertificate {
  SMat changeOfBasis;      // U, invertible over the annulus ring
  SMat integralPhiMatrix;  // entry norms >= 0 at both radii, unit determinant
  Rat anchorRho;           // rung where the approximation ran
};

enum class EtaleVerdict { Etale, NotEtale, Unknown };

struct EtaleResult {
  EtaleVerdict verdict = EtaleVerdict::Unknown;
  std::string reason;
  std::optional<EtaleCertificate> certificate;
};

// Re-verifies a certificate by direct arithmetic at the module's radii:
// changeOfBasis invertible (unit-shaped determinant), integralPhiMatrix
// entrywise integral with unit determinant, and
// phiMatrix * phi(U) = U * integralPhiMatrix at working precision.
bool verify_certificate(const AnnulusModule& N, const EtaleCertificate& cert);

// Decision procedure:
//   - determinant dominance at the two edge radii; differing dominant
//     exponents certify an interior zero (not etale), a nonzero unit-part
//     valuation is the degree obstruction (not etale);
//   - rank 1: etale iff the unit-part valuation vanishes; a monomial
//     certificate is attached when (p-1) divides the dominant exponent;
//   - rank 2: Frobenius-stable lines are searched in both affine charts by
//     lifting roots of the u=0 proportionality quadratic; a certified
//     stable line of negative slope refutes etaleness (a saturated line of
//     positive slope does not: its quotient has negative slope, which only
//     subobjects are forbidden to have).  Otherwise a
//     certificate is sought by conjugating with monomial twists, seeding
//     the integral part, and running approx_step at the first ladder rung
//     whose preconditions hold; the certificate is re-verified at the
//     module's own radii before acceptance.
//   - verdict unknown when no obstruction is proven and no certificate is
//     found (always for rank >= 3 modules that pass the determinant tests).
// Errors: PrecisionExhausted when dominance cannot be decided.
EtaleResult is_etale_at_point(const AnnulusModule& N);

}  // namespace isocat
