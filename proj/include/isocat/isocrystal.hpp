#pragma once

#include <optional>

#include "isocat/matrix.hpp"
#include "isocat/poly.hpp"
#include "isocat/rings.hpp"

namespace isocat {

using TowerMat = Mat<TowerOps>;

// Defining data of the base field K = K_0(pi): an unramified part of
// degree f given by a monic integer polynomial irreducible mod p, and an
// Eisenstein polynomial of degree e whose coefficients are vectors over
// the K_0-basis 1, omega, ..., omega^{f-1}.
struct BaseField {
  std::vector<Rat> unramMinPoly;
  std::vector<std::vector<Rat>> eisenstein;

  long f() const { return static_cast<long>(unramMinPoly.size()) - 1; }
  long e() const { return static_cast<long>(eisenstein.size()) - 1; }
  long degree() const { return e() * f(); }

  static BaseField qp(std::int64_t p);                             // K = Q_p
  static BaseField unramified(long f, std::int64_t p);             // K = Q_{p^f}
  static BaseField totally_ramified(std::vector<Rat> eisensteinQp);  // K_0 = Q_p
};

// One embedding K -> F, recorded by the images of K's two generators.
// `factor` says which Frobenius factor of the coefficient module the
// embedding's filtration flag lives on.
struct Embedding {
  FieldTowerElement omegaImage;
  FieldTowerElement piImage;
  long factor = 0;
};

// All e*f embeddings K -> F in a deterministic order: factors follow the
// Frobenius orbit of the smallest root of the unramified minimal
// polynomial, and roots of the Eisenstein image are sorted within each
// factor. Throws UnsplitCoefficientField when K does not split in F.
std::vector<Embedding> canonical_embeddings(const BaseField& K, const TowerPtr& F);

// Frobenius data: blocks[i] is the invertible matrix of Phi from factor i
// to factor i+1 (mod f). The linearization of Phi^f on factor 0 is
// blocks[f-1] * ... * blocks[1] * blocks[0].
struct Isocrystal {
  TowerPtr F;
  long rank = 0;
  std::vector<TowerMat> blocks;

  long f() const { return static_cast<long>(blocks.size()); }
  TowerMat frobenius_power() const;
};

// A flag step: the filtration subspace at `jump`, spanned by the columns
// of `basis` (a rank x dim matrix whose columns are independent).
struct FlagStep {
  long jump = 0;
  TowerMat basis;
};

// Ascending jumps; the first step spans the whole space and column counts
// strictly decrease (descending, separated, exhaustive filtration).
struct EmbeddedFlag {
  std::vector<FlagStep> steps;
};

struct Filtration {
  std::vector<EmbeddedFlag> flags;  // aligned with the embedding list
};

struct FilteredIsocrystal {
  Isocrystal D;
  BaseField K;
  std::vector<Embedding> embeddings;
  Filtration filtration;
};

// Computes embeddings, checks all structural invariants, and returns the
// assembled object; flags must be supplied in canonical embedding order.
FilteredIsocrystal make_filtered(Isocrystal D, BaseField K, Filtration filtration);
void validate_filtered(const FilteredIsocrystal& X);

// t_N = val(det(blocks[f-1]...blocks[0])) / f
Rat newton_number(const Isocrystal& D);
// t_H = sum over embeddings and jumps of jump * graded-dimension / (e*f)
Rat degree_of_filtration(const FilteredIsocrystal& X);
// (t_N - t_H) / rank; weak admissibility needs this to vanish
Rat slope(const FilteredIsocrystal& X);

// A Phi-stable subobject, recorded by a basis of its factor-0 component;
// the factor-i component is the image under blocks[i-1]...blocks[0].
struct Subobject {
  long dim = 0;
  TowerMat basis;  // rank x dim, columns independent
};

// Complete list of Phi-stable subobjects, ordered by dimension (0 and the
// whole module included). Requires the characteristic polynomial of the
// Frobenius power to be squarefree, except in rank <= 2 where a repeated
// eigenvalue with a one-dimensional eigenspace is also handled.
// Throws NonGenericFrobenius when the invariant-subspace family is not
// finite or not certified.
std::vector<Subobject> phi_stable_subobjects(const Isocrystal& D);

Rat subobject_newton_number(const FilteredIsocrystal& X, const Subobject& U);
Rat subobject_hodge_number(const FilteredIsocrystal& X, const Subobject& U);

struct SubobjectCertificate {
  long dim = 0;
  TowerMat basis;
  Rat newtonNumber;
  Rat hodgeNumber;
};

enum class WaReason { Admissible, NonzeroSlope, SubobjectViolation };

struct WaVerdict {
  bool admissible = false;
  WaReason reason = WaReason::Admissible;
  std::optional<SubobjectCertificate> certificate;
};

// Weak admissibility: slope zero and t_N >= t_H on every Phi-stable
// subobject. The three-argument form tests a caller-supplied candidate
// list instead of enumerating (escape hatch for non-generic Frobenius).
WaVerdict is_weakly_admissible(const FilteredIsocrystal& X);
WaVerdict is_weakly_admissible(const FilteredIsocrystal& X, const std::vector<Subobject>& candidates);

// charpoly of Phi^f on factor 0, monic of degree rank
TowerPoly frobenius_charpoly(const Isocrystal& D);

// ascending slope multisets, rank entries each; sums equal t_N and t_H
std::vector<Rat> newton_polygon_slopes(const Isocrystal& D);
std::vector<Rat> hodge_polygon_slopes(const FilteredIsocrystal& X);

struct HnStep {
  Subobject U;
  Rat quotientSlope;
};

// Harder-Narasimhan chain: successive subobjects maximizing the quotient
// slope (ties broken by maximal rank), ending at the whole module;
// quotient slopes strictly decrease. Chain length 1 iff semistable.
std::vector<HnStep> hn_filtration(const FilteredIsocrystal& X);

// Extension along the unramified extension of relative degree m >= 1, and
// restriction along the unramified subfield of relative degree k | f_F.
// Both require the coefficient tower's Eisenstein data to be rational.
FilteredIsocrystal extend_scalars(const FilteredIsocrystal& X, long m);
FilteredIsocrystal restrict_scalars(const FilteredIsocrystal& X, long k);

// Deterministic monic degree-n lift of the first irreducible polynomial
// over F_p in counter order; n = 1 gives x.
std::vector<Rat> unram_min_poly_of_degree(std::int64_t p, long n);

}  // namespace isocat
