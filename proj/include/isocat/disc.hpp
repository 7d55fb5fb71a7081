#pragma once

#include <vector>

#include "isocat/isocrystal.hpp"
#include "isocat/series.hpp"

namespace isocat {

// Vector bundles with Frobenius structure on closed sub-discs of the open
// unit u-disc, and the correspondence with filtered isocrystals.  The base
// field K must be totally ramified over Q_p (f = 1) and its Eisenstein
// polynomial must split in the coefficient field F; general residue
// extensions would conjugate every congruence block by the unramified
// Frobenius and are out of scope here.

// lambda-products of the normalized Eisenstein polynomial:
//   factors[i] = E(u^{p^i}) / E(0),   lambda = factors[0] * ... * factors[n],
// an exact polynomial of degree e * (p^{n+1} - 1) / (p - 1) with constant
// term 1, vanishing exactly at the level-0..n roots.
struct LambdaFactors {
  long level = 0;
  TruncatedSeries lambda;
  std::vector<TruncatedSeries> factors;
};

// windowHi < 0 keeps the natural exact window [0, deg]; otherwise the result
// is re-windowed to [0, windowHi] and WindowOverflow is thrown when that
// would cut known-nonzero coefficients.
LambdaFactors lambda_factors(const TowerPtr& F, const BaseField& K, long level,
                             long windowHi = -1);

// Free module of rank d over the level-n disc with semilinear Frobenius:
// basis columns P (exact polynomials in lambda^{-1}-normalized coordinates of
// the ambient isocrystal) and Frobenius matrix C on the truncated window
// [0, e*p^{n+1} - 1], acting by Phi(m_k) = sum_i C_{ik} m_i.
struct DiscModule {
  TowerPtr F;
  BaseField K;
  std::vector<Embedding> embeddings;
  long rank = 0;
  long level = 0;
  SMat phiMatrix;                  // window [0, e*p^{n+1} - 1], inexact tail
  std::vector<long> weightOneDims; // per embedding: corank of phiMatrix at its root
  SMat basis;                      // P, exact polynomial entries
  Mat<TowerOps> basisAtZero;       // P(0), invertible
};

// Builds the level-n disc module of a filtered isocrystal with minuscule
// Hodge weights (all filtration jumps in {0,1}): sections g of degree at
// most e*(p^{n+1}-1)/(p-1) subject to, for every j <= n and every embedding,
// all u^t-slices of (B^{-j} g mod u^{p^j} - pi_psi) lying in the weight-one
// step.  Generators are extracted degree-greedily with invertible constant
// term; the Frobenius matrix solves P C = (E/E(0)) B phi(P).
// Errors: PreconditionViolated (residue extension), NotMinuscule,
// PrecisionExhausted (rank decisions or postconditions unstable).
DiscModule disc_module_from_filtered(const FilteredIsocrystal& X, long level);

// In-window fixed point Xi of Xi -> C * phi(Xi) * C(0)^{-1} with Xi(0) = I;
// the change of frame comparing the disc module to the constant fiber.
SMat disc_comparison_matrix(const DiscModule& M);

// Descends a disc module to its fiber at u = 0: Frobenius C(0), filtration
// per embedding from the threshold kernel of Xi(pi_psi), whose dimension must
// agree with the corank of C(pi_psi).
FilteredIsocrystal filtered_from_disc_module(const DiscModule& M);

}  // namespace isocat
