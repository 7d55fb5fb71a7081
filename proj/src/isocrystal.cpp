#include "isocat/isocrystal.hpp"

#include <algorithm>

#include "isocat/residue.hpp"

namespace isocat {

namespace {

TowerMat hcat(const TowerMat& a, const TowerMat& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  TowerMat r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i].insert(r[i].end(), b[i].begin(), b[i].end());
  return r;
}

size_t mat_cols(const TowerMat& a) { return a.empty() ? 0 : a[0].size(); }

Vec<TowerOps> column_of(const TowerMat& a, size_t j) {
  Vec<TowerOps> v;
  v.reserve(a.size());
  for (const auto& row : a) v.push_back(row[j]);
  return v;
}

TowerMat from_columns(const TowerOps& ops, size_t rows, const std::vector<Vec<TowerOps>>& cols) {
  TowerMat r(rows, Vec<TowerOps>());
  for (size_t i = 0; i < rows; ++i) {
    r[i].reserve(cols.size());
    for (const auto& c : cols) r[i].push_back(c[i]);
  }
  (void)ops;
  return r;
}

// g(B) by Horner's rule with matrix arguments
TowerMat poly_at_matrix(const TowerOps& ops, const TowerPoly& g, const TowerMat& B) {
  size_t n = B.size();
  TowerMat r = mat_zero(ops, n, n);
  for (long k = tp_deg(g); k >= 0; --k) {
    r = mat_mul(ops, r, B);
    for (size_t i = 0; i < n; ++i) r[i][i] = ops.add(r[i][i], g[static_cast<size_t>(k)]);
  }
  return r;
}

FieldTowerElement embed_coeff_vector(const TowerPtr& F, const std::vector<Rat>& v,
                                     const std::vector<FieldTowerElement>& rhoPowers) {
  FieldTowerElement acc = F->zero();
  for (size_t j = 0; j < v.size(); ++j)
    if (v[j] != 0) acc = acc + rhoPowers[j].scale(PadicScalar::exact_rat(F->p(), F->cap(), v[j]));
  return acc;
}

std::vector<FieldTowerElement> powers_of(const FieldTowerElement& x, long count) {
  std::vector<FieldTowerElement> pw{x.tower()->one()};
  for (long j = 1; j < count; ++j) pw.push_back(pw.back() * x);
  return pw;
}

// deterministic root list: ascending by printed form
std::vector<FieldTowerElement> sorted_simple_roots(const TowerPoly& f, long expected, const char* what) {
  std::vector<std::pair<FieldTowerElement, long>> roots;
  try {
    roots = tp_find_roots(f);
  } catch (const NonGenericFrobenius&) {
    throw UnsplitCoefficientField(std::string(what) + ": split could not be certified at working precision");
  }
  std::vector<FieldTowerElement> out;
  for (const auto& [r, m] : roots) {
    if (m != 1) throw UnsplitCoefficientField(std::string(what) + ": repeated root at working precision");
    out.push_back(r);
  }
  if (static_cast<long>(out.size()) != expected)
    throw UnsplitCoefficientField(std::string(what) + ": expected " + std::to_string(expected) +
                                  " roots, found " + std::to_string(out.size()));
  std::sort(out.begin(), out.end(),
            [](const FieldTowerElement& a, const FieldTowerElement& b) { return a.str() < b.str(); });
  return out;
}

void require_rational_eisenstein(const TowerPtr& F, const char* who) {
  for (const auto& row : F->eisenstein())
    for (size_t j = 1; j < row.size(); ++j)
      if (row[j] != 0)
        throw PreconditionViolated(std::string(who) +
                                   ": implemented for towers with rational Eisenstein data only");
}

std::vector<Rat> rational_eisenstein_rows(const TowerPtr& F) {
  std::vector<Rat> e;
  for (const auto& row : F->eisenstein()) e.push_back(row.empty() ? Rat(0) : row[0]);
  return e;
}

bool same_line(const ThresholdTowerOps& th, const TowerMat& a, const TowerMat& b) {
  return mat_rank(th, hcat(a, b)) == 1;
}

}  // namespace

BaseField BaseField::qp(std::int64_t p) { return totally_ramified({Rat(-p), Rat(1)}); }

BaseField BaseField::unramified(long f, std::int64_t p) {
  BaseField K;
  K.unramMinPoly = unram_min_poly_of_degree(p, f);
  K.eisenstein.assign(2, std::vector<Rat>(static_cast<size_t>(f), Rat(0)));
  K.eisenstein[0][0] = Rat(-p);
  K.eisenstein[1][0] = Rat(1);
  return K;
}

BaseField BaseField::totally_ramified(std::vector<Rat> eisensteinQp) {
  BaseField K;
  K.unramMinPoly = {Rat(0), Rat(1)};
  for (const Rat& c : eisensteinQp) K.eisenstein.push_back({c});
  return K;
}

std::vector<Rat> unram_min_poly_of_degree(std::int64_t p, long n) {
  if (n < 1) throw DomainViolation("unram_min_poly_of_degree: degree must be positive");
  if (n == 1) return {Rat(0), Rat(1)};
  FqContext Fp(p, {0, 1});
  for (BigInt counter = 1; counter < ipow(BigInt(p), n); ++counter) {
    FqPoly cand(static_cast<size_t>(n) + 1, Fp.one());
    std::vector<Rat> lifted(static_cast<size_t>(n) + 1, Rat(1));
    BigInt c = counter;
    for (long i = 0; i < n; ++i) {
      auto digit = (c % p).convert_to<std::int64_t>();
      cand[static_cast<size_t>(i)] = Fp.from_int(digit);
      lifted[static_cast<size_t>(i)] = Rat(digit);
      c /= p;
    }
    if (fq_poly_irreducible(Fp, cand)) return lifted;
  }
  throw NoConvergence("unram_min_poly_of_degree: no irreducible polynomial found");  // unreachable
}

std::vector<Embedding> canonical_embeddings(const BaseField& K, const TowerPtr& F) {
  if (K.f() < 1 || K.e() < 1) throw PreconditionViolated("base field has empty defining data");
  TowerPoly m = tp_from_rationals(F, K.unramMinPoly);
  std::vector<FieldTowerElement> unramRoots =
      sorted_simple_roots(m, K.f(), "unramified part of the base field");
  // factor i follows the Frobenius orbit of the smallest root
  std::vector<FieldTowerElement> rho{unramRoots[0]};
  for (long i = 1; i < K.f(); ++i) rho.push_back(rho.back().frobenius_K0());
  std::vector<Embedding> out;
  for (long i = 0; i < K.f(); ++i) {
    std::vector<FieldTowerElement> rhoPow = powers_of(rho[static_cast<size_t>(i)], K.f());
    TowerPoly E;
    for (const auto& row : K.eisenstein) E.push_back(embed_coeff_vector(F, row, rhoPow));
    std::vector<FieldTowerElement> piRoots =
        sorted_simple_roots(E, K.e(), "Eisenstein polynomial of the base field");
    for (const auto& piImg : piRoots)
      out.push_back(Embedding{rho[static_cast<size_t>(i)], piImg, i});
  }
  return out;
}

TowerMat Isocrystal::frobenius_power() const {
  if (blocks.empty()) throw PreconditionViolated("isocrystal has no Frobenius blocks");
  TowerOps ops(F);
  TowerMat b = blocks[0];
  for (size_t i = 1; i < blocks.size(); ++i) b = mat_mul(ops, blocks[i], b);
  return b;
}

void validate_filtered(const FilteredIsocrystal& X) {
  const Isocrystal& D = X.D;
  if (!D.F) throw PreconditionViolated("missing coefficient tower");
  size_t d = static_cast<size_t>(D.rank);
  if (d == 0) throw PreconditionViolated("rank must be positive");
  if (D.blocks.empty()) throw PreconditionViolated("at least one Frobenius block required");
  if (static_cast<long>(D.blocks.size()) != X.K.f())
    throw PreconditionViolated("Frobenius block count must match the unramified degree of K");
  ThresholdTowerOps th(D.F);
  for (const TowerMat& A : D.blocks) {
    if (A.size() != d) throw PreconditionViolated("Frobenius block has wrong row count");
    for (const auto& row : A)
      if (row.size() != d) throw PreconditionViolated("Frobenius block not square");
    if (mat_rank(th, A) != d)
      throw PreconditionViolated("Frobenius block not invertible at working precision");
  }
  if (X.K.f() < 1 || X.K.unramMinPoly.back() != 1)
    throw PreconditionViolated("unramified minimal polynomial of K must be monic");
  if (X.K.e() < 1) throw PreconditionViolated("Eisenstein polynomial of K must have positive degree");
  const auto& lead = X.K.eisenstein.back();
  if (lead.empty() || lead[0] != 1)
    throw PreconditionViolated("Eisenstein polynomial of K must be monic");
  for (size_t j = 1; j < lead.size(); ++j)
    if (lead[j] != 0) throw PreconditionViolated("Eisenstein polynomial of K must be monic");
  if (static_cast<long>(X.embeddings.size()) != X.K.degree())
    throw PreconditionViolated("embedding count must equal the degree of K");
  for (const Embedding& e : X.embeddings)
    if (e.factor < 0 || e.factor >= X.K.f())
      throw PreconditionViolated("embedding factor index out of range");
  if (X.filtration.flags.size() != X.embeddings.size())
    throw PreconditionViolated("one filtration flag per embedding required");
  for (const EmbeddedFlag& flag : X.filtration.flags) {
    if (flag.steps.empty()) throw PreconditionViolated("flag must have at least one step");
    if (mat_cols(flag.steps[0].basis) != d)
      throw PreconditionViolated("first flag step must span the whole space");
    size_t prevCols = d + 1;
    for (size_t j = 0; j < flag.steps.size(); ++j) {
      const FlagStep& step = flag.steps[j];
      if (j > 0 && step.jump <= flag.steps[j - 1].jump)
        throw PreconditionViolated("flag jumps must be strictly ascending");
      if (step.basis.size() != d) throw PreconditionViolated("flag basis has wrong row count");
      size_t cols = mat_cols(step.basis);
      if (cols == 0 || cols >= prevCols)
        throw PreconditionViolated("flag dimensions must strictly decrease");
      if (mat_rank(th, step.basis) != cols)
        throw PreconditionViolated("flag basis columns must be independent at working precision");
      if (j > 0 && mat_rank(th, hcat(flag.steps[j - 1].basis, step.basis)) !=
                       mat_cols(flag.steps[j - 1].basis))
        throw PreconditionViolated("flag steps must be nested");
      prevCols = cols;
    }
  }
}

Rat newton_number(const Isocrystal& D) {
  TowerOps ops(D.F);
  FieldTowerElement det = mat_det(ops, D.frobenius_power());
  if (det.is_zero_at_precision())
    throw PrecisionExhausted("Frobenius determinant not visible at working precision");
  return det.valuation_strict() / Rat(D.f());
}

Rat degree_of_filtration(const FilteredIsocrystal& X) {
  Rat total = 0;
  for (const EmbeddedFlag& flag : X.filtration.flags) {
    for (size_t j = 0; j < flag.steps.size(); ++j) {
      long dimHere = static_cast<long>(mat_cols(flag.steps[j].basis));
      long dimNext = j + 1 < flag.steps.size() ? static_cast<long>(mat_cols(flag.steps[j + 1].basis)) : 0;
      total += Rat(flag.steps[j].jump) * Rat(dimHere - dimNext);
    }
  }
  return total / Rat(static_cast<long>(X.embeddings.size()));
}

Rat slope(const FilteredIsocrystal& X) {
  return (newton_number(X.D) - degree_of_filtration(X)) / Rat(X.D.rank);
}

TowerPoly frobenius_charpoly(const Isocrystal& D) {
  TowerOps ops(D.F);
  PolyRingOps<TowerOps> pr(ops);
  TowerMat B = D.frobenius_power();
  size_t d = B.size();
  Mat<PolyRingOps<TowerOps>> xiMinusB(d, Vec<PolyRingOps<TowerOps>>(d));
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) {
      if (i == j)
        xiMinusB[i][j] = {ops.neg(B[i][j]), ops.one()};
      else
        xiMinusB[i][j] = {ops.neg(B[i][j])};
    }
  return mat_det_cofactor(pr, xiMinusB);
}

std::vector<Subobject> phi_stable_subobjects(const Isocrystal& D) {
  TowerOps ops(D.F);
  size_t d = static_cast<size_t>(D.rank);
  TowerMat B = D.frobenius_power();
  std::vector<TowerFactor> factors = tp_factor_monic(frobenius_charpoly(D));
  bool squarefree = true, certified = true;
  for (const auto& fac : factors) {
    squarefree = squarefree && fac.multiplicity == 1;
    certified = certified && fac.certifiedIrreducible;
  }

  if (squarefree && certified) {
    std::vector<TowerMat> kernels;
    std::vector<long> degs;
    for (const auto& fac : factors) {
      long dg = tp_deg(fac.poly);
      auto kern = mat_kernel(ops, poly_at_matrix(ops, fac.poly, B));
      if (static_cast<long>(kern.size()) != dg)
        throw PrecisionExhausted("eigenspace dimension unclear at working precision");
      kernels.push_back(from_columns(ops, d, kern));
      degs.push_back(dg);
    }
    size_t r = factors.size();
    std::vector<Subobject> out;
    for (size_t mask = 0; mask < (size_t(1) << r); ++mask) {
      TowerMat basis;
      long dim = 0;
      for (size_t i = 0; i < r; ++i)
        if (mask & (size_t(1) << i)) {
          basis = hcat(basis, kernels[i]);
          dim += degs[i];
        }
      if (basis.empty()) basis.assign(d, Vec<TowerOps>());
      out.push_back(Subobject{dim, std::move(basis)});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Subobject& a, const Subobject& b) { return a.dim < b.dim; });
    return out;
  }

  // rank <= 2 tolerates one repeated eigenvalue as long as the eigenspace
  // is a single line (non-scalar Frobenius)
  if (d == 2 && factors.size() == 1 && factors[0].multiplicity == 2 &&
      tp_deg(factors[0].poly) == 1 && factors[0].certifiedIrreducible) {
    FieldTowerElement lambda = -factors[0].poly[0];
    TowerMat N = B;
    for (size_t i = 0; i < d; ++i) N[i][i] = N[i][i] - lambda;
    ThresholdTowerOps th(D.F);
    size_t nrank = mat_rank(th, N);
    if (nrank == 0)
      throw NonGenericFrobenius("scalar Frobenius: invariant lines form a continuum");
    auto kern = mat_kernel(ops, N);
    if (kern.size() != 1)
      throw PrecisionExhausted("repeated-eigenvalue eigenspace unclear at working precision");
    TowerMat empty(d, Vec<TowerOps>());
    std::vector<Subobject> out;
    out.push_back(Subobject{0, empty});
    out.push_back(Subobject{1, from_columns(ops, d, kern)});
    out.push_back(Subobject{2, mat_identity(ops, d)});
    return out;
  }
  throw NonGenericFrobenius("characteristic polynomial of the Frobenius power is not squarefree");
}

Rat subobject_newton_number(const FilteredIsocrystal& X, const Subobject& U) {
  if (U.dim == 0) return 0;
  TowerOps ops(X.D.F);
  const TowerMat& V = U.basis;
  TowerMat BV = mat_mul(ops, X.D.frobenius_power(), V);
  size_t r = static_cast<size_t>(U.dim);
  TowerMat C(r, Vec<TowerOps>());
  for (size_t j = 0; j < mat_cols(BV); ++j) {
    Vec<TowerOps> sol;
    try {
      sol = mat_solve(ops, V, column_of(BV, j));
    } catch (const InvertNonUnit&) {
      throw PreconditionViolated("subobject is not Phi-stable at working precision");
    }
    for (size_t i = 0; i < r; ++i) C[i].push_back(sol[i]);
  }
  FieldTowerElement det = mat_det(ops, C);
  if (det.is_zero_at_precision())
    throw PrecisionExhausted("restricted Frobenius determinant not visible at working precision");
  return det.valuation_strict() / Rat(X.D.f());
}

Rat subobject_hodge_number(const FilteredIsocrystal& X, const Subobject& U) {
  if (U.dim == 0) return 0;
  TowerOps ops(X.D.F);
  ThresholdTowerOps th(X.D.F);
  // factor-i component of the subobject
  std::vector<TowerMat> image{U.basis};
  for (long i = 1; i < X.D.f(); ++i)
    image.push_back(mat_mul(ops, X.D.blocks[static_cast<size_t>(i) - 1], image.back()));
  Rat total = 0;
  for (size_t k = 0; k < X.embeddings.size(); ++k) {
    const TowerMat& W = image[static_cast<size_t>(X.embeddings[k].factor)];
    const EmbeddedFlag& flag = X.filtration.flags[k];
    std::vector<long> dims;
    for (const FlagStep& step : flag.steps) {
      long inter = U.dim + static_cast<long>(mat_cols(step.basis)) -
                   static_cast<long>(mat_rank(th, hcat(step.basis, W)));
      dims.push_back(inter);
    }
    for (size_t j = 0; j < dims.size(); ++j) {
      long next = j + 1 < dims.size() ? dims[j + 1] : 0;
      total += Rat(flag.steps[j].jump) * Rat(dims[j] - next);
    }
  }
  return total / Rat(static_cast<long>(X.embeddings.size()));
}

namespace {

// every line is Phi-stable under a scalar Frobenius; only lines inside a
// filtration step can push t_H above the constant t_N, so flag lines plus
// one generic line decide admissibility
std::vector<Subobject> scalar_candidate_lines(const FilteredIsocrystal& X) {
  TowerOps ops(X.D.F);
  ThresholdTowerOps th(X.D.F);
  size_t d = static_cast<size_t>(X.D.rank);
  std::vector<Subobject> lines;
  for (const EmbeddedFlag& flag : X.filtration.flags)
    for (const FlagStep& step : flag.steps) {
      if (mat_cols(step.basis) != 1) continue;
      bool seen = false;
      for (const auto& known : lines) seen = seen || same_line(th, known.basis, step.basis);
      if (!seen) lines.push_back(Subobject{1, step.basis});
    }
  // a line away from every flag line
  for (size_t attempt = 0; attempt <= lines.size() + 1; ++attempt) {
    TowerMat cand(d, Vec<TowerOps>(1, ops.zero()));
    if (attempt == 0) {
      cand[d - 1][0] = ops.one();
    } else {
      cand[0][0] = ops.one();
      cand[d - 1][0] = X.D.F->from_rational(Rat(static_cast<long>(attempt) - 1));
    }
    bool clash = false;
    for (const auto& known : lines) clash = clash || same_line(th, known.basis, cand);
    if (!clash) {
      lines.push_back(Subobject{1, cand});
      break;
    }
  }
  return lines;
}

bool frobenius_is_scalar(const FilteredIsocrystal& X) {
  if (X.D.rank < 2) return false;
  ThresholdTowerOps th(X.D.F);
  TowerMat B = X.D.frobenius_power();
  TowerMat N = B;
  for (size_t i = 0; i < N.size(); ++i)
    for (size_t j = 0; j < N.size(); ++j)
      if (i != j)
        N[i][j] = B[i][j];
      else
        N[i][j] = B[i][i] - B[0][0];
  return mat_rank(th, N) == 0;
}

WaVerdict wa_over_candidates(const FilteredIsocrystal& X, const std::vector<Subobject>& subs) {
  Rat tN = newton_number(X.D);
  Rat tH = degree_of_filtration(X);
  if (tN != tH) {
    TowerOps ops(X.D.F);
    SubobjectCertificate cert{X.D.rank, mat_identity(ops, static_cast<size_t>(X.D.rank)), tN, tH};
    return {false, WaReason::NonzeroSlope, cert};
  }
  for (const Subobject& U : subs) {
    if (U.dim == 0 || U.dim == X.D.rank) continue;
    Rat uN = subobject_newton_number(X, U);
    Rat uH = subobject_hodge_number(X, U);
    if (uN < uH) {
      SubobjectCertificate cert{U.dim, U.basis, uN, uH};
      return {false, WaReason::SubobjectViolation, cert};
    }
  }
  return {true, WaReason::Admissible, std::nullopt};
}

}  // namespace

WaVerdict is_weakly_admissible(const FilteredIsocrystal& X) {
  // in rank 2 a scalar Frobenius is decidable from finitely many candidate
  // lines even though the subobject family is a continuum
  if (X.D.rank == 2 && frobenius_is_scalar(X))
    return wa_over_candidates(X, scalar_candidate_lines(X));
  return wa_over_candidates(X, phi_stable_subobjects(X.D));
}

WaVerdict is_weakly_admissible(const FilteredIsocrystal& X, const std::vector<Subobject>& candidates) {
  return wa_over_candidates(X, candidates);
}

std::vector<Rat> newton_polygon_slopes(const Isocrystal& D) {
  auto segs = tp_newton_polygon(frobenius_charpoly(D), true);
  std::vector<Rat> out;
  for (const auto& seg : segs)
    for (long i = 0; i < seg.length; ++i) out.push_back(seg.rootValuation / Rat(D.f()));
  return out;
}

std::vector<Rat> hodge_polygon_slopes(const FilteredIsocrystal& X) {
  size_t d = static_cast<size_t>(X.D.rank);
  std::vector<Rat> sums(d, Rat(0));
  for (const EmbeddedFlag& flag : X.filtration.flags) {
    std::vector<long> expanded;
    for (size_t j = 0; j < flag.steps.size(); ++j) {
      long dimHere = static_cast<long>(mat_cols(flag.steps[j].basis));
      long dimNext = j + 1 < flag.steps.size() ? static_cast<long>(mat_cols(flag.steps[j + 1].basis)) : 0;
      for (long t = 0; t < dimHere - dimNext; ++t) expanded.push_back(flag.steps[j].jump);
    }
    std::sort(expanded.begin(), expanded.end());
    for (size_t j = 0; j < d; ++j) sums[j] += Rat(expanded[j]);
  }
  for (Rat& s : sums) s /= Rat(static_cast<long>(X.embeddings.size()));
  return sums;
}

std::vector<HnStep> hn_filtration(const FilteredIsocrystal& X) {
  std::vector<Subobject> subs = phi_stable_subobjects(X.D);
  ThresholdTowerOps th(X.D.F);
  struct Numbers {
    Rat tN, tH;
  };
  std::vector<Numbers> nums;
  for (const Subobject& U : subs)
    nums.push_back({subobject_newton_number(X, U), subobject_hodge_number(X, U)});

  std::vector<HnStep> chain;
  long prevRank = 0;
  Rat prevN = 0, prevH = 0;
  TowerMat prevBasis;
  while (prevRank < X.D.rank) {
    long best = -1;
    Rat bestMu;
    for (size_t i = 0; i < subs.size(); ++i) {
      if (subs[i].dim <= prevRank) continue;
      if (prevRank > 0 &&
          mat_rank(th, hcat(subs[i].basis, prevBasis)) != static_cast<size_t>(subs[i].dim))
        continue;  // does not contain the previous step
      Rat mu = ((nums[i].tN - prevN) - (nums[i].tH - prevH)) / Rat(subs[i].dim - prevRank);
      if (best < 0 || mu > bestMu || (mu == bestMu && subs[i].dim > subs[static_cast<size_t>(best)].dim)) {
        best = static_cast<long>(i);
        bestMu = mu;
      }
    }
    const Subobject& chosen = subs[static_cast<size_t>(best)];
    chain.push_back(HnStep{chosen, bestMu});
    prevRank = chosen.dim;
    prevN = nums[static_cast<size_t>(best)].tN;
    prevH = nums[static_cast<size_t>(best)].tH;
    prevBasis = chosen.basis;
  }
  for (size_t i = 1; i < chain.size(); ++i)
    if (!(chain[i].quotientSlope < chain[i - 1].quotientSlope))
      throw PrecisionExhausted("Harder-Narasimhan slopes failed to decrease at working precision");
  return chain;
}

FilteredIsocrystal make_filtered(Isocrystal D, BaseField K, Filtration filtration) {
  std::vector<Embedding> emb = canonical_embeddings(K, D.F);
  FilteredIsocrystal X{std::move(D), std::move(K), std::move(emb), std::move(filtration)};
  validate_filtered(X);
  return X;
}

FilteredIsocrystal extend_scalars(const FilteredIsocrystal& X, long m) {
  if (m < 1) throw DomainViolation("extend_scalars: degree must be positive");
  if (m == 1) return X;
  const TowerPtr& F = X.D.F;
  require_rational_eisenstein(F, "extend_scalars");
  TowerPtr F2 = FieldTower::make(F->context(), unram_min_poly_of_degree(F->p(), F->f() * m),
                                 rational_eisenstein_rows(F));
  TowerPoly mOld = tp_from_rationals(F2, F->unram_min_poly());
  FieldTowerElement rho = sorted_simple_roots(mOld, F->f(), "coefficient tower image")[0];
  std::vector<FieldTowerElement> rhoPow = powers_of(rho, F->f());
  std::vector<FieldTowerElement> piPow = powers_of(F2->pi(), F->e());
  auto embed = [&](const FieldTowerElement& x) {
    FieldTowerElement acc = F2->zero();
    for (long i = 0; i < F->e(); ++i)
      for (long j = 0; j < F->f(); ++j)
        acc = acc + (piPow[static_cast<size_t>(i)] * rhoPow[static_cast<size_t>(j)]).scale(x.coeff(i, j));
    return acc;
  };
  auto embedMat = [&](const TowerMat& a) {
    TowerMat r;
    for (const auto& row : a) {
      Vec<TowerOps> nr;
      for (const auto& x : row) nr.push_back(embed(x));
      r.push_back(std::move(nr));
    }
    return r;
  };

  Isocrystal D2{F2, X.D.rank, {}};
  for (const TowerMat& A : X.D.blocks) D2.blocks.push_back(embedMat(A));
  std::vector<Embedding> emb2;
  for (const Embedding& e : X.embeddings)
    emb2.push_back(Embedding{embed(e.omegaImage), embed(e.piImage), e.factor});
  Filtration filt2;
  for (const EmbeddedFlag& flag : X.filtration.flags) {
    EmbeddedFlag nf;
    for (const FlagStep& step : flag.steps) nf.steps.push_back(FlagStep{step.jump, embedMat(step.basis)});
    filt2.flags.push_back(std::move(nf));
  }
  FilteredIsocrystal X2{std::move(D2), X.K, std::move(emb2), std::move(filt2)};
  validate_filtered(X2);
  return X2;
}

FilteredIsocrystal restrict_scalars(const FilteredIsocrystal& X, long k) {
  if (k < 1) throw DomainViolation("restrict_scalars: degree must be positive");
  if (k == 1) return X;
  const TowerPtr& F = X.D.F;
  if (F->f() % k != 0)
    throw PreconditionViolated("restrict_scalars: degree must divide the unramified degree");
  require_rational_eisenstein(F, "restrict_scalars");
  long fs = F->f() / k;
  const PrecisionContext& ctx = F->context();
  TowerPtr Fsub = FieldTower::make(ctx, unram_min_poly_of_degree(F->p(), fs), rational_eisenstein_rows(F));
  // the unramified layer of F, for exact basis-change data
  TowerPtr Fur = FieldTower::make(ctx, F->unram_min_poly(), std::vector<Rat>{Rat(-F->p()), Rat(1)});
  TowerPoly mSub = tp_from_rationals(Fur, Fsub->unram_min_poly());
  FieldTowerElement rhoUr = sorted_simple_roots(mSub, fs, "unramified subfield image")[0];
  // basis-change matrix: columns are rho^j * omega^m over the omega-power basis
  long f = F->f();
  std::vector<std::vector<PadicScalar>> M(static_cast<size_t>(f));
  {
    std::vector<FieldTowerElement> rhoPow = powers_of(rhoUr, fs);
    std::vector<FieldTowerElement> omegaPow = powers_of(Fur->omega(), f);
    for (long t = 0; t < f; ++t) M[static_cast<size_t>(t)].reserve(static_cast<size_t>(f));
    for (long j = 0; j < fs; ++j)
      for (long m = 0; m < k; ++m) {
        FieldTowerElement prod = rhoPow[static_cast<size_t>(j)] * omegaPow[static_cast<size_t>(m)];
        for (long t = 0; t < f; ++t) M[static_cast<size_t>(t)].push_back(prod.coeff(0, t));
      }
  }
  // F-element -> its k coordinates over the subfield
  auto coords = [&](const FieldTowerElement& x) {
    std::vector<FieldTowerElement> out(static_cast<size_t>(k), Fsub->zero());
    for (long i = 0; i < F->e(); ++i) {
      std::vector<PadicScalar> b;
      b.reserve(static_cast<size_t>(f));
      for (long t = 0; t < f; ++t) b.push_back(x.coeff(i, t));
      std::vector<PadicScalar> c = qp_solve(M, b);
      for (long j = 0; j < fs; ++j)
        for (long m = 0; m < k; ++m)
          out[static_cast<size_t>(m)] =
              out[static_cast<size_t>(m)] +
              Fsub->basis_element(i, j).scale(c[static_cast<size_t>(j * k + m)]);
    }
    return out;
  };
  std::vector<FieldTowerElement> omegaPowF = powers_of(F->omega(), k);
  // a d-column over F becomes k columns of length d*k over the subfield
  auto restrict_columns = [&](const TowerMat& a) {
    size_t rows = a.size(), cols = mat_cols(a);
    TowerMat r(rows * static_cast<size_t>(k));
    for (auto& row : r) row.reserve(cols * static_cast<size_t>(k));
    for (size_t c = 0; c < cols; ++c)
      for (long m = 0; m < k; ++m)
        for (size_t t = 0; t < rows; ++t) {
          std::vector<FieldTowerElement> cc = coords(a[t][c] * omegaPowF[static_cast<size_t>(m)]);
          for (long s = 0; s < k; ++s)
            r[t * static_cast<size_t>(k) + static_cast<size_t>(s)].push_back(cc[static_cast<size_t>(s)]);
        }
    return r;
  };

  Isocrystal D2{Fsub, X.D.rank * k, {}};
  for (const TowerMat& A : X.D.blocks) D2.blocks.push_back(restrict_columns(A));
  // embeddings of K into the subfield, matched against the original list
  std::vector<Embedding> subEmb = canonical_embeddings(X.K, Fsub);
  // embed the subfield into F to compare images
  FieldTowerElement rhoF = F->zero();
  for (long t = 0; t < f; ++t)
    rhoF = rhoF + F->basis_element(0, t).scale(rhoUr.coeff(0, t));
  std::vector<FieldTowerElement> rhoFPow = powers_of(rhoF, fs);
  std::vector<FieldTowerElement> piFPow = powers_of(F->pi(), F->e());
  auto embedSub = [&](const FieldTowerElement& x) {
    FieldTowerElement acc = F->zero();
    for (long i = 0; i < F->e(); ++i)
      for (long j = 0; j < fs; ++j)
        acc = acc + (piFPow[static_cast<size_t>(i)] * rhoFPow[static_cast<size_t>(j)]).scale(x.coeff(i, j));
    return acc;
  };
  int prec = ctx.pPrecision / 2;
  std::vector<Embedding> emb2;
  Filtration filt2;
  for (const Embedding& es : subEmb) {
    FieldTowerElement omegaInF = embedSub(es.omegaImage);
    FieldTowerElement piInF = embedSub(es.piImage);
    long found = -1;
    for (size_t i = 0; i < X.embeddings.size(); ++i)
      if (X.embeddings[i].omegaImage.congruent(omegaInF, prec) &&
          X.embeddings[i].piImage.congruent(piInF, prec)) {
        if (found >= 0) throw PrecisionExhausted("embedding match not unique at working precision");
        found = static_cast<long>(i);
      }
    if (found < 0) throw PrecisionExhausted("restricted embedding does not match any original embedding");
    emb2.push_back(Embedding{es.omegaImage, es.piImage, X.embeddings[static_cast<size_t>(found)].factor});
    const EmbeddedFlag& flag = X.filtration.flags[static_cast<size_t>(found)];
    EmbeddedFlag nf;
    for (const FlagStep& step : flag.steps)
      nf.steps.push_back(FlagStep{step.jump, restrict_columns(step.basis)});
    filt2.flags.push_back(std::move(nf));
  }
  FilteredIsocrystal X2{std::move(D2), X.K, std::move(emb2), std::move(filt2)};
  validate_filtered(X2);
  return X2;
}

}  // namespace isocat
