#include "isocat/disc.hpp"

#include <algorithm>
#include <utility>

namespace isocat {

namespace {

long lpow(long base, long exp) {
  long r = 1;
  for (long i = 0; i < exp; ++i) r *= base;
  return r;
}

// Eisenstein coefficients of K as plain rationals; requires K_0 = Q_p, since
// a residue extension would twist the u-coefficients by the unramified
// Frobenius in every congruence condition below.
std::vector<Rat> eisenstein_rats(const BaseField& K) {
  if (K.f() != 1)
    throw PreconditionViolated("disc modules require a totally ramified base field");
  std::vector<Rat> r;
  for (const auto& c : K.eisenstein) {
    r.push_back(c.empty() ? Rat(0) : c[0]);
    for (size_t j = 1; j < c.size(); ++j)
      if (!(c[j] == Rat(0)))
        throw PreconditionViolated("disc modules require a totally ramified base field");
  }
  return r;
}

std::vector<Rat> divide_by_constant_term(std::vector<Rat> rats) {
  if (rats.empty() || rats[0] == Rat(0))
    throw DomainViolation("Eisenstein polynomial with vanishing constant term");
  Rat c0 = rats[0];
  for (auto& c : rats) c = c / c0;
  return rats;
}

// exact polynomial  sum_k rats[k] * u^{k*spacing}
TruncatedSeries poly_spaced(const TowerPtr& F, const std::vector<Rat>& rats, long spacing) {
  TruncatedSeries s;
  s.tower = F;
  s.lo = 0;
  s.exactTail = true;
  long deg = (static_cast<long>(rats.size()) - 1) * spacing;
  s.c.assign(static_cast<size_t>(deg) + 1, F->zero());
  for (size_t k = 0; k < rats.size(); ++k)
    s.c[k * static_cast<size_t>(spacing)] = F->from_rational(rats[k]);
  return ts_trim(std::move(s));
}

Mat<TowerOps> series_coeff_matrix(const SMat& m, long k) {
  TowerOps ops(m[0][0].tower);
  Mat<TowerOps> r = mat_zero(ops, m.size(), m[0].size());
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[i].size(); ++j) r[i][j] = ts_coeff(m[i][j], k);
  return r;
}

// Per-embedding minuscule data: the weight-one dimension w and the rows of a
// left kernel of the weight-one step (q rows with q * W = 0), so that
// membership v in W becomes the linear system Q v = 0.
struct MinusculeStep {
  long w = 0;
  Mat<TowerOps> leftKernelRows;  // (d - w) x d
};

MinusculeStep minuscule_step(const TowerPtr& F, const EmbeddedFlag& flag, long d) {
  TowerOps ops(F);
  ThresholdTowerOps thr(F);
  for (const FlagStep& st : flag.steps)
    if (st.jump != 0 && st.jump != 1)
      throw NotMinuscule("disc construction needs all filtration jumps in {0,1}");
  MinusculeStep out;
  const FlagStep* one = nullptr;
  for (const FlagStep& st : flag.steps)
    if (st.jump == 1) one = &st;
  if (one == nullptr) {
    out.w = 0;
    out.leftKernelRows = mat_identity(ops, static_cast<size_t>(d));
    return out;
  }
  out.w = one->basis.empty() ? 0 : static_cast<long>(one->basis[0].size());
  if (out.w >= d) {
    out.leftKernelRows = mat_zero(ops, 0, static_cast<size_t>(d));
    return out;
  }
  // left kernel rows = kernel of the transpose
  Mat<TowerOps> wt = mat_zero(ops, static_cast<size_t>(out.w), static_cast<size_t>(d));
  for (long i = 0; i < d; ++i)
    for (long c = 0; c < out.w; ++c)
      wt[static_cast<size_t>(c)][static_cast<size_t>(i)] =
          one->basis[static_cast<size_t>(i)][static_cast<size_t>(c)];
  auto ker = mat_kernel(thr, wt);
  if (static_cast<long>(ker.size()) != d - out.w)
    throw PrecisionExhausted("weight-one step has no stable left kernel at working precision");
  out.leftKernelRows = mat_zero(ops, ker.size(), static_cast<size_t>(d));
  for (size_t r = 0; r < ker.size(); ++r)
    for (size_t i = 0; i < static_cast<size_t>(d); ++i) out.leftKernelRows[r][i] = ker[r][i];
  return out;
}

}  // namespace

LambdaFactors lambda_factors(const TowerPtr& F, const BaseField& K, long level, long windowHi) {
  if (level < 0) throw DomainViolation("lambda_factors: level must be >= 0");
  std::vector<Rat> rats = divide_by_constant_term(eisenstein_rats(K));
  long p = F->context().p;
  LambdaFactors out;
  out.level = level;
  TruncatedSeries prod = ts_one(F);
  long spacing = 1;
  for (long i = 0; i <= level; ++i) {
    TruncatedSeries fac = poly_spaced(F, rats, spacing);
    out.factors.push_back(fac);
    prod = ts_mul(prod, fac);
    spacing *= p;
  }
  out.lambda = ts_trim(std::move(prod));
  if (windowHi >= 0) {
    if (windowHi < out.lambda.hi())
      throw WindowOverflow("lambda_factors: window narrower than the product degree");
    out.lambda = ts_window(out.lambda, 0, windowHi);
  }
  return out;
}

DiscModule disc_module_from_filtered(const FilteredIsocrystal& X, long level) {
  if (level < 0) throw DomainViolation("disc level must be >= 0");
  const TowerPtr& F = X.D.F;
  TowerOps ops(F);
  ThresholdTowerOps thr(F);
  if (X.D.f() != 1)
    throw PreconditionViolated("disc modules require a single Frobenius block (f = 1)");
  std::vector<Rat> eis = eisenstein_rats(X.K);
  const long d = X.D.rank;
  const long e = X.K.e();
  const long p = F->context().p;
  const long n = level;
  const int prec = F->context().pPrecision;

  std::vector<MinusculeStep> steps;
  long weightSum = 0;
  for (size_t s = 0; s < X.embeddings.size(); ++s) {
    steps.push_back(minuscule_step(F, X.filtration.flags[s], d));
    weightSum += steps.back().w;
  }

  // Sections are polynomial vectors g of degree <= L = e*(p^{n+1}-1)/(p-1),
  // unknown layout (degree k, coordinate i) -> k*d + i.
  const long L = e * (lpow(p, n + 1) - 1) / (p - 1);
  const long unknowns = d * (L + 1);

  const TowerMat& B = X.D.blocks[0];
  TowerMat Binv = mat_inverse(ops, B);

  Mat<TowerOps> A = mat_zero(ops, 0, static_cast<size_t>(unknowns));
  TowerMat Bj = mat_identity(ops, static_cast<size_t>(d));
  for (long j = 0; j <= n; ++j) {
    const long pj = lpow(p, j);
    for (size_t s = 0; s < X.embeddings.size(); ++s) {
      const MinusculeStep& ms = steps[s];
      if (ms.leftKernelRows.empty()) continue;
      const FieldTowerElement& pi = X.embeddings[s].piImage;
      std::vector<FieldTowerElement> piPow{F->one()};
      for (long m = 1; m <= L / pj; ++m) piPow.push_back(piPow.back() * pi);
      // rows q*Bj, one per left-kernel row
      Mat<TowerOps> qB = mat_mul(ops, ms.leftKernelRows, Bj);
      for (long t = 0; t < pj; ++t)
        for (size_t r = 0; r < qB.size(); ++r) {
          Vec<TowerOps> row(static_cast<size_t>(unknowns), F->zero());
          for (long k = t; k <= L; k += pj)
            for (long i = 0; i < d; ++i)
              row[static_cast<size_t>(k * d + i)] =
                  piPow[static_cast<size_t>((k - t) / pj)] * qB[r][static_cast<size_t>(i)];
          A.push_back(std::move(row));
        }
    }
    Bj = mat_mul(ops, Bj, Binv);
  }

  std::vector<Vec<TowerOps>> kernel;
  if (A.empty()) {
    // no conditions (every weight is full): the section space is everything
    for (long t = 0; t < unknowns; ++t) {
      Vec<TowerOps> v(static_cast<size_t>(unknowns), F->zero());
      v[static_cast<size_t>(t)] = F->one();
      kernel.push_back(std::move(v));
    }
  } else {
    kernel = mat_kernel(thr, A);
  }
  const long expectedDim = d + (lpow(p, n + 1) - 1) / (p - 1) * weightSum;
  if (static_cast<long>(kernel.size()) != expectedDim)
    throw PrecisionExhausted("congruence conditions have unstable rank at working precision");

  // Degree-echelon form of the kernel, eliminating positions in descending
  // degree order: the resulting basis realizes the minimal degree filtration
  // of the section space (a low-degree section may otherwise hide as a
  // difference of higher-degree kernel vectors).
  std::vector<std::pair<long, Vec<TowerOps>>> sections;  // (degree, coefficients)
  {
    std::vector<Vec<TowerOps>> rows = std::move(kernel);
    std::vector<bool> used(rows.size(), false);
    for (long k = L; k >= 0; --k)
      for (long i = 0; i < d; ++i) {
        const size_t pos = static_cast<size_t>(k * d + i);
        long pick = -1;
        for (size_t v = 0; v < rows.size(); ++v) {
          if (used[v] || thr.is_zero(rows[v][pos])) continue;
          if (pick < 0 || thr.pivot_better(rows[v][pos], rows[static_cast<size_t>(pick)][pos]))
            pick = static_cast<long>(v);
        }
        if (pick < 0) continue;
        const size_t pv = static_cast<size_t>(pick);
        used[pv] = true;
        FieldTowerElement inv = rows[pv][pos].inverse();
        for (size_t v = 0; v < rows.size(); ++v) {
          if (v == pv || used[v] || thr.is_zero(rows[v][pos])) continue;
          FieldTowerElement factor = rows[v][pos] * inv;
          for (size_t t = 0; t < rows[v].size(); ++t)
            rows[v][t] = rows[v][t] - factor * rows[pv][t];
        }
        sections.emplace_back(k, std::move(rows[pv]));
      }
    if (sections.size() != rows.size())
      throw PrecisionExhausted("section space collapsed during degree reduction");
  }
  std::reverse(sections.begin(), sections.end());  // ascending degree

  // greedily keep sections whose value at u = 0 grows the fiber rank
  std::vector<size_t> picked;
  Mat<TowerOps> fiber = mat_zero(ops, static_cast<size_t>(d), 0);
  for (size_t idx = 0; idx < sections.size(); ++idx) {
    if (static_cast<long>(picked.size()) == d) break;
    Mat<TowerOps> trial = fiber;
    for (long i = 0; i < d; ++i)
      trial[static_cast<size_t>(i)].push_back(sections[idx].second[static_cast<size_t>(i)]);
    if (mat_rank(thr, trial) == picked.size() + 1) {
      picked.push_back(idx);
      fiber = std::move(trial);
    }
  }
  if (static_cast<long>(picked.size()) != d)
    throw PrecisionExhausted("generator fiber at u = 0 is rank-deficient at working precision");

  // normalize each generator by its first visibly nonzero coefficient
  SMat P = smat_zero(F, static_cast<size_t>(d), static_cast<size_t>(d));
  Mat<TowerOps> P0 = mat_zero(ops, static_cast<size_t>(d), static_cast<size_t>(d));
  for (size_t col = 0; col < picked.size(); ++col) {
    Vec<TowerOps> g = sections[picked[col]].second;
    FieldTowerElement lead = F->one();
    bool found = false;
    for (size_t t = 0; t < g.size() && !found; ++t)
      if (!thr.is_zero(g[t])) {
        lead = g[t];
        found = true;
      }
    FieldTowerElement scale = lead.inverse();
    for (auto& x : g) x = x * scale;
    for (long i = 0; i < d; ++i) {
      TruncatedSeries s;
      s.tower = F;
      s.lo = 0;
      s.exactTail = true;
      for (long k = 0; k <= sections[picked[col]].first; ++k)
        s.c.push_back(g[static_cast<size_t>(k * d + i)]);
      P[static_cast<size_t>(i)][col] = ts_trim(std::move(s));
      P0[static_cast<size_t>(i)][col] = g[static_cast<size_t>(i)];
    }
  }
  try {
    (void)mat_inverse(ops, P0);
  } catch (const InvertNonUnit&) {
    throw PrecisionExhausted("generator matrix is singular at u = 0 at working precision");
  }

  // The picked columns generate the full section module exactly when the
  // degree sum matches the determinant divisor (any proper submodule with the
  // same fiber at 0 has a strictly larger degree sum).
  long degSum = 0;
  for (size_t col = 0; col < picked.size(); ++col) degSum += sections[picked[col]].first;
  long expectedDegSum = 0;
  for (long j = 0; j <= n; ++j)
    for (const MinusculeStep& ms : steps) expectedDegSum += lpow(p, j) * (d - ms.w);
  if (degSum != expectedDegSum)
    throw PrecisionExhausted("generator degrees do not match the determinant divisor");

  // Frobenius matrix: P * C = (E/E(0)) * B * phi(P) on [0, e*p^{n+1} - 1]
  TruncatedSeries Ehat = poly_spaced(F, divide_by_constant_term(eis), 1);
  SMat rhs = smat_scale(smat_mul(smat_from_tower(B), smat_phi(P)), Ehat);
  const long count = e * lpow(p, n + 1);
  SMat C = smat_solve_unit(P, rhs, count);

  // postconditions: per-root corank = weight-one dimension, and exact
  // similarity at the u = 0 fiber.  (Coefficients of C need not be p-adically
  // integral: mixed weights genuinely produce denominators that are bounded
  // on the disc, e.g. val -1/2 terms when only one Eisenstein root carries
  // weight one.)
  DiscModule M;
  for (size_t s = 0; s < X.embeddings.size(); ++s) {
    Mat<TowerOps> Cpi = smat_eval(C, X.embeddings[s].piImage);
    long corank = d - static_cast<long>(mat_rank(thr, Cpi));
    if (corank != steps[s].w)
      throw PrecisionExhausted("Frobenius corank at an Eisenstein root disagrees with the weight");
    M.weightOneDims.push_back(corank);
  }
  Mat<TowerOps> C0 = series_coeff_matrix(C, 0);
  Mat<TowerOps> lhs0 = mat_mul(ops, B, P0);
  Mat<TowerOps> rhs0 = mat_mul(ops, P0, C0);
  for (size_t i = 0; i < lhs0.size(); ++i)
    for (size_t j = 0; j < lhs0[i].size(); ++j)
      if (!lhs0[i][j].congruent(rhs0[i][j], prec))
        throw PrecisionExhausted("u = 0 fiber of the Frobenius matrix is not similar to the input");

  M.F = F;
  M.K = X.K;
  M.embeddings = X.embeddings;
  M.rank = d;
  M.level = n;
  M.phiMatrix = std::move(C);
  M.basis = std::move(P);
  M.basisAtZero = std::move(P0);
  return M;
}

SMat disc_comparison_matrix(const DiscModule& M) {
  const TowerPtr& F = M.F;
  TowerOps ops(F);
  const SMat& C = M.phiMatrix;
  const size_t d = C.size();
  const long p = F->context().p;
  const int prec = F->context().pPrecision;
  long hi = 0;
  for (const auto& row : C)
    for (const auto& entry : row) hi = std::max(hi, entry.hi());

  Mat<TowerOps> C0inv;
  try {
    C0inv = mat_inverse(ops, series_coeff_matrix(C, 0));
  } catch (const InvertNonUnit&) {
    throw PrecisionExhausted("Frobenius matrix is singular at u = 0");
  }
  SMat C0invS = smat_from_tower(C0inv);

  // Successive substitution doubles (p-folds) the agreement order each round:
  // once p^k exceeds the window the iterates are windows of the fixed point.
  long budget = 1;
  while (lpow(p, budget) <= hi + 1) ++budget;
  budget += 4;

  SMat xi = smat_window(smat_id(F, d), 0, hi);
  for (long it = 0; it < budget; ++it) {
    SMat next = smat_window(smat_mul(smat_mul(C, smat_phi(xi)), C0invS), 0, hi);
    bool same = true;
    for (size_t i = 0; i < d && same; ++i)
      for (size_t j = 0; j < d && same; ++j)
        if (!ts_congruent(next[i][j], xi[i][j], prec)) same = false;
    xi = std::move(next);
    if (same) return xi;
  }
  throw PrecisionExhausted("comparison matrix did not stabilize inside the window");
}

FilteredIsocrystal filtered_from_disc_module(const DiscModule& M) {
  const TowerPtr& F = M.F;
  TowerOps ops(F);
  ThresholdTowerOps thr(F);
  const size_t d = M.phiMatrix.size();

  Isocrystal D;
  D.F = F;
  D.rank = static_cast<long>(d);
  D.blocks = {series_coeff_matrix(M.phiMatrix, 0)};

  SMat xi = disc_comparison_matrix(M);
  Filtration filt;
  for (const Embedding& emb : M.embeddings) {
    Mat<TowerOps> xiPi = smat_eval(xi, emb.piImage);
    auto ker = mat_kernel(thr, xiPi);
    Mat<TowerOps> cPi = smat_eval(M.phiMatrix, emb.piImage);
    long corank = static_cast<long>(d) - static_cast<long>(mat_rank(thr, cPi));
    if (static_cast<long>(ker.size()) != corank)
      throw PrecisionExhausted(
          "comparison kernel and Frobenius corank disagree at an Eisenstein root");
    EmbeddedFlag flag;
    if (ker.empty()) {
      flag.steps.push_back(FlagStep{0, mat_identity(ops, d)});
    } else if (ker.size() == d) {
      flag.steps.push_back(FlagStep{1, mat_identity(ops, d)});
    } else {
      flag.steps.push_back(FlagStep{0, mat_identity(ops, d)});
      TowerMat W = mat_zero(ops, d, ker.size());
      for (size_t c = 0; c < ker.size(); ++c)
        for (size_t i = 0; i < d; ++i) W[i][c] = ker[c][i];
      flag.steps.push_back(FlagStep{1, std::move(W)});
    }
    filt.flags.push_back(std::move(flag));
  }
  return make_filtered(std::move(D), M.K, std::move(filt));
}

}  // namespace isocat
