#include "isocat/series.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>

#include "isocat/errors.hpp"

namespace isocat {

namespace {

void check_same_tower(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.tower != b.tower)
    throw DomainViolation("series arithmetic across distinct field towers");
}

bool coeff_exact_zero(const TowerPtr& T, const FieldTowerElement& a) {
  return TowerOps(T).exactly_zero(a);
}

TruncatedSeries canonical_zero(const TowerPtr& T) {
  TruncatedSeries r;
  r.tower = T;
  r.lo = 0;
  r.exactTail = true;
  return r;
}

}  // namespace

TruncatedSeries ts_zero(const TowerPtr& T) { return canonical_zero(T); }

TruncatedSeries ts_const(const FieldTowerElement& a) { return ts_monomial(a, 0); }

TruncatedSeries ts_one(const TowerPtr& T) { return ts_const(T->one()); }

TruncatedSeries ts_monomial(const FieldTowerElement& a, long k) {
  TruncatedSeries r;
  r.tower = a.tower();
  r.lo = k;
  r.exactTail = true;
  r.c.push_back(a);
  return ts_trim(std::move(r));
}

TruncatedSeries ts_from_poly(const TowerPtr& T, const TowerPoly& f, long shift) {
  TruncatedSeries r;
  r.tower = T;
  r.lo = shift;
  r.exactTail = true;
  r.c = f;
  return ts_trim(std::move(r));
}

FieldTowerElement ts_coeff(const TruncatedSeries& f, long k) {
  if (k < f.lo) return f.tower->zero();
  if (k <= f.hi()) return f.c[static_cast<size_t>(k - f.lo)];
  if (f.exactTail) return f.tower->zero();
  throw WindowOverflow("series coefficient above the known window");
}

bool ts_window_zero(const TruncatedSeries& f) {
  for (const auto& a : f.c)
    if (!a.is_zero_at_precision()) return false;
  return true;
}

TruncatedSeries ts_trim(TruncatedSeries f) {
  size_t drop = 0;
  while (drop < f.c.size() && coeff_exact_zero(f.tower, f.c[drop])) ++drop;
  if (drop > 0) {
    f.c.erase(f.c.begin(), f.c.begin() + static_cast<long>(drop));
    f.lo += static_cast<long>(drop);
  }
  // top trimming is only sound when the tail is exact anyway
  if (f.exactTail)
    while (!f.c.empty() && coeff_exact_zero(f.tower, f.c.back())) f.c.pop_back();
  if (f.c.empty() && f.exactTail) f.lo = 0;
  return f;
}

TruncatedSeries ts_window(const TruncatedSeries& f, long newLo, long newHi) {
  if (newLo > newHi + 1) throw DomainViolation("ts_window: inverted window");
  // dropping low coefficients would silently change the series: refuse unless
  // they are zero at working precision
  for (long k = f.lo; k < newLo && k <= f.hi(); ++k)
    if (!ts_coeff(f, k).is_zero_at_precision())
      throw PreconditionViolated("ts_window: dropping a visibly nonzero low-order coefficient");
  TruncatedSeries r;
  r.tower = f.tower;
  r.lo = newLo;
  bool droppedHigh = false;
  bool droppedHighNonzero = false;
  for (long k = newHi + 1; k <= f.hi(); ++k) {
    droppedHigh = true;
    if (!coeff_exact_zero(f.tower, f.c[static_cast<size_t>(k - f.lo)])) droppedHighNonzero = true;
  }
  for (long k = newLo; k <= newHi; ++k) r.c.push_back(ts_coeff(f, k));
  r.exactTail = f.exactTail && (!droppedHigh || !droppedHighNonzero);
  return r;
}

TruncatedSeries ts_neg(TruncatedSeries f) {
  for (auto& a : f.c) a = -a;
  return f;
}

TruncatedSeries ts_add(const TruncatedSeries& a, const TruncatedSeries& b) {
  check_same_tower(a, b);
  if (a.empty_window() && a.exactTail) return b;  // a is exactly zero
  if (b.empty_window() && b.exactTail) return a;
  // first undetermined exponent of each operand; coefficients strictly below
  // it are fully known (those below the window are exactly zero)
  constexpr long kInf = std::numeric_limits<long>::max();
  long da = a.exactTail ? kInf : (a.empty_window() ? a.lo : a.hi() + 1);
  long db = b.exactTail ? kInf : (b.empty_window() ? b.lo : b.hi() + 1);
  long d = std::min(da, db);
  TruncatedSeries r;
  r.tower = a.tower;
  r.exactTail = a.exactTail && b.exactTail;
  long lo = std::min(a.lo, b.lo);
  long hi = r.exactTail ? std::max(a.hi(), b.hi()) : d - 1;
  if (hi < lo) {
    // nothing determined at or above the windows, but the sum is still
    // exactly zero below the first undetermined exponent
    r.lo = d;
    return r;
  }
  r.lo = lo;
  for (long k = lo; k <= hi; ++k) r.c.push_back(ts_coeff(a, k) + ts_coeff(b, k));
  return ts_trim(std::move(r));
}

TruncatedSeries ts_sub(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries nb = b;
  for (auto& x : nb.c) x = -x;
  return ts_add(a, nb);
}

TruncatedSeries ts_mul(const TruncatedSeries& a0, const TruncatedSeries& b0) {
  check_same_tower(a0, b0);
  TruncatedSeries a = ts_trim(a0);
  TruncatedSeries b = ts_trim(b0);
  if (a.empty_window() && a.exactTail) return canonical_zero(a.tower);
  if (b.empty_window() && b.exactTail) return canonical_zero(a.tower);
  if (a.empty_window() || b.empty_window()) {
    // exactly zero below the sum of the leading exponents, unknown beyond
    TruncatedSeries r;
    r.tower = a.tower;
    r.lo = a.lo + b.lo;
    r.exactTail = false;
    return r;
  }
  long lo = a.lo + b.lo;
  long hi;
  if (a.exactTail && b.exactTail) {
    hi = a.hi() + b.hi();
  } else {
    hi = std::numeric_limits<long>::max();
    // the unknown tail of one factor first pollutes the coefficient where it
    // meets the other factor's lowest term
    if (!a.exactTail) hi = std::min(hi, a.hi() + b.lo);
    if (!b.exactTail) hi = std::min(hi, b.hi() + a.lo);
  }
  TruncatedSeries r;
  r.tower = a.tower;
  r.lo = lo;
  r.exactTail = a.exactTail && b.exactTail;
  r.c.assign(static_cast<size_t>(hi - lo + 1), a.tower->zero());
  TowerOps ops(a.tower);
  for (long i = a.lo; i <= a.hi(); ++i) {
    const auto& ai = a.c[static_cast<size_t>(i - a.lo)];
    if (ops.exactly_zero(ai)) continue;
    for (long j = b.lo; j <= b.hi() && i + j <= hi; ++j) {
      const auto& bj = b.c[static_cast<size_t>(j - b.lo)];
      if (ops.exactly_zero(bj)) continue;
      auto& target = r.c[static_cast<size_t>(i + j - lo)];
      target = target + ai * bj;
    }
  }
  return ts_trim(std::move(r));
}

TruncatedSeries ts_scale(TruncatedSeries f, const FieldTowerElement& s) {
  for (auto& a : f.c) a = a * s;
  return ts_trim(std::move(f));
}

TruncatedSeries ts_shift(TruncatedSeries f, long k) {
  if (!f.empty_window() || !f.exactTail) f.lo += k;
  return f;
}

TruncatedSeries ts_phi(const TruncatedSeries& f) {
  long p = f.tower->context().p;
  TruncatedSeries r;
  r.tower = f.tower;
  r.exactTail = f.exactTail;
  if (f.empty_window()) {
    r.lo = 0;
    return r;
  }
  r.lo = p * f.lo;
  r.c.assign(static_cast<size_t>(p * (f.hi() - f.lo) + 1), f.tower->zero());
  // Over a totally ramified tower the coefficient field is a scalar
  // extension on which Frobenius acts trivially (only u moves); the
  // unramified-layer Frobenius applies otherwise.
  bool ramifiedOnly = f.tower->f() == 1;
  for (long i = 0; i < static_cast<long>(f.c.size()); ++i)
    r.c[static_cast<size_t>(p * i)] =
        ramifiedOnly ? f.c[static_cast<size_t>(i)] : f.c[static_cast<size_t>(i)].frobenius_K0();
  return r;
}

TruncatedSeries ts_inverse(const TruncatedSeries& f0, long count) {
  if (count <= 0) throw DomainViolation("ts_inverse: count must be positive");
  TruncatedSeries f = ts_trim(f0);
  if (f.empty_window()) throw InvertNonUnit("ts_inverse: no visible leading coefficient");
  FieldTowerElement c0inv = f.c.front().inverse();
  long len = static_cast<long>(f.c.size());
  long n = f.exactTail ? count : std::min(count, len);
  std::vector<FieldTowerElement> x;
  x.reserve(static_cast<size_t>(n));
  x.push_back(c0inv);
  for (long k = 1; k < n; ++k) {
    FieldTowerElement acc = f.tower->zero();
    for (long t = 1; t <= std::min(k, len - 1); ++t)
      acc = acc + f.c[static_cast<size_t>(t)] * x[static_cast<size_t>(k - t)];
    x.push_back(-(c0inv * acc));
  }
  TruncatedSeries r;
  r.tower = f.tower;
  r.lo = -f.lo;
  r.c = std::move(x);
  // a monomial has a monomial inverse; everything else keeps going past any
  // finite window
  r.exactTail = f.exactTail && len == 1;
  return ts_trim(std::move(r));
}

TruncatedSeries ts_inverse_at(const TruncatedSeries& f, long pivotExp, long outLo, long outHi,
                              const Rat& rhoInner, const Rat& rhoOuter, const Rat& minGain) {
  if (outLo > outHi) throw DomainViolation("ts_inverse_at: inverted window");
  FieldTowerElement cpiv = ts_coeff(f, pivotExp);
  TruncatedSeries x = ts_monomial(cpiv.inverse(), -pivotExp);

  auto clip_to_poly = [&](const TruncatedSeries& s) {
    TruncatedSeries r;
    r.tower = s.tower;
    r.lo = std::max(s.lo, outLo);
    r.exactTail = true;  // reinterpreted as a Laurent-polynomial approximant
    for (long k = r.lo; k <= std::min(s.hi(), outHi); ++k)
      r.c.push_back(s.c[static_cast<size_t>(k - s.lo)]);
    return ts_trim(std::move(r));
  };

  // residual Gauss valuation across the window, or nothing when the constant
  // term is not even determined
  auto residual_gain = [&](const TruncatedSeries& prod) -> std::optional<Val> {
    if (!prod.exactTail && (prod.empty_window() || prod.lo > 0 || prod.hi() < 0))
      return std::nullopt;
    TruncatedSeries r = ts_sub(prod, ts_one(f.tower));
    return min(ts_gauss_val(r, rhoInner), ts_gauss_val(r, rhoOuter));
  };

  const int budget = 64;
  const Val target{minGain};
  Val best = Val(Rat(-1));
  int stalled = 0;
  for (int it = 0; it < budget; ++it) {
    TruncatedSeries prod = ts_mul(f, x);
    auto gain = residual_gain(prod);
    if (gain && *gain >= target) return x;
    if (gain && *gain > best) {
      best = *gain;
      stalled = 0;
    } else if (++stalled >= 3) {
      break;  // the clip floor has been reached; more iterations cannot help
    }
    TruncatedSeries e = ts_sub(ts_one(f.tower), prod);
    x = clip_to_poly(ts_add(x, ts_mul(x, e)));
    if (x.empty_window()) break;
  }
  throw NoConvergence("ts_inverse_at: residual gain below the requested bound within budget");
}

FieldTowerElement ts_eval(const TruncatedSeries& f, const FieldTowerElement& x) {
  // window evaluation: an inexact tail must sit below the caller's working
  // precision at the evaluation point for this to mean anything
  if (f.empty_window()) {
    if (f.exactTail) return f.tower->zero();
    // the window proves vanishing to order u^lo; at a point of positive
    // valuation that is a zero known to precision lo * val(x)
    if (f.lo > 0) {
      Rat bound = Rat(f.lo) * x.valuation_lower_bound();
      if (bound > 0) {
        long b = static_cast<long>(boost::multiprecision::numerator(bound) /
                                   boost::multiprecision::denominator(bound));
        int cap = f.tower->context().cap();
        return f.tower->zero().reduce_to(static_cast<int>(std::min<long>(b, cap)));
      }
    }
    throw WindowOverflow("evaluating a series with no known coefficients");
  }
  FieldTowerElement r = f.tower->zero();
  for (long k = f.hi(); k >= f.lo; --k) r = r * x + f.c[static_cast<size_t>(k - f.lo)];
  if (f.lo != 0) r = r * x.pow(f.lo);
  return r;
}

Val ts_gauss_val(const TruncatedSeries& f, const Rat& rho) {
  Val best = Val::inf();
  for (long k = f.lo; k <= f.hi(); ++k) {
    Val v = f.c[static_cast<size_t>(k - f.lo)].valuation();
    if (!v.is_finite()) continue;
    best = min(best, Val(v.finite() + Rat(k) * rho));
  }
  return best;
}

DominantTerm ts_dominant(const TruncatedSeries& f, const Rat& rho) {
  bool found = false;
  DominantTerm d;
  for (long k = f.lo; k <= f.hi(); ++k) {
    Val v = f.c[static_cast<size_t>(k - f.lo)].valuation();
    if (!v.is_finite()) continue;
    Rat cand = v.finite() + Rat(k) * rho;
    if (!found || cand < d.value) {
      d.exponent = k;
      d.value = cand;
      d.strict = true;
      found = true;
    } else if (cand == d.value) {
      d.strict = false;
    }
  }
  if (!found) throw PrecisionExhausted("no visible coefficient to dominate the window");
  return d;
}

UnitShape ts_unit_shape(const TruncatedSeries& f, const Rat& rhoInner, const Rat& rhoOuter) {
  UnitShape s;
  DominantTerm dIn, dOut;
  try {
    dIn = ts_dominant(f, rhoInner);
    dOut = ts_dominant(f, rhoOuter);
  } catch (const PrecisionExhausted&) {
    return s;
  }
  if (!dIn.strict || !dOut.strict || dIn.exponent != dOut.exponent) return s;
  Val cv = ts_coeff(f, dIn.exponent).valuation();
  if (!cv.is_finite()) return s;
  s.isUnit = true;
  s.exponent = dIn.exponent;
  s.unitValuation = cv.finite();
  return s;
}

std::string ts_str(const TruncatedSeries& f) {
  std::ostringstream os;
  bool first = true;
  for (long k = f.lo; k <= f.hi(); ++k) {
    const auto& a = f.c[static_cast<size_t>(k - f.lo)];
    if (a.is_zero_at_precision()) continue;
    if (!first) os << " + ";
    os << "(" << a.str() << ")";
    if (k != 0) os << "*u^" << k;
    first = false;
  }
  if (first) os << "0";
  if (!f.exactTail) os << " + O(u^" << (f.hi() + 1) << ")";
  return os.str();
}

bool ts_congruent(const TruncatedSeries& a, const TruncatedSeries& b, int pPrec) {
  check_same_tower(a, b);
  TruncatedSeries d = ts_sub(a, b);
  FieldTowerElement z = a.tower->zero();
  for (const auto& x : d.c)
    if (!x.congruent(z, pPrec)) return false;
  return true;
}

// --- matrices ---

SMat smat_zero(const TowerPtr& T, std::size_t r, std::size_t cols) {
  return SMat(r, std::vector<TruncatedSeries>(cols, ts_zero(T)));
}

SMat smat_id(const TowerPtr& T, std::size_t n) {
  SMat m = smat_zero(T, n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = ts_one(T);
  return m;
}

SMat smat_from_tower(const Mat<TowerOps>& m) {
  if (m.empty() || m[0].empty()) throw DomainViolation("smat_from_tower: empty matrix");
  SMat r(m.size(), std::vector<TruncatedSeries>(m[0].size(), ts_zero(m[0][0].tower())));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) r[i][j] = ts_const(m[i][j]);
  return r;
}

SMat smat_add(const SMat& a, const SMat& b) {
  SMat r = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) r[i][j] = ts_add(a[i][j], b[i][j]);
  return r;
}

SMat smat_sub(const SMat& a, const SMat& b) {
  SMat r = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) r[i][j] = ts_sub(a[i][j], b[i][j]);
  return r;
}

SMat smat_mul(const SMat& a, const SMat& b) {
  std::size_t n = a.size(), k = b.size(), m = b[0].size();
  const TowerPtr& T = a[0][0].tower;
  SMat r = smat_zero(T, n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      TruncatedSeries acc = ts_zero(T);
      for (std::size_t t = 0; t < k; ++t) acc = ts_add(acc, ts_mul(a[i][t], b[t][j]));
      r[i][j] = acc;
    }
  return r;
}

SMat smat_scale(SMat a, const TruncatedSeries& s) {
  for (auto& row : a)
    for (auto& x : row) x = ts_mul(x, s);
  return a;
}

SMat smat_phi(const SMat& a) {
  SMat r = a;
  for (auto& row : r)
    for (auto& x : row) x = ts_phi(x);
  return r;
}

SMat smat_window(const SMat& a, long lo, long hi) {
  SMat r = a;
  for (auto& row : r)
    for (auto& x : row) x = ts_window(x, lo, hi);
  return r;
}

Mat<TowerOps> smat_eval(const SMat& a, const FieldTowerElement& x) {
  TowerOps ops(a[0][0].tower);
  Mat<TowerOps> r = mat_zero(ops, a.size(), a[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) r[i][j] = ts_eval(a[i][j], x);
  return r;
}

TruncatedSeries smat_det(const SMat& a) {
  std::size_t n = a.size();
  if (n == 0) throw DomainViolation("smat_det: empty matrix");
  if (n == 1) return a[0][0];
  const TowerPtr& T = a[0][0].tower;
  TruncatedSeries acc = ts_zero(T);
  for (std::size_t j = 0; j < n; ++j) {
    SMat minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<TruncatedSeries> row;
      for (std::size_t t = 0; t < n; ++t)
        if (t != j) row.push_back(a[i][t]);
      minor.push_back(std::move(row));
    }
    TruncatedSeries term = ts_mul(a[0][j], smat_det(minor));
    acc = (j % 2 == 0) ? ts_add(acc, term) : ts_sub(acc, term);
  }
  return acc;
}

SMat smat_solve_unit(const SMat& A, const SMat& B, long count) {
  if (count <= 0) throw DomainViolation("smat_solve_unit: count must be positive");
  std::size_t n = A.size();
  if (n == 0 || B.size() != n) throw DomainViolation("smat_solve_unit: shape mismatch");
  std::size_t m = B[0].size();
  const TowerPtr& T = A[0][0].tower;
  TowerOps ops(T);
  for (const auto& row : A)
    for (const auto& x : row)
      if (x.lo < 0) throw PreconditionViolated("smat_solve_unit: Laurent entry in a power-series solve");

  auto coef = [&](const SMat& M, long t) {
    Mat<TowerOps> r = mat_zero(ops, M.size(), M[0].size());
    for (std::size_t i = 0; i < M.size(); ++i)
      for (std::size_t j = 0; j < M[i].size(); ++j) r[i][j] = ts_coeff(M[i][j], t);
    return r;
  };

  Mat<TowerOps> A0inv = mat_inverse(ops, coef(A, 0));
  std::vector<Mat<TowerOps>> X;
  for (long k = 0; k < count; ++k) {
    Mat<TowerOps> rk = coef(B, k);
    for (long t = 0; t < k; ++t)
      rk = mat_sub(ops, rk, mat_mul(ops, coef(A, k - t), X[static_cast<size_t>(t)]));
    X.push_back(mat_mul(ops, A0inv, rk));
  }

  SMat r = smat_zero(T, n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      TruncatedSeries s;
      s.tower = T;
      s.lo = 0;
      s.exactTail = false;
      for (long k = 0; k < count; ++k) s.c.push_back(X[static_cast<size_t>(k)][i][j]);
      r[i][j] = ts_trim(std::move(s));
    }
  return r;
}

SMat smat_inverse_unit(const SMat& A, long count) {
  return smat_solve_unit(A, smat_id(A[0][0].tower, A.size()), count);
}

}  // namespace isocat
