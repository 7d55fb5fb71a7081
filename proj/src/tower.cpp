#include "isocat/tower.hpp"

#include <algorithm>
#include <sstream>

namespace isocat {

namespace {

using K0 = std::vector<PadicScalar>;  // coefficients over the omega-power basis

K0 k0_zero(std::int64_t p, int cap, long f) {
  return K0(static_cast<size_t>(f), PadicScalar::zero(p, cap));
}

K0 k0_add(const K0& a, const K0& b) {
  K0 r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] = r[i] + b[i];
  return r;
}

K0 k0_neg(const K0& a) {
  K0 r = a;
  for (auto& x : r) x = -x;
  return r;
}

bool k0_is_zero(const K0& a) {
  return std::all_of(a.begin(), a.end(),
                     [](const PadicScalar& x) { return x.is_zero_at_precision(); });
}

// schoolbook product reduced by the monic minimal polynomial of omega
K0 k0_mul(const K0& a, const K0& b, const std::vector<std::vector<PadicScalar>>& minpoly) {
  long f = static_cast<long>(a.size());
  std::int64_t p = a[0].p();
  int cap = a[0].cap();
  std::vector<PadicScalar> prod(static_cast<size_t>(2 * f - 1), PadicScalar::zero(p, cap));
  for (long i = 0; i < f; ++i) {
    if (a[i].is_zero_at_precision() && a[i].abs_precision() >= cap) continue;
    for (long j = 0; j < f; ++j) prod[i + j] = prod[i + j] + a[i] * b[j];
  }
  for (long k = 2 * f - 2; k >= f; --k) {
    PadicScalar c = prod[k];
    if (c.is_zero_at_precision() && c.abs_precision() >= cap) continue;
    for (long i = 0; i < f; ++i)
      prod[k - f + i] = prod[k - f + i] - c * minpoly[0][static_cast<size_t>(i)];
  }
  prod.resize(static_cast<size_t>(f));
  return prod;
}

K0 k0_scale(const K0& a, const PadicScalar& s) {
  K0 r = a;
  for (auto& x : r) x = x * s;
  return r;
}

}  // namespace

std::vector<PadicScalar> qp_solve(std::vector<std::vector<PadicScalar>> A,
                                  std::vector<PadicScalar> b) {
  size_t n = A.size();
  if (n == 0 || A[0].size() != n || b.size() != n)
    throw DomainViolation("qp_solve: shape mismatch");
  std::vector<size_t> colOfStep(n), rowUsed(n);
  std::vector<bool> colTaken(n, false), rowTaken(n, false);
  for (size_t step = 0; step < n; ++step) {
    // best-valuation pivot: smallest lower bound, visible mantissa required
    bool found = false;
    size_t pr = 0, pc = 0;
    Rat best = 0;
    for (size_t i = 0; i < n; ++i) {
      if (rowTaken[i]) continue;
      for (size_t j = 0; j < n; ++j) {
        if (colTaken[j]) continue;
        if (A[i][j].is_zero_at_precision()) continue;
        Rat lb = A[i][j].valuation_lower_bound();
        if (!found || lb < best) {
          found = true;
          best = lb;
          pr = i;
          pc = j;
        }
      }
    }
    if (!found) throw InvertNonUnit("qp_solve: matrix is singular at working precision");
    rowTaken[pr] = true;
    colTaken[pc] = true;
    rowUsed[step] = pr;
    colOfStep[step] = pc;
    PadicScalar inv = A[pr][pc].inverse();
    for (size_t i = 0; i < n; ++i) {
      if (rowTaken[i] && i != pr) continue;
      if (i == pr) continue;
      // exact zeros need no elimination; inexact zeros still carry precision
      // loss into the row, so they are eliminated like any other entry
      if (A[i][pc].is_zero_at_precision() && A[i][pc].abs_precision() >= A[i][pc].cap()) continue;
      PadicScalar factor = A[i][pc] * inv;
      for (size_t j = 0; j < n; ++j)
        if (!colTaken[j] || j == pc) A[i][j] = A[i][j] - factor * A[pr][j];
      b[i] = b[i] - factor * b[pr];
    }
  }
  // back substitution in reverse pivot order
  std::vector<PadicScalar> x(n, b[0]);
  for (size_t step = n; step-- > 0;) {
    size_t r = rowUsed[step], c = colOfStep[step];
    PadicScalar acc = b[r];
    for (size_t later = step + 1; later < n; ++later) {
      size_t c2 = colOfStep[later];
      if (!A[r][c2].is_zero_at_precision() || A[r][c2].abs_precision() < A[r][c2].cap())
        acc = acc - A[r][c2] * x[c2];
    }
    x[c] = acc / A[r][c];
  }
  return x;
}

std::shared_ptr<const FieldTower> FieldTower::make(
    const PrecisionContext& ctx, const std::vector<Rat>& unramMinPoly,
    const std::vector<std::vector<Rat>>& eisenstein) {
  ctx.validate();
  auto T = std::shared_ptr<FieldTower>(new FieldTower());
  T->ctx_ = ctx;
  T->p_ = ctx.p;
  T->cap_ = ctx.cap();
  T->f_ = static_cast<long>(unramMinPoly.size()) - 1;
  T->e_ = static_cast<long>(eisenstein.size()) - 1;
  if (T->f_ < 1) throw PreconditionViolated("FieldTower: unramified degree must be >= 1");
  if (T->e_ < 1) throw PreconditionViolated("FieldTower: ramification degree must be >= 1");
  if (unramMinPoly.back() != 1)
    throw PreconditionViolated("FieldTower: unramified minimal polynomial must be monic");
  T->unramPoly_ = unramMinPoly;

  // residue field presented with the reduction of the same minimal polynomial
  std::vector<std::int64_t> mbar;
  for (const Rat& c : unramMinPoly) {
    PadicScalar s = PadicScalar::exact_rat(T->p_, T->cap_, c);
    if (!s.is_integral()) throw NotUnramified("FieldTower: non-integral unramified coefficients");
    mbar.push_back(s.residue());
  }
  if (T->f_ == 1) T->residue_ = FqContext(T->p_, {0, 1});
  else T->residue_ = FqContext(T->p_, mbar);  // throws NotUnramified if reducible

  T->unramCoeff_.resize(1);
  for (const Rat& c : unramMinPoly)
    T->unramCoeff_[0].push_back(PadicScalar::exact_rat(T->p_, T->cap_, c));

  // Eisenstein data: coefficients as exact K0 elements
  if (eisenstein.back() != std::vector<Rat>{Rat(1)} &&
      !(eisenstein.back().size() >= 1 && eisenstein.back()[0] == 1 &&
        std::all_of(eisenstein.back().begin() + 1, eisenstein.back().end(),
                    [](const Rat& c) { return c == 0; })))
    throw PreconditionViolated("FieldTower: Eisenstein polynomial must be monic");
  for (const auto& coeff : eisenstein) {
    if (static_cast<long>(coeff.size()) > T->f_)
      throw PreconditionViolated("FieldTower: Eisenstein coefficient has too many components");
    K0 v = k0_zero(T->p_, T->cap_, T->f_);
    for (size_t j = 0; j < coeff.size(); ++j)
      v[j] = PadicScalar::exact_rat(T->p_, T->cap_, coeff[j]);
    T->eisCoeff_.push_back(v);
  }
  auto k0_val = [&](const K0& v) -> Val {
    Val best = Val::inf();
    for (const auto& s : v)
      if (!s.is_zero_at_precision()) best = min(best, s.valuation());
    return best;
  };
  for (long i = 0; i < T->e_; ++i) {
    Val v = k0_val(T->eisCoeff_[static_cast<size_t>(i)]);
    if (v < Val(Rat(1)))
      throw PreconditionViolated("FieldTower: Eisenstein coefficients must have valuation >= 1");
  }
  if (k0_val(T->eisCoeff_[0]) != Val(Rat(1)))
    throw PreconditionViolated("FieldTower: Eisenstein constant term must have valuation exactly 1");
  T->eisPoly_ = eisenstein;

  // Frobenius lift on the unramified stage: Newton iteration from the
  // residue Frobenius of omega
  const auto& mp = T->unramCoeff_[0];
  auto evalPoly = [&](const K0& x) {
    K0 acc = k0_zero(T->p_, T->cap_, T->f_);
    for (long k = T->f_; k >= 0; --k) {
      acc = k0_mul(acc, x, T->unramCoeff_);
      K0 c = k0_zero(T->p_, T->cap_, T->f_);
      c[0] = mp[static_cast<size_t>(k)];
      acc = k0_add(acc, c);
    }
    return acc;
  };
  auto evalDeriv = [&](const K0& x) {
    K0 acc = k0_zero(T->p_, T->cap_, T->f_);
    for (long k = T->f_; k >= 1; --k) {
      acc = k0_mul(acc, x, T->unramCoeff_);
      K0 c = k0_zero(T->p_, T->cap_, T->f_);
      c[0] = PadicScalar::exact_int(T->p_, T->cap_, k) * mp[static_cast<size_t>(k)];
      acc = k0_add(acc, c);
    }
    return acc;
  };
  auto k0_inverse = [&](const K0& y) {
    // multiplication-matrix solve: columns are y * omega^j
    long f = T->f_;
    std::vector<std::vector<PadicScalar>> M(static_cast<size_t>(f),
                                            k0_zero(T->p_, T->cap_, f));
    for (long j = 0; j < f; ++j) {
      K0 basis = k0_zero(T->p_, T->cap_, f);
      basis[static_cast<size_t>(j)] = PadicScalar::one(T->p_, T->cap_);
      K0 col = k0_mul(y, basis, T->unramCoeff_);
      for (long i = 0; i < f; ++i) M[static_cast<size_t>(i)][static_cast<size_t>(j)] = col[static_cast<size_t>(i)];
    }
    K0 e0 = k0_zero(T->p_, T->cap_, f);
    e0[0] = PadicScalar::one(T->p_, T->cap_);
    return qp_solve(M, e0);
  };

  K0 sigmaOmega = k0_zero(T->p_, T->cap_, T->f_);
  if (T->f_ >= 2) {
    FqContext::Elem start = T->residue_.pow(T->residue_.gen(), BigInt(T->p_));
    for (long j = 0; j < T->f_; ++j)
      sigmaOmega[static_cast<size_t>(j)] =
          PadicScalar::exact_int(T->p_, T->cap_, start[static_cast<size_t>(j)]);
    int iters = 2;
    while ((1 << iters) < 2 * T->cap_) ++iters;
    for (int it = 0; it < iters + 2; ++it) {
      K0 fx = evalPoly(sigmaOmega);
      if (k0_is_zero(fx)) break;
      K0 corr = k0_mul(fx, k0_inverse(evalDeriv(sigmaOmega)), T->unramCoeff_);
      sigmaOmega = k0_add(sigmaOmega, k0_neg(corr));
    }
    if (!k0_is_zero(evalPoly(sigmaOmega)))
      throw WeakAdmissibilityPostconditionFailed("Frobenius lift did not converge");
  }
  // powers sigma(omega)^j, flattened row-major
  K0 pw = k0_zero(T->p_, T->cap_, T->f_);
  pw[0] = PadicScalar::one(T->p_, T->cap_);
  for (long j = 0; j < T->f_; ++j) {
    for (long i = 0; i < T->f_; ++i) T->frobOmegaPow_.push_back(pw[static_cast<size_t>(i)]);
    if (j + 1 < T->f_) pw = k0_mul(pw, sigmaOmega, T->unramCoeff_);
  }
  return T;
}

std::shared_ptr<const FieldTower> FieldTower::make(const PrecisionContext& ctx,
                                                   const std::vector<Rat>& unramMinPoly,
                                                   const std::vector<Rat>& eisensteinQp) {
  std::vector<std::vector<Rat>> e2;
  for (const Rat& c : eisensteinQp) e2.push_back({c});
  return make(ctx, unramMinPoly, e2);
}

std::shared_ptr<const FieldTower> FieldTower::qp(const PrecisionContext& ctx) {
  return make(ctx, {Rat(0), Rat(1)}, {Rat(-ctx.p), Rat(1)});
}

FieldTowerElement FieldTower::zero() const {
  auto self = shared_from_this();
  return FieldTowerElement(self, std::vector<PadicScalar>(
                                     static_cast<size_t>(e_ * f_), PadicScalar::zero(p_, cap_)));
}

FieldTowerElement FieldTower::one() const { return from_rational(Rat(1)); }

FieldTowerElement FieldTower::from_rational(const Rat& q) const {
  return from_grid({{q}});
}

FieldTowerElement FieldTower::from_grid(const std::vector<std::vector<Rat>>& grid) const {
  if (static_cast<long>(grid.size()) > e_)
    throw PreconditionViolated("from_grid: too many pi-rows");
  std::vector<PadicScalar> flat(static_cast<size_t>(e_ * f_), PadicScalar::zero(p_, cap_));
  for (size_t i = 0; i < grid.size(); ++i) {
    if (static_cast<long>(grid[i].size()) > f_)
      throw PreconditionViolated("from_grid: too many omega-columns");
    for (size_t j = 0; j < grid[i].size(); ++j)
      flat[i * static_cast<size_t>(f_) + j] = PadicScalar::exact_rat(p_, cap_, grid[i][j]);
  }
  return FieldTowerElement(shared_from_this(), std::move(flat));
}

FieldTowerElement FieldTower::pi() const {
  if (e_ >= 2) return basis_element(1, 0);
  // e == 1: the Eisenstein polynomial is u - pi with pi = -E(0)
  std::vector<PadicScalar> flat;
  for (long j = 0; j < f_; ++j) flat.push_back(-eisCoeff_[0][static_cast<size_t>(j)]);
  return FieldTowerElement(shared_from_this(), std::move(flat));
}

FieldTowerElement FieldTower::omega() const { return basis_element(0, f_ >= 2 ? 1 : 0); }

FieldTowerElement FieldTower::basis_element(long i, long j) const {
  if (i < 0 || i >= e_ || j < 0 || j >= f_)
    throw DomainViolation("basis_element: index out of range");
  std::vector<PadicScalar> flat(static_cast<size_t>(e_ * f_), PadicScalar::zero(p_, cap_));
  flat[static_cast<size_t>(i * f_ + j)] = PadicScalar::one(p_, cap_);
  return FieldTowerElement(shared_from_this(), std::move(flat));
}

FieldTowerElement::FieldTowerElement(TowerPtr tower, std::vector<PadicScalar> flat)
    : T_(std::move(tower)), c_(std::move(flat)) {
  if (static_cast<long>(c_.size()) != T_->degree())
    throw DomainViolation("FieldTowerElement: wrong coefficient count");
}

bool FieldTowerElement::is_zero_at_precision() const {
  return std::all_of(c_.begin(), c_.end(),
                     [](const PadicScalar& x) { return x.is_zero_at_precision(); });
}

Val FieldTowerElement::valuation() const {
  Val best = Val::inf();
  for (long i = 0; i < T_->e(); ++i)
    for (long j = 0; j < T_->f(); ++j) {
      const auto& s = coeff(i, j);
      if (s.is_zero_at_precision()) continue;
      best = min(best, Val(s.valuation().finite() + Rat(i, T_->e())));
    }
  return best;
}

Rat FieldTowerElement::valuation_lower_bound() const {
  bool any = false;
  Rat best = 0;
  for (long i = 0; i < T_->e(); ++i)
    for (long j = 0; j < T_->f(); ++j) {
      const auto& s = coeff(i, j);
      Rat term = s.valuation_lower_bound() + Rat(i, T_->e());
      if (!any || term < best) {
        best = term;
        any = true;
      }
    }
  return best;
}

Rat FieldTowerElement::valuation_strict() const {
  Val vis = valuation();
  if (!vis.is_finite())
    throw PrecisionExhausted("valuation_strict: element is zero at working precision");
  // hidden digits must not be able to undercut the visible minimum
  for (long i = 0; i < T_->e(); ++i)
    for (long j = 0; j < T_->f(); ++j) {
      const auto& s = coeff(i, j);
      if (!s.is_zero_at_precision()) continue;
      if (Rat(s.abs_precision()) + Rat(i, T_->e()) < vis.finite())
        throw PrecisionExhausted("valuation_strict: hidden digits could dominate");
    }
  return vis.finite();
}

FieldTowerElement FieldTowerElement::operator+(const FieldTowerElement& o) const {
  if (T_.get() != o.T_.get()) throw DomainViolation("tower mismatch");
  std::vector<PadicScalar> r = c_;
  for (size_t k = 0; k < r.size(); ++k) r[k] = r[k] + o.c_[k];
  return FieldTowerElement(T_, std::move(r));
}

FieldTowerElement FieldTowerElement::operator-(const FieldTowerElement& o) const {
  return *this + (-o);
}

FieldTowerElement FieldTowerElement::operator-() const {
  std::vector<PadicScalar> r = c_;
  for (auto& x : r) x = -x;
  return FieldTowerElement(T_, std::move(r));
}

FieldTowerElement FieldTowerElement::operator*(const FieldTowerElement& o) const {
  if (T_.get() != o.T_.get()) throw DomainViolation("tower mismatch");
  long e = T_->e(), f = T_->f();
  // rows as K0 elements
  auto rowOf = [&](const FieldTowerElement& x, long i) {
    K0 r;
    for (long j = 0; j < f; ++j) r.push_back(x.coeff(i, j));
    return r;
  };
  std::vector<K0> prod(static_cast<size_t>(2 * e - 1), k0_zero(T_->p(), T_->cap(), f));
  for (long i1 = 0; i1 < e; ++i1) {
    K0 a = rowOf(*this, i1);
    if (k0_is_zero(a) && std::all_of(a.begin(), a.end(), [&](const PadicScalar& s) {
          return s.abs_precision() >= T_->cap();
        }))
      continue;
    for (long i2 = 0; i2 < e; ++i2)
      prod[static_cast<size_t>(i1 + i2)] =
          k0_add(prod[static_cast<size_t>(i1 + i2)],
                 k0_mul(a, rowOf(o, i2), T_->unramCoeff_));
  }
  for (long k = 2 * e - 2; k >= e; --k) {
    K0 top = prod[static_cast<size_t>(k)];
    if (k0_is_zero(top) && std::all_of(top.begin(), top.end(), [&](const PadicScalar& s) {
          return s.abs_precision() >= T_->cap();
        }))
      continue;
    for (long i = 0; i < e; ++i)
      prod[static_cast<size_t>(k - e + i)] =
          k0_add(prod[static_cast<size_t>(k - e + i)],
                 k0_neg(k0_mul(top, T_->eisCoeff_[static_cast<size_t>(i)], T_->unramCoeff_)));
  }
  std::vector<PadicScalar> flat;
  for (long i = 0; i < e; ++i)
    for (long j = 0; j < f; ++j) flat.push_back(prod[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  return FieldTowerElement(T_, std::move(flat));
}

FieldTowerElement FieldTowerElement::inverse() const {
  long n = T_->degree();
  if (is_zero_at_precision()) throw InvertNonUnit("inverse of zero at working precision");
  std::vector<std::vector<PadicScalar>> M(
      static_cast<size_t>(n),
      std::vector<PadicScalar>(static_cast<size_t>(n), PadicScalar::zero(T_->p(), T_->cap())));
  long f = T_->f();
  for (long col = 0; col < n; ++col) {
    FieldTowerElement b = T_->basis_element(col / f, col % f);
    FieldTowerElement prod = *this * b;
    for (long row = 0; row < n; ++row) M[static_cast<size_t>(row)][static_cast<size_t>(col)] = prod.c_[static_cast<size_t>(row)];
  }
  std::vector<PadicScalar> rhs(static_cast<size_t>(n), PadicScalar::zero(T_->p(), T_->cap()));
  rhs[0] = PadicScalar::one(T_->p(), T_->cap());
  return FieldTowerElement(T_, qp_solve(M, rhs));
}

FieldTowerElement FieldTowerElement::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  FieldTowerElement r = T_->one(), b = *this;
  for (long k = e; k > 0; k >>= 1) {
    if (k & 1) r = r * b;
    if (k > 1) b = b * b;
  }
  return r;
}

FieldTowerElement FieldTowerElement::scale(const PadicScalar& s) const {
  std::vector<PadicScalar> r = c_;
  for (auto& x : r) x = x * s;
  return FieldTowerElement(T_, std::move(r));
}

FieldTowerElement FieldTowerElement::mul_p_pow(long k) const {
  std::vector<PadicScalar> r = c_;
  for (auto& x : r) x = x.mul_p_pow(k);
  return FieldTowerElement(T_, std::move(r));
}

FieldTowerElement FieldTowerElement::reduce_to(int aNew) const {
  std::vector<PadicScalar> r = c_;
  for (auto& x : r) x = x.reduce_to(std::min(aNew, x.abs_precision()));
  return FieldTowerElement(T_, std::move(r));
}

FieldTowerElement FieldTowerElement::frobenius_K0() const {
  long e = T_->e(), f = T_->f();
  int capTo = T_->cap();
  for (long i = 1; i < e; ++i)
    for (long j = 0; j < f; ++j) {
      const auto& s = coeff(i, j);
      if (!s.is_zero_at_precision())
        throw NotUnramified("frobenius_K0: element has visible ramified components");
      capTo = std::min(capTo, s.abs_precision());
    }
  K0 row = k0_zero(T_->p(), T_->cap(), f);
  for (long j = 0; j < f; ++j) {
    K0 pw;
    for (long i = 0; i < f; ++i)
      pw.push_back(T_->frobOmegaPow_[static_cast<size_t>(j * f + i)]);
    row = k0_add(row, k0_scale(pw, coeff(0, j)));
  }
  std::vector<PadicScalar> flat(static_cast<size_t>(e * f), PadicScalar::zero(T_->p(), T_->cap()));
  for (long j = 0; j < f; ++j)
    flat[static_cast<size_t>(j)] =
        row[static_cast<size_t>(j)].reduce_to(std::min(capTo, row[static_cast<size_t>(j)].abs_precision()));
  return FieldTowerElement(T_, std::move(flat));
}

FqContext::Elem FieldTowerElement::residue_image() const {
  for (const auto& s : c_)
    if (!s.is_integral()) throw DomainViolation("residue_image: element is not integral");
  FqContext::Elem r(static_cast<size_t>(T_->f()), 0);
  for (long j = 0; j < T_->f(); ++j) r[static_cast<size_t>(j)] = coeff(0, j).residue();
  return r;
}

std::string FieldTowerElement::str() const {
  std::ostringstream os;
  os << "[";
  for (long i = 0; i < T_->e(); ++i) {
    if (i) os << "; ";
    for (long j = 0; j < T_->f(); ++j) {
      if (j) os << ", ";
      os << coeff(i, j).str();
    }
  }
  os << "]";
  return os.str();
}

}  // namespace isocat
