#pragma once

#include "isocat/matrix.hpp"
#include "isocat/padic.hpp"
#include "isocat/residue.hpp"
#include "isocat/tower.hpp"

namespace isocat {

// Operations objects plugging concrete coefficient rings into the generic
// matrix and polynomial templates.

struct TowerOps {
  TowerPtr T;
  using Elem = FieldTowerElement;
  explicit TowerOps(TowerPtr t) : T(std::move(t)) {}

  Elem zero() const { return T->zero(); }
  Elem one() const { return T->one(); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const { return a.inverse(); }
  bool is_zero(const Elem& a) const { return a.is_zero_at_precision(); }
  bool exactly_zero(const Elem& a) const {
    if (!a.is_zero_at_precision()) return false;
    for (long i = 0; i < T->e(); ++i)
      for (long j = 0; j < T->f(); ++j)
        if (a.coeff(i, j).abs_precision() < T->cap()) return false;
    return true;
  }
  // smaller valuation = better-conditioned pivot
  bool pivot_better(const Elem& a, const Elem& b) const {
    return a.valuation() < b.valuation();
  }
};

// Like TowerOps, but rank decisions treat an entry as zero unless it has a
// visibly nonzero coordinate of valuation below the threshold. Used where a
// yes/no rank answer must be stable against accumulated low-order noise;
// the default threshold is half the requested working precision.
struct ThresholdTowerOps : TowerOps {
  Rat threshold;
  ThresholdTowerOps(TowerPtr t, Rat thr) : TowerOps(std::move(t)), threshold(std::move(thr)) {}
  explicit ThresholdTowerOps(TowerPtr t)
      : ThresholdTowerOps(t, Rat(t->context().pPrecision, 2)) {}

  bool is_zero(const Elem& a) const {
    Val v = a.valuation();
    return !(v.is_finite() && v.finite() < threshold);
  }
};

struct RatOps {
  using Elem = Rat;
  Elem zero() const { return Rat(0); }
  Elem one() const { return Rat(1); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const {
    if (a == 0) throw InvertNonUnit("RatOps: division by zero");
    return 1 / a;
  }
  bool is_zero(const Elem& a) const { return a == 0; }
  bool exactly_zero(const Elem& a) const { return a == 0; }
  bool pivot_better(const Elem&, const Elem&) const { return false; }
};

struct FqOps {
  FqContext F;
  using Elem = FqContext::Elem;
  explicit FqOps(FqContext f) : F(std::move(f)) {}
  Elem zero() const { return F.zero(); }
  Elem one() const { return F.one(); }
  Elem add(const Elem& a, const Elem& b) const { return F.add(a, b); }
  Elem sub(const Elem& a, const Elem& b) const { return F.sub(a, b); }
  Elem mul(const Elem& a, const Elem& b) const { return F.mul(a, b); }
  Elem neg(const Elem& a) const { return F.neg(a); }
  Elem inv(const Elem& a) const { return F.inv(a); }
  bool is_zero(const Elem& a) const { return F.is_zero(a); }
  bool exactly_zero(const Elem& a) const { return F.is_zero(a); }
  bool pivot_better(const Elem&, const Elem&) const { return false; }
};

// Polynomials c[0] + c[1] x + ... as a ring, generic over the base ops.
// Division is unavailable (inv throws); use for cofactor determinants.
template <typename R>
struct PolyRingOps {
  R base;
  using Elem = std::vector<typename R::Elem>;
  explicit PolyRingOps(R b) : base(std::move(b)) {}

  Elem zero() const { return {}; }
  Elem one() const { return {base.one()}; }
  Elem add(const Elem& a, const Elem& b) const {
    Elem r(std::max(a.size(), b.size()), base.zero());
    for (size_t i = 0; i < r.size(); ++i) {
      if (i < a.size()) r[i] = base.add(r[i], a[i]);
      if (i < b.size()) r[i] = base.add(r[i], b[i]);
    }
    return trim(r);
  }
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
  Elem neg(const Elem& a) const {
    Elem r = a;
    for (auto& c : r) c = base.neg(c);
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    if (a.empty() || b.empty()) return {};
    Elem r(a.size() + b.size() - 1, base.zero());
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j)
        r[i + j] = base.add(r[i + j], base.mul(a[i], b[j]));
    return trim(r);
  }
  Elem inv(const Elem&) const { throw InvertNonUnit("polynomial ring has no division"); }
  bool is_zero(const Elem& a) const {
    for (const auto& c : a)
      if (!base.is_zero(c)) return false;
    return true;
  }
  bool exactly_zero(const Elem& a) const {
    for (const auto& c : a)
      if (!base.exactly_zero(c)) return false;
    return true;
  }
  bool pivot_better(const Elem&, const Elem&) const { return false; }

  Elem trim(Elem a) const {
    while (!a.empty() && base.exactly_zero(a.back())) a.pop_back();
    return a;
  }
};

}  // namespace isocat
