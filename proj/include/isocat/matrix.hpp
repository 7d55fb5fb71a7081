#pragma once

#include <vector>

#include "isocat/errors.hpp"

namespace isocat {

// Dense matrices over an arbitrary coefficient ring, generic over an
// operations object R with:
//   using Elem;
//   Elem zero() / one();
//   Elem add/sub/mul(a, b); Elem neg(a); Elem inv(a);
//   bool is_zero(a);              // at working precision for inexact rings
//   bool exactly_zero(a);         // zero with nothing hidden below precision
//   bool pivot_better(a, b);      // strict: a makes a strictly better pivot
// Field algorithms (elimination, kernels, inverse) additionally assume inv
// works on every element that is not is_zero.  Terms are only skipped when
// exactly_zero: an inexact zero still caps the precision of whatever it is
// added to, and dropping it would overclaim digits.

template <typename R>
using Mat = std::vector<std::vector<typename R::Elem>>;

template <typename R>
using Vec = std::vector<typename R::Elem>;

template <typename R>
Mat<R> mat_zero(const R& ring, size_t rows, size_t cols) {
  return Mat<R>(rows, Vec<R>(cols, ring.zero()));
}

template <typename R>
Mat<R> mat_identity(const R& ring, size_t n) {
  Mat<R> m = mat_zero(ring, n, n);
  for (size_t i = 0; i < n; ++i) m[i][i] = ring.one();
  return m;
}

template <typename R>
Mat<R> mat_add(const R& ring, const Mat<R>& a, const Mat<R>& b) {
  Mat<R> r = a;
  for (size_t i = 0; i < r.size(); ++i)
    for (size_t j = 0; j < r[i].size(); ++j) r[i][j] = ring.add(r[i][j], b[i][j]);
  return r;
}

template <typename R>
Mat<R> mat_sub(const R& ring, const Mat<R>& a, const Mat<R>& b) {
  Mat<R> r = a;
  for (size_t i = 0; i < r.size(); ++i)
    for (size_t j = 0; j < r[i].size(); ++j) r[i][j] = ring.sub(r[i][j], b[i][j]);
  return r;
}

template <typename R>
Mat<R> mat_mul(const R& ring, const Mat<R>& a, const Mat<R>& b) {
  size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Mat<R> r = mat_zero(ring, n, m);
  for (size_t i = 0; i < n; ++i)
    for (size_t t = 0; t < k; ++t) {
      if (ring.exactly_zero(a[i][t])) continue;
      for (size_t j = 0; j < m; ++j)
        r[i][j] = ring.add(r[i][j], ring.mul(a[i][t], b[t][j]));
    }
  return r;
}

template <typename R>
Vec<R> mat_apply(const R& ring, const Mat<R>& a, const Vec<R>& v) {
  Vec<R> r(a.size(), ring.zero());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) r[i] = ring.add(r[i], ring.mul(a[i][j], v[j]));
  return r;
}

template <typename R>
Mat<R> mat_scale(const R& ring, const Mat<R>& a, const typename R::Elem& c) {
  Mat<R> r = a;
  for (auto& row : r)
    for (auto& x : row) x = ring.mul(x, c);
  return r;
}

// Determinant by cofactor expansion: needs only ring operations, so it works
// over polynomial rings.  Exponential in the dimension; fine for n <= 8.
template <typename R>
typename R::Elem mat_det_cofactor(const R& ring, const Mat<R>& a) {
  size_t n = a.size();
  if (n == 0) return ring.one();
  if (n == 1) return a[0][0];
  typename R::Elem acc = ring.zero();
  for (size_t j = 0; j < n; ++j) {
    if (ring.exactly_zero(a[0][j])) continue;
    Mat<R> minor;
    for (size_t i = 1; i < n; ++i) {
      Vec<R> row;
      for (size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(row);
    }
    typename R::Elem term = ring.mul(a[0][j], mat_det_cofactor(ring, minor));
    acc = (j % 2 == 0) ? ring.add(acc, term) : ring.sub(acc, term);
  }
  return acc;
}

namespace detail {

// Gauss-Jordan with full pivoting; returns pivot (row, col) pairs in order.
// Afterwards every pivot column is zero outside its own pivot row, so pivot
// rows only couple their pivot column to the free columns.
template <typename R>
std::vector<std::pair<size_t, size_t>> eliminate(const R& ring, Mat<R>& a, Mat<R>* rhs) {
  size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<bool> rowDone(rows, false), colDone(cols, false);
  std::vector<std::pair<size_t, size_t>> pivots;
  for (;;) {
    bool found = false;
    size_t pr = 0, pc = 0;
    for (size_t i = 0; i < rows; ++i) {
      if (rowDone[i]) continue;
      for (size_t j = 0; j < cols; ++j) {
        if (colDone[j] || ring.is_zero(a[i][j])) continue;
        if (!found || ring.pivot_better(a[i][j], a[pr][pc])) {
          found = true;
          pr = i;
          pc = j;
        }
      }
    }
    if (!found) break;
    rowDone[pr] = true;
    colDone[pc] = true;
    pivots.emplace_back(pr, pc);
    typename R::Elem inv = ring.inv(a[pr][pc]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == pr) continue;
      // inexact zeros are eliminated too: the subtraction carries their
      // precision loss into the row instead of silently overclaiming digits
      typename R::Elem factor = ring.mul(a[i][pc], inv);
      for (size_t j = 0; j < cols; ++j) a[i][j] = ring.sub(a[i][j], ring.mul(factor, a[pr][j]));
      if (rhs)
        for (size_t j = 0; j < (*rhs)[i].size(); ++j)
          (*rhs)[i][j] = ring.sub((*rhs)[i][j], ring.mul(factor, (*rhs)[pr][j]));
    }
  }
  return pivots;
}

}  // namespace detail

template <typename R>
size_t mat_rank(const R& ring, Mat<R> a) {
  return detail::eliminate(ring, a, static_cast<Mat<R>*>(nullptr)).size();
}

// Basis of the right kernel (solutions of A x = 0), one vector per free
// column, deterministic order (ascending free column index).
template <typename R>
std::vector<Vec<R>> mat_kernel(const R& ring, Mat<R> a) {
  size_t cols = a.empty() ? 0 : a[0].size();
  auto pivots = detail::eliminate(ring, a, static_cast<Mat<R>*>(nullptr));
  std::vector<long> pivotRowOfCol(cols, -1);
  for (auto [r, c] : pivots) pivotRowOfCol[c] = static_cast<long>(r);
  std::vector<Vec<R>> basis;
  for (size_t freeCol = 0; freeCol < cols; ++freeCol) {
    if (pivotRowOfCol[freeCol] >= 0) continue;
    Vec<R> v(cols, ring.zero());
    v[freeCol] = ring.one();
    // pivot columns adjust to cancel: x_pc = -a[pr][freeCol] / a[pr][pc]
    for (auto [pr, pc] : pivots) {
      if (ring.exactly_zero(a[pr][freeCol])) continue;
      v[pc] = ring.neg(ring.mul(a[pr][freeCol], ring.inv(a[pr][pc])));
    }
    basis.push_back(v);
  }
  return basis;
}

// Solves A x = b over a field; throws InvertNonUnit when inconsistent or
// underdetermined columns are left free (they are set to zero).
template <typename R>
Vec<R> mat_solve(const R& ring, Mat<R> a, const Vec<R>& b) {
  size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  Mat<R> rhs(rows, Vec<R>(1));
  for (size_t i = 0; i < rows; ++i) rhs[i][0] = b[i];
  auto pivots = detail::eliminate(ring, a, &rhs);
  std::vector<bool> rowHasPivot(rows, false);
  Vec<R> x(cols, ring.zero());
  for (auto [r, c] : pivots) {
    rowHasPivot[r] = true;
    x[c] = ring.mul(rhs[r][0], ring.inv(a[r][c]));
  }
  for (size_t i = 0; i < rows; ++i)
    if (!rowHasPivot[i] && !ring.is_zero(rhs[i][0]))
      throw InvertNonUnit("mat_solve: inconsistent system");
  return x;
}

template <typename R>
Mat<R> mat_inverse(const R& ring, Mat<R> a) {
  size_t n = a.size();
  Mat<R> rhs = mat_identity(ring, n);
  auto pivots = detail::eliminate(ring, a, &rhs);
  if (pivots.size() != n) throw InvertNonUnit("mat_inverse: singular at working precision");
  Mat<R> inv = mat_zero(ring, n, n);
  for (auto [r, c] : pivots) {
    typename R::Elem d = ring.inv(a[r][c]);
    for (size_t j = 0; j < n; ++j) inv[c][j] = ring.mul(rhs[r][j], d);
  }
  return inv;
}

// Determinant over a field via elimination with pivoting.
template <typename R>
typename R::Elem mat_det(const R& ring, Mat<R> a) {
  size_t n = a.size();
  if (n == 0) return ring.one();
  auto pivots = detail::eliminate(ring, a, static_cast<Mat<R>*>(nullptr));
  if (pivots.size() < n) return ring.zero();
  // determinant = product of pivots * sign of the permutation
  typename R::Elem d = ring.one();
  for (auto [r, c] : pivots) d = ring.mul(d, a[r][c]);
  // permutation sign: rows r_i in pivot order map to columns c_i; the
  // composite permutation sends position i to ... count inversions of the
  // pair sequence
  std::vector<std::pair<size_t, size_t>> ps = pivots;
  long inversions = 0;
  for (size_t i = 0; i < ps.size(); ++i)
    for (size_t j = i + 1; j < ps.size(); ++j) {
      bool rowInv = ps[i].first > ps[j].first;
      bool colInv = ps[i].second > ps[j].second;
      if (rowInv != colInv) ++inversions;
    }
  if (inversions % 2 == 1) d = ring.neg(d);
  return d;
}

}  // namespace isocat
