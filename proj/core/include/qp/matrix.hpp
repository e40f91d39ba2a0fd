#pragma once
// Dense exact linear algebra over the field contexts in fields.hpp.

#include <vector>

#include "qp/fields.hpp"
#include "qp/poly.hpp"

namespace qp {

template <class F>
struct Mat {
  using Elt = typename F::Elt;
  size_t nr = 0, nc = 0;
  std::vector<std::vector<Elt>> a;

  Mat() = default;
  Mat(size_t r, size_t c, const F& f) : nr(r), nc(c), a(r, std::vector<Elt>(c, f.zero())) {}
  static Mat identity(size_t n, const F& f) {
    Mat m(n, n, f);
    for (size_t i = 0; i < n; ++i) m.a[i][i] = f.one();
    return m;
  }
  std::vector<Elt>& operator[](size_t i) { return a[i]; }
  const std::vector<Elt>& operator[](size_t i) const { return a[i]; }
};

template <class F>
Mat<F> mat_mul(const Mat<F>& x, const Mat<F>& y, const F& f) {
  Mat<F> r(x.nr, y.nc, f);
  for (size_t i = 0; i < x.nr; ++i)
    for (size_t k = 0; k < x.nc; ++k) {
      if (f.is_zero(x[i][k])) continue;
      for (size_t j = 0; j < y.nc; ++j)
        r[i][j] = f.add(r[i][j], f.mul(x[i][k], y[k][j]));
    }
  return r;
}

template <class F>
std::vector<typename F::Elt> mat_vec(const Mat<F>& m, const std::vector<typename F::Elt>& v,
                                     const F& f) {
  std::vector<typename F::Elt> r(m.nr, f.zero());
  for (size_t i = 0; i < m.nr; ++i)
    for (size_t j = 0; j < m.nc; ++j)
      if (!f.is_zero(m[i][j])) r[i] = f.add(r[i], f.mul(m[i][j], v[j]));
  return r;
}

template <class F>
Mat<F> mat_transpose(const Mat<F>& m, const F& f) {
  Mat<F> r(m.nc, m.nr, f);
  for (size_t i = 0; i < m.nr; ++i)
    for (size_t j = 0; j < m.nc; ++j) r[j][i] = m[i][j];
  return r;
}

// In-place reduced row echelon form; returns pivot column indices.
template <class F>
std::vector<size_t> mat_rref(Mat<F>& m, const F& f) {
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t col = 0; col < m.nc && row < m.nr; ++col) {
    size_t piv = row;
    while (piv < m.nr && f.is_zero(m[piv][col])) ++piv;
    if (piv == m.nr) continue;
    std::swap(m.a[piv], m.a[row]);
    auto inv = f.inv(m[row][col]);
    for (size_t j = col; j < m.nc; ++j) m[row][j] = f.mul(m[row][j], inv);
    for (size_t i = 0; i < m.nr; ++i) {
      if (i == row || f.is_zero(m[i][col])) continue;
      auto c = m[i][col];
      for (size_t j = col; j < m.nc; ++j)
        m[i][j] = f.sub(m[i][j], f.mul(c, m[row][j]));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class F>
size_t mat_rank(Mat<F> m, const F& f) {
  return mat_rref(m, f).size();
}

// Right kernel basis from the rref.
template <class F>
std::vector<std::vector<typename F::Elt>> mat_kernel(Mat<F> m, const F& f) {
  auto pivots = mat_rref(m, f);
  std::vector<bool> is_piv(m.nc, false);
  for (auto c : pivots) is_piv[c] = true;
  std::vector<std::vector<typename F::Elt>> out;
  for (size_t free_col = 0; free_col < m.nc; ++free_col) {
    if (is_piv[free_col]) continue;
    std::vector<typename F::Elt> v(m.nc, f.zero());
    v[free_col] = f.one();
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = f.neg(m[r][free_col]);
    out.push_back(std::move(v));
  }
  return out;
}

// Solve m x = b; nullopt if inconsistent. Underdetermined systems get one solution.
template <class F>
std::optional<std::vector<typename F::Elt>> mat_solve(Mat<F> m, std::vector<typename F::Elt> b,
                                                      const F& f) {
  size_t n = m.nr;
  Mat<F> aug(n, m.nc + 1, f);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m.nc; ++j) aug[i][j] = m[i][j];
    aug[i][m.nc] = b[i];
  }
  auto piv = mat_rref(aug, f);
  if (!piv.empty() && piv.back() == m.nc) return std::nullopt;
  std::vector<typename F::Elt> x(m.nc, f.zero());
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug[r][m.nc];
  return x;
}

// Intersection of two row spaces (each row a vector of length nc).
template <class F>
std::vector<std::vector<typename F::Elt>> rowspace_intersect(
    const std::vector<std::vector<typename F::Elt>>& A,
    const std::vector<std::vector<typename F::Elt>>& B, size_t nc, const F& f);

using IMat = Mat<RatField>;

// Fraction-free (Bareiss) kernel with content extraction; returns primitive
// integer kernel vectors for a rational input matrix.
std::vector<std::vector<Int>> kernel_basis_bareiss(const Mat<RatField>& m);

// Multimodular kernel of an integer matrix (CRT + rational reconstruction,
// verified exactly); used on the large series-fit systems.
std::vector<std::vector<Int>> kernel_basis_crt(const std::vector<std::vector<Int>>& m);

// Characteristic polynomial of a rational matrix (monic, degree n).
std::vector<Rat> charpoly(const Mat<RatField>& m);

struct SmithForm {
  std::vector<Int> diag;            // all of them, including 0s, d_i | d_{i+1}
  std::vector<std::vector<Int>> u;  // U m V = diag(d)
  std::vector<std::vector<Int>> v;
  std::vector<Int> invariant_factors() const {  // entries > 1
    std::vector<Int> out;
    for (auto& d : diag)
      if (d > 1) out.push_back(d);
    return out;
  }
};

SmithForm smith_normal_form(std::vector<std::vector<Int>> m);

// Content-normalize a rational vector to a primitive integer vector.
std::vector<Int> primitive_integer_vector(const std::vector<Rat>& v);

template <class F>
std::vector<std::vector<typename F::Elt>> rowspace_intersect(
    const std::vector<std::vector<typename F::Elt>>& A,
    const std::vector<std::vector<typename F::Elt>>& B, size_t nc, const F& f) {
  // kernel trick: rows of A stacked over rows of B; kernel vectors (x, y)
  // with x*A = y*B give intersection elements x*A.
  size_t ra = A.size(), rb = B.size();
  Mat<F> stacked(nc, ra + rb, f);
  for (size_t i = 0; i < ra; ++i)
    for (size_t j = 0; j < nc; ++j) stacked[j][i] = A[i][j];
  for (size_t i = 0; i < rb; ++i)
    for (size_t j = 0; j < nc; ++j) stacked[j][ra + i] = f.neg(B[i][j]);
  auto ker = mat_kernel(stacked, f);
  std::vector<std::vector<typename F::Elt>> out;
  for (auto& k : ker) {
    std::vector<typename F::Elt> v(nc, f.zero());
    bool nonzero = false;
    for (size_t i = 0; i < ra; ++i)
      if (!f.is_zero(k[i])) {
        nonzero = true;
        for (size_t j = 0; j < nc; ++j) v[j] = f.add(v[j], f.mul(k[i], A[i][j]));
      }
    if (nonzero) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace qp
