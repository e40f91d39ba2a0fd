#pragma once
// Dense univariate polynomials over a Field context, coefficients low -> high.

#include <vector>

#include "qp/fields.hpp"

namespace qp {

template <class F>
struct Poly {
  using Elt = typename F::Elt;
  std::vector<Elt> c;

  static Poly zero() { return Poly{}; }
  static Poly of(std::vector<Elt> v, const F& f) {
    Poly p{std::move(v)};
    p.normalize(f);
    return p;
  }
  bool is_zero() const { return c.empty(); }
  int deg() const { return int(c.size()) - 1; }
  void normalize(const F& f) {
    while (!c.empty() && f.is_zero(c.back())) c.pop_back();
  }
  const Elt& lead() const { return c.back(); }
  Elt get(size_t i, const F& f) const { return i < c.size() ? c[i] : f.zero(); }
};

template <class F>
Poly<F> poly_add(const Poly<F>& a, const Poly<F>& b, const F& f) {
  Poly<F> r;
  r.c.resize(std::max(a.c.size(), b.c.size()), f.zero());
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = f.add(a.get(i, f), b.get(i, f));
  r.normalize(f);
  return r;
}

template <class F>
Poly<F> poly_sub(const Poly<F>& a, const Poly<F>& b, const F& f) {
  Poly<F> r;
  r.c.resize(std::max(a.c.size(), b.c.size()), f.zero());
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = f.sub(a.get(i, f), b.get(i, f));
  r.normalize(f);
  return r;
}

template <class F>
Poly<F> poly_mul(const Poly<F>& a, const Poly<F>& b, const F& f) {
  if (a.is_zero() || b.is_zero()) return {};
  Poly<F> r;
  r.c.assign(a.c.size() + b.c.size() - 1, f.zero());
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (f.is_zero(a.c[i])) continue;
    for (size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = f.add(r.c[i + j], f.mul(a.c[i], b.c[j]));
  }
  r.normalize(f);
  return r;
}

template <class F>
Poly<F> poly_scale(const Poly<F>& a, const typename F::Elt& s, const F& f) {
  Poly<F> r = a;
  for (auto& x : r.c) x = f.mul(x, s);
  r.normalize(f);
  return r;
}

// Division with remainder; divisor must be nonzero.
template <class F>
std::pair<Poly<F>, Poly<F>> poly_divrem(Poly<F> a, const Poly<F>& b, const F& f) {
  Poly<F> q;
  auto binv = f.inv(b.lead());
  if (a.deg() >= b.deg()) q.c.assign(a.deg() - b.deg() + 1, f.zero());
  while (a.deg() >= b.deg() && !a.is_zero()) {
    auto coef = f.mul(a.lead(), binv);
    int shift = a.deg() - b.deg();
    q.c[shift] = coef;
    for (int i = 0; i <= b.deg(); ++i)
      a.c[i + shift] = f.sub(a.c[i + shift], f.mul(coef, b.c[i]));
    a.normalize(f);
  }
  q.normalize(f);
  return {q, a};
}

template <class F>
Poly<F> poly_mod(const Poly<F>& a, const Poly<F>& b, const F& f) {
  return poly_divrem(a, b, f).second;
}

template <class F>
Poly<F> poly_monic(const Poly<F>& a, const F& f) {
  if (a.is_zero()) return a;
  return poly_scale(a, f.inv(a.lead()), f);
}

template <class F>
Poly<F> poly_gcd(Poly<F> a, Poly<F> b, const F& f) {
  while (!b.is_zero()) {
    auto r = poly_mod(a, b, f);
    a = b;
    b = r;
  }
  return poly_monic(a, f);
}

// Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic.
template <class F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> poly_xgcd(Poly<F> a, Poly<F> b, const F& f) {
  Poly<F> u0 = Poly<F>::of({f.one()}, f), v0, u1, v1 = Poly<F>::of({f.one()}, f);
  while (!b.is_zero()) {
    auto [q, r] = poly_divrem(a, b, f);
    a = b;
    b = r;
    auto u2 = poly_sub(u0, poly_mul(q, u1, f), f);
    auto v2 = poly_sub(v0, poly_mul(q, v1, f), f);
    u0 = u1; u1 = u2;
    v0 = v1; v1 = v2;
  }
  if (a.is_zero()) return {a, u0, v0};
  auto linv = f.inv(a.lead());
  return {poly_scale(a, linv, f), poly_scale(u0, linv, f), poly_scale(v0, linv, f)};
}

template <class F>
Poly<F> poly_powmod(Poly<F> base, Int e, const Poly<F>& m, const F& f) {
  Poly<F> r = Poly<F>::of({f.one()}, f);
  base = poly_mod(base, m, f);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = poly_mod(poly_mul(r, base, f), m, f);
    base = poly_mod(poly_mul(base, base, f), m, f);
    e >>= 1;
  }
  return r;
}

template <class F>
Poly<F> poly_deriv(const Poly<F>& a, const F& f) {
  Poly<F> r;
  if (a.deg() < 1) return r;
  r.c.resize(a.c.size() - 1);
  for (size_t i = 1; i < a.c.size(); ++i) r.c[i - 1] = f.mul(a.c[i], f.from_int(Int(i)));
  r.normalize(f);
  return r;
}

template <class F>
typename F::Elt poly_eval(const Poly<F>& a, const typename F::Elt& x, const F& f) {
  auto r = f.zero();
  for (int i = a.deg(); i >= 0; --i) r = f.add(f.mul(r, x), a.c[i]);
  return r;
}

// Resultant via the Euclidean PRS with leading-coefficient bookkeeping.
template <class F>
typename F::Elt poly_resultant(Poly<F> a, Poly<F> b, const F& f) {
  auto res = f.one();
  if (a.is_zero() || b.is_zero()) return f.zero();
  while (true) {
    if (b.deg() == 0) {
      res = f.mul(res, f_pow(f, b.c[0], a.deg()));
      return res;
    }
    auto r = poly_mod(a, b, f);
    if (r.is_zero()) return f.zero();
    // res(a,b) = lc(b)^(deg a - deg r) * (-1)^(deg a * deg b) * res(b, r)
    res = f.mul(res, f_pow(f, b.lead(), a.deg() - r.deg()));
    if ((a.deg() & 1) && (b.deg() & 1)) res = f.neg(res);
    a = b;
    b = r;
  }
}

template <class F>
typename F::Elt f_pow(const F& f, typename F::Elt a, long e) {
  auto r = f.one();
  while (e > 0) {
    if (e & 1) r = f.mul(r, a);
    a = f.mul(a, a);
    e >>= 1;
  }
  return r;
}

// Map coefficients through a functor into another field.
template <class F2, class F1, class Fun>
Poly<F2> poly_map(const Poly<F1>& a, Fun&& fn, const F2& f2) {
  Poly<F2> r;
  r.c.reserve(a.c.size());
  for (auto& x : a.c) r.c.push_back(fn(x));
  r.normalize(f2);
  return r;
}

}  // namespace qp
