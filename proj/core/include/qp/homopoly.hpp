#pragma once
// Sparse homogeneous polynomials in g variables: exponent tuple -> coefficient.
// Zero coefficients are never stored; every tuple sums to the stated degree.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "qp/series.hpp"

namespace qp {

using Expo = std::vector<uint8_t>;

template <class C>
struct HPoly {
  int degree = 0;
  size_t nvars = 0;
  std::map<Expo, C> terms;

  HPoly() = default;
  HPoly(int deg, size_t nv) : degree(deg), nvars(nv) {}

  void add_term(const Expo& e, const C& coef) {
    if (coef == C(0)) return;
    unsigned s = 0;
    for (auto x : e) s += x;
    if (int(s) != degree || e.size() != nvars)
      throw std::invalid_argument("homogeneous polynomial: bad exponent tuple");
    auto it = terms.find(e);
    if (it == terms.end())
      terms.emplace(e, coef);
    else {
      it->second += coef;
      if (it->second == C(0)) terms.erase(it);
    }
  }
  bool is_zero() const { return terms.empty(); }
};

template <class C>
HPoly<C> hpoly_mul(const HPoly<C>& a, const HPoly<C>& b) {
  HPoly<C> r(a.degree + b.degree, a.nvars);
  for (auto& [ea, ca] : a.terms)
    for (auto& [eb, cb] : b.terms) {
      Expo e(a.nvars);
      for (size_t i = 0; i < a.nvars; ++i) e[i] = uint8_t(ea[i] + eb[i]);
      r.add_term(e, ca * cb);
    }
  return r;
}

// Evaluate on a vector of series (one per variable).
template <class C>
Series<C> hpoly_eval_series(const HPoly<C>& p, const std::vector<Series<C>>& xs) {
  if (p.terms.empty()) throw std::invalid_argument("hpoly_eval_series: zero polynomial");
  bool first = true;
  Series<C> acc;
  for (auto& [e, coef] : p.terms) {
    Series<C> term;
    bool started = false;
    for (size_t i = 0; i < e.size(); ++i)
      for (uint8_t k = 0; k < e[i]; ++k) {
        term = started ? series_mul(term, xs[i]) : xs[i];
        started = true;
      }
    term = series_scale(term, coef);
    acc = first ? term : series_add(acc, term);
    first = false;
  }
  return acc;
}

// Evaluate at a point, coefficients mapped into the point's ring via `conv`.
template <class C, class R, class Conv>
R hpoly_eval_point(const HPoly<C>& p, const std::vector<R>& x, Conv&& conv, const R& zero) {
  R acc = zero;
  for (auto& [e, coef] : p.terms) {
    R term = conv(coef);
    for (size_t i = 0; i < e.size(); ++i)
      for (uint8_t k = 0; k < e[i]; ++k) term = term * x[i];
    acc = acc + term;
  }
  return acc;
}

// All exponent tuples of total degree d in n variables (grlex-ish order).
std::vector<Expo> monomials_of_degree(int d, size_t n);

using QHPoly = HPoly<Rat>;
using ZHPoly = HPoly<Int>;

}  // namespace qp
