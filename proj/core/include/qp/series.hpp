#pragma once
// Truncated q-expansions. Coefficients are known for exponents in
// [start, prec); reading at or beyond prec is a contract violation.

#include <stdexcept>
#include <vector>

#include "qp/intops.hpp"

namespace qp {

struct SeriesPrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class C>
struct Series {
  int start = 0;  // exponent of first stored coefficient (may be -1 for j)
  int prec = 0;   // coefficients valid for exponents < prec
  std::vector<C> c;  // c[i] is the coefficient of q^(start+i)

  Series() = default;
  Series(int start_, int prec_) : start(start_), prec(prec_) {
    if (prec < start) throw SeriesPrecisionError("series: empty range");
    c.assign(size_t(prec - start), C(0));
  }

  C at(int n) const {
    if (n >= prec)
      throw SeriesPrecisionError("series: coefficient beyond precision");
    if (n < start) return C(0);
    return c[size_t(n - start)];
  }
  void set(int n, const C& v) {
    if (n < start || n >= prec) throw SeriesPrecisionError("series: set out of range");
    c[size_t(n - start)] = v;
  }
  // lowest exponent with nonzero coefficient; prec if identically 0 so far
  int valuation() const {
    for (size_t i = 0; i < c.size(); ++i)
      if (c[i] != C(0)) return start + int(i);
    return prec;
  }
  bool is_zero_to_prec() const { return valuation() == prec; }

  Series truncated(int new_prec) const {
    if (new_prec > prec) throw SeriesPrecisionError("series: cannot extend precision");
    Series r(start, new_prec);
    for (int n = start; n < new_prec; ++n) r.set(n, at(n));
    return r;
  }
};

template <class C>
Series<C> series_add(const Series<C>& a, const Series<C>& b) {
  int start = std::min(a.start, b.start);
  int prec = std::min(a.prec, b.prec);
  Series<C> r(start, prec);
  for (int n = start; n < prec; ++n) r.set(n, (n >= a.start && n < a.prec ? a.at(n) : C(0)) + (n >= b.start && n < b.prec ? b.at(n) : C(0)));
  return r;
}

template <class C>
Series<C> series_sub(const Series<C>& a, const Series<C>& b) {
  int start = std::min(a.start, b.start);
  int prec = std::min(a.prec, b.prec);
  Series<C> r(start, prec);
  for (int n = start; n < prec; ++n) r.set(n, (n >= a.start && n < a.prec ? a.at(n) : C(0)) - (n >= b.start && n < b.prec ? b.at(n) : C(0)));
  return r;
}

template <class C>
Series<C> series_neg(const Series<C>& a) {
  Series<C> r(a.start, a.prec);
  for (int n = a.start; n < a.prec; ++n) r.set(n, -a.at(n));
  return r;
}

template <class C>
Series<C> series_scale(const Series<C>& a, const C& s) {
  Series<C> r(a.start, a.prec);
  for (int n = a.start; n < a.prec; ++n) r.set(n, a.at(n) * s);
  return r;
}

// Cauchy product; the result precision is min(prec_a + start_b, prec_b + start_a).
template <class C>
Series<C> series_mul(const Series<C>& a, const Series<C>& b) {
  int start = a.start + b.start;
  int prec = std::min(a.prec + b.start, b.prec + a.start);
  Series<C> r(start, prec);
  for (int i = a.start; i < a.prec; ++i) {
    if (a.at(i) == C(0)) continue;
    int jmax = std::min(b.prec, prec - i);
    for (int j = b.start; j < jmax; ++j) {
      if (b.at(j) == C(0)) continue;
      r.set(i + j, r.at(i + j) + a.at(i) * b.at(j));
    }
  }
  return r;
}

// Inverse of a series whose lowest term is a unit times q^start.
template <class C>
Series<C> series_inv(const Series<C>& a) {
  int v = a.valuation();
  if (v == a.prec) throw std::domain_error("series_inv: zero series");
  C lead = a.at(v);
  // r has valuation -v; with len = prec - v coefficients
  int len = a.prec - v;
  Series<C> r(-v, -v + len);
  C linv = C(1) / lead;
  r.set(-v, linv);
  for (int k = 1; k < len; ++k) {
    // coefficient of q^(k - v) in r: -(1/lead) sum_{i=1..k} a_{v+i} r_{k-i-v}
    C s(0);
    for (int i = 1; i <= k; ++i) s += a.at(v + i) * r.at(k - i - v);
    r.set(k - v, -linv * s);
  }
  return r;
}

// Substitute q -> q^t; O(q^m) becomes O(q^(t m)).
template <class C>
Series<C> series_stretch(const Series<C>& a, int t) {
  Series<C> r(a.start * t, a.prec * t);
  for (int n = a.start; n < a.prec; ++n) r.set(n * t, a.at(n));
  return r;
}

// q d/dq.
template <class C>
Series<C> series_qderiv(const Series<C>& a) {
  Series<C> r(a.start, a.prec);
  for (int n = a.start; n < a.prec; ++n) r.set(n, a.at(n) * C(n));
  return r;
}

template <class C>
Series<C> series_pow(const Series<C>& a, unsigned e) {
  if (e == 0) {
    Series<C> one(0, a.prec - a.start);
    one.set(0, C(1));
    return one;
  }
  Series<C> r = a;
  for (unsigned i = 1; i < e; ++i) r = series_mul(r, a);
  return r;
}

using QSeries = Series<Rat>;
using ZSeries = Series<Int>;

inline QSeries to_qseries(const ZSeries& a) {
  QSeries r(a.start, a.prec);
  for (int n = a.start; n < a.prec; ++n) r.set(n, Rat(a.at(n)));
  return r;
}

}  // namespace qp
