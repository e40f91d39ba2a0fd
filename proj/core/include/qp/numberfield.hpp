#pragma once
// Number fields Q[w]/(h(w)) for Hecke eigenvalue coefficient fields and
// cusp coordinate fields. Degrees stay small (<= 10).

#include "qp/poly.hpp"

namespace qp {

struct NumberField {
  using Elt = std::vector<Rat>;  // coordinates in the power basis, length = deg
  Poly<RatField> h;              // monic defining polynomial
  RatField q{};
  unsigned deg;

  explicit NumberField(Poly<RatField> h_) : h(std::move(h_)), deg(unsigned(h.deg())) {
    if (h.deg() < 1 || h.lead() != 1)
      throw std::invalid_argument("NumberField: monic defining polynomial required");
  }
  static NumberField rationals() {
    Poly<RatField> x;
    x.c = {Rat(0), Rat(1)};
    return NumberField(x);
  }

  Elt zero() const { return Elt(deg, Rat(0)); }
  Elt one() const {
    Elt e(deg, Rat(0));
    e[0] = 1;
    return e;
  }
  Elt gen() const {
    Elt e(deg, Rat(0));
    if (deg > 1) e[1] = 1; else e[0] = -h.c[0];
    return e;
  }
  Elt from_rat(const Rat& r) const {
    Elt e(deg, Rat(0));
    e[0] = r;
    return e;
  }
  Elt from_int(const Int& n) const { return from_rat(Rat(n)); }
  Elt add(const Elt& a, const Elt& b) const {
    Elt r(deg);
    for (unsigned i = 0; i < deg; ++i) r[i] = a[i] + b[i];
    return r;
  }
  Elt sub(const Elt& a, const Elt& b) const {
    Elt r(deg);
    for (unsigned i = 0; i < deg; ++i) r[i] = a[i] - b[i];
    return r;
  }
  Elt neg(const Elt& a) const {
    Elt r(deg);
    for (unsigned i = 0; i < deg; ++i) r[i] = -a[i];
    return r;
  }
  Elt mul(const Elt& a, const Elt& b) const {
    std::vector<Rat> prod(2 * deg - 1, Rat(0));
    for (unsigned i = 0; i < deg; ++i) {
      if (a[i] == 0) continue;
      for (unsigned j = 0; j < deg; ++j)
        if (b[j] != 0) prod[i + j] += a[i] * b[j];
    }
    for (int k = int(prod.size()) - 1; k >= int(deg); --k) {
      if (prod[k] == 0) continue;
      Rat c = prod[k];
      prod[k] = 0;
      for (unsigned i = 0; i < deg; ++i) prod[k - deg + i] -= c * h.c[i];
    }
    prod.resize(deg);
    return prod;
  }
  bool is_zero(const Elt& a) const {
    for (auto& x : a)
      if (x != 0) return false;
    return true;
  }
  bool eq(const Elt& a, const Elt& b) const { return a == b; }
  Elt inv(const Elt& a) const {
    if (is_zero(a)) throw std::domain_error("NumberField: division by zero");
    Poly<RatField> ap;
    ap.c = a;
    ap.normalize(q);
    auto [g, u, v] = poly_xgcd(ap, h, q);
    if (g.deg() != 0) throw std::domain_error("NumberField: zero divisor (reducible modulus)");
    auto r = poly_scale(u, Rat(1) / g.c[0], q);
    Elt e(deg, Rat(0));
    for (size_t i = 0; i < r.c.size(); ++i) e[i] = r.c[i];
    return e;
  }
  // Norm via resultant(h, a(w)).
  Rat norm(const Elt& a) const {
    Poly<RatField> ap;
    ap.c = a;
    ap.normalize(q);
    if (ap.is_zero()) return Rat(0);
    return poly_resultant(h, ap, q);
  }
  Rat trace(const Elt& a) const {
    // trace of multiplication-by-a in the power basis
    Rat t(0);
    Elt pw = one();
    for (unsigned i = 0; i < deg; ++i) {
      Elt col = mul(a, pw);
      t += col[i];
      pw = mul(pw, gen());
    }
    return t;
  }
  // Minimal polynomial of a (monic, over Q).
  Poly<RatField> minpoly(const Elt& a) const {
    // stack powers of a until linearly dependent
    std::vector<Elt> pows{one()};
    Elt cur = one();
    for (unsigned k = 1; k <= deg; ++k) {
      cur = mul(cur, a);
      pows.push_back(cur);
      // solve c_0 pows[0] + ... + c_k pows[k] = 0 with c_k = 1
      RatField f;
      std::vector<std::vector<Rat>> mm(deg, std::vector<Rat>(k + 1));
      for (unsigned i = 0; i < deg; ++i)
        for (unsigned j = 0; j <= k; ++j) mm[i][j] = pows[j][i];
      std::vector<int> pivot_of_col(k + 1, -1);
      size_t prow = 0;
      for (unsigned col = 0; col <= k && prow < deg; ++col) {
        size_t piv = prow;
        while (piv < deg && mm[piv][col] == 0) ++piv;
        if (piv == deg) continue;
        std::swap(mm[piv], mm[prow]);
        Rat inv = Rat(1) / mm[prow][col];
        for (unsigned j = col; j <= k; ++j) mm[prow][j] *= inv;
        for (size_t i = 0; i < deg; ++i) {
          if (i == prow || mm[i][col] == 0) continue;
          Rat c = mm[i][col];
          for (unsigned j = col; j <= k; ++j) mm[i][j] -= c * mm[prow][j];
        }
        pivot_of_col[col] = int(prow);
        ++prow;
      }
      if (pivot_of_col[k] == -1) {
        // w^k column is free: dependence with c_k = 1 exists
        Poly<RatField> mp;
        mp.c.assign(k + 1, Rat(0));
        mp.c[k] = 1;
        for (unsigned col = 0; col < k; ++col)
          if (pivot_of_col[col] >= 0) mp.c[col] = -mm[size_t(pivot_of_col[col])][k];
        mp.normalize(f);
        return mp;
      }
    }
    throw std::logic_error("minpoly: no dependence found");
  }
};

}  // namespace qp
