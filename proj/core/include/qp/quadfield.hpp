#pragma once
// Real and imaginary quadratic fields Q(sqrt(d)), d squarefree, d != 0, 1.

#include "qp/intops.hpp"

namespace qp {

struct QuadElt {
  long d = -1;  // field discriminant parameter (squarefree)
  Rat a{0}, b{0};    // a + b sqrt(d)

  QuadElt() = default;
  QuadElt(long d_, Rat a_, Rat b_) : d(d_), a(std::move(a_)), b(std::move(b_)) {}
  bool is_rational() const { return b == 0; }
};

// Field context for Q(sqrt(d)).
struct QuadField {
  using Elt = QuadElt;
  long d;

  explicit QuadField(long d_ = -1) : d(d_) {
    if (d == 0 || d == 1 || !is_squarefree(Int(d)))
      throw std::invalid_argument("QuadField: d must be squarefree, not 0 or 1");
  }
  Elt zero() const { return {d, Rat(0), Rat(0)}; }
  Elt one() const { return {d, Rat(1), Rat(0)}; }
  Elt from_int(const Int& n) const { return {d, Rat(n), Rat(0)}; }
  Elt from_rat(const Rat& r) const { return {d, r, Rat(0)}; }
  Elt sqrt_gen() const { return {d, Rat(0), Rat(1)}; }
  Elt add(const Elt& x, const Elt& y) const { return {d, x.a + y.a, x.b + y.b}; }
  Elt sub(const Elt& x, const Elt& y) const { return {d, x.a - y.a, x.b - y.b}; }
  Elt neg(const Elt& x) const { return {d, -x.a, -x.b}; }
  Elt mul(const Elt& x, const Elt& y) const {
    return {d, x.a * y.a + Rat(d) * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  Elt conj(const Elt& x) const { return {d, x.a, -x.b}; }
  Rat norm(const Elt& x) const { return x.a * x.a - Rat(d) * x.b * x.b; }
  Rat trace(const Elt& x) const { return 2 * x.a; }
  Elt inv(const Elt& x) const {
    Rat n = norm(x);
    if (n == 0) throw std::domain_error("QuadField: division by zero");
    return {d, x.a / n, -x.b / n};
  }
  bool is_zero(const Elt& x) const { return x.a == 0 && x.b == 0; }
  bool eq(const Elt& x, const Elt& y) const { return x.a == y.a && x.b == y.b; }
};

}  // namespace qp
