#pragma once
// Field contexts used by the generic linear algebra and polynomial code.
//
// A Field provides: Elt, zero(), one(), add, sub, mul, neg, inv, is_zero,
// eq, and from_int. Contexts are small value types, cheap to copy.

#include <cassert>
#include <cstdint>
#include <vector>

#include "qp/intops.hpp"

namespace qp {

// ---------------------------------------------------------------- rationals
struct RatField {
  using Elt = Rat;
  Elt zero() const { return Rat(0); }
  Elt one() const { return Rat(1); }
  Elt from_int(const Int& a) const { return Rat(a); }
  Elt add(const Elt& a, const Elt& b) const { return a + b; }
  Elt sub(const Elt& a, const Elt& b) const { return a - b; }
  Elt mul(const Elt& a, const Elt& b) const { return a * b; }
  Elt neg(const Elt& a) const { return -a; }
  Elt inv(const Elt& a) const {
    if (a == 0) throw std::domain_error("division by zero");
    return 1 / a;
  }
  bool is_zero(const Elt& a) const { return a == 0; }
  bool eq(const Elt& a, const Elt& b) const { return a == b; }
};

// ---------------------------------------------------------------- prime field
// Word-sized prime fields; the sieve primes are tiny but hecke/charpoly
// work uses 31-bit primes.
struct FpField {
  using Elt = uint64_t;
  uint64_t p;
  explicit FpField(uint64_t p_ = 2) : p(p_) {}
  Elt zero() const { return 0; }
  Elt one() const { return p == 1 ? 0 : 1; }
  Elt from_int(const Int& a) const {
    return mpz_fdiv_ui(a.get_mpz_t(), p);
  }
  Elt reduce(int64_t a) const {
    int64_t r = a % int64_t(p);
    return r < 0 ? r + p : r;
  }
  Elt add(Elt a, Elt b) const {
    Elt s = a + b;
    return s >= p ? s - p : s;
  }
  Elt sub(Elt a, Elt b) const { return a >= b ? a - b : a + p - b; }
  Elt mul(Elt a, Elt b) const { return (unsigned __int128)(a)*b % p; }
  Elt neg(Elt a) const { return a == 0 ? 0 : p - a; }
  Elt pow(Elt a, uint64_t e) const {
    Elt r = one(), b = a;
    while (e) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }
  Elt inv(Elt a) const {
    if (a == 0) throw std::domain_error("Fp: division by zero");
    return pow(a, p - 2);
  }
  bool is_zero(Elt a) const { return a == 0; }
  bool eq(Elt a, Elt b) const { return a == b; }
};

// ------------------------------------------------------------- extension field
// F_{p^k} = F_p[x]/(modulus), modulus monic irreducible, coefficients
// stored low -> high, elements of fixed length k.
struct FqField {
  using Elt = std::vector<uint64_t>;
  FpField fp;
  std::vector<uint64_t> modulus;  // monic, degree k, length k+1
  unsigned k;

  FqField() : fp(2), modulus{0, 1}, k(1) {}
  FqField(FpField f, std::vector<uint64_t> mod)
      : fp(f), modulus(std::move(mod)), k(unsigned(modulus.size()) - 1) {
    assert(modulus.back() == 1);
  }
  static FqField prime_field(uint64_t p) { return FqField(FpField(p), {0, 1}); }

  Elt zero() const { return Elt(k, 0); }
  Elt one() const {
    Elt e(k, 0);
    if (k) e[0] = fp.one();
    return e;
  }
  Elt from_fp(uint64_t a) const {
    Elt e(k, 0);
    e[0] = a;
    return e;
  }
  Elt from_int(const Int& a) const { return from_fp(fp.from_int(a)); }
  Elt gen() const {
    Elt e(k, 0);
    if (k > 1) e[1] = 1; else e[0] = fp.from_int(Int(0));
    return e;
  }
  Elt add(const Elt& a, const Elt& b) const {
    Elt r(k);
    for (unsigned i = 0; i < k; ++i) r[i] = fp.add(a[i], b[i]);
    return r;
  }
  Elt sub(const Elt& a, const Elt& b) const {
    Elt r(k);
    for (unsigned i = 0; i < k; ++i) r[i] = fp.sub(a[i], b[i]);
    return r;
  }
  Elt neg(const Elt& a) const {
    Elt r(k);
    for (unsigned i = 0; i < k; ++i) r[i] = fp.neg(a[i]);
    return r;
  }
  Elt mul(const Elt& a, const Elt& b) const {
    std::vector<uint64_t> prod(2 * k - 1, 0);
    for (unsigned i = 0; i < k; ++i) {
      if (!a[i]) continue;
      for (unsigned j = 0; j < k; ++j)
        if (b[j]) prod[i + j] = fp.add(prod[i + j], fp.mul(a[i], b[j]));
    }
    // reduce by monic modulus
    for (int d = int(prod.size()) - 1; d >= int(k); --d) {
      uint64_t c = prod[d];
      if (!c) continue;
      prod[d] = 0;
      for (unsigned i = 0; i < k; ++i)
        prod[d - k + i] = fp.sub(prod[d - k + i], fp.mul(c, modulus[i]));
    }
    prod.resize(k);
    return prod;
  }
  Elt pow(Elt a, Int e) const {
    Elt r = one();
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  Elt inv(const Elt& a) const {
    if (is_zero(a)) throw std::domain_error("Fq: division by zero");
    Int q = order();
    return pow(a, q - 2);
  }
  Elt frobenius(const Elt& a) const { return pow(a, Int(fp.p)); }
  bool is_zero(const Elt& a) const {
    for (auto c : a)
      if (c) return false;
    return true;
  }
  bool eq(const Elt& a, const Elt& b) const { return a == b; }
  Int order() const { return ipow(Int(fp.p), k); }
  bool in_prime_field(const Elt& a) const {
    for (unsigned i = 1; i < k; ++i)
      if (a[i]) return false;
    return true;
  }
};

}  // namespace qp
