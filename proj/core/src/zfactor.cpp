#include "qp/zfactor.hpp"

#include <algorithm>

namespace qp {

namespace {

std::vector<Int> to_zpoly(const QPoly& f) {
  Int den = 1;
  for (auto& c : f.c) den = lcm(den, c.get_den());
  std::vector<Int> z(f.c.size());
  Int content = 0;
  for (size_t i = 0; i < f.c.size(); ++i) {
    z[i] = f.c[i].get_num() * (den / f.c[i].get_den());
    content = gcd(content, z[i]);
  }
  if (content > 1)
    for (auto& x : z) x /= content;
  if (!z.empty() && z.back() < 0)
    for (auto& x : z) x = -x;
  return z;
}

QPoly from_zpoly(const std::vector<Int>& z) {
  QPoly f;
  f.c.reserve(z.size());
  for (auto& x : z) f.c.emplace_back(x);
  f.normalize(RatField{});
  return f;
}

Int max_abs(const std::vector<Int>& z) {
  Int m = 0;
  for (auto& x : z)
    if (abs(x) > m) m = abs(x);
  return m;
}

// trial division of integer polys (exact); returns quotient if divisible
std::optional<std::vector<Int>> zdiv(const std::vector<Int>& a, const std::vector<Int>& b) {
  if (b.empty()) return std::nullopt;
  std::vector<Int> r = a, q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  while (r.size() >= b.size()) {
    if (r.back() == 0) {
      r.pop_back();
      continue;
    }
    if (r.back() % b.back() != 0) return std::nullopt;
    Int c = r.back() / b.back();
    size_t shift = r.size() - b.size();
    q[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) r[shift + i] -= c * b[i];
    while (!r.empty() && r.back() == 0) r.pop_back();
  }
  if (!r.empty()) return std::nullopt;
  return q;
}

}  // namespace

std::vector<Int> zpoly_gcd(const std::vector<Int>& a0, const std::vector<Int>& b0) {
  if (a0.empty()) return b0;
  if (b0.empty()) return a0;
  // modular gcd with degree consensus and CRT lift, verified by division
  Int lc_g = gcd(a0.back(), b0.back());
  uint32_t p = 2147483629u;
  std::vector<Int> acc;
  Int modulus = 0;
  int expected_deg = -1;
  while (true) {
    while (!is_probable_prime(Int(p))) p -= 2;
    FpField f(p);
    if (f.from_int(a0.back()) != 0 && f.from_int(b0.back()) != 0) {
      FqField F = FqField::prime_field(p);
      FqPoly ap, bp;
      for (auto& c : a0) ap.c.push_back(F.from_int(c));
      for (auto& c : b0) bp.c.push_back(F.from_int(c));
      ap.normalize(F);
      bp.normalize(F);
      auto g = poly_gcd(ap, bp, F);
      int dg = g.deg();
      if (dg == 0) return {Int(1)};
      if (expected_deg == -1 || dg < expected_deg) {
        expected_deg = dg;
        acc.assign(dg + 1, 0);
        modulus = 1;
      }
      if (dg == expected_deg) {
        // normalize so lc = lc_g mod p
        auto scale = f.mul(f.from_int(lc_g), f.inv(g.c[dg][0]));
        for (int i = 0; i <= dg; ++i)
          acc[i] = crt(acc[i], modulus, Int(f.mul(g.c[i][0], scale)), Int(p));
        modulus *= p;
        std::vector<Int> cand(dg + 1);
        for (int i = 0; i <= dg; ++i) cand[i] = smod(acc[i], modulus);
        // primitive part
        Int content = 0;
        for (auto& x : cand) content = gcd(content, x);
        if (content > 1)
          for (auto& x : cand) x /= content;
        if (!cand.empty() && cand.back() < 0)
          for (auto& x : cand) x = -x;
        if (zdiv(a0, cand) && zdiv(b0, cand)) return cand;
      }
    }
    p -= 2;
  }
}

namespace {

std::vector<Int> zp_reduce(const std::vector<Int>& a, const Int& m) {
  std::vector<Int> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = mod(a[i], m);
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

std::vector<Int> zp_mul(const std::vector<Int>& a, const std::vector<Int>& b, const Int& m) {
  if (a.empty() || b.empty()) return {};
  std::vector<Int> r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return zp_reduce(r, m);
}

std::vector<Int> zp_add(const std::vector<Int>& a, const std::vector<Int>& b, const Int& m) {
  std::vector<Int> r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return zp_reduce(r, m);
}

std::vector<Int> zp_sub(const std::vector<Int>& a, const std::vector<Int>& b, const Int& m) {
  std::vector<Int> r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return zp_reduce(r, m);
}

// divrem by monic divisor in (Z/m)[x]
std::pair<std::vector<Int>, std::vector<Int>> zp_divrem_monic(std::vector<Int> a,
                                                              const std::vector<Int>& b,
                                                              const Int& m) {
  std::vector<Int> q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, 0);
  while (a.size() >= b.size()) {
    Int c = a.back();
    size_t shift = a.size() - b.size();
    if (c != 0) {
      q[shift] = c;
      for (size_t i = 0; i < b.size(); ++i) a[shift + i] = mod(a[shift + i] - c * b[i], m);
    }
    a.pop_back();
    while (!a.empty() && a.back() == 0) a.pop_back();
    if (a.size() < b.size()) break;
  }
  return {q, a};
}

// One quadratic Hensel step: lift f = g h and s g + t h = 1 from mod m to mod m^2.
void hensel_step(const std::vector<Int>& f, std::vector<Int>& g, std::vector<Int>& h,
                 std::vector<Int>& s, std::vector<Int>& t, const Int& m) {
  Int m2 = m * m;
  auto e = zp_sub(f, zp_mul(g, h, m2), m2);
  auto [q, r] = zp_divrem_monic(zp_mul(s, e, m2), h, m2);
  auto gstar = zp_add(g, zp_add(zp_mul(t, e, m2), zp_mul(q, g, m2), m2), m2);
  auto hstar = zp_add(h, r, m2);
  auto b = zp_sub(zp_add(zp_mul(s, gstar, m2), zp_mul(t, hstar, m2), m2), {Int(1)}, m2);
  auto [c, d] = zp_divrem_monic(zp_mul(s, b, m2), hstar, m2);
  auto sstar = zp_sub(s, d, m2);
  auto tstar = zp_sub(t, zp_add(zp_mul(t, b, m2), zp_mul(c, gstar, m2), m2), m2);
  g = gstar;
  h = hstar;
  s = sstar;
  t = tstar;
}

// Lift the list of monic factors of monic squarefree f from mod p to mod p^(2^iters).
void hensel_tree(const std::vector<Int>& f, std::vector<std::vector<Int>>& factors, uint64_t p,
                 unsigned iters, size_t lo, size_t hi, const FqField& F) {
  if (hi - lo == 1) {
    factors[lo] = zp_reduce(f, ipow(Int(p), 1u << iters));
    return;
  }
  size_t mid = (lo + hi) / 2;
  // g = prod of factors [lo, mid), h = prod of [mid, hi) mod p
  FqPoly gp = FqPoly::of({F.one()}, F), hp = gp;
  for (size_t i = lo; i < mid; ++i) {
    FqPoly fi;
    for (auto& c : factors[i]) fi.c.push_back(F.from_int(c));
    fi.normalize(F);
    gp = poly_mul(gp, fi, F);
  }
  for (size_t i = mid; i < hi; ++i) {
    FqPoly fi;
    for (auto& c : factors[i]) fi.c.push_back(F.from_int(c));
    fi.normalize(F);
    hp = poly_mul(hp, fi, F);
  }
  auto [one, sp, tp] = poly_xgcd(gp, hp, F);
  std::vector<Int> g, h, s, t;
  for (auto& c : gp.c) g.push_back(Int(c[0]));
  for (auto& c : hp.c) h.push_back(Int(c[0]));
  for (auto& c : sp.c) s.push_back(Int(c[0]));
  for (auto& c : tp.c) t.push_back(Int(c[0]));
  Int m(p);
  for (unsigned i = 0; i < iters; ++i) {
    hensel_step(f, g, h, s, t, m);
    m = m * m;
  }
  // recurse with f replaced by lifted g / h
  std::vector<std::vector<Int>> gsub(factors.begin() + lo, factors.begin() + mid);
  std::vector<std::vector<Int>> hsub(factors.begin() + mid, factors.begin() + hi);
  hensel_tree(g, factors, p, iters, lo, mid, F);
  hensel_tree(h, factors, p, iters, mid, hi, F);
}

// Factor a primitive squarefree integer polynomial (deg >= 1).
std::vector<std::vector<Int>> zassenhaus(std::vector<Int> f) {
  std::vector<std::vector<Int>> out;
  if (f.size() == 2) {
    out.push_back(f);
    return out;
  }
  // make monic by the substitution y = lc * x: fm(y) = lc^(n-1) f(y/lc)
  Int lc = f.back();
  std::vector<Int> fm = f;
  {
    size_t n = f.size() - 1;
    fm[n] = 1;
    Int pw = 1;
    for (size_t i = 1; i <= n; ++i) {
      fm[n - i] = f[n - i] * pw;
      pw *= lc;
    }
  }
  unsigned n = unsigned(fm.size()) - 1;

  // pick a prime where fm stays squarefree
  uint32_t p = 127;
  FqField F;
  std::vector<FqPoly> modular;
  while (true) {
    p = next_prime_above(p);
    F = FqField::prime_field(p);
    FqPoly fp_;
    for (auto& c : fm) fp_.c.push_back(F.from_int(c));
    fp_.normalize(F);
    if (fp_.deg() != int(n)) continue;
    auto der = poly_deriv(fp_, F);
    if (poly_gcd(fp_, der, F).deg() != 0) continue;
    auto fac = fq_factor(fp_, F);
    modular.clear();
    for (auto& [g, m] : fac) modular.push_back(g);
    break;
  }
  if (modular.size() == 1) {
    out.push_back(f);
    return out;
  }

  // Mignotte-style bound for coefficients of monic factors of fm
  Int norm2 = 0;
  for (auto& c : fm) norm2 += c * c;
  Int bound = (isqrt(norm2) + 1) * ipow(Int(2), n) * 2 + 1;
  unsigned iters = 0;
  Int pk(p);
  while (pk < 2 * bound) {
    pk = pk * pk;
    ++iters;
  }

  std::vector<std::vector<Int>> lifted(modular.size());
  for (size_t i = 0; i < modular.size(); ++i) {
    lifted[i].clear();
    for (auto& c : modular[i].c) lifted[i].push_back(Int(c[0]));
  }
  hensel_tree(fm, lifted, p, iters, 0, lifted.size(), F);
  Int m = ipow(Int(p), 1u << iters);

  // subset recombination against the original (possibly non-monic) f
  std::vector<int> alive(lifted.size(), 1);
  std::vector<Int> rem = f;
  size_t alive_count = lifted.size();
  for (size_t card = 1; card <= alive_count && alive_count > 0; ++card) {
    bool found_any = true;
    while (found_any && alive_count >= card) {
      found_any = false;
      // iterate subsets of given cardinality over alive indices
      std::vector<size_t> idx;
      for (size_t i = 0; i < lifted.size(); ++i)
        if (alive[i]) idx.push_back(i);
      if (idx.size() < card) break;
      std::vector<size_t> comb(card);
      for (size_t i = 0; i < card; ++i) comb[i] = i;
      while (true) {
        // candidate in y, symmetric lift, then back-substitute y = lc*x
        std::vector<Int> cand{Int(1)};
        for (size_t i = 0; i < card; ++i) cand = zp_mul(cand, lifted[idx[comb[i]]], m);
        for (auto& c : cand) c = smod(c, m);
        {
          Int pw = 1;
          for (size_t i = 0; i < cand.size(); ++i) {
            cand[i] *= pw;
            pw *= lc;
          }
        }
        Int content = 0;
        for (auto& c : cand) content = gcd(content, c);
        if (content > 1)
          for (auto& c : cand) c /= content;
        if (!cand.empty() && cand.back() < 0)
          for (auto& c : cand) c = -c;
        auto quo = zdiv(rem, cand);
        if (quo) {
          out.push_back(cand);
          rem = *quo;
          // drop used factors
          for (size_t i = 0; i < card; ++i) alive[idx[comb[i]]] = 0;
          alive_count -= card;
          found_any = true;
          break;
        }
        // next combination
        size_t i = card;
        while (i > 0) {
          --i;
          if (comb[i] != i + idx.size() - card) {
            ++comb[i];
            for (size_t j = i + 1; j < card; ++j) comb[j] = comb[j - 1] + 1;
            break;
          }
          if (i == 0) {
            i = SIZE_MAX;
            break;
          }
        }
        if (i == SIZE_MAX) break;
      }
    }
  }
  if (rem.size() > 1) out.push_back(rem);
  return out;
}

}  // namespace

std::vector<std::pair<QPoly, unsigned>> factor_q(const QPoly& f) {
  std::vector<std::pair<QPoly, unsigned>> out;
  if (f.deg() < 1) return out;
  RatField Q;
  // squarefree decomposition by repeated gcd with derivative
  QPoly cur = f;
  unsigned mult_base = 1;
  std::vector<std::pair<QPoly, unsigned>> squarefree_parts;
  while (cur.deg() >= 1) {
    auto z = to_zpoly(cur);
    auto dz = to_zpoly(poly_deriv(cur, Q));
    auto g = zpoly_gcd(z, dz);
    if (g.size() <= 1) {
      squarefree_parts.emplace_back(cur, mult_base);
      break;
    }
    // cur = sqfree * g-part
    auto sq = zdiv(z, g);
    // factors of sq have multiplicity >= mult_base in cur... use recursive peel:
    squarefree_parts.emplace_back(from_zpoly(*sq), mult_base);
    cur = from_zpoly(g);
    mult_base += 1;
  }
  // Note: the loop above gives parts whose product over-counts; do exact
  // multiplicities by trial division at the end instead.
  std::vector<QPoly> irreducibles;
  for (auto& [part, mb] : squarefree_parts) {
    if (part.deg() < 1) continue;
    auto z = to_zpoly(part);
    for (auto& zf : zassenhaus(z)) {
      auto qf = poly_monic(from_zpoly(zf), Q);
      bool dup = false;
      for (auto& g : irreducibles)
        if (g.c == qf.c) dup = true;
      if (!dup) irreducibles.push_back(qf);
    }
  }
  for (auto& g : irreducibles) {
    unsigned mult = 0;
    QPoly rem = f;
    while (rem.deg() >= g.deg()) {
      auto [q, r] = poly_divrem(rem, g, Q);
      if (!r.is_zero()) break;
      rem = q;
      ++mult;
    }
    if (mult) out.emplace_back(g, mult);
  }
  return out;
}

std::vector<std::pair<Rat, unsigned>> roots_q(const QPoly& f) {
  std::vector<std::pair<Rat, unsigned>> out;
  for (auto& [g, m] : factor_q(f))
    if (g.deg() == 1) out.emplace_back(-g.c[0], m);
  return out;
}

namespace {

// f(x + c) by Horner.
QuadPoly quad_shift(const QuadPoly& f, const QuadElt& c, const QuadField& K) {
  QuadPoly r;
  QuadPoly xc;
  xc.c = {c, K.one()};
  for (int i = f.deg(); i >= 0; --i) {
    r = poly_mul(r, xc, K);
    if (r.c.empty()) r.c.push_back(f.c[i]);
    else r.c[0] = K.add(r.c[0], f.c[i]);
    r.normalize(K);
  }
  return r;
}

QPoly quad_norm_poly(const QuadPoly& f, const QuadField& K) {
  QuadPoly fc = f;
  for (auto& c : fc.c) c = K.conj(c);
  QuadPoly nf = poly_mul(f, fc, K);
  QPoly nq;
  for (auto& c : nf.c) {
    if (c.b != 0) throw std::logic_error("quad_norm_poly: norm not rational");
    nq.c.push_back(c.a);
  }
  nq.normalize(RatField{});
  return nq;
}

bool qpoly_squarefree(const QPoly& f) {
  RatField Q;
  return poly_gcd(f, poly_deriv(f, Q), Q).deg() == 0;
}

// Trager: irreducible factors of a squarefree f over K = Q(sqrt d).
std::vector<QuadPoly> trager_quad(const QuadPoly& f, const QuadField& K) {
  std::vector<QuadPoly> out;
  if (f.deg() == 1) {
    out.push_back(poly_monic(f, K));
    return out;
  }
  for (long s = 0;; ++s) {
    QuadElt shift = K.mul(K.from_rat(Rat(s)), K.sqrt_gen());
    QuadPoly fs = quad_shift(f, shift, K);  // roots theta_j - s sqrt(d)
    QPoly norm = quad_norm_poly(fs, K);
    if (!qpoly_squarefree(norm)) continue;
    for (auto& [g, m] : factor_q(norm)) {
      QuadPoly gk;
      for (auto& c : g.c) gk.c.push_back(K.from_rat(c));
      gk.normalize(K);
      auto h = poly_gcd(fs, gk, K);
      if (h.deg() >= 1) out.push_back(quad_shift(h, K.neg(shift), K));
    }
    return out;
  }
}

}  // namespace

std::vector<std::pair<QuadPoly, unsigned>> factor_quad(const QuadPoly& f, const QuadField& K) {
  std::vector<std::pair<QuadPoly, unsigned>> out;
  if (f.deg() < 1) return out;
  auto sqfree = poly_divrem(f, poly_gcd(f, poly_deriv(f, K), K), K).first;
  for (auto& g : trager_quad(sqfree, K)) {
    auto gm = poly_monic(g, K);
    unsigned mult = 0;
    QuadPoly rem = f;
    while (rem.deg() >= gm.deg()) {
      auto [q, r] = poly_divrem(rem, gm, K);
      if (!r.is_zero()) break;
      rem = q;
      ++mult;
    }
    if (mult) out.emplace_back(gm, mult);
  }
  return out;
}

std::vector<std::pair<QuadElt, unsigned>> roots_quad(const QuadPoly& f, const QuadField& K) {
  std::vector<std::pair<QuadElt, unsigned>> out;
  for (auto& [g, m] : factor_quad(f, K))
    if (g.deg() == 1) out.emplace_back(K.neg(g.c[0]), m);
  return out;
}

}  // namespace qp
