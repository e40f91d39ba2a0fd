#include <algorithm>
#include <cassert>

#include "qp/modsym.hpp"
#include "qp/zfactor.hpp"

namespace qp {

namespace {

// first k primes not dividing N
std::vector<long> good_primes(long N, size_t k) {
  std::vector<long> out;
  long p = 2;
  while (out.size() < k) {
    if (N % p != 0) out.push_back(p);
    p = long(next_prime_above(uint32_t(p)));
  }
  return out;
}

QPoly qpoly_from_rat(const std::vector<Rat>& c) {
  QPoly f;
  f.c = c;
  f.normalize(RatField{});
  return f;
}

// divide out all powers of h from f; returns (multiplicity, cofactor)
std::pair<unsigned, QPoly> peel(const QPoly& f, const QPoly& h) {
  RatField Q;
  unsigned m = 0;
  QPoly rem = f;
  while (rem.deg() >= h.deg()) {
    auto [q, r] = poly_divrem(rem, h, Q);
    if (!r.is_zero()) break;
    rem = q;
    ++m;
  }
  return {m, rem};
}

struct Combo {
  std::vector<long> primes;
  std::vector<long> coeffs;
};

}  // namespace

void extend_an(NewformData& nf, size_t nmax, const NumberField& K,
               const std::map<long, std::vector<Rat>>& ap) {
  nf.an.assign(nmax - 1, K.zero());
  nf.an[0] = K.one();
  // prime powers
  for (auto& [p, apv] : ap) {
    if (size_t(p) >= nmax) continue;
    std::vector<std::vector<Rat>> pw;  // a_{p^k}
    pw.push_back(K.one());
    pw.push_back(apv);
    for (Int pk = Int(p) * p; pk < Int(nmax); pk *= p) {
      size_t r = pw.size();
      std::vector<Rat> next;
      if (nf.level % p == 0) {
        next = K.mul(pw[r - 1], apv);
      } else {
        next = K.sub(K.mul(apv, pw[r - 1]),
                     K.mul(K.from_int(Int(p)), pw[r - 2]));
      }
      pw.push_back(next);
    }
    Int pk = 1;
    for (size_t r = 0; r < pw.size(); ++r) {
      if (pk < Int(nmax) && r > 0) nf.an[pk.get_ui() - 1] = pw[r];
      pk *= p;
    }
  }
  // multiplicativity on coprime parts
  for (size_t n = 2; n < nmax; ++n) {
    size_t nn = n;
    size_t p = 2;
    while (nn % p) ++p;  // smallest prime factor
    size_t pe = 1;
    while (nn % p == 0) {
      nn /= p;
      pe *= p;
    }
    if (nn == 1) continue;  // prime power, handled above
    nf.an[n - 1] = K.mul(nf.an[pe - 1], nf.an[nn - 1]);
  }
}

std::vector<NewformData> compute_newforms(long N, size_t nmax,
                                          const std::vector<NewformData>& lower) {
  std::vector<NewformData> out;
  ManinSymbols ms(N);
  long g = ms.genus();
  if (g == 0) return out;
  RatField Q;

  // expected new dimension
  long old_dim = 0;
  for (auto& f : lower) {
    if (N % f.level) continue;
    old_dim += long(divisors(Int(N / f.level)).size()) * long(f.dim);
  }
  long new_dim = g - old_dim;
  assert(new_dim >= 0);
  if (new_dim == 0) return out;

  // cuspidal +1 eigenspace of the star involution
  auto star_c = ms.restrict_cuspidal(ms.star());
  size_t twog = ms.cuspidal_dim();
  Mat<RatField> sm1(twog, twog, Q);
  for (size_t i = 0; i < twog; ++i)
    for (size_t j = 0; j < twog; ++j) sm1[i][j] = star_c[i][j] - (i == j ? 1 : 0);
  auto plus = mat_kernel(sm1, Q);  // rows in cuspidal coordinates, dim g
  assert(long(plus.size()) == g);

  // operators restricted to the plus subspace
  auto restrict_plus = [&](const Mat<RatField>& op_c) {
    size_t k = plus.size();
    Mat<RatField> pt(twog, k, Q);
    for (size_t j = 0; j < k; ++j)
      for (size_t i = 0; i < twog; ++i) pt[i][j] = plus[j][i];
    Mat<RatField> res(k, k, Q);
    for (size_t j = 0; j < k; ++j) {
      std::vector<Rat> u(twog, Rat(0));
      for (size_t i = 0; i < twog; ++i)
        for (size_t l = 0; l < twog; ++l)
          if (op_c[i][l] != 0 && plus[j][l] != 0) u[i] += op_c[i][l] * plus[j][l];
      auto y = mat_solve(pt, u, Q);
      if (!y) throw std::logic_error("plus restriction failed");
      for (size_t i = 0; i < k; ++i) res[i][j] = (*y)[i];
    }
    return res;
  };

  auto gp = good_primes(N, 6);
  std::map<long, Mat<RatField>> tp_full, tp_plus;

  std::vector<Combo> combos = {
      {{gp[0]}, {1}},
      {{gp[0], gp[1]}, {1, 2}},
      {{gp[0], gp[1], gp[2]}, {2, 3, 1}},
      {{gp[0], gp[1], gp[2], gp[3]}, {1, 5, 2, 3}},
      {{gp[1], gp[2], gp[3], gp[4]}, {7, 1, 4, 2}},
      {{gp[0], gp[1], gp[2], gp[3], gp[4], gp[5]}, {3, 1, 6, 2, 5, 4}},
  };

  for (auto& combo : combos) {
    // build combination on the plus space and on the full space
    for (long p : combo.primes)
      if (!tp_full.count(p)) {
        auto tf = ms.hecke_matrix(p);
        tp_plus.emplace(p, restrict_plus(ms.restrict_cuspidal(tf)));
        tp_full.emplace(p, std::move(tf));
      }
    size_t gp_dim = plus.size(), d_full = ms.dim();
    Mat<RatField> t_plus(gp_dim, gp_dim, Q), t_full(d_full, d_full, Q);
    for (size_t ci = 0; ci < combo.primes.size(); ++ci) {
      auto& mp = tp_plus.at(combo.primes[ci]);
      auto& mf = tp_full.at(combo.primes[ci]);
      for (size_t i = 0; i < gp_dim; ++i)
        for (size_t j = 0; j < gp_dim; ++j)
          t_plus[i][j] += Rat(combo.coeffs[ci]) * mp[i][j];
      for (size_t i = 0; i < d_full; ++i)
        for (size_t j = 0; j < d_full; ++j)
          t_full[i][j] += Rat(combo.coeffs[ci]) * mf[i][j];
    }
    auto chi = qpoly_from_rat(charpoly(t_plus));
    auto fac = factor_q(chi);

    // old factors: minimal polynomials of the combination on lower systems
    std::vector<std::pair<QPoly, unsigned>> old_expected;  // (minpoly, sigma0 mult)
    bool combo_ok = true;
    for (auto& f : lower) {
      if (N % f.level) continue;
      QPoly h = qpoly_from_rat({f.field_poly.begin(), f.field_poly.end()});
      NumberField K(h);
      auto theta = K.zero();
      for (size_t ci = 0; ci < combo.primes.size(); ++ci)
        theta = K.add(theta, K.mul(K.from_int(Int(combo.coeffs[ci])),
                                   f.a(size_t(combo.primes[ci]))));
      auto mp = K.minpoly(theta);
      if (mp.deg() != int(f.dim)) {
        combo_ok = false;  // combination not generic on this field
        break;
      }
      old_expected.emplace_back(mp, unsigned(divisors(Int(N / f.level)).size()));
    }
    if (!combo_ok) continue;

    // verify chi = prod old^mult * prod new (new squarefree) and collect new factors
    QPoly rem = chi;
    for (auto& [mp, mult] : old_expected) {
      auto [got, cof] = peel(rem, mp);
      if (got < mult) {
        combo_ok = false;
        break;
      }
      // exactly mult copies belong to old forms; extra copies would mean a
      // new form shares the eigenvalue: reject combo
      if (got != mult) {
        combo_ok = false;
        break;
      }
      rem = cof;
    }
    if (!combo_ok) continue;
    auto new_fac = factor_q(rem);
    long deg_sum = 0;
    for (auto& [h, m] : new_fac) {
      if (m != 1) {
        combo_ok = false;
        break;
      }
      deg_sum += h.deg();
    }
    if (!combo_ok || deg_sum != new_dim) continue;

    // full-space separation and eigenvalue extraction per new factor
    auto chi_full = qpoly_from_rat(charpoly(t_full));
    std::vector<NewformData> found;
    for (auto& [h, m1] : new_fac) {
      auto [mult_full, cof] = peel(chi_full, h);
      assert(mult_full >= 2);
      if (poly_gcd(h, cof, Q).deg() != 0) {
        combo_ok = false;
        break;
      }
      NumberField K(h);
      // left eigenvector of t_full over K: kernel of (t_full^T - theta)
      Mat<NumberField> a(d_full, d_full, K);
      for (size_t i = 0; i < d_full; ++i)
        for (size_t j = 0; j < d_full; ++j) a[i][j] = K.from_rat(t_full[j][i]);
      auto theta = K.gen();
      for (size_t i = 0; i < d_full; ++i) a[i][i] = K.sub(a[i][i], theta);
      auto ker = mat_kernel(a, K);
      assert(!ker.empty());
      auto& w = ker[0];
      // pairing base vector: basis vector e_j with w_j != 0
      size_t xj = 0;
      while (xj < d_full && K.is_zero(w[xj])) ++xj;
      assert(xj < d_full);
      auto winv = K.inv(w[xj]);

      NewformData nf;
      nf.level = N;
      nf.dim = K.deg;
      for (auto& c : h.c) {
        assert(c.get_den() == 1);
        nf.field_poly.push_back(c.get_num());
      }
      // Atkin-Lehner signs for each prime power Q || N
      std::map<long, std::vector<Rat>> ap;
      bool ok = true;
      for (auto& [p, e] : factor(Int(N))) {
        long pl = p.get_si();
        long qq = ipow(p, e).get_si();
        auto wq = ms.atkin_lehner(qq);
        // lambda = w(W_Q e_xj) / w(e_xj)
        auto img = K.zero();
        for (size_t i = 0; i < d_full; ++i)
          if (wq[i][xj] != 0) img = K.add(img, K.mul(K.from_rat(wq[i][xj]), w[i]));
        auto lam = K.mul(img, winv);
        Rat lamq;
        if (K.eq(lam, K.one()))
          lamq = 1;
        else if (K.eq(lam, K.neg(K.one())))
          lamq = -1;
        else {
          ok = false;
          break;
        }
        nf.al_signs.emplace_back(qq, lamq == 1 ? 1 : -1);
        // a_p for p | N: -lambda_p when p || N, 0 when p^2 | N
        std::vector<Rat> el(K.deg, Rat(0));
        el[0] = (e == 1) ? -lamq : Rat(0);
        ap[pl] = el;
      }
      if (!ok) {
        combo_ok = false;
        break;
      }
      // a_p for good p via the dual pairing
      for (long p = 2; size_t(p) < nmax; p = long(next_prime_above(uint32_t(p)))) {
        if (N % p == 0) continue;
        auto u = ms.hecke_apply_gen(p, xj);
        auto val = K.zero();
        for (size_t i = 0; i < d_full; ++i)
          if (u[i] != 0) val = K.add(val, K.mul(K.from_rat(u[i]), w[i]));
        ap[p] = K.mul(val, winv);
      }
      extend_an(nf, nmax, K, ap);
      found.push_back(std::move(nf));
    }
    if (!combo_ok) continue;

    // labels: sort by field degree then by trace sequence for determinism
    std::sort(found.begin(), found.end(), [](const NewformData& a, const NewformData& b) {
      if (a.dim != b.dim) return a.dim < b.dim;
      return a.an < b.an;
    });
    for (size_t i = 0; i < found.size(); ++i)
      found[i].label = std::string(1, char('a' + i));
    return found;
  }
  throw std::runtime_error("compute_newforms: no separating Hecke combination found");
}

}  // namespace qp
