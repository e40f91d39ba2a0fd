#include <algorithm>
#include <cassert>

#include "qp/modforms.hpp"

namespace qp {

LevelInvariants level_invariants(long N) {
  LevelInvariants li;
  li.N = N;
  li.genus = ManinSymbols::genus_formula(N);
  li.psi = psi_index(Int(N));
  li.jmap_degree = li.psi;
  for (auto& d : divisors(Int(N))) {
    long dd = d.get_si();
    long g = Int(gcd(d, Int(N) / d)).get_si();
    li.cusp_orbits.push_back({dd, N / (dd * g), euler_phi(Int(g)).get_si()});
  }
  for (auto& [p, e] : factor(Int(N))) li.al_primepowers.push_back(ipow(p, e).get_si());
  for (auto& d : divisors(Int(N))) {
    long q = d.get_si();
    if (q > 1 && gcd(d, Int(N) / d) == 1) li.al_group.push_back(q);
  }
  return li;
}

namespace {

// exact rational coefficient of q^(t n) contributions
ZSeries integral_series_check(const std::vector<Rat>& coeffs, int start, int prec) {
  ZSeries out(start, prec);
  for (int n = start; n < prec; ++n) {
    const Rat& c = coeffs[size_t(n - start)];
    if (c.get_den() != 1) throw std::runtime_error("series not integral");
    out.set(n, c.get_num());
  }
  return out;
}

}  // namespace

CuspformBasis assemble_basis(std::vector<NewformData> orbits, long N, int nmax) {
  CuspformBasis B;
  B.N = N;
  B.nmax = nmax;
  B.orbits = std::move(orbits);
  RatField Q;

  // raw elements: one per (orbit, power-basis coordinate, stretch)
  std::vector<std::vector<Rat>> raw_series;  // coefficients for exponents 1..nmax-1
  for (size_t oi = 0; oi < B.orbits.size(); ++oi) {
    auto& f = B.orbits[oi];
    if (N % f.level) throw std::invalid_argument("assemble_basis: orbit level must divide N");
    for (auto& t : divisors(Int(N / f.level))) {
      long tt = t.get_si();
      if (size_t((nmax + tt - 1) / tt) > f.an.size() + 1)
        throw std::runtime_error("assemble_basis: precision shortfall for stretched orbit");
      for (unsigned j = 0; j < f.dim; ++j) {
        std::vector<Rat> s(size_t(nmax) - 1, Rat(0));
        for (size_t n = 1; n * tt < size_t(nmax); ++n) s[n * tt - 1] = f.an[n - 1][j];
        raw_series.push_back(std::move(s));
        B.raw.push_back({oi, j, tt});
      }
    }
  }
  size_t g = raw_series.size();
  if (long(g) != ManinSymbols::genus_formula(N))
    throw std::runtime_error("assemble_basis: dimension mismatch with genus");
  B.g = g;

  // saturate the coefficient lattice on a window of K leading columns, then
  // verify integrality on the full expansion (grow K if needed)
  size_t K = std::min(size_t(nmax) - 1, 3 * g + 10);
  while (true) {
    // clear denominators per row
    std::vector<std::vector<Int>> a(g, std::vector<Int>(K));
    std::vector<Rat> scale(g);
    for (size_t i = 0; i < g; ++i) {
      Int den = 1;
      for (size_t jc = 0; jc < size_t(nmax) - 1; ++jc) den = lcm(den, raw_series[i][jc].get_den());
      scale[i] = Rat(den);
      for (size_t jc = 0; jc < K; ++jc) {
        Rat v = raw_series[i][jc] * scale[i];
        a[i][jc] = v.get_num();
      }
    }
    auto sf = smith_normal_form(a);
    size_t rank = 0;
    for (auto& dgl : sf.diag)
      if (dgl != 0) ++rank;
    if (rank < g) {
      K = std::min(size_t(nmax) - 1, K * 2);
      if (K == size_t(nmax) - 1 && rank < g)
        throw std::runtime_error("assemble_basis: raw elements not independent");
      continue;
    }
    // saturated lattice basis on the window: rows of V^{-1}... recover as
    // combinations of the original rows: row_i(sat) = (1/d_i) * (U a)_i
    // in terms of raw rows: coefficients (1/d_i) U[i][k] * scale[k]
    Mat<RatField> change(g, g, Q);
    for (size_t i = 0; i < g; ++i)
      for (size_t k = 0; k < g; ++k)
        change[i][k] = Rat(sf.u[i][k]) * scale[k] / Rat(sf.diag[i]);
    // apply to the full series and check integrality
    bool ok = true;
    std::vector<ZSeries> full;
    for (size_t i = 0; i < g && ok; ++i) {
      std::vector<Rat> s(size_t(nmax) - 1, Rat(0));
      for (size_t k = 0; k < g; ++k) {
        if (change[i][k] == 0) continue;
        for (size_t jc = 0; jc < size_t(nmax) - 1; ++jc)
          if (raw_series[k][jc] != 0) s[jc] += change[i][k] * raw_series[k][jc];
      }
      for (auto& c : s)
        if (c.get_den() != 1) {
          ok = false;
          break;
        }
      if (ok) {
        ZSeries zs(1, nmax);
        for (size_t jc = 0; jc < size_t(nmax) - 1; ++jc) zs.set(int(jc) + 1, s[jc].get_num());
        full.push_back(std::move(zs));
      }
    }
    if (!ok) {
      if (K >= size_t(nmax) - 1)
        throw std::runtime_error("assemble_basis: saturation failed at full precision");
      K = std::min(size_t(nmax) - 1, K * 2);
      continue;
    }
    // HNF-reduce over Z (row reduction; leading coefficients positive minimal)
    // assemble integer matrix of the window again from full series
    std::vector<std::vector<Int>> hm(g, std::vector<Int>(K));
    for (size_t i = 0; i < g; ++i)
      for (size_t jc = 0; jc < K; ++jc) hm[i][jc] = full[i].at(int(jc) + 1);
    // row HNF via integer row ops, tracked so we can update `change`
    Mat<RatField> track = change;
    size_t row = 0;
    for (size_t col = 0; col < K && row < g; ++col) {
      // find nonzero entries in this column at/below `row`, reduce by gcd
      while (true) {
        size_t piv = SIZE_MAX;
        Int best = 0;
        for (size_t i = row; i < g; ++i)
          if (hm[i][col] != 0 && (best == 0 || abs(hm[i][col]) < best)) {
            best = abs(hm[i][col]);
            piv = i;
          }
        if (piv == SIZE_MAX) break;
        std::swap(hm[piv], hm[row]);
        std::swap(track.a[piv], track.a[row]);
        bool clean = true;
        for (size_t i = row + 1; i < g; ++i) {
          if (hm[i][col] == 0) continue;
          Int qt = hm[i][col] / hm[row][col];
          if (qt != 0) {
            for (size_t jc = 0; jc < K; ++jc) hm[i][jc] -= qt * hm[row][jc];
            for (size_t jc = 0; jc < g; ++jc) track[i][jc] -= Rat(qt) * track[row][jc];
          }
          if (hm[i][col] != 0) clean = false;
        }
        if (clean) break;
      }
      if (hm[row][col] == 0) continue;
      if (hm[row][col] < 0) {
        for (size_t jc = 0; jc < K; ++jc) hm[row][jc] = -hm[row][jc];
        for (size_t jc = 0; jc < g; ++jc) track[row][jc] = -track[row][jc];
      }
      // reduce the rows above
      for (size_t i = 0; i < row; ++i) {
        if (hm[i][col] == 0) continue;
        Int qt = hm[i][col];
        // floor division to make 0 <= entry < pivot
        Int fq;
        mpz_fdiv_q(fq.get_mpz_t(), qt.get_mpz_t(), hm[row][col].get_mpz_t());
        if (fq != 0) {
          for (size_t jc = 0; jc < K; ++jc) hm[i][jc] -= fq * hm[row][jc];
          for (size_t jc = 0; jc < g; ++jc) track[i][jc] -= Rat(fq) * track[row][jc];
        }
      }
      ++row;
    }
    if (row < g) throw std::runtime_error("assemble_basis: HNF rank loss");
    // rebuild full series with the tracked transformation
    B.change = track;
    B.basis.clear();
    for (size_t i = 0; i < g; ++i) {
      std::vector<Rat> s(size_t(nmax) - 1, Rat(0));
      for (size_t k = 0; k < g; ++k) {
        if (track[i][k] == 0) continue;
        for (size_t jc = 0; jc < size_t(nmax) - 1; ++jc)
          if (raw_series[k][jc] != 0) s[jc] += track[i][k] * raw_series[k][jc];
      }
      B.basis.push_back(integral_series_check(s, 1, nmax));
    }
    break;
  }

  // inverse transform (raw = change_inv * basis)
  Mat<RatField> aug(B.g, 2 * B.g, Q);
  for (size_t i = 0; i < B.g; ++i) {
    for (size_t j = 0; j < B.g; ++j) aug[i][j] = B.change[i][j];
    aug[i][B.g + i] = 1;
  }
  auto piv = mat_rref(aug, Q);
  (void)piv;
  Mat<RatField> inv(B.g, B.g, Q);
  for (size_t i = 0; i < B.g; ++i)
    for (size_t j = 0; j < B.g; ++j) inv[i][j] = aug[i][B.g + j];
  // change_inv = change^{-1}: raw = change^{-1} basis
  B.change_inv = inv;
  B.provenance.push_back("assembled from newform records");
  return B;
}

namespace {

// w_Q action on raw elements, Q = p^e || N prime power: on the ladder
// f(q^(t' p^i)) for a newform of level M with p^mu || M:
//   w_Q : f(q^(t' p^i)) -> lambda_{p^mu}(f) p^(E - 2i) f(q^(t' p^(E - i)))
// with E = e - mu. For Q | M the action is the scalar lambda_Q(f).
Mat<RatField> al_on_raw(const CuspformBasis& B, long p, long e) {
  RatField Q;
  size_t g = B.g;
  Mat<RatField> w(g, g, Q);
  long q = 1;
  for (long i = 0; i < e; ++i) q *= p;
  for (size_t r = 0; r < g; ++r) {
    auto& el = B.raw[r];
    auto& f = B.orbits[el.orbit];
    long mu = 0, mq = 1;
    while (f.level % (mq * p) == 0) {
      mq *= p;
      ++mu;
    }
    Rat lam(1);
    if (mu > 0) {
      bool found = false;
      for (auto& [qq, s] : f.al_signs)
        if (qq == mq) {
          lam = s;
          found = true;
        }
      if (!found) throw std::runtime_error("missing Atkin-Lehner eigenvalue datum");
    }
    long E = e - mu;
    // split t = t' p^i
    long i = 0, tp = el.t;
    while (tp % p == 0) {
      tp /= p;
      ++i;
    }
    if (i > E) throw std::logic_error("ladder exponent out of range");
    long tnew = tp;
    for (long k = 0; k < E - i; ++k) tnew *= p;
    // find the raw index (same orbit, same coord, stretch tnew)
    size_t target = SIZE_MAX;
    for (size_t r2 = 0; r2 < g; ++r2)
      if (B.raw[r2].orbit == el.orbit && B.raw[r2].coord == el.coord && B.raw[r2].t == tnew)
        target = r2;
    if (target == SIZE_MAX) throw std::logic_error("ladder image missing");
    Rat scalar = lam;
    long shift = E - 2 * i;
    if (shift >= 0)
      scalar *= Rat(ipow(Int(p), unsigned(shift)));
    else
      scalar /= Rat(ipow(Int(p), unsigned(-shift)));
    w[target][r] = scalar;
  }
  return w;
}

}  // namespace

Mat<RatField> atkin_lehner_matrix(const CuspformBasis& basis, long Q0) {
  auto it = basis.al_cache.find(Q0);
  if (it != basis.al_cache.end()) return it->second;
  RatField Q;
  long N = basis.N;
  if (Q0 <= 1 || N % Q0 != 0 || gcd(Int(Q0), Int(N / Q0)) != 1)
    throw std::invalid_argument("atkin_lehner_matrix: Q must exactly divide N, Q > 1");
  Mat<RatField> wraw = Mat<RatField>::identity(basis.g, Q);
  for (auto& [p, e] : factor(Int(Q0))) {
    auto step = al_on_raw(basis, p.get_si(), long(e));
    wraw = mat_mul(step, wraw, Q);
  }
  // coordinate change: coords_raw = change^T coords_basis
  auto w = mat_mul(mat_transpose(basis.change_inv, Q),
                   mat_mul(wraw, mat_transpose(basis.change, Q), Q), Q);
  // validation: involution
  auto sq = mat_mul(w, w, Q);
  auto id = Mat<RatField>::identity(basis.g, Q);
  if (sq.a != id.a) throw std::runtime_error("atkin_lehner_matrix: not an involution");
  basis.al_cache.emplace(Q0, w);
  return w;
}

Mat<RatField> hecke_matrix(const CuspformBasis& basis, long ell) {
  auto it = basis.hecke_cache.find(ell);
  if (it != basis.hecke_cache.end()) return it->second;
  RatField Q;
  if (basis.N % ell == 0) throw std::invalid_argument("hecke_matrix: ell must not divide N");
  size_t g = basis.g;
  // columns of coefficients of basis elements, n = 1..W
  size_t W = 3 * g + 10;
  if (size_t(basis.nmax) <= ell * W + 1)
    throw std::runtime_error("hecke_matrix: precision shortfall");
  Mat<RatField> coeff(W, g, Q), timg(W, g, Q);
  for (size_t j = 0; j < g; ++j)
    for (size_t n = 1; n <= W; ++n) {
      coeff[n - 1][j] = Rat(basis.basis[j].at(int(n)));
      Int v = basis.basis[j].at(int(n * ell));
      if (long(n) % ell == 0) v += Int(ell) * basis.basis[j].at(int(n / size_t(ell)));
      timg[n - 1][j] = Rat(v);
    }
  // solve coeff * M = timg column by column
  Mat<RatField> m(g, g, Q);
  for (size_t j = 0; j < g; ++j) {
    std::vector<Rat> b(W);
    for (size_t n = 0; n < W; ++n) b[n] = timg[n][j];
    auto x = mat_solve(coeff, b, Q);
    if (!x) throw std::runtime_error("hecke_matrix: inconsistent system");
    for (size_t i = 0; i < g; ++i) m[i][j] = (*x)[i];
  }
  for (size_t i = 0; i < g; ++i)
    for (size_t j = 0; j < g; ++j)
      if (m[i][j].get_den() != 1)
        throw std::runtime_error("hecke_matrix: non-integral entry");
  basis.hecke_cache.emplace(ell, m);
  return m;
}

ZSeries classical_series(const std::string& name, int prec) {
  if (prec < 1) throw std::invalid_argument("classical_series: precision >= 1 required");
  if (name == "E4") {
    ZSeries e4(0, prec);
    e4.set(0, 1);
    for (int n = 1; n < prec; ++n) {
      Int s = 0;
      for (int d = 1; d <= n; ++d)
        if (n % d == 0) s += Int(d) * d * d;
      e4.set(n, 240 * s);
    }
    return e4;
  }
  if (name == "Delta") {
    // q prod (1-q^n)^24 via Euler's pentagonal series
    ZSeries pent(0, prec);
    pent.set(0, 1);
    for (long k = 1;; ++k) {
      long e1 = k * (3 * k - 1) / 2, e2 = k * (3 * k + 1) / 2;
      if (e1 >= prec && e2 >= prec) break;
      Int sgn = (k % 2 == 0) ? 1 : -1;
      if (e1 < prec) pent.set(int(e1), sgn);
      if (e2 < prec) pent.set(int(e2), sgn);
    }
    auto p2 = series_mul(pent, pent);
    p2.prec = prec;  // sparse factors keep full precision (exact: both known to prec)
    auto p3 = series_mul(p2, pent);
    p3.prec = prec;
    auto p6 = series_mul(p3, p3);
    p6.prec = prec;
    auto p12 = series_mul(p6, p6);
    p12.prec = prec;
    auto p24 = series_mul(p12, p12);
    p24.prec = prec;
    ZSeries delta(1, prec);
    for (int n = 1; n < prec; ++n) delta.set(n, p24.at(n - 1));
    return delta;
  }
  if (name == "j") {
    // j = E4^3 / Delta
    int pad = prec + 2;
    auto e4 = classical_series("E4", pad);
    auto delta = classical_series("Delta", pad);
    auto e43 = series_mul(series_mul(e4, e4), e4);
    e43.prec = pad;
    QSeries num = to_qseries(e43);
    QSeries den = to_qseries(delta);
    auto inv = series_inv(den);  // starts at q^-1
    auto j = series_mul(num, inv);
    ZSeries out(-1, prec);
    for (int n = -1; n < prec; ++n) {
      Rat c = j.at(n);
      if (c.get_den() != 1) throw std::logic_error("j-series not integral");
      out.set(n, c.get_num());
    }
    return out;
  }
  throw std::invalid_argument("classical_series: unknown name " + name);
}

}  // namespace qp
