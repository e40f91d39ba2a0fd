#include "qp/modsym.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <stdexcept>

#include "qp/zfactor.hpp"

namespace qp {

namespace {

long lmod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

long lgcd(long a, long b) {
  a = std::abs(a);
  b = std::abs(b);
  while (b) {
    long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long linvmod(long a, long m) {
  long t = 0, newt = 1, r = m, newr = lmod(a, m);
  while (newr != 0) {
    long q = r / newr;
    long tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw std::domain_error("linvmod: not invertible");
  return lmod(t, m);
}

// Merel's matrices of determinant ell: a > b >= 0, d > c >= 0, ad - bc = ell.
const std::vector<std::array<long, 4>>& heilbronn(long ell) {
  static std::map<long, std::vector<std::array<long, 4>>> cache;
  auto it = cache.find(ell);
  if (it != cache.end()) return it->second;
  std::vector<std::array<long, 4>> out;
  for (long a = 1; a <= ell; ++a)
    for (long b = 0; b < a; ++b) {
      if (b == 0) {
        if (ell % a) continue;
        long d = ell / a;
        for (long c = 0; c < d; ++c) out.push_back({a, 0, c, d});
        continue;
      }
      // ad - bc = ell with d > c >= 0: c < ell / (a - b)
      for (long c = 0; (a - b) * c < ell; ++c) {
        long num = ell + b * c;
        if (num % a) continue;
        long d = num / a;
        if (d > c) out.push_back({a, b, c, d});
      }
    }
  return cache.emplace(ell, std::move(out)).first->second;
}

}  // namespace

long ManinSymbols::genus_formula(long N) {
  Int psi = psi_index(Int(N));
  long nu2 = 1, nu3 = 1;
  if (N % 4 == 0)
    nu2 = 0;
  else
    for (auto& [p, e] : factor(Int(N))) {
      long pl = p.get_si();
      if (pl == 2) continue;
      nu2 *= (pl % 4 == 1) ? 2 : 0;
    }
  if (N % 9 == 0)
    nu3 = 0;
  else
    for (auto& [p, e] : factor(Int(N))) {
      long pl = p.get_si();
      if (pl == 3) continue;
      nu3 *= (pl % 3 == 1) ? 2 : 0;
    }
  long nuinf = 0;
  for (auto& d : divisors(Int(N)))
    nuinf += euler_phi(gcd(d, Int(N) / d)).get_si();
  // 12 g = 12 + psi - 3 nu2 - 4 nu3 - 6 nuinf
  Int twelve_g = 12 + psi - 3 * nu2 - 4 * nu3 - 6 * nuinf;
  assert(twelve_g % 12 == 0);
  return Int(twelve_g / 12).get_si();
}

std::pair<long, long> ManinSymbols::p1_normalize(long c, long d) const {
  long N = n_;
  c = lmod(c, N);
  d = lmod(d, N);
  if (N == 1) return {0, 0};
  if (c == 0) return {0, 1};
  long g = lgcd(c, N);
  long c0 = c / g, m = N / g;
  long s = linvmod(lmod(c0, m), m);
  while (lgcd(s, N) != 1) s += m;
  long d2 = lmod(s * d % N, N);
  // minimize over units t = 1 + j m with gcd(t, N) = 1
  long best = d2;
  for (long j = 1; j < g; ++j) {
    long t = 1 + j * m;
    if (lgcd(t, N) != 1) continue;
    long cand = lmod(t % N * d2 % N, N);
    if (cand < best) best = cand;
  }
  return {g, best};
}

size_t ManinSymbols::p1_index(long c, long d) const {
  auto key = p1_normalize(c, d);
  auto it = p1_idx_.find(key);
  if (it == p1_idx_.end()) throw std::logic_error("p1_index: symbol not found");
  return it->second;
}

void ManinSymbols::add_gen(std::vector<Rat>& acc, size_t gen, int sign) const {
  const auto& row = gen_to_basis_[gen];
  for (size_t i = 0; i < dim_; ++i)
    if (row[i] != 0) acc[i] += sign > 0 ? row[i] : -row[i];
}

ManinSymbols::ManinSymbols(long N) : n_(N) {
  if (N < 1) throw std::invalid_argument("ManinSymbols: N >= 1 required");
  // enumerate P^1(Z/N)
  for (long c = 0; c < N; ++c)
    for (long d = 0; d < N; ++d) {
      if (lgcd(lgcd(c, d), N) != 1) continue;
      auto key = p1_normalize(c, d);
      if (!p1_idx_.count(key)) {
        p1_idx_[key] = p1_.size();
        p1_.push_back(key);
      }
    }
  if (N == 1) {
    p1_idx_.clear();
    p1_.assign(1, {0, 0});
    p1_idx_[{0, 0}] = 0;
  }
  size_t ngens = p1_.size();
  assert(N == 1 || Int(ngens) == psi_index(Int(N)));

  // relations: x + xS = 0 and x + xT + xT^2 = 0
  RatField Q;
  std::vector<std::vector<Rat>> rel;
  auto act = [&](size_t i, long a, long b, long c2, long d2) {
    auto [c, d] = p1_[i];
    return p1_index(c * a + d * c2, c * b + d * d2);
  };
  for (size_t i = 0; i < ngens; ++i) {
    // S = [0,-1;1,0]
    size_t j = act(i, 0, -1, 1, 0);
    std::vector<Rat> r1(ngens, Rat(0));
    r1[i] += 1;
    r1[j] += 1;
    rel.push_back(std::move(r1));
    // T = [0,-1;1,-1], T^2 = [-1,1;-1,0]
    size_t k1 = act(i, 0, -1, 1, -1);
    size_t k2 = act(i, -1, 1, -1, 0);
    std::vector<Rat> r2(ngens, Rat(0));
    r2[i] += 1;
    r2[k1] += 1;
    r2[k2] += 1;
    rel.push_back(std::move(r2));
  }
  Mat<RatField> R(rel.size(), ngens, Q);
  for (size_t i = 0; i < rel.size(); ++i) R.a[i] = rel[i];
  auto pivots = mat_rref(R, Q);
  std::vector<bool> is_piv(ngens, false);
  std::vector<size_t> pivot_row(ngens, SIZE_MAX);
  for (size_t r = 0; r < pivots.size(); ++r) {
    is_piv[pivots[r]] = true;
    pivot_row[pivots[r]] = r;
  }
  for (size_t j2 = 0; j2 < ngens; ++j2)
    if (!is_piv[j2]) basis_gens_.push_back(j2);
  dim_ = basis_gens_.size();

  gen_to_basis_.assign(ngens, std::vector<Rat>(dim_, Rat(0)));
  for (size_t b = 0; b < dim_; ++b) gen_to_basis_[basis_gens_[b]][b] = 1;
  for (size_t col = 0; col < ngens; ++col) {
    if (!is_piv[col]) continue;
    size_t r = pivot_row[col];
    for (size_t b = 0; b < dim_; ++b) {
      const Rat& coef = R[r][basis_gens_[b]];
      if (coef != 0) gen_to_basis_[col][b] = -coef;
    }
  }

  // boundary map and cuspidal subspace
  if (N == 1 || dim_ == 0) return;
  std::vector<std::vector<Rat>> bnd_cols;  // per basis vector: cusp-coefficient vector
  for (size_t b = 0; b < dim_; ++b) {
    auto [c, d] = p1_[basis_gens_[b]];
    // lift to gcd(c, d') = 1
    long dd = d;
    if (c == 0) {
      dd = 1;
    } else {
      while (lgcd(c, dd) != 1) dd += N;
    }
    // complete to SL2: a*dd - b2*c = 1
    long a, b2;
    if (c == 0) {
      a = 1;
      b2 = 0;
    } else {
      // solve a dd - b2 c = 1
      long u = 0, v = 0;
      // extended euclid on (dd, c)
      long x0 = 1, y0 = 0, x1 = 0, y1 = 1, r0 = dd, r1 = c;
      while (r1 != 0) {
        long q = r0 / r1;
        long t;
        t = r0 - q * r1; r0 = r1; r1 = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
        t = y0 - q * y1; y0 = y1; y1 = t;
      }
      // r0 = gcd = 1 = x0*dd + y0*c
      u = x0;
      v = y0;
      a = u;
      b2 = -v;
    }
    // symbol {b2/dd, a/c}: boundary [a/c] - [b2/dd]
    std::vector<Rat> col;
    size_t ci = cusp_class(a, c);
    size_t cj = cusp_class(b2, dd);
    size_t maxc = std::max(ci, cj) + 1;
    col.assign(std::max(maxc, cusps_.size()), Rat(0));
    col[ci] += 1;
    col[cj] -= 1;
    bnd_cols.push_back(std::move(col));
  }
  size_t ncusps = cusps_.size();
  Mat<RatField> B(ncusps, dim_, Q);
  for (size_t b = 0; b < dim_; ++b)
    for (size_t c = 0; c < bnd_cols[b].size(); ++c) B[c][b] = bnd_cols[b][c];
  cuspidal_ = mat_kernel(B, Q);
  long g = genus_formula(N);
  if (long(cuspidal_.size()) != 2 * g)
    throw std::logic_error("cuspidal dimension mismatch with genus formula");
  // cusp count sanity
  long nuinf = 0;
  for (auto& dd2 : divisors(Int(N)))
    nuinf += euler_phi(gcd(dd2, Int(N) / dd2)).get_si();
  if (long(ncusps) != nuinf) throw std::logic_error("cusp class count mismatch");
}

size_t ManinSymbols::cusp_class(long num, long den) const {
  long N = n_;
  // reduce to lowest terms, den >= 0
  long g = lgcd(num, den);
  if (g) {
    num /= g;
    den /= g;
  } else {
    num = 1;
    den = 0;
  }
  if (den < 0) {
    den = -den;
    num = -num;
  }
  auto equivalent = [&](long p1v, long q1, long p2v, long q2) {
    // Gamma_0(N)-equivalence of cusps p1/q1, p2/q2 in lowest terms
    long s1 = (q1 == 0) ? 1 : ((q1 == 1) ? 0 : linvmod(lmod(p1v, q1), q1));
    long s2 = (q2 == 0) ? 1 : ((q2 == 1) ? 0 : linvmod(lmod(p2v, q2), q2));
    long m = lgcd(q1 * q2, N);
    if (m == 0) m = N;
    return lmod(s1 * q2 - s2 * q1, m) == 0;
  };
  for (size_t i = 0; i < cusps_.size(); ++i)
    if (equivalent(num, den, cusps_[i].first, cusps_[i].second)) return i;
  const_cast<ManinSymbols*>(this)->cusps_.push_back({num, den});
  return cusps_.size() - 1;
}

std::vector<Rat> ManinSymbols::path_infty_to(long num, long den) const {
  std::vector<Rat> acc(dim_, Rat(0));
  if (den == 0) return acc;  // {infty, infty} = 0
  // continued fraction convergents
  long x = num, y = den;
  long p_m2 = 0, p_m1 = 1, q_m2 = 1, q_m1 = 0;
  int k = 0;
  while (true) {
    long a;  // floor(x / y), exact for negatives
    if (y > 0) {
      a = x >= 0 ? x / y : -((-x + y - 1) / y);
    } else {
      a = x <= 0 ? (-x) / (-y) : -((x - y - 1) / (-y));
    }
    long pk = a * p_m1 + p_m2;
    long qk = a * q_m1 + q_m2;
    // symbol: bottom row (q_k, (-1)^(k-1) q_{k-1})
    long sgn = (k % 2 == 0) ? -1 : 1;  // (-1)^(k-1)
    size_t idx = p1_index(qk, sgn * q_m1);
    add_gen(acc, idx, +1);
    long rem = x - a * y;
    x = y;
    y = rem;
    p_m2 = p_m1;
    p_m1 = pk;
    q_m2 = q_m1;
    q_m1 = qk;
    if (y == 0) break;
    ++k;
  }
  return acc;
}

std::vector<Rat> ManinSymbols::path_coords(const std::pair<long, long>& from,
                                           const std::pair<long, long>& to) const {
  auto a = path_infty_to(to.first, to.second);
  auto b = path_infty_to(from.first, from.second);
  for (size_t i = 0; i < dim_; ++i) a[i] -= b[i];
  return a;
}

Mat<RatField> ManinSymbols::hecke_matrix(long ell) const {
  RatField Q;
  Mat<RatField> m(dim_, dim_, Q);
  for (size_t b = 0; b < dim_; ++b) {
    auto col = hecke_apply_gen(ell, b);
    for (size_t i = 0; i < dim_; ++i) m[i][b] = col[i];
  }
  return m;
}

std::vector<Rat> ManinSymbols::hecke_apply_gen(long ell, size_t b) const {
  auto [c, d] = p1_[basis_gens_[b]];
  std::vector<Rat> acc(dim_, Rat(0));
  for (auto& h : heilbronn(ell)) {
    long cc = c * h[0] + d * h[2];
    long dd = c * h[1] + d * h[3];
    if (lgcd(lgcd(lmod(cc, n_), lmod(dd, n_)), n_) != 1) continue;  // only for ell | N
    add_gen(acc, p1_index(cc, dd), +1);
  }
  return acc;
}

std::vector<Rat> ManinSymbols::hecke_apply(long ell, const std::vector<Rat>& v) const {
  std::vector<Rat> acc(dim_, Rat(0));
  for (size_t b = 0; b < dim_; ++b) {
    if (v[b] == 0) continue;
    auto col = hecke_apply_gen(ell, b);
    for (size_t i = 0; i < dim_; ++i)
      if (col[i] != 0) acc[i] += v[b] * col[i];
  }
  return acc;
}

Mat<RatField> ManinSymbols::atkin_lehner(long q) const {
  long N = n_;
  if (N % q != 0 || lgcd(q, N / q) != 1)
    throw std::invalid_argument("atkin_lehner: Q must exactly divide N");
  // W_Q = [Q u, -v; N, Q] with u Q + v (N/Q) = 1
  long m = N / q;
  long u = linvmod(lmod(q, m) == 0 ? 1 : lmod(q, m), m);
  // solve u q + v m = 1 exactly over Z
  long v = (1 - u * q) / m;
  assert(u * q + v * m == 1);
  std::array<long, 4> W = {q * u, -v, N, q};
  RatField Q_;
  Mat<RatField> mat(dim_, dim_, Q_);
  for (size_t b = 0; b < dim_; ++b) {
    auto [c, d] = p1_[basis_gens_[b]];
    long dd = d;
    if (c == 0)
      dd = 1;
    else
      while (lgcd(c, dd) != 1) dd += N;
    long x0 = 1, y0 = 0, x1 = 0, y1 = 1, r0 = dd, r1 = c;
    while (r1 != 0) {
      long qq = r0 / r1, t;
      t = r0 - qq * r1; r0 = r1; r1 = t;
      t = x0 - qq * x1; x0 = x1; x1 = t;
      t = y0 - qq * y1; y0 = y1; y1 = t;
    }
    long a = x0, b2 = -y0;  // a dd - b2 c = 1
    // gamma = [a, b2; c, dd]; image path {W gamma 0, W gamma infty}
    std::array<long, 4> G = {a, b2, c, dd};
    std::array<long, 4> WG = {W[0] * G[0] + W[1] * G[2], W[0] * G[1] + W[1] * G[3],
                              W[2] * G[0] + W[3] * G[2], W[2] * G[1] + W[3] * G[3]};
    auto col = path_coords({WG[1], WG[3]}, {WG[0], WG[2]});
    for (size_t i = 0; i < dim_; ++i) mat[i][b] = col[i];
  }
  return mat;
}

Mat<RatField> ManinSymbols::star() const {
  RatField Q;
  Mat<RatField> m(dim_, dim_, Q);
  for (size_t b = 0; b < dim_; ++b) {
    auto [c, d] = p1_[basis_gens_[b]];
    std::vector<Rat> acc(dim_, Rat(0));
    add_gen(acc, p1_index(-c, d), +1);
    for (size_t i = 0; i < dim_; ++i) m[i][b] = acc[i];
  }
  return m;
}

Mat<RatField> ManinSymbols::restrict_cuspidal(const Mat<RatField>& op) const {
  RatField Q;
  size_t k = cuspidal_.size();
  Mat<RatField> ct(dim_, k, Q);
  for (size_t j = 0; j < k; ++j)
    for (size_t i = 0; i < dim_; ++i) ct[i][j] = cuspidal_[j][i];
  Mat<RatField> res(k, k, Q);
  for (size_t j = 0; j < k; ++j) {
    std::vector<Rat> u(dim_, Rat(0));
    for (size_t i = 0; i < dim_; ++i)
      for (size_t l = 0; l < dim_; ++l)
        if (op[i][l] != 0 && cuspidal_[j][l] != 0) u[i] += op[i][l] * cuspidal_[j][l];
    auto y = mat_solve(ct, u, Q);
    if (!y) throw std::logic_error("restrict_cuspidal: image not in subspace");
    for (size_t i = 0; i < k; ++i) res[i][j] = (*y)[i];
  }
  return res;
}

}  // namespace qp
