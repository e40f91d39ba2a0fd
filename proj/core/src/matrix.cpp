#include "qp/matrix.hpp"

#include <algorithm>

namespace qp {

std::vector<Int> primitive_integer_vector(const std::vector<Rat>& v) {
  Int den = 1;
  for (auto& x : v) den = lcm(den, x.get_den());
  std::vector<Int> w(v.size());
  Int content = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    w[i] = v[i].get_num() * (den / v[i].get_den());
    content = gcd(content, w[i]);
  }
  if (content > 1)
    for (auto& x : w) x /= content;
  // fix sign: first nonzero entry positive
  for (auto& x : w) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : w) y = -y;
    break;
  }
  return w;
}

std::vector<std::vector<Int>> kernel_basis_bareiss(const Mat<RatField>& m) {
  // Scale rows to integers, run fraction-free elimination with content
  // extraction, then back-substitute the free columns.
  size_t nr = m.nr, nc = m.nc;
  std::vector<std::vector<Int>> a(nr, std::vector<Int>(nc));
  for (size_t i = 0; i < nr; ++i) {
    Int den = 1;
    for (size_t j = 0; j < nc; ++j) den = lcm(den, m[i][j].get_den());
    for (size_t j = 0; j < nc; ++j)
      a[i][j] = m[i][j].get_num() * (den / m[i][j].get_den());
  }

  // fraction-free elimination: integer cross-multiplication row operations
  // with per-row content extraction to keep entries small
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t col = 0; col < nc && row < nr; ++col) {
    size_t piv = row;
    while (piv < nr && a[piv][col] == 0) ++piv;
    if (piv == nr) continue;
    std::swap(a[piv], a[row]);
    for (size_t i = row + 1; i < nr; ++i) {
      if (a[i][col] == 0) continue;
      Int g = gcd(a[i][col], a[row][col]);
      Int mi = a[row][col] / g, mr = a[i][col] / g;
      for (size_t j = col + 1; j < nc; ++j) a[i][j] = a[i][j] * mi - mr * a[row][j];
      a[i][col] = 0;
      Int content = 0;
      for (size_t j = col + 1; j < nc && content != 1; ++j) content = gcd(content, a[i][j]);
      if (content > 1)
        for (size_t j = col + 1; j < nc; ++j) a[i][j] /= content;
    }
    pivots.push_back(col);
    ++row;
  }

  std::vector<bool> is_piv(nc, false);
  for (auto c : pivots) is_piv[c] = true;
  std::vector<std::vector<Int>> out;
  for (size_t fc = 0; fc < nc; ++fc) {
    if (is_piv[fc]) continue;
    // back substitution over Q on the triangular system
    std::vector<Rat> x(nc, Rat(0));
    x[fc] = 1;
    for (size_t r = pivots.size(); r-- > 0;) {
      size_t pc = pivots[r];
      Rat s(0);
      for (size_t j = pc + 1; j < nc; ++j)
        if (x[j] != 0 && a[r][j] != 0) s += Rat(a[r][j]) * x[j];
      x[pc] = -s / Rat(a[r][pc]);
    }
    out.push_back(primitive_integer_vector(x));
  }
  return out;
}

namespace {

// Kernel over F_p in row-echelon style, returning (pivot columns, kernel basis).
struct FpKernel {
  std::vector<size_t> pivots;
  std::vector<std::vector<uint64_t>> basis;
};

FpKernel fp_kernel(std::vector<std::vector<uint64_t>> a, const FpField& f) {
  size_t nr = a.size(), nc = nr ? a[0].size() : 0;
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t col = 0; col < nc && row < nr; ++col) {
    size_t piv = row;
    while (piv < nr && a[piv][col] == 0) ++piv;
    if (piv == nr) continue;
    std::swap(a[piv], a[row]);
    uint64_t inv = f.inv(a[row][col]);
    for (size_t j = col; j < nc; ++j) a[row][j] = f.mul(a[row][j], inv);
    for (size_t i = 0; i < nr; ++i) {
      if (i == row || a[i][col] == 0) continue;
      uint64_t c = a[i][col];
      for (size_t j = col; j < nc; ++j) a[i][j] = f.sub(a[i][j], f.mul(c, a[row][j]));
    }
    pivots.push_back(col);
    ++row;
  }
  FpKernel out;
  out.pivots = pivots;
  std::vector<bool> is_piv(nc, false);
  for (auto c : pivots) is_piv[c] = true;
  for (size_t fc = 0; fc < nc; ++fc) {
    if (is_piv[fc]) continue;
    std::vector<uint64_t> v(nc, 0);
    v[fc] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(a[r][fc]);
    out.basis.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<std::vector<Int>> kernel_basis_crt(const std::vector<std::vector<Int>>& m) {
  size_t nr = m.size(), nc = nr ? m[0].size() : 0;
  if (nc == 0) return {};
  uint32_t pstart = 2147483629u;  // descend from below 2^31
  std::vector<size_t> ref_pivots;
  std::vector<std::vector<Int>> residues;  // CRT accumulators per kernel vector
  Int modulus = 1;
  uint32_t p = pstart;
  int stable = 0;
  size_t nprimes = 0, next_checkpoint = 1;
  std::vector<std::vector<Int>> result;

  auto verify = [&](const std::vector<std::vector<Int>>& ker) {
    for (auto& v : ker)
      for (size_t i = 0; i < nr; ++i) {
        Int s = 0;
        for (size_t j = 0; j < nc; ++j)
          if (v[j] != 0 && m[i][j] != 0) s += m[i][j] * v[j];
        if (s != 0) return false;
      }
    return true;
  };

  while (true) {
    FpField f(p);
    std::vector<std::vector<uint64_t>> a(nr, std::vector<uint64_t>(nc));
    for (size_t i = 0; i < nr; ++i)
      for (size_t j = 0; j < nc; ++j) a[i][j] = f.from_int(m[i][j]);
    auto kp = fp_kernel(std::move(a), f);
    bool ok = true;
    if (residues.empty()) {
      ref_pivots = kp.pivots;
      residues.assign(kp.basis.size(), std::vector<Int>(nc, 0));
      modulus = 1;
    } else if (kp.pivots != ref_pivots) {
      // unlucky prime (rank drop) or previous primes unlucky; restart if rank grew
      if (kp.pivots.size() > ref_pivots.size()) {
        residues.clear();
        modulus = 1;
        continue;  // same p, fresh start
      }
      ok = false;  // skip this prime
    }
    if (ok) {
      for (size_t k = 0; k < residues.size(); ++k)
        for (size_t j = 0; j < nc; ++j)
          residues[k][j] = crt(residues[k][j], modulus, Int(kp.basis[k][j]), Int(p));
      modulus *= p;
      ++nprimes;
      // reconstruction attempts at exponentially spaced checkpoints
      if (residues.empty()) return {};
      if (nprimes >= next_checkpoint) {
        next_checkpoint = nprimes * 2;
        std::vector<std::vector<Int>> ker;
        bool rec_ok = true;
        for (auto& res : residues) {
          std::vector<Rat> v(nc);
          for (size_t j = 0; j < nc && rec_ok; ++j) {
            auto r = rational_reconstruct(res[j], modulus);
            if (!r) rec_ok = false;
            else v[j] = *r;
          }
          if (!rec_ok) break;
          ker.push_back(primitive_integer_vector(v));
        }
        if (rec_ok) {
          if (!result.empty() && result == ker)
            ++stable;
          else {
            result = ker;
            stable = 0;
          }
          if (verify(result)) return result;
        }
      }
    }
    p = p > 3 ? p - 2 : pstart;
    while (!is_probable_prime(Int(p))) p -= 2;
  }
}

std::vector<Rat> charpoly(const Mat<RatField>& m) {
  size_t n = m.nr;
  // clear denominators: work with L*A, recover at the end
  Int L = 1;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) L = lcm(L, m[i][j].get_den());
  std::vector<std::vector<Int>> A(n, std::vector<Int>(n));
  Int maxabs = 1;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      A[i][j] = m[i][j].get_num() * (L / m[i][j].get_den());
      if (abs(A[i][j]) > maxabs) maxabs = abs(A[i][j]);
    }
  // coefficient bound: |c_k| <= C(n,k) (n*maxabs)^(n-k) <= 2^n (n*maxabs)^n
  Int bound = ipow(Int(2), unsigned(n)) * ipow(Int(n) * maxabs, unsigned(n)) * 2 + 2;

  Int modulus = 1;
  std::vector<Int> residue(n + 1, 0);
  uint32_t p = 2147483629u;
  while (modulus < bound) {
    while (!is_probable_prime(Int(p))) p -= 2;
    FpField f(p);
    // Hessenberg reduction then charpoly recurrence
    std::vector<std::vector<uint64_t>> h(n, std::vector<uint64_t>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) h[i][j] = f.from_int(A[i][j]);
    for (size_t col = 0; col + 2 < n; ++col) {
      size_t piv = col + 1;
      while (piv < n && h[piv][col] == 0) ++piv;
      if (piv == n) continue;
      if (piv != col + 1) {
        std::swap(h[piv], h[col + 1]);
        for (size_t i = 0; i < n; ++i) std::swap(h[i][piv], h[i][col + 1]);
      }
      uint64_t inv = f.inv(h[col + 1][col]);
      for (size_t i = col + 2; i < n; ++i) {
        if (h[i][col] == 0) continue;
        uint64_t t = f.mul(h[i][col], inv);
        for (size_t j = 0; j < n; ++j) h[i][j] = f.sub(h[i][j], f.mul(t, h[col + 1][j]));
        for (size_t j = 0; j < n; ++j) h[j][col + 1] = f.add(h[j][col + 1], f.mul(t, h[j][i]));
      }
    }
    // p_k(x) = charpoly of leading k x k block (Hessenberg recurrence)
    std::vector<std::vector<uint64_t>> pk(n + 1);
    pk[0] = {1};
    for (size_t k = 1; k <= n; ++k) {
      // p_k = (x - h[k-1][k-1]) p_{k-1} - sum_{i} h[i-1][k-1] (prod beta) p_{i-1}
      std::vector<uint64_t> cur(k + 1, 0);
      for (size_t i = 0; i < pk[k - 1].size(); ++i) {
        cur[i + 1] = f.add(cur[i + 1], pk[k - 1][i]);
        cur[i] = f.sub(cur[i], f.mul(h[k - 1][k - 1], pk[k - 1][i]));
      }
      uint64_t beta = 1;  // product of subdiagonal entries h[j][j-1], j = i..k-1
      for (size_t i = k - 1; i >= 1; --i) {
        beta = f.mul(beta, h[i][i - 1]);
        if (beta == 0) break;
        uint64_t coef = f.mul(h[i - 1][k - 1], beta);
        if (coef != 0)
          for (size_t j = 0; j < pk[i - 1].size(); ++j)
            cur[j] = f.sub(cur[j], f.mul(coef, pk[i - 1][j]));
      }
      pk[k] = std::move(cur);
    }
    for (size_t k = 0; k <= n; ++k)
      residue[k] = crt(residue[k], modulus, Int(pk[n][k]), Int(p));
    modulus *= p;
    p -= 2;
  }
  std::vector<Rat> out(n + 1);
  for (size_t k = 0; k <= n; ++k) {
    Int ck = smod(residue[k], modulus);
    // scale back: c_k(A) = c_k(LA) / L^(n-k)
    out[k] = Rat(ck) / Rat(ipow(L, unsigned(n - k)));
    out[k].canonicalize();
  }
  return out;
}

SmithForm smith_normal_form(std::vector<std::vector<Int>> d) {
  size_t nr = d.size(), nc = nr ? d[0].size() : 0;
  SmithForm sf;
  sf.u.assign(nr, std::vector<Int>(nr, 0));
  sf.v.assign(nc, std::vector<Int>(nc, 0));
  for (size_t i = 0; i < nr; ++i) sf.u[i][i] = 1;
  for (size_t i = 0; i < nc; ++i) sf.v[i][i] = 1;
  size_t n = std::min(nr, nc);

  auto swap_rows = [&](size_t i, size_t j) {
    std::swap(d[i], d[j]);
    std::swap(sf.u[i], sf.u[j]);
  };
  auto swap_cols = [&](size_t i, size_t j) {
    for (auto& row : d) std::swap(row[i], row[j]);
    for (auto& row : sf.v) std::swap(row[i], row[j]);
  };
  auto add_row = [&](size_t dst, size_t src, const Int& k) {
    for (size_t j = 0; j < nc; ++j) d[dst][j] += k * d[src][j];
    for (size_t j = 0; j < nr; ++j) sf.u[dst][j] += k * sf.u[src][j];
  };
  auto add_col = [&](size_t dst, size_t src, const Int& k) {
    for (size_t i = 0; i < nr; ++i) d[i][dst] += k * d[i][src];
    for (size_t i = 0; i < nc; ++i) sf.v[i][dst] += k * sf.v[i][src];
  };

  for (size_t s = 0; s < n; ++s) {
    while (true) {
      // locate minimal nonzero |entry| in the trailing block
      size_t bi = s, bj = s;
      Int best = 0;
      for (size_t i = s; i < nr; ++i)
        for (size_t j = s; j < nc; ++j)
          if (d[i][j] != 0 && (best == 0 || abs(d[i][j]) < best)) {
            best = abs(d[i][j]);
            bi = i;
            bj = j;
          }
      if (best == 0) break;
      if (bi != s) swap_rows(s, bi);
      if (bj != s) swap_cols(s, bj);
      bool clean = true;
      for (size_t i = s + 1; i < nr; ++i)
        if (d[i][s] != 0) {
          add_row(i, s, -(d[i][s] / d[s][s]));
          if (d[i][s] != 0) clean = false;
        }
      for (size_t j = s + 1; j < nc; ++j)
        if (d[s][j] != 0) {
          add_col(j, s, -(d[s][j] / d[s][s]));
          if (d[s][j] != 0) clean = false;
        }
      if (!clean) continue;
      // divisibility sweep
      bool divides_all = true;
      for (size_t i = s + 1; i < nr && divides_all; ++i)
        for (size_t j = s + 1; j < nc; ++j)
          if (d[i][j] % d[s][s] != 0) {
            add_row(s, i, 1);
            divides_all = false;
            break;
          }
      if (divides_all) break;
    }
    if (d[s][s] < 0) {
      for (size_t j = 0; j < nc; ++j) d[s][j] = -d[s][j];
      for (size_t j = 0; j < nr; ++j) sf.u[s][j] = -sf.u[s][j];
    }
  }
  sf.diag.resize(n);
  for (size_t i = 0; i < n; ++i) sf.diag[i] = d[i][i];
  return sf;
}

}  // namespace qp
