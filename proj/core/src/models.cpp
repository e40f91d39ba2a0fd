#include <algorithm>
#include <cassert>

#include "qp/models.hpp"

namespace qp {

namespace {

// express op restricted to the row space of S (rows independent) as a k x k
// matrix; throws if the space is not op-stable
Mat<RatField> restrict_to_rows(const Mat<RatField>& op,
                               const std::vector<std::vector<Rat>>& S) {
  RatField Q;
  size_t k = S.size(), n = op.nr;
  Mat<RatField> st(n, k, Q);
  for (size_t j = 0; j < k; ++j)
    for (size_t i = 0; i < n; ++i) st[i][j] = S[j][i];
  Mat<RatField> res(k, k, Q);
  for (size_t j = 0; j < k; ++j) {
    std::vector<Rat> u(n, Rat(0));
    for (size_t i = 0; i < n; ++i)
      for (size_t l = 0; l < n; ++l)
        if (op[i][l] != 0 && S[j][l] != 0) u[i] += op[i][l] * S[j][l];
    auto y = mat_solve(st, u, Q);
    if (!y) throw std::runtime_error("operator does not stabilize subspace");
    for (size_t i = 0; i < k; ++i) res[i][j] = (*y)[i];
  }
  return res;
}

}  // namespace

std::pair<std::vector<ZSeries>, ALAction> diagonalise(const CuspformBasis& basis) {
  RatField Q;
  long N = basis.N;
  size_t g = basis.g;
  auto li = level_invariants(N);

  struct Block {
    std::vector<std::vector<Rat>> rows;  // coordinates in basis elements
    std::vector<int> pattern;            // sign per prime power processed so far
  };
  std::vector<Block> blocks{{{}, {}}};
  blocks[0].rows.assign(g, std::vector<Rat>(g, Rat(0)));
  for (size_t i = 0; i < g; ++i) blocks[0].rows[i][i] = 1;

  for (long q : li.al_primepowers) {
    auto w = atkin_lehner_matrix(basis, q);
    std::vector<Block> next;
    for (auto& blk : blocks) {
      auto restr = restrict_to_rows(w, blk.rows);
      size_t k = blk.rows.size();
      for (int sign : {+1, -1}) {
        Mat<RatField> shifted(k, k, Q);
        for (size_t i = 0; i < k; ++i)
          for (size_t j = 0; j < k; ++j)
            shifted[i][j] = restr[i][j] - (i == j ? Rat(sign) : Rat(0));
        auto ker = mat_kernel(shifted, Q);
        if (ker.empty()) continue;
        Block nb;
        nb.pattern = blk.pattern;
        nb.pattern.push_back(sign);
        for (auto& coeffs : ker) {
          std::vector<Rat> row(g, Rat(0));
          for (size_t i = 0; i < k; ++i)
            if (coeffs[i] != 0)
              for (size_t j = 0; j < g; ++j) row[j] += coeffs[i] * blk.rows[i][j];
          nb.rows.push_back(std::move(row));
        }
        next.push_back(std::move(nb));
      }
    }
    size_t total = 0;
    for (auto& b : next) total += b.rows.size();
    if (total != g)
      throw std::runtime_error("diagonalise: operators not simultaneously diagonalisable");
    blocks = std::move(next);
  }

  // deterministic order: +1-rich patterns first
  std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
    return a.pattern < b.pattern;
  });

  ALAction al;
  al.group = li.al_group;
  al.change = Mat<RatField>(g, g, Q);
  std::vector<std::vector<int>> ppsigns;  // per diagonal element, per prime power
  size_t row = 0;
  for (auto& blk : blocks) {
    // integral, content-reduced rows: HNF over Z of the block
    std::vector<std::vector<Int>> zr;
    for (auto& r : blk.rows) zr.push_back(primitive_integer_vector(r));
    // HNF via the Smith machinery is overkill; direct row reduction
    for (size_t col = 0, rr = 0; col < g && rr < zr.size(); ++col) {
      while (true) {
        size_t piv = SIZE_MAX;
        Int best = 0;
        for (size_t i = rr; i < zr.size(); ++i)
          if (zr[i][col] != 0 && (best == 0 || abs(zr[i][col]) < best)) {
            best = abs(zr[i][col]);
            piv = i;
          }
        if (piv == SIZE_MAX) break;
        std::swap(zr[piv], zr[rr]);
        bool clean = true;
        for (size_t i = rr + 1; i < zr.size(); ++i) {
          if (zr[i][col] == 0) continue;
          Int qt = zr[i][col] / zr[rr][col];
          if (qt != 0)
            for (size_t j = 0; j < g; ++j) zr[i][j] -= qt * zr[rr][j];
          if (zr[i][col] != 0) clean = false;
        }
        if (clean) break;
      }
      if (rr < zr.size() && zr[rr][col] != 0) {
        if (zr[rr][col] < 0)
          for (size_t j = 0; j < g; ++j) zr[rr][j] = -zr[rr][j];
        ++rr;
      }
    }
    for (auto& r : zr) {
      // re-primitivize
      Int content = 0;
      for (auto& x : r) content = gcd(content, x);
      if (content > 1)
        for (auto& x : r) x /= content;
      for (size_t j = 0; j < g; ++j) al.change[row][j] = Rat(r[j]);
      ppsigns.push_back(blk.pattern);
      ++row;
    }
  }
  assert(row == g);

  // sign vectors for the whole group
  for (long q : li.al_group) {
    std::vector<int> sv(g, 1);
    for (size_t pp = 0; pp < li.al_primepowers.size(); ++pp) {
      long ppow = li.al_primepowers[pp];
      if (q % ppow == 0)
        for (size_t i = 0; i < g; ++i) sv[i] *= ppsigns[i][pp];
    }
    al.signs[q] = sv;
  }

  // diagonal coordinate expansions
  std::vector<ZSeries> coords;
  for (size_t i = 0; i < g; ++i) {
    ZSeries s(1, basis.nmax);
    for (size_t j = 0; j < g; ++j) {
      if (al.change[i][j] == 0) continue;
      Int c = al.change[i][j].get_num();
      for (int n = 1; n < basis.nmax; ++n) s.set(n, s.at(n) + c * basis.basis[j].at(n));
    }
    coords.push_back(std::move(s));
  }

  // validation: every w acts by the sign vector on the expansions' coordinates
  for (long q : li.al_group) {
    auto w = atkin_lehner_matrix(basis, q);
    for (size_t i = 0; i < g; ++i) {
      std::vector<Rat> v(g), img(g, Rat(0));
      for (size_t j = 0; j < g; ++j) v[j] = al.change[i][j];
      for (size_t a = 0; a < g; ++a)
        for (size_t b = 0; b < g; ++b)
          if (w[a][b] != 0 && v[b] != 0) img[a] += w[a][b] * v[b];
      for (size_t j = 0; j < g; ++j)
        if (img[j] != Rat(al.signs[q][i]) * v[j])
          throw std::runtime_error("diagonalise: sign action validation failed");
    }
  }
  return {coords, al};
}

namespace {

// exact kernel of the evaluation map on a set of monomials against the
// coordinate series, with rows covering exponents [lo, hi)
std::vector<std::vector<Int>> relation_kernel(const std::vector<Expo>& mons,
                                              const std::vector<ZSeries>& coords, int lo,
                                              int hi) {
  std::vector<std::vector<Int>> mat(size_t(hi - lo), std::vector<Int>(mons.size(), 0));
  for (size_t c = 0; c < mons.size(); ++c) {
    // series of the monomial
    ZSeries s(0, coords[0].prec);
    bool started = false;
    for (size_t v = 0; v < mons[c].size(); ++v)
      for (uint8_t k = 0; k < mons[c][v]; ++k) {
        s = started ? series_mul(s, coords[v]) : coords[v];
        started = true;
      }
    if (s.prec < hi) throw std::runtime_error("relation_kernel: precision shortfall");
    for (int n = lo; n < hi; ++n) mat[size_t(n - lo)][c] = s.at(n);
  }
  return kernel_basis_crt(mat);
}

ZHPoly hpoly_from_coeffs(const std::vector<Expo>& mons, const std::vector<Int>& coeffs,
                         int degree, size_t nvars) {
  ZHPoly p(degree, nvars);
  for (size_t i = 0; i < mons.size(); ++i)
    if (coeffs[i] != 0) p.add_term(mons[i], coeffs[i]);
  return p;
}

}  // namespace

CanonicalModel canonical_ideal(const CuspformBasis& basis) {
  CanonicalModel model;
  model.N = basis.N;
  model.g = basis.g;
  model.basis = basis;
  auto [coords, al] = diagonalise(basis);
  model.coords = std::move(coords);
  model.al = al;
  size_t g = model.g;
  if (g < 3) throw std::invalid_argument("canonical_ideal: genus >= 3 required");
  Int psi = psi_index(Int(model.N));

  auto sturm_prec = [&](int m) { return int(Int(Int(m) * psi / 6).get_si()) + 4; };
  auto sign_key = [&](const Expo& e) {
    std::vector<int> key;
    for (long q : model.al.group) {
      int s = 1;
      for (size_t i = 0; i < g; ++i)
        if (e[i] % 2) s *= model.al.signs[q][i];
      key.push_back(s);
    }
    return key;
  };

  // relations of degree m, split by sign class for AL-stable generators
  auto graded_relations = [&](int m) {
    auto mons = monomials_of_degree(m, g);
    std::map<std::vector<int>, std::vector<size_t>> classes;
    for (size_t i = 0; i < mons.size(); ++i) classes[sign_key(mons[i])].push_back(i);
    int hi = sturm_prec(m);
    if (hi + 1 > model.coords[0].prec)
      throw std::runtime_error("canonical_ideal: basis precision below the Sturm bound");
    std::vector<ZHPoly> gens;
    for (auto& [key, idxs] : classes) {
      std::vector<Expo> sub;
      for (auto i : idxs) sub.push_back(mons[i]);
      auto ker = relation_kernel(sub, model.coords, m, hi);
      for (auto& k : ker) gens.push_back(hpoly_from_coeffs(sub, k, m, g));
    }
    return gens;
  };

  long expect2 = long(g * (g + 1) / 2) - (3 * long(g) - 3);
  if (g == 3) {
    // plane quartic: single degree-4 generator
    auto quartics = graded_relations(4);
    if (quartics.size() != 1)
      throw std::runtime_error("canonical_ideal: genus-3 quartic count unexpected");
    model.gens = std::move(quartics);
    return model;
  }
  auto quadrics = graded_relations(2);
  if (long(quadrics.size()) > expect2)
    throw std::runtime_error("canonical_ideal: hyperelliptic curve detected");
  if (long(quadrics.size()) != expect2)
    throw std::runtime_error("canonical_ideal: quadric count mismatch");
  model.gens = quadrics;

  // do the quadrics generate in degree 3? (rank test modulo a word prime)
  long expect3 = 0;
  {
    auto mons3 = monomials_of_degree(3, g);
    expect3 = long(mons3.size()) - (5 * long(g) - 5);
    std::map<Expo, size_t> m3idx;
    for (size_t i = 0; i < mons3.size(); ++i) m3idx[mons3[i]] = i;
    FpField f(1000003);
    std::vector<std::vector<uint64_t>> rows;
    for (auto& quad : quadrics)
      for (size_t v = 0; v < g; ++v) {
        std::vector<uint64_t> rowv(mons3.size(), 0);
        for (auto& [e, c] : quad.terms) {
          Expo e3 = e;
          e3[v] = uint8_t(e3[v] + 1);
          rowv[m3idx[e3]] = f.add(rowv[m3idx[e3]], f.from_int(c));
        }
        rows.push_back(std::move(rowv));
      }
    Mat<FpField> rm(rows.size(), mons3.size(), f);
    rm.a = rows;
    long rank3 = long(mat_rank(rm, f));
    if (rank3 < expect3) {
      // genuinely short (trigonal / plane quintic / genus 4): add cubic generators
      auto cubics = graded_relations(3);
      if (long(cubics.size()) != expect3)
        throw std::runtime_error("canonical_ideal: cubic relation count mismatch");
      // keep only cubics extending the quadric multiples: select by rank growth mod p
      std::vector<std::vector<uint64_t>> sel = rows;
      for (auto& cub : cubics) {
        std::vector<uint64_t> rowv(mons3.size(), 0);
        for (auto& [e, c] : cub.terms) rowv[m3idx[e]] = f.from_int(c);
        Mat<FpField> test(sel.size() + 1, mons3.size(), f);
        test.a = sel;
        test.a.push_back(rowv);
        if (long(mat_rank(test, f)) > rank3) {
          model.gens.push_back(cub);
          sel.push_back(rowv);
          ++rank3;
        }
      }
      if (rank3 != expect3)
        throw std::runtime_error("canonical_ideal: could not complete degree-3 generators");
    }
  }
  return model;
}

// --------------------------------------------------------------------- j-map

namespace {

struct PivotTower {
  // pivot monomials and exact series of the top degree (and one below)
  std::vector<Expo> mons;
  std::vector<ZSeries> series;
};

// basis of H^0(m K) as monomials modulo the ideal, built degree by degree
// with mod-p rank screening and exact series only for chosen pivots
PivotTower pivot_basis(const CanonicalModel& model, int r) {
  size_t g = model.g;
  FpField f(1048583);
  PivotTower cur;
  cur.mons = monomials_of_degree(1, g);
  cur.series.clear();
  for (size_t i = 0; i < g; ++i) cur.series.push_back(model.coords[i]);
  for (int m = 2; m <= r; ++m) {
    size_t target = (2 * size_t(m) - 1) * (g - 1);
    int window_lo = m, window_hi = m + int(target) + 24;
    if (window_hi > model.coords[0].prec)
      window_hi = model.coords[0].prec;
    PivotTower next;
    std::vector<std::vector<uint64_t>> echelon;  // mod-p reduced rows
    std::vector<size_t> pivcol;
    auto try_add = [&](const ZSeries& s, const Expo& e) {
      if (next.mons.size() >= target) return;
      std::vector<uint64_t> rowv(size_t(window_hi - window_lo));
      for (int n = window_lo; n < window_hi; ++n)
        rowv[size_t(n - window_lo)] = f.from_int(s.at(n));
      // reduce against echelon
      for (size_t k = 0; k < echelon.size(); ++k) {
        uint64_t c = rowv[pivcol[k]];
        if (c == 0) continue;
        for (size_t j = pivcol[k]; j < rowv.size(); ++j)
          rowv[j] = f.sub(rowv[j], f.mul(c, echelon[k][j]));
      }
      size_t pc = 0;
      while (pc < rowv.size() && rowv[pc] == 0) ++pc;
      if (pc == rowv.size()) return;  // dependent (mod p)
      uint64_t inv = f.inv(rowv[pc]);
      for (size_t j = pc; j < rowv.size(); ++j) rowv[j] = f.mul(rowv[j], inv);
      echelon.push_back(rowv);
      pivcol.push_back(pc);
      next.mons.push_back(e);
      next.series.push_back(s);
    };
    // deduplicate candidate monomials x_v * prev pivot
    std::map<Expo, std::pair<size_t, size_t>> cand;  // monomial -> (v, prev index)
    for (size_t pi = 0; pi < cur.mons.size(); ++pi)
      for (size_t v = 0; v < g; ++v) {
        Expo e = cur.mons[pi];
        e[v] = uint8_t(e[v] + 1);
        cand.emplace(e, std::make_pair(v, pi));
      }
    for (auto& [e, src] : cand) {
      if (next.mons.size() >= target) break;
      auto s = series_mul(model.coords[src.first], cur.series[src.second]);
      try_add(s, e);
    }
    if (next.mons.size() != target)
      throw std::runtime_error("pivot_basis: span shortfall at degree " + std::to_string(m));
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

void fit_jmap(CanonicalModel& model) {
  size_t g = model.g;
  Int psi = psi_index(Int(model.N));
  model.jmap.d_j = psi;
  long psil = psi.get_si();
  long twog2 = 2 * (long(g) - 1);
  int r = int((2 * psil + twog2) / (2 * twog2) + 1);

  for (int attempt = 0; attempt < 4; ++attempt, ++r) {
    long m = twog2 * r + 1 + psil;
    if (m + 2 > model.coords[0].prec)
      throw std::runtime_error("fit_jmap: basis precision below the certification bound");
    auto piv = pivot_basis(model, r);
    size_t dr = piv.mons.size();
    auto j = classical_series("j", int(m) + 1);
    // unknowns: F coefficients (dr) then G coefficients (dr)
    // rows: exponents r-1 .. m-1 of F(f) - j * G(f)
    int lo = r - 1, hi = int(m);
    std::vector<std::vector<Int>> mat(size_t(hi - lo), std::vector<Int>(2 * dr, 0));
    for (size_t c = 0; c < dr; ++c) {
      for (int n = std::max(lo, piv.series[c].start); n < hi; ++n)
        mat[size_t(n - lo)][c] = piv.series[c].at(n);
      auto jg = series_mul(to_qseries(piv.series[c]), to_qseries(j));
      for (int n = lo; n < hi; ++n) {
        Rat v = jg.at(n);
        assert(v.get_den() == 1);
        mat[size_t(n - lo)][dr + c] = -v.get_num();
      }
    }
    auto ker = kernel_basis_crt(mat);
    if (ker.empty()) continue;
    model.jmap.degree_bound = Int(twog2) * r;
    model.jmap.pairs.clear();
    for (auto& kv : ker) {
      if (model.jmap.pairs.size() >= 3) break;
      JMapPair pair;
      pair.r = r;
      pair.m = m;
      pair.F = ZHPoly(r, g);
      pair.G = ZHPoly(r, g);
      for (size_t c = 0; c < dr; ++c) {
        if (kv[c] != 0) pair.F.add_term(piv.mons[c], kv[c]);
        if (kv[dr + c] != 0) pair.G.add_term(piv.mons[c], kv[dr + c]);
      }
      if (pair.F.is_zero() || pair.G.is_zero()) continue;
      // common coordinate divisor check
      bool common = false;
      for (size_t v = 0; v < g; ++v) {
        auto divides_all = [&](const ZHPoly& p) {
          for (auto& [e, cc] : p.terms)
            if (e[v] == 0) return false;
          return true;
        };
        if (divides_all(pair.F) && divides_all(pair.G)) common = true;
      }
      if (common) continue;
      model.jmap.pairs.push_back(std::move(pair));
    }
    if (!model.jmap.pairs.empty()) return;
  }
  throw std::runtime_error("fit_jmap: no solution up to the degree ceiling");
}

}  // namespace qp
