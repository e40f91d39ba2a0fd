#include <algorithm>

#include "qp/models.hpp"

namespace qp {

namespace plane_detail {

using PSeries = std::vector<uint64_t>;

PSeries to_pseries(const ZSeries& s, const FpField& f, int prec) {
  PSeries out(size_t(prec), 0);
  for (int n = std::max(0, s.start); n < std::min(prec, s.prec); ++n)
    out[size_t(n)] = f.from_int(s.at(n));
  return out;
}

PSeries pmul(const PSeries& a, const PSeries& b, const FpField& f) {
  PSeries out(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    uint64_t ai = a[i];
    for (size_t j = 0; j + i < a.size(); ++j)
      if (b[j]) out[i + j] = f.add(out[i + j], f.mul(ai, b[j]));
  }
  return out;
}

// mod-p monomial series cache over the three projection series
struct PCache {
  std::map<Expo, PSeries> store;
  std::vector<PSeries> base;
  FpField f;

  PCache(const std::vector<ZSeries>& xyz, const FpField& field, int prec) : f(field) {
    for (auto& s : xyz) base.push_back(to_pseries(s, f, prec));
  }
  const PSeries& get(const Expo& e) {
    auto it = store.find(e);
    if (it != store.end()) return it->second;
    for (size_t v = 0; v < e.size(); ++v)
      if (e[v] > 0) {
        Expo e2 = e;
        e2[v]--;
        auto& prev = get(e2);
        return store.emplace(e, pmul(prev, base[v], f)).first->second;
      }
    PSeries one(base[0].size(), 0);
    one[0] = 1;
    return store.emplace(e, std::move(one)).first->second;
  }
};

// exact monomial series cache
struct ZCache {
  std::map<Expo, ZSeries> store;
  std::vector<ZSeries> base;
  int prec;

  ZCache(const std::vector<ZSeries>& xyz, int prec_) : base(xyz), prec(prec_) {}
  const ZSeries& get(const Expo& e) {
    auto it = store.find(e);
    if (it != store.end()) return it->second;
    for (size_t v = 0; v < e.size(); ++v)
      if (e[v] > 0) {
        Expo e2 = e;
        e2[v]--;
        auto& prev = get(e2);
        return store.emplace(e, series_mul(prev, base[v])).first->second;
      }
    ZSeries one(0, prec);
    one.set(0, 1);
    return store.emplace(e, std::move(one)).first->second;
  }
};

size_t modp_relation_dim(PCache& pc, int d, int lo, int hi) {
  auto mons = monomials_of_degree(d, 3);
  std::vector<std::vector<uint64_t>> m(size_t(hi - lo), std::vector<uint64_t>(mons.size()));
  for (size_t c = 0; c < mons.size(); ++c) {
    auto& s = pc.get(mons[c]);
    for (int n = lo; n < hi; ++n) m[size_t(n - lo)][c] = s[size_t(n)];
  }
  Mat<FpField> fm(m.size(), mons.size(), pc.f);
  fm.a = std::move(m);
  return mons.size() - mat_rank(std::move(fm), pc.f);
}

// mod-p inverse fit: common denominator B and numerators A_m of degree
// (db, db+1) with A_m(xyz) = B(xyz) x_m as mod-p series; returns the kernel
// vector if one exists with B nonzero on the curve
struct ModpInverse {
  int db;
  std::vector<std::vector<uint64_t>> num;  // coefficients over mons(db+1), per m
  std::vector<uint64_t> den;               // coefficients over mons(db)
};

std::optional<ModpInverse> modp_inverse_fit(PCache& pc, const std::vector<PSeries>& all_coords,
                                            int db, int ilo, int ihi) {
  auto mons_num = monomials_of_degree(db + 1, 3);
  auto mons_den = monomials_of_degree(db, 3);
  size_t na = mons_num.size(), nb = mons_den.size(), g = all_coords.size();
  size_t ncols = g * na + nb, block = size_t(ihi - ilo);
  std::vector<std::vector<uint64_t>> m(block * g, std::vector<uint64_t>(ncols, 0));
  for (size_t mm = 0; mm < g; ++mm) {
    for (size_t c = 0; c < na; ++c) {
      auto& s = pc.get(mons_num[c]);
      for (int n = ilo; n < ihi; ++n) m[mm * block + size_t(n - ilo)][mm * na + c] = s[size_t(n)];
    }
    for (size_t c = 0; c < nb; ++c) {
      auto prod = pmul(pc.get(mons_den[c]), all_coords[mm], pc.f);
      for (int n = ilo; n < ihi; ++n)
        m[mm * block + size_t(n - ilo)][g * na + c] = pc.f.neg(prod[size_t(n)]);
    }
  }
  Mat<FpField> fm(m.size(), ncols, pc.f);
  fm.a = std::move(m);
  auto ker = mat_kernel(std::move(fm), pc.f);
  for (auto& kv : ker) {
    // B must be nonzero as a mod-p series on the curve
    PSeries bs(pc.base[0].size(), 0);
    bool bnz = false;
    for (size_t c = 0; c < nb; ++c) {
      if (!kv[g * na + c]) continue;
      auto& s = pc.get(mons_den[c]);
      for (size_t n = 0; n < bs.size(); ++n)
        bs[n] = pc.f.add(bs[n], pc.f.mul(kv[g * na + c], s[n]));
    }
    for (auto x : bs)
      if (x) bnz = true;
    if (!bnz) continue;
    ModpInverse inv;
    inv.db = db;
    inv.den.assign(kv.begin() + long(g * na), kv.end());
    for (size_t mm = 0; mm < g; ++mm)
      inv.num.emplace_back(kv.begin() + long(mm * na), kv.begin() + long((mm + 1) * na));
    return inv;
  }
  return std::nullopt;
}

// shared with reduce_model: fit the inverse maps modulo f.p for a model
// already reduced; returns (num polys, den poly)
std::optional<std::pair<std::vector<ZHPoly>, ZHPoly>> exact_inverse_fit(
    ZCache& zc, const std::vector<ZSeries>& coords, int db, int ilo, int ihi) {
  auto mons_num = monomials_of_degree(db + 1, 3);
  auto mons_den = monomials_of_degree(db, 3);
  size_t na = mons_num.size(), nb = mons_den.size(), g = coords.size();
  size_t ncols = g * na + nb, block = size_t(ihi - ilo);
  std::vector<std::vector<Int>> mat(block * g, std::vector<Int>(ncols, 0));
  for (size_t mm = 0; mm < g; ++mm) {
    for (size_t c = 0; c < na; ++c) {
      auto& s = zc.get(mons_num[c]);
      for (int n = ilo; n < ihi; ++n) mat[mm * block + size_t(n - ilo)][mm * na + c] = s.at(n);
    }
    for (size_t c = 0; c < nb; ++c) {
      auto prod = series_mul(zc.get(mons_den[c]), coords[mm]);
      for (int n = ilo; n < ihi; ++n)
        mat[mm * block + size_t(n - ilo)][g * na + c] = -prod.at(n);
    }
  }
  auto ker = kernel_basis_crt(mat);
  for (auto& kv : ker) {
    ZHPoly B(db, 3);
    for (size_t c = 0; c < nb; ++c)
      if (kv[g * na + c] != 0) B.add_term(mons_den[c], kv[g * na + c]);
    if (B.is_zero()) continue;
    auto bs = hpoly_eval_series(B, zc.base);
    if (bs.is_zero_to_prec()) continue;
    std::vector<ZHPoly> nums;
    for (size_t mm = 0; mm < g; ++mm) {
      ZHPoly A(db + 1, 3);
      for (size_t c = 0; c < na; ++c)
        if (kv[mm * na + c] != 0) A.add_term(mons_num[c], kv[mm * na + c]);
      nums.push_back(std::move(A));
    }
    return std::make_pair(nums, B);
  }
  return std::nullopt;
}

}  // namespace plane_detail

PlaneModel plane_model(const CanonicalModel& model, int max_attempts) {
  using namespace plane_detail;
  size_t g = model.g;
  Int psi = psi_index(Int(model.N));
  int degmax = int(2 * g - 2);
  auto sturm = [&](int d) { return int(Int(Int(d) * psi / 6).get_si()) + 4; };

  auto sign_separating = [&](size_t i, size_t j, size_t k) {
    for (auto& [q, sv] : model.al.signs)
      if (sv[i] == sv[j] && sv[j] == sv[k]) return false;
    return true;
  };
  std::vector<std::array<size_t, 3>> triples;
  for (size_t i = 0; i < g && long(triples.size()) < max_attempts; ++i)
    for (size_t j = i + 1; j < g && long(triples.size()) < max_attempts; ++j)
      for (size_t k = j + 1; k < g && long(triples.size()) < max_attempts; ++k)
        if (sign_separating(i, j, k)) triples.push_back({i, j, k});

  int prec = sturm(degmax + 1) + 2;
  if (prec > model.coords[0].prec) throw std::runtime_error("plane_model: precision shortfall");
  FpField f(1048583ULL);

  for (auto& tr : triples) {
    std::vector<ZSeries> xyz{model.coords[tr[0]], model.coords[tr[1]], model.coords[tr[2]]};
    PCache pc(xyz, f, prec);
    // minimal relation degree (mod-p emptiness below it is a sound certificate)
    ZHPoly curve;
    for (int d = 3; d <= degmax && curve.is_zero(); ++d) {
      if (modp_relation_dim(pc, d, d, sturm(d)) == 0) continue;
      auto mons = monomials_of_degree(d, 3);
      int lo = d, hi = sturm(d);
      ZCache zc(xyz, prec);
      std::vector<std::vector<Int>> mat(size_t(hi - lo), std::vector<Int>(mons.size(), 0));
      for (size_t c = 0; c < mons.size(); ++c) {
        auto& s = zc.get(mons[c]);
        for (int n = lo; n < hi; ++n) mat[size_t(n - lo)][c] = s.at(n);
      }
      auto ker = kernel_basis_crt(mat);
      if (ker.empty()) continue;  // unlucky screening prime
      curve = ZHPoly(d, 3);
      for (size_t i = 0; i < mons.size(); ++i)
        if (ker[0][i] != 0) curve.add_term(mons[i], ker[0][i]);
    }
    if (curve.is_zero()) continue;

    // birationality: a mod-p inverse with B nonzero on the curve forces the
    // projection to have degree 1
    std::vector<PSeries> all_coords;
    for (auto& c : model.coords) all_coords.push_back(to_pseries(c, f, prec));
    std::optional<ModpInverse> minv;
    for (int db = 1; db <= degmax - 1 && !minv; ++db)
      minv = modp_inverse_fit(pc, all_coords, db, db, sturm(db + 1));
    if (!minv) continue;

    PlaneModel pm;
    pm.proj = tr;
    pm.curve = curve;
    // exact inverse maps when a low-degree fit exists
    ZCache zc(xyz, prec);
    for (int db = 1; db <= std::min(4, minv->db + 1) && !pm.has_exact_inverse; ++db) {
      if (db < minv->db) continue;  // cannot exist below the mod-p degree
      auto fit = exact_inverse_fit(zc, model.coords, db, db, sturm(db + 1));
      if (fit) {
        pm.inv_num = fit->first;
        pm.inv_den = fit->second;
        pm.has_exact_inverse = true;
      }
    }
    return pm;
  }
  throw std::runtime_error("plane_model: no birational coordinate projection found");
}

std::pair<std::vector<ZHPoly>, ZHPoly> plane_inverse_mod_p(const CanonicalModel& model,
                                                           const PlaneModel& pm, long p) {
  using namespace plane_detail;
  size_t g = model.g;
  Int psi = psi_index(Int(model.N));
  auto sturm = [&](int d) { return int(Int(Int(d) * psi / 6).get_si()) + 4; };
  int degmax = int(2 * g - 2);
  int prec = sturm(degmax) + 2;
  if (prec > model.coords[0].prec) prec = model.coords[0].prec;
  FpField f{uint64_t(p)};
  std::vector<ZSeries> xyz{model.coords[pm.proj[0]], model.coords[pm.proj[1]],
                           model.coords[pm.proj[2]]};
  PCache pc(xyz, f, prec);
  std::vector<PSeries> all_coords;
  for (auto& c : model.coords) all_coords.push_back(to_pseries(c, f, prec));
  for (int db = std::max(1, pm.db_hint); db <= degmax - 1; ++db) {
    if (sturm(db + 1) + 1 > prec) break;
    auto minv = modp_inverse_fit(pc, all_coords, db, db, sturm(db + 1));
    if (!minv) continue;
    pm.db_hint = db;
    auto mons_num = monomials_of_degree(db + 1, 3);
    auto mons_den = monomials_of_degree(db, 3);
    ZHPoly den(db, 3);
    for (size_t c = 0; c < mons_den.size(); ++c)
      if (minv->den[c]) den.add_term(mons_den[c], Int(minv->den[c]));
    std::vector<ZHPoly> nums;
    for (size_t m = 0; m < g; ++m) {
      ZHPoly A(db + 1, 3);
      for (size_t c = 0; c < mons_num.size(); ++c)
        if (minv->num[m][c]) A.add_term(mons_num[c], Int(minv->num[m][c]));
      nums.push_back(std::move(A));
    }
    return {nums, den};
  }
  throw std::runtime_error("plane_inverse_mod_p: no inverse at this prime");
}

}  // namespace qp
