#include <algorithm>
#include <cassert>

#include <cmath>

#include "qp/ffcurve.hpp"

namespace qp {

FqPoint normalize_point(FqPoint pt, const FqField& F) {
  for (auto& c : pt) {
    if (F.is_zero(c)) continue;
    auto inv = F.inv(c);
    for (auto& x : pt) x = F.mul(x, inv);
    break;
  }
  return pt;
}

bool on_curve(const ReducedModel& rm, const FqPoint& pt, const FqField& F) {
  for (auto& gq : rm.gens)
    if (!F.is_zero(gq.eval(pt, F))) return false;
  return true;
}

FqPoint frobenius_point(const FqPoint& pt, const FqField& F) {
  FqPoint out(pt.size());
  for (size_t i = 0; i < pt.size(); ++i) out[i] = F.frobenius(pt[i]);
  return normalize_point(std::move(out), F);
}

ReducedModel reduce_model(const CanonicalModel& model, const PlaneModel& pm, long p) {
  if (p == 2 || model.N % p == 0)
    throw std::invalid_argument("reduce_model: p must be odd and prime to N");
  ReducedModel rm;
  rm.N = model.N;
  rm.p = p;
  rm.g = model.g;
  rm.model = &model;
  FpField f{uint64_t(p)};
  for (auto& q : model.gens) {
    auto r = FpMPoly::reduce(q, f);
    if (r.terms.empty()) throw std::runtime_error("reduce_model: generator vanishes mod p");
    rm.gens.push_back(std::move(r));
  }
  rm.signs = model.al.signs;
  rm.proj = pm.proj;
  rm.plane = FpMPoly::reduce(pm.curve, f);
  if (rm.plane.terms.empty())
    throw std::runtime_error("reduce_model: plane model vanishes mod p");
  bool need_fit = !pm.has_exact_inverse;
  if (!need_fit) {
    rm.inv_den = FpMPoly::reduce(pm.inv_den, f);
    for (auto& a : pm.inv_num) rm.inv_num.push_back(FpMPoly::reduce(a, f));
    if (rm.inv_den.terms.empty()) need_fit = true;
  }
  if (need_fit) {
    auto [nums, den] = plane_inverse_mod_p(model, pm, p);
    rm.inv_num.clear();
    rm.inv_den = FpMPoly::reduce(den, f);
    for (auto& a : nums) rm.inv_num.push_back(FpMPoly::reduce(a, f));
  }
  return rm;
}

const FqField& extension_field(ReducedModel& rm, unsigned k) {
  auto it = rm.fields.find(k);
  if (it != rm.fields.end()) return it->second;
  FqField F(FpField(uint64_t(rm.p)), irreducible_poly(uint64_t(rm.p), k));
  return rm.fields.emplace(k, std::move(F)).first->second;
}

namespace {

// univariate restriction of a generator under a partial assignment; nullopt
// if more than one variable is unassigned
std::optional<FqPoly> univariate_restriction(const FpMPoly& gen,
                                             const std::vector<std::optional<FqField::Elt>>& asg,
                                             size_t var, const FqField& F) {
  FqPoly out;
  out.c.assign(size_t(gen.degree) + 1, F.zero());
  for (auto& [e, c] : gen.terms) {
    auto coef = F.from_fp(c % F.fp.p);
    unsigned vdeg = 0;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (i == var) {
        vdeg = e[i];
        continue;
      }
      if (!asg[i]) return std::nullopt;
      for (uint8_t k = 0; k < e[i]; ++k) coef = F.mul(coef, *asg[i]);
    }
    out.c[vdeg] = F.add(out.c[vdeg], coef);
  }
  out.normalize(F);
  return out;
}

void extend_partial(const ReducedModel& rm, const FqField& F,
                    std::vector<std::optional<FqField::Elt>>& asg, std::vector<FqPoint>& out,
                    long& budget) {
  if (--budget < 0) throw std::runtime_error("fiber solve budget exceeded");
  size_t unassigned = SIZE_MAX, count = 0;
  for (size_t i = 0; i < rm.g; ++i)
    if (!asg[i]) {
      unassigned = i;
      ++count;
    }
  if (count == 0) {
    FqPoint pt(rm.g);
    for (size_t i = 0; i < rm.g; ++i) pt[i] = *asg[i];
    if (on_curve(rm, pt, F)) out.push_back(normalize_point(pt, F));
    return;
  }
  // look for a generator with exactly one unassigned variable
  for (auto& gen : rm.gens) {
    size_t var = SIZE_MAX;
    bool usable = true;
    for (auto& [e, c] : gen.terms)
      for (size_t i = 0; i < e.size() && usable; ++i)
        if (e[i] && !asg[i]) {
          if (var == SIZE_MAX)
            var = i;
          else if (var != i)
            usable = false;
        }
    if (!usable || var == SIZE_MAX) continue;
    auto poly = univariate_restriction(gen, asg, var, F);
    if (!poly || poly->deg() < 0) continue;  // identically zero: no information
    if (poly->deg() == 0) return;            // inconsistent
    for (auto& r : fq_roots(*poly, F)) {
      asg[var] = r;
      extend_partial(rm, F, asg, out, budget);
      asg[var] = std::nullopt;
    }
    return;
  }
  // no single-variable constraint: enumerate the first unassigned coordinate
  Int q = F.order();
  if (q > 4000) throw std::runtime_error("fiber solve: free enumeration too large");
  // iterate all field elements via base-p digits
  unsigned k = F.k;
  uint64_t p = F.fp.p;
  std::vector<uint64_t> digits(k, 0);
  while (true) {
    FqField::Elt e(digits.begin(), digits.end());
    asg[unassigned] = e;
    extend_partial(rm, F, asg, out, budget);
    asg[unassigned] = std::nullopt;
    unsigned i = 0;
    while (i < k) {
      if (++digits[i] < p) break;
      digits[i] = 0;
      ++i;
    }
    if (i == k) break;
  }
}

std::vector<FqPoint> plane_fiber(const ReducedModel& rm, const FqField& F,
                                 const std::array<FqField::Elt, 3>& uvw) {
  std::vector<std::optional<FqField::Elt>> asg(rm.g);
  asg[rm.proj[0]] = uvw[0];
  asg[rm.proj[1]] = uvw[1];
  asg[rm.proj[2]] = uvw[2];
  std::vector<FqPoint> out;
  long budget = 3000000;
  extend_partial(rm, F, asg, out, budget);
  return out;
}

bool plane_point_singular(const ReducedModel& rm, const FqField& F,
                          const std::vector<FqField::Elt>& uvw) {
  for (size_t v = 0; v < 3; ++v) {
    auto d = rm.plane.derivative(v);
    if (!F.is_zero(d.eval(uvw, F))) return false;
  }
  return true;
}

}  // namespace

const std::vector<FqPoint>& enumerate_points(ReducedModel& rm, unsigned k) {
  auto it = rm.points.find(k);
  if (it != rm.points.end()) return it->second;
  const FqField& F = extension_field(rm, k);
  std::vector<FqPoint> pts;

  bool skip_bad = k >= 3;
  auto handle_plane_point = [&](const std::vector<FqField::Elt>& uvw) {
    if (!F.is_zero(rm.plane.eval(uvw, F))) return;
    auto bval = rm.inv_den.eval(uvw, F);
    if (!F.is_zero(bval) && !plane_point_singular(rm, F, uvw)) {
      FqPoint pt(rm.g);
      auto binv = F.inv(bval);
      for (size_t m = 0; m < rm.g; ++m) pt[m] = F.mul(rm.inv_num[m].eval(uvw, F), binv);
      pt = normalize_point(std::move(pt), F);
      if (!on_curve(rm, pt, F))
        throw std::runtime_error("enumerate_points: inverse map left the curve");
      pts.push_back(std::move(pt));
    } else if (!skip_bad) {
      std::array<FqField::Elt, 3> a{uvw[0], uvw[1], uvw[2]};
      for (auto& q : plane_fiber(rm, F, a)) pts.push_back(q);
    }
  };

  // iterate the field elements once into a table
  std::vector<FqField::Elt> elems;
  {
    unsigned kk = F.k;
    uint64_t p = F.fp.p;
    std::vector<uint64_t> digits(kk, 0);
    while (true) {
      elems.emplace_back(digits.begin(), digits.end());
      unsigned i = 0;
      while (i < kk) {
        if (++digits[i] < p) break;
        digits[i] = 0;
        ++i;
      }
      if (i == kk) break;
    }
  }
  // chart w = 1: for each u, root-find the univariate in v
  int dv = 0;
  for (auto& [e, c] : rm.plane.terms) dv = std::max(dv, int(e[1]));
  for (auto& u : elems) {
    FqPoly pv;
    pv.c.assign(size_t(dv) + 1, F.zero());
    for (auto& [e, c] : rm.plane.terms) {
      auto t = F.from_fp(c % F.fp.p);
      for (uint8_t j = 0; j < e[0]; ++j) t = F.mul(t, u);
      pv.c[e[1]] = F.add(pv.c[e[1]], t);
    }
    pv.normalize(F);
    if (pv.is_zero()) {  // the whole line lies on the curve: impossible for
      throw std::runtime_error("enumerate_points: degenerate plane fiber");
    }
    for (auto& v : fq_roots(pv, F)) handle_plane_point({u, v, F.one()});
  }
  // line at infinity w = 0: univariate in u (v = 1), plus (1 : 0 : 0)
  {
    int du = 0;
    for (auto& [e, c] : rm.plane.terms)
      if (e[2] == 0) du = std::max(du, int(e[0]));
    FqPoly pu;
    pu.c.assign(size_t(du) + 1, F.zero());
    for (auto& [e, c] : rm.plane.terms) {
      if (e[2] != 0) continue;
      pu.c[e[0]] = F.add(pu.c[e[0]], F.from_fp(c % F.fp.p));
    }
    pu.normalize(F);
    if (!pu.is_zero())
      for (auto& u : fq_roots(pu, F)) handle_plane_point({u, F.one(), F.zero()});
    handle_plane_point({F.one(), F.zero(), F.zero()});
  }

  // base locus of the projection (usually empty)
  if (!skip_bad)
    for (size_t chart = 0; chart < rm.g; ++chart) {
      if (chart == rm.proj[0] || chart == rm.proj[1] || chart == rm.proj[2]) continue;
      std::vector<std::optional<FqField::Elt>> asg(rm.g);
      asg[rm.proj[0]] = F.zero();
      asg[rm.proj[1]] = F.zero();
      asg[rm.proj[2]] = F.zero();
      for (size_t c2 = 0; c2 < chart; ++c2)
        if (!asg[c2]) asg[c2] = F.zero();
      asg[chart] = F.one();
      long budget = 3000000;
      extend_partial(rm, F, asg, pts, budget);
    }

  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  // Weil bound sanity
  {
    double q = std::pow(double(rm.p), k);
    double bound = q + 1 + 2.0 * double(rm.g) * std::sqrt(q);
    if (double(pts.size()) > bound)
      throw std::runtime_error("enumerate_points: Weil bound violated");
  }
  return rm.points.emplace(k, std::move(pts)).first->second;
}

std::vector<FqPoint> enumerate_points_dfs(ReducedModel& rm, unsigned k) {
  const FqField& F = extension_field(rm, k);
  std::vector<FqPoint> pts;
  for (size_t chart = 0; chart < rm.g; ++chart) {
    std::vector<std::optional<FqField::Elt>> asg(rm.g);
    for (size_t c2 = 0; c2 < chart; ++c2) asg[c2] = F.zero();
    asg[chart] = F.one();
    long budget = 3000000;
    extend_partial(rm, F, asg, pts, budget);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

FqPoint apply_signs(const ReducedModel& rm, long q, const FqPoint& pt, const FqField& F) {
  auto& sv = rm.signs.at(q);
  FqPoint out(pt.size());
  for (size_t i = 0; i < pt.size(); ++i) out[i] = sv[i] == 1 ? pt[i] : F.neg(pt[i]);
  return normalize_point(std::move(out), F);
}

std::vector<DegreeTwoPlace> symmetric_points(ReducedModel& rm) {
  auto& p1 = enumerate_points(rm, 1);
  auto& p2 = enumerate_points(rm, 2);
  const FqField& F2 = extension_field(rm, 2);
  std::vector<DegreeTwoPlace> out;
  for (size_t i = 0; i < p1.size(); ++i)
    for (size_t j = i; j < p1.size(); ++j)
      out.push_back({i == j ? DegreeTwoPlace::Doubled : DegreeTwoPlace::Split, p1[i], p1[j]});
  // inert places: F_{p^2} points not defined over F_p, one per Frobenius orbit
  for (auto& pt : p2) {
    bool rational = true;
    for (auto& c : pt)
      if (!F2.in_prime_field(c)) rational = false;
    if (rational) continue;
    auto fr = frobenius_point(pt, F2);
    if (pt < fr)
      out.push_back({DegreeTwoPlace::Inert, pt, fr});
  }
  size_t n1 = p1.size(), n2raw = p2.size();
  // embed-count identity: #X^(2)(F_p) = (n1^2 + n2)/2 where n2 counts X(F_{p^2})
  if (2 * out.size() != n1 * n1 + n2raw)
    throw std::runtime_error("symmetric_points: orbit count identity violated");
  return out;
}

LocalJets local_jets(const ReducedModel& rm, const FqPoint& pt, const FqField& F,
                     unsigned order) {
  size_t g = rm.g;
  LocalJets lj;
  // chart: first nonzero coordinate (points are normalized so its value is 1)
  size_t chart = 0;
  while (chart < g && F.is_zero(pt[chart])) ++chart;
  assert(chart < g);
  lj.chart = chart;
  // affine values
  std::vector<FqField::Elt> aff(g);
  auto inv = F.inv(pt[chart]);
  for (size_t i = 0; i < g; ++i) aff[i] = F.mul(pt[i], inv);

  // tangent: kernel of the Jacobian in affine coordinates
  Mat<FqField> jac(rm.gens.size(), g, F);
  for (size_t r = 0; r < rm.gens.size(); ++r)
    for (size_t v = 0; v < g; ++v) jac[r][v] = rm.gens[r].derivative(v).eval(aff, F);
  // affine: direction with chart component 0
  Mat<FqField> jac_aff(rm.gens.size() + 1, g, F);
  for (size_t r = 0; r < rm.gens.size(); ++r) jac_aff.a[r] = jac.a[r];
  jac_aff[rm.gens.size()][chart] = F.one();
  auto tangent = mat_kernel(jac_aff, F);
  if (tangent.size() != 1)
    throw std::runtime_error("local_jets: point is singular on the reduction");
  auto& tau = tangent[0];
  size_t unif = 0;
  while (unif < g && F.is_zero(tau[unif])) ++unif;
  lj.uniformizer = unif;
  auto tinv = F.inv(tau[unif]);

  lj.jets.assign(g, std::vector<FqField::Elt>(order + 1, F.zero()));
  for (size_t i = 0; i < g; ++i) {
    lj.jets[i][0] = aff[i];
    if (order >= 1) lj.jets[i][1] = F.mul(tau[i], tinv);
  }
  lj.jets[chart][1] = F.zero();

  // higher orders: solve J * eps = -(coefficient of t^o in gens(current jets)).
  // Maintain per-generator evaluations incrementally: for a generator of
  // degree d, adding eps t^o to y changes the evaluation by the polar form
  // sum_m dgen/dx_m(y) eps_m t^o plus higher-degree corrections in eps.
  size_t ngens = rm.gens.size();
  // gen_eval[r][n] = coefficient of t^n in gen_r(y(t)), maintained <= order
  std::vector<std::vector<FqField::Elt>> gen_eval(ngens,
                                                  std::vector<FqField::Elt>(order + 1, F.zero()));
  auto recompute_eval = [&](size_t r, unsigned upto) {
    std::vector<FqField::Elt> total(upto + 1, F.zero());
    for (auto& [e, c] : rm.gens[r].terms) {
      std::vector<FqField::Elt> term{F.from_fp(c % F.fp.p)};
      for (size_t v = 0; v < g; ++v)
        for (uint8_t kk = 0; kk < e[v]; ++kk) {
          std::vector<FqField::Elt> nt(upto + 1, F.zero());
          for (size_t a = 0; a < term.size() && a <= upto; ++a) {
            if (F.is_zero(term[a])) continue;
            for (size_t b2 = 0; a + b2 <= upto; ++b2) {
              if (F.is_zero(lj.jets[v][b2])) continue;
              nt[a + b2] = F.add(nt[a + b2], F.mul(term[a], lj.jets[v][b2]));
            }
          }
          term = std::move(nt);
        }
      for (size_t a = 0; a < term.size() && a <= upto; ++a) total[a] = F.add(total[a], term[a]);
    }
    gen_eval[r] = std::move(total);
  };
  bool all_quadric = true;
  for (auto& gq : rm.gens) all_quadric &= (gq.degree == 2);
  // initialize evaluations with jets known to order 1 (coefficients above
  // the known jet order are provisional and corrected incrementally)
  for (size_t r = 0; r < ngens; ++r) recompute_eval(r, order);

  for (unsigned o = 2; o <= order; ++o) {
    std::vector<FqField::Elt> rhs(ngens, F.zero());
    for (size_t r = 0; r < ngens; ++r) rhs[r] = F.neg(gen_eval[r][o]);
    Mat<FqField> sys(ngens + 2, g, F);
    std::vector<FqField::Elt> b(ngens + 2, F.zero());
    for (size_t r = 0; r < ngens; ++r) {
      sys.a[r] = jac.a[r];
      b[r] = rhs[r];
    }
    sys[ngens][chart] = F.one();
    sys[ngens + 1][unif] = F.one();
    auto eps = mat_solve(sys, b, F);
    if (!eps) throw std::runtime_error("local_jets: prolongation system inconsistent");
    bool nonzero = false;
    for (size_t i = 0; i < g; ++i) {
      lj.jets[i][o] = (*eps)[i];
      if (!F.is_zero((*eps)[i])) nonzero = true;
    }
    if (!nonzero || o == order) continue;
    if (all_quadric) {
      // polar update: gen(y + eps t^o) = gen(y) + B(y, eps) t^o + Q(eps) t^(2o)
      for (size_t r = 0; r < ngens; ++r) {
        for (auto& [e, c] : rm.gens[r].terms) {
          auto cc = F.from_fp(c % F.fp.p);
          size_t va = SIZE_MAX, vb = SIZE_MAX;
          for (size_t v = 0; v < g; ++v) {
            if (e[v] == 2) va = vb = v;
            if (e[v] == 1) (va == SIZE_MAX ? va : vb) = v;
          }
          // term c x_va x_vb: delta = c (y_va eps_vb + y_vb eps_va) t^o
          //                         + c eps_va eps_vb t^(2o)
          auto upd = [&](size_t yv, size_t ev) {
            if (F.is_zero((*eps)[ev])) return;
            auto w = F.mul(cc, (*eps)[ev]);
            if (va == vb) w = F.add(w, w);
            for (size_t n = 0; n + o <= order; ++n) {
              if (F.is_zero(lj.jets[yv][n])) continue;
              gen_eval[r][n + o] = F.add(gen_eval[r][n + o], F.mul(w, lj.jets[yv][n]));
            }
          };
          if (va == vb) {
            upd(va, va);
          } else {
            upd(va, vb);
            upd(vb, va);
          }
          if (2 * o <= order) {
            auto w = F.mul(cc, F.mul((*eps)[va], (*eps)[vb]));
            gen_eval[r][2 * o] = F.add(gen_eval[r][2 * o], w);
          }
        }
        // the just-added eps t^o term is now part of y; the polar update used
        // the OLD y, which is what the expansion requires
      }
    } else {
      for (size_t r = 0; r < ngens; ++r) recompute_eval(r, order);
    }
  }
  return lj;
}

LocalExpansion local_expansion(const ReducedModel& rm, const FqPoint& pt, const FqField& F,
                               const std::vector<size_t>& diff_indices) {
  auto lj = local_jets(rm, pt, F, 1);
  LocalExpansion le;
  for (size_t i : diff_indices) {
    le.a0.push_back(lj.jets[i][0]);
    le.a1.push_back(lj.jets[i][1]);
  }
  return le;
}

}  // namespace qp
