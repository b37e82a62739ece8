#include "equimod/sullivan.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "equimod/subspace.hpp"

namespace equimod {

namespace {

std::string deg_str(int k) { return std::to_string(k); }

Subspace full_space(int dim) { return span_of(Mat::identity(dim)); }

// Multiplicative extension of a map over one extension stage: f_prev is
// defined on the stage's base algebra, simgs are target images of the
// stage's generators in declaration order.
std::vector<Mat> extend_over_stage(const ExtendedCDGA& e,
                                   const TruncatedCDGA& tgt,
                                   const std::vector<Mat>& f_prev,
                                   const std::vector<Mat>& simgs) {
  const FreeBasis& gb = e.genb;
  const int cap = e.alg.cap;

  // Images of the stage-generator monomials, by splitting off the variable
  // at the first occupied position (which precedes every other factor, so
  // the Koszul sign is +1).
  std::vector<std::vector<Mat>> mono_img(cap + 1);
  mono_img[0] = {tgt.unit_vec()};
  for (int d = 1; d <= cap; ++d) {
    mono_img[d].resize(gb.monos[d].size());
    for (int idx = 0; idx < static_cast<int>(gb.monos[d].size()); ++idx) {
      const Expo& ex = gb.monos[d][idx];
      int p = 0;
      while (ex[p] == 0) ++p;
      Expo rest = ex;
      rest[p] -= 1;
      const int gdeg = gb.pos_degree[p];
      const int rdeg = d - gdeg;
      const int ridx = gb.index_of(rdeg, rest);
      mono_img[d][idx] =
          tgt.mul(gdeg, simgs[gb.order[p]], rdeg, mono_img[rdeg][ridx]);
    }
  }

  std::vector<Mat> out(cap + 1);
  for (int k = 0; k <= cap; ++k) {
    Mat fk(tgt.dim(k), e.alg.dims[k]);
    for (int md = 0; md <= k; ++md) {
      const int nmono = gb.dim(md);
      if (nmono == 0) continue;
      const int bd = k - md;
      const int nbase = e.base_dims[bd];
      for (int mi = 0; mi < nmono; ++mi)
        for (int bi = 0; bi < nbase; ++bi) {
          Mat v = tgt.mul(bd, f_prev[bd].col(bi), md, mono_img[md][mi]);
          const int cidx = e.pair_index(k, md, mi, bi);
          for (int r = 0; r < v.rows; ++r) fk.at(r, cidx) = v.at(r, 0);
        }
    }
    out[k] = std::move(fk);
  }
  return out;
}

std::vector<Mat> unit_map(int cap, const TruncatedCDGA& tgt) {
  std::vector<Mat> f(cap + 1);
  f[0] = tgt.unit_vec();
  for (int k = 1; k <= cap; ++k) f[k] = Mat(tgt.dim(k), 0);
  return f;
}

bool iso_square(const Mat& m) { return m.rows == m.cols && rank(m) == m.rows; }

}  // namespace

std::vector<int> SullivanAlgebra::gens_in_degree(int k) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(gens.size()); ++i)
    if (gens[i].degree == k) out.push_back(i);
  return out;
}

int SullivanAlgebra::gen_by_name(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(gens.size()); ++i)
    if (gens[i].name == name) return i;
  return -1;
}

SullivanAlgebra free_sullivan(int cap) {
  if (cap < 0) throw std::invalid_argument("free_sullivan: negative cap");
  SullivanAlgebra m;
  m.cap = cap;
  m.alg = TruncatedCDGA::rationals(cap);
  return m;
}

void add_stage(SullivanAlgebra& m, const std::vector<GenSpec>& new_gens,
               const std::vector<Mat>& dgen_base) {
  if (new_gens.size() != dgen_base.size())
    throw std::invalid_argument("add_stage: one differential per generator");
  std::set<std::string> names;
  for (const SullivanGen& g : m.gens) names.insert(g.name);
  for (const GenSpec& g : new_gens) {
    if (g.degree < 2)
      throw std::invalid_argument("add_stage: generator degree below 2");
    if (g.degree > m.cap)
      throw std::invalid_argument("add_stage: generator degree above cap");
    if (!names.insert(g.name).second)
      throw std::invalid_argument("add_stage: duplicate generator name " +
                                  g.name);
  }
  for (size_t i = 0; i < new_gens.size(); ++i) {
    const Mat& v = dgen_base[i];
    if (v.rows == 0 && v.cols == 0) continue;
    const int dd = new_gens[i].degree + 1;
    if (dd > m.cap)
      throw std::invalid_argument(
          "add_stage: differential of a degree-cap generator must be zero");
    if (v.rows != m.alg.dim(dd) || v.cols != 1)
      throw std::invalid_argument("add_stage: differential shape mismatch");
    if (dd < m.cap && !m.alg.d(dd, v).is_zero())
      throw std::invalid_argument("add_stage: differential of " +
                                  new_gens[i].name + " is not a cocycle");
  }

  ExtendedCDGA ext = extend_algebra_shell(m.alg, new_gens);
  std::vector<Mat> dg_ext(new_gens.size());
  for (size_t i = 0; i < new_gens.size(); ++i) {
    const Mat& v = dgen_base[i];
    if (v.rows == 0 && v.cols == 0) continue;
    dg_ext[i] = ext.incl[new_gens[i].degree + 1] * v;
  }
  set_extension_differential(ext, dg_ext);

  // Base indices sit at the front of every extended degree, so existing
  // generator positions survive; their differentials get re-embedded.
  for (size_t j = 0; j < m.gens.size(); ++j) {
    Mat& v = m.dgen[j];
    if (v.rows == 0 && v.cols == 0) continue;
    v = ext.incl[m.gens[j].degree + 1] * v;
  }

  SullivanStage stage;
  stage.first_gen = static_cast<int>(m.gens.size());
  stage.ngens = static_cast<int>(new_gens.size());
  stage.dgen_base = dgen_base;

  for (size_t i = 0; i < new_gens.size(); ++i) {
    m.gens.push_back({new_gens[i].name, new_gens[i].degree});
    m.gen_pos.push_back(ext.gen_index(static_cast<int>(i)));
    m.dgen.push_back(dg_ext[i]);
  }
  m.alg = ext.alg;
  stage.ext = std::move(ext);
  m.stages.push_back(std::move(stage));
}

std::optional<std::string> check_sullivan(const SullivanAlgebra& m) {
  if (auto bad = check_algebra(m.alg)) return bad;
  if (m.gens.size() != m.gen_pos.size() || m.gens.size() != m.dgen.size())
    return "generator bookkeeping arrays disagree in length";
  for (size_t i = 0; i < m.gens.size(); ++i) {
    const int k = m.gens[i].degree;
    if (k < 2 || k > m.cap) return "generator " + m.gens[i].name + " degree";
    if (m.gen_pos[i] < 0 || m.gen_pos[i] >= m.alg.dim(k))
      return "generator " + m.gens[i].name + " position out of range";
    if (k == m.cap) continue;
    const Mat& v = m.dgen[i];
    Mat expect = (v.rows == 0 && v.cols == 0) ? Mat(m.alg.dim(k + 1), 1) : v;
    if (!(m.alg.diff[k].col(m.gen_pos[i]) == expect))
      return "stored differential of " + m.gens[i].name +
             " disagrees with the algebra";
  }
  return std::nullopt;
}

std::optional<std::string> check_minimality(const SullivanAlgebra& m) {
  for (size_t i = 0; i < m.gens.size(); ++i) {
    const Mat& v = m.dgen[i];
    if (v.rows == 0 && v.cols == 0) continue;
    for (int j : m.gens_in_degree(m.gens[i].degree + 1))
      if (!(v.at(m.gen_pos[j], 0) == Rat(0)))
        return "d(" + m.gens[i].name + ") has a linear term in " +
               m.gens[j].name;
  }
  return std::nullopt;
}

bool is_minimal(const SullivanAlgebra& m) {
  return !check_minimality(m).has_value();
}

std::vector<Mat> sullivan_evaluate(const SullivanAlgebra& m,
                                   const TruncatedCDGA& tgt,
                                   const std::vector<Mat>& gen_images) {
  if (tgt.cap < m.cap)
    throw std::invalid_argument("sullivan_evaluate: target cap too small");
  if (gen_images.size() != m.gens.size())
    throw std::invalid_argument("sullivan_evaluate: one image per generator");
  std::vector<Mat> f = unit_map(m.cap, tgt);
  for (const SullivanStage& s : m.stages) {
    std::vector<Mat> simgs(gen_images.begin() + s.first_gen,
                           gen_images.begin() + s.first_gen + s.ngens);
    f = extend_over_stage(s.ext, tgt, f, simgs);
  }
  return f;
}

MinimalModel minimal_model(const TruncatedCDGA& a, int n) {
  if (n < 0) throw std::invalid_argument("minimal_model: negative degree");
  if (a.cap < n + 1)
    throw std::invalid_argument(
        "minimal_model: cap too small for the requested degree");
  if (!is_one_connected(a))
    throw std::invalid_argument(
        "minimal_model: target is not cohomologically 1-connected");
  Cohomology ha = cohomology(a);

  SullivanAlgebra m = free_sullivan(a.cap);
  std::vector<Mat> rho_imgs;
  std::vector<Mat> rho = unit_map(m.cap, a);

  for (int k = 2; k <= n; ++k) {
    Cohomology hm = cohomology(m.alg);
    std::vector<GenSpec> ng;
    std::vector<Mat> dg;
    std::vector<Mat> imgs;

    // Surjectivity in degree k: one generator per cokernel class.
    Mat hk = induced_on_h(rho, hm, ha, k);
    Mat comp = complement_within(full_space(ha.dims[k]), image(hk));
    for (int c = 0; c < comp.cols; ++c) {
      ng.push_back({"v" + deg_str(k) + "_" + deg_str(c), k});
      dg.push_back(Mat());
      imgs.push_back(ha.reps[k] * comp.col(c));
    }

    // Injectivity in degree k+1: one killer per kernel class, while k+1
    // still lies under the certificate degree.
    if (k + 1 <= n) {
      Mat hk1 = induced_on_h(rho, hm, ha, k + 1);
      Subspace ker = kernel(hk1);
      for (int c = 0; c < ker.dim(); ++c) {
        Mat w = hm.reps[k + 1] * ker.basis.col(c);
        ng.push_back({"w" + deg_str(k) + "_" + deg_str(c), k});
        dg.push_back(w);
        auto u = solve(a.diff[k], rho[k + 1] * w);
        if (!u)
          throw std::logic_error(
              "minimal_model: killer class has no primitive");
        imgs.push_back(*u);
      }
    }

    if (ng.empty()) continue;
    add_stage(m, ng, dg);
    rho_imgs.insert(rho_imgs.end(), imgs.begin(), imgs.end());
    rho = sullivan_evaluate(m, a, rho_imgs);
  }

  if (auto bad = check_minimality(m))
    throw std::logic_error("minimal_model: output not minimal: " + *bad);
  Cohomology hm = cohomology(m.alg);
  for (int k = 0; k <= n; ++k)
    if (!iso_square(induced_on_h(rho, hm, ha, k)))
      throw std::logic_error(
          "minimal_model: quasi-isomorphism check failed at degree " +
          deg_str(k));

  MinimalModel out;
  out.m = std::move(m);
  out.rho.rho = std::move(rho);
  out.rho.quasi_iso_through = n;
  return out;
}

std::vector<Mat> lift(const SullivanAlgebra& m, const TruncatedCDGA& a,
                      const std::vector<Mat>& f, const TruncatedCDGA& u,
                      const std::vector<Mat>& rho) {
  if (auto bad = check_minimality(m))
    throw std::invalid_argument("lift: source is not minimal: " + *bad);
  if (a.cap != m.cap || u.cap != m.cap)
    throw std::invalid_argument("lift: caps must agree");

  std::vector<Mat> g = unit_map(m.cap, u);
  for (const SullivanStage& s : m.stages) {
    std::vector<Mat> simgs(s.ngens);
    for (int i = 0; i < s.ngens; ++i) {
      const int gi = s.first_gen + i;
      const int k = m.gens[gi].degree;
      Mat fval = f[k].col(m.gen_pos[gi]);
      Mat sys = rho[k];
      Mat rhs = fval;
      if (k < m.cap) {
        const Mat& dv = s.dgen_base[i];
        Mat zeta = (dv.rows == 0 && dv.cols == 0) ? Mat(u.dim(k + 1), 1)
                                                  : g[k + 1] * dv;
        sys = Mat::vstack(u.diff[k], rho[k]);
        rhs = Mat::vstack(zeta, fval);
      }
      auto y = solve(sys, rhs);
      if (!y)
        throw std::runtime_error("lift obstruction at degree " + deg_str(k));
      simgs[i] = *y;
    }
    g = extend_over_stage(s.ext, u, g, simgs);
  }

  for (int k = 0; k <= m.cap; ++k)
    if (!(rho[k] * g[k] == f[k]))
      throw std::logic_error("lift: identity rho.g = f failed at degree " +
                             deg_str(k));
  return g;
}

LinearPart linear_part(const SullivanAlgebra& src, const SullivanAlgebra& tgt,
                       const std::vector<Mat>& phi) {
  if (src.cap != tgt.cap)
    throw std::invalid_argument("linear_part: caps must agree");
  LinearPart out;
  out.maps.resize(src.cap + 1);
  out.surjective.assign(src.cap + 1, 1);
  for (int k = 0; k <= src.cap; ++k) {
    std::vector<int> vi = src.gens_in_degree(k);
    std::vector<int> wi = tgt.gens_in_degree(k);
    Mat lp(static_cast<int>(wi.size()), static_cast<int>(vi.size()));
    for (size_t r = 0; r < wi.size(); ++r)
      for (size_t c = 0; c < vi.size(); ++c)
        lp.at(static_cast<int>(r), static_cast<int>(c)) =
            phi[k].at(tgt.gen_pos[wi[r]], src.gen_pos[vi[c]]);
    out.surjective[k] = (rank(lp) == lp.rows) ? 1 : 0;
    if (!out.surjective[k]) out.all_surjective = false;
    out.maps[k] = std::move(lp);
  }
  return out;
}

std::optional<FormalityCertificate> formality_certificate(
    const TruncatedCDGA& a, int n) {
  if (a.cap < n + 2)
    throw std::invalid_argument(
        "formality_certificate: cap too small for the requested degree");
  Cohomology h = cohomology(a);
  TruncatedCDGA ha = cohomology_algebra(a, h);
  MinimalModel mm = minimal_model(ha, n);
  const SullivanAlgebra& m = mm.m;

  // Greedy representatives: cocycle generators go to chosen representing
  // cocycles of their classes; killer images are primitives found by linear
  // solves.  An unsolvable primitive is an (inconclusive) failure.
  std::vector<Mat> psi = unit_map(m.cap, a);
  for (const SullivanStage& s : m.stages) {
    std::vector<Mat> simgs(s.ngens);
    for (int i = 0; i < s.ngens; ++i) {
      const int gi = s.first_gen + i;
      const int k = m.gens[gi].degree;
      const Mat& dv = s.dgen_base[i];
      if (dv.rows == 0 && dv.cols == 0) {
        // rho lands in the cohomology algebra, whose coordinates are classes.
        simgs[i] = h.reps[k] * mm.rho.rho[k].col(m.gen_pos[gi]);
      } else {
        auto u = solve(a.diff[k], psi[k + 1] * dv);
        if (!u) return std::nullopt;
        simgs[i] = *u;
      }
    }
    psi = extend_over_stage(s.ext, a, psi, simgs);
  }

  Cohomology hm = cohomology(m.alg);
  for (int k = 0; k <= n; ++k)
    if (!iso_square(induced_on_h(psi, hm, h, k))) return std::nullopt;

  FormalityCertificate cert;
  cert.model = mm.m;
  cert.psi = std::move(psi);
  cert.through = n;
  return cert;
}

}  // namespace equimod
