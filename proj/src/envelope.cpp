#include <random>
#include <stdexcept>

#include "equimod/orbit.hpp"

namespace equimod {

namespace {

// Block order inside envelopes: G first, then P, Q, then e.
const Level kBlockOrder[4] = {Level::G, Level::P, Level::Q, Level::E};

std::vector<Level> blocks_at(const GroupSpec& g, Level at) {
  std::vector<Level> out;
  for (Level h : kBlockOrder) {
    bool present = false;
    for (Level l : g.levels()) present = present || l == h;
    if (present && g.leq(at, h)) out.push_back(h);
  }
  return out;
}

// Projection X(H) -> V_H along the greedy standard-basis complement,
// written in V_H coordinates.
Mat corner_projection(const Subspace& v, int ambient) {
  if (v.dim() == 0) return Mat(0, ambient);
  Subspace c = complement(v, ambient);
  Mat m = Mat::hstack(v.basis, c.basis);
  auto inv = solve(m, Mat::identity(ambient));
  if (!inv) throw std::runtime_error("corner_projection: basis not invertible");
  Mat pi(v.dim(), ambient);
  for (int r = 0; r < v.dim(); ++r)
    for (int cidx = 0; cidx < ambient; ++cidx) pi.at(r, cidx) = inv->at(r, cidx);
  return pi;
}

}  // namespace

int EnvelopeResult::block_offset(Level at, Level block, int k) const {
  int off = 0;
  for (Level h : blocks_at(env.group, at)) {
    if (h == block) return off;
    off += corners.dims.at(h).dim(k);
  }
  throw std::invalid_argument("block_offset: block " + level_name(block) +
                              " does not appear at level " + level_name(at));
}

EnvelopeResult envelope(const DiagramOfGVS& x) {
  EnvelopeResult r;
  r.corners = corner_kernels(x);
  r.env.group = x.group;
  r.env.cap = x.cap;

  for (Level l : x.group.levels()) {
    GVS g;
    g.cap = x.cap;
    g.dims.resize(x.cap + 1);
    for (int k = 0; k <= x.cap; ++k) {
      int total = 0;
      for (Level h : blocks_at(x.group, l)) total += r.corners.dims.at(h).dim(k);
      g.dims[k] = total;
    }
    r.env.spaces[l] = std::move(g);
  }

  // Structure maps: keep the blocks that survive at the target level.
  for (const Arrow& a : x.group.arrows()) {
    GradedMap g(x.cap + 1);
    for (int k = 0; k <= x.cap; ++k) {
      Mat m(r.env.dim(a.second, k), r.env.dim(a.first, k));
      for (Level h : blocks_at(x.group, a.second)) {
        int src_off = r.block_offset(a.first, h, k);
        int dst_off = r.block_offset(a.second, h, k);
        int d = r.corners.dims.at(h).dim(k);
        for (int i = 0; i < d; ++i) m.at(dst_off + i, src_off + i) = Rat(1);
      }
      g[k] = std::move(m);
    }
    r.env.maps[a] = std::move(g);
  }

  // Embedding: block H of phi_L is pi_H composed with the structure map.
  for (Level l : x.group.levels()) {
    GradedMap phi(x.cap + 1);
    for (int k = 0; k <= x.cap; ++k) {
      Mat m(r.env.dim(l, k), x.dim(l, k));
      for (Level h : blocks_at(x.group, l)) {
        Mat pi = corner_projection(r.corners.corner.at(h)[k], x.dim(h, k));
        Mat comp = pi * x.map_along(l, h, k);
        int off = r.block_offset(l, h, k);
        for (int i = 0; i < comp.rows; ++i)
          for (int j = 0; j < comp.cols; ++j) m.at(off + i, j) = comp.at(i, j);
      }
      phi[k] = std::move(m);
    }
    r.embed[l] = std::move(phi);
  }
  return r;
}

InjectivityReport is_injective(const DiagramOfGVS& x) {
  EnvelopeResult e = envelope(x);
  InjectivityReport rep;
  rep.injective = true;
  for (Level l : x.group.levels()) {
    rep.x_dims[l] = x.space(l);
    rep.env_dims[l] = e.env.space(l);
    if (!(x.space(l) == e.env.space(l))) rep.injective = false;
  }
  return rep;
}

PropertyIReport property_I(const DiagramOfGVS& x) {
  PropertyIReport rep;
  rep.pullback_dims.resize(x.cap + 1, 0);
  if (!x.group.is_pq()) {
    bool surj = true;
    for (int k = 0; k <= x.cap; ++k) {
      const Mat& eg = x.maps.at({Level::E, Level::G})[k];
      surj = surj && rank(eg) == x.dim(Level::G, k);
      rep.pullback_dims[k] = x.dim(Level::G, k);
    }
    rep.surj_pg = rep.surj_qg = rep.surj_to_k = surj;
    rep.satisfied = surj;
    return rep;
  }
  rep.surj_pg = rep.surj_qg = rep.surj_to_k = true;
  for (int k = 0; k <= x.cap; ++k) {
    const Mat& pg = x.maps.at({Level::P, Level::G})[k];
    const Mat& qg = x.maps.at({Level::Q, Level::G})[k];
    if (rank(pg) != x.dim(Level::G, k)) rep.surj_pg = false;
    if (rank(qg) != x.dim(Level::G, k)) rep.surj_qg = false;
    Subspace fib = kernel(Mat::hstack(pg, -qg));
    rep.pullback_dims[k] = fib.dim();
    // Universal map e -> K in the fiber-product coordinates.
    Mat stacked = Mat::vstack(x.maps.at({Level::E, Level::P})[k],
                              x.maps.at({Level::E, Level::Q})[k]);
    auto u = solve(fib.basis, stacked);
    if (!u)
      throw std::runtime_error("property_I: square failed to commute");
    if (rank(*u) != fib.dim()) rep.surj_to_k = false;
  }
  rep.satisfied = rep.surj_pg && rep.surj_qg && rep.surj_to_k;
  return rep;
}

Resolution min_injective_resolution(const DiagramOfGVS& x) {
  if (auto err = validate_diagram(x))
    throw std::invalid_argument("min_injective_resolution: " + *err);
  Resolution r;
  EnvelopeResult e0 = envelope(x);
  r.aug = e0.embed;
  QuotientDiagram c = diagram_cokernel(x, e0.env, e0.embed);
  r.terms.push_back(std::move(e0));
  auto coker_zero = [](const DiagramOfGVS& d) {
    for (const auto& [l, g] : d.spaces)
      for (int k = 0; k <= d.cap; ++k)
        if (g.dim(k) != 0) return false;
    return true;
  };
  while (!coker_zero(c.dia)) {
    if (r.length() >= 8) throw std::runtime_error("resolution did not terminate");
    EnvelopeResult ei = envelope(c.dia);
    const DiagramOfGVS& prev = r.terms.back().env;
    r.d.push_back(compose_maps(prev, c.dia, ei.env, ei.embed, c.proj));
    QuotientDiagram next = diagram_cokernel(c.dia, ei.env, ei.embed);
    r.terms.push_back(std::move(ei));
    c = std::move(next);
  }
  return r;
}

// ----------------------------------------------------------- extension

LevelMaps extend_along_mono(const DiagramOfGVS& a, const DiagramOfGVS& b,
                            const LevelMaps& j, const DiagramOfGVS& x,
                            const LevelMaps& f) {
  if (auto err = validate_diagram_map(a, b, j))
    throw std::invalid_argument("extend_along_mono: j: " + *err);
  if (auto err = validate_diagram_map(a, x, f))
    throw std::invalid_argument("extend_along_mono: f: " + *err);
  if (!map_is_mono(a, j))
    throw std::invalid_argument("extend_along_mono: j is not levelwise mono");
  EnvelopeResult e = envelope(x);
  for (Level l : x.group.levels())
    if (!(x.space(l) == e.env.space(l)))
      throw std::invalid_argument("extend_along_mono: target is not injective");

  // phi is a square iso levelwise; build its inverse.
  LevelMaps phi_inv;
  for (Level l : x.group.levels()) {
    GradedMap g(x.cap + 1);
    for (int k = 0; k <= x.cap; ++k) {
      auto inv = solve(e.embed.at(l)[k], Mat::identity(x.dim(l, k)));
      if (!inv)
        throw std::runtime_error("extend_along_mono: embedding not invertible");
      g[k] = *inv;
    }
    phi_inv[l] = std::move(g);
  }

  // For each block H: extend the H-block of phi.f at level H linearly along
  // j_H, then propagate down with B's structure maps.
  LevelMaps h;
  for (Level l : x.group.levels()) {
    GradedMap g(x.cap + 1);
    for (int k = 0; k <= x.cap; ++k) g[k] = Mat(e.env.dim(l, k), b.dim(l, k));
    h[l] = std::move(g);
  }
  for (Level blk : blocks_at(x.group, Level::E)) {
    int dblk_total = 0;
    for (int k = 0; k <= x.cap; ++k) dblk_total += e.corners.dims.at(blk).dim(k);
    if (dblk_total == 0) continue;
    for (int k = 0; k <= x.cap; ++k) {
      int d = e.corners.dims.at(blk).dim(k);
      if (d == 0) continue;
      // g_blk: A(blk) -> V_blk is the blk-block of (phi.f) at level blk.
      Mat phif = e.embed.at(blk)[k] * f.at(blk)[k];
      int off = e.block_offset(blk, blk, k);
      Mat gblk(d, a.dim(blk, k));
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < a.dim(blk, k); ++c) gblk.at(r, c) = phif.at(off + r, c);
      // Linear extension along the mono j at level blk: R.j = g_blk.
      const Mat& jb = j.at(blk)[k];
      Mat big = Mat::hstack(jb, complement(image(jb), b.dim(blk, k)).basis);
      auto inv = solve(big, Mat::identity(b.dim(blk, k)));
      if (!inv) throw std::runtime_error("extend_along_mono: retraction failed");
      Mat ret(a.dim(blk, k), b.dim(blk, k));
      for (int r = 0; r < ret.rows; ++r)
        for (int c = 0; c < ret.cols; ++c) ret.at(r, c) = inv->at(r, c);
      Mat rmap = gblk * ret;
      // Propagate: block blk of h at level l <= blk is R . B(l -> blk).
      for (Level l : x.group.levels()) {
        if (!x.group.leq(l, blk)) continue;
        Mat comp = rmap * b.map_along(l, blk, k);
        int o = e.block_offset(l, blk, k);
        for (int r = 0; r < comp.rows; ++r)
          for (int c = 0; c < comp.cols; ++c)
            h.at(l)[k].at(o + r, c) = comp.at(r, c);
      }
    }
  }
  // Back through the envelope identification.
  LevelMaps out = compose_maps(b, e.env, x, phi_inv, h);
  LevelMaps check = compose_maps(a, b, x, out, j);
  if (!maps_equal(check, f))
    throw std::runtime_error("extend_along_mono: extension identity violated");
  return out;
}

bool extension_exists(const DiagramOfGVS& a, const DiagramOfGVS& b,
                      const LevelMaps& j, const DiagramOfGVS& x,
                      const LevelMaps& f, int* fail_degree) {
  auto lv = b.group.levels();
  for (int k = 0; k <= b.cap; ++k) {
    // Unknowns: entries of h_L (dim X(L,k) x dim B(L,k)) for each level.
    std::map<Level, int> off;
    int total = 0;
    for (Level l : lv) {
      off[l] = total;
      total += x.dim(l, k) * b.dim(l, k);
    }
    auto idx = [&](Level l, int r, int c) {
      return off[l] + r * b.dim(l, k) + c;
    };
    std::vector<std::vector<Rat>> rows;
    std::vector<Rat> rhs;
    // Naturality: h_t . B(arrow) = X(arrow) . h_s.
    for (const Arrow& ar : b.group.arrows()) {
      const Mat& bm = b.maps.at(ar)[k];
      const Mat& xm = x.maps.at(ar)[k];
      for (int r = 0; r < x.dim(ar.second, k); ++r)
        for (int c = 0; c < b.dim(ar.first, k); ++c) {
          std::vector<Rat> row(total, Rat(0));
          for (int m = 0; m < b.dim(ar.second, k); ++m)
            if (!(bm.at(m, c) == 0)) row[idx(ar.second, r, m)] += bm.at(m, c);
          for (int m = 0; m < x.dim(ar.first, k); ++m)
            if (!(xm.at(r, m) == 0)) row[idx(ar.first, m, c)] -= xm.at(r, m);
          rows.push_back(std::move(row));
          rhs.push_back(Rat(0));
        }
    }
    // Restriction: h_L . j_L = f_L.
    for (Level l : lv) {
      const Mat& jm = j.at(l)[k];
      const Mat& fm = f.at(l)[k];
      for (int r = 0; r < x.dim(l, k); ++r)
        for (int c = 0; c < a.dim(l, k); ++c) {
          std::vector<Rat> row(total, Rat(0));
          for (int m = 0; m < b.dim(l, k); ++m)
            if (!(jm.at(m, c) == 0)) row[idx(l, r, m)] += jm.at(m, c);
          rows.push_back(std::move(row));
          rhs.push_back(fm.at(r, c));
        }
    }
    if (rows.empty()) continue;
    Mat sys = Mat::from_rows(rows);
    Mat rv(static_cast<int>(rhs.size()), 1);
    for (size_t i = 0; i < rhs.size(); ++i) rv.at(static_cast<int>(i), 0) = rhs[i];
    if (!solve(sys, rv)) {
      if (fail_degree) *fail_degree = k;
      return false;
    }
  }
  return true;
}

// ----------------------------------------------------------- oracle

namespace {

// Basis of the space of diagram maps a -> x, degree by degree.
std::vector<LevelMaps> hom_basis(const DiagramOfGVS& a, const DiagramOfGVS& x) {
  std::vector<LevelMaps> out;
  auto lv = a.group.levels();
  for (int k = 0; k <= a.cap; ++k) {
    std::map<Level, int> off;
    int total = 0;
    for (Level l : lv) {
      off[l] = total;
      total += x.dim(l, k) * a.dim(l, k);
    }
    if (total == 0) continue;
    auto idx = [&](Level l, int r, int c) { return off[l] + r * a.dim(l, k) + c; };
    std::vector<std::vector<Rat>> rows;
    for (const Arrow& ar : a.group.arrows()) {
      const Mat& am = a.maps.at(ar)[k];
      const Mat& xm = x.maps.at(ar)[k];
      for (int r = 0; r < x.dim(ar.second, k); ++r)
        for (int c = 0; c < a.dim(ar.first, k); ++c) {
          std::vector<Rat> row(total, Rat(0));
          for (int m = 0; m < a.dim(ar.second, k); ++m)
            if (!(am.at(m, c) == 0)) row[idx(ar.second, r, m)] += am.at(m, c);
          for (int m = 0; m < x.dim(ar.first, k); ++m)
            if (!(xm.at(r, m) == 0)) row[idx(ar.first, m, c)] -= xm.at(r, m);
          rows.push_back(std::move(row));
        }
    }
    Mat sys = rows.empty() ? Mat(0, total) : Mat::from_rows(rows);
    Mat kb = kernel_basis(sys);
    for (int c = 0; c < kb.cols; ++c) {
      LevelMaps f;
      for (Level l : lv) {
        GradedMap g(a.cap + 1);
        for (int kk = 0; kk <= a.cap; ++kk) g[kk] = Mat(x.dim(l, kk), a.dim(l, kk));
        f[l] = std::move(g);
      }
      for (Level l : lv)
        for (int r = 0; r < x.dim(l, k); ++r)
          for (int cc = 0; cc < a.dim(l, k); ++cc)
            f[l][k].at(r, cc) = kb.at(idx(l, r, cc), c);
      out.push_back(std::move(f));
    }
  }
  return out;
}

// A diagram with the given per-level dimension in a single degree, supported
// on the down-set of `top`, with identity structure maps inside the support.
DiagramOfGVS atom_diagram(const GroupSpec& g, int cap, Level top, int deg,
                          int dim) {
  DiagramOfGVS d;
  d.group = g;
  d.cap = cap;
  for (Level l : g.levels()) {
    GVS v;
    v.cap = cap;
    v.dims.assign(cap + 1, 0);
    if (g.leq(l, top)) v.dims[deg] = dim;
    d.spaces[l] = std::move(v);
  }
  for (const Arrow& a : g.arrows()) {
    GradedMap m(cap + 1);
    for (int k = 0; k <= cap; ++k) {
      m[k] = Mat(d.dim(a.second, k), d.dim(a.first, k));
      if (k == deg && g.leq(a.first, top) && g.leq(a.second, top))
        m[k] = Mat::identity(dim);
    }
    d.maps[a] = std::move(m);
  }
  return d;
}

// Restriction of `b` to an up-set support: levels outside `s` become zero.
DiagramOfGVS support_restrict(const DiagramOfGVS& b,
                              const std::vector<Level>& s) {
  auto in = [&](Level l) {
    for (Level t : s)
      if (t == l) return true;
    return false;
  };
  DiagramOfGVS d;
  d.group = b.group;
  d.cap = b.cap;
  for (Level l : b.group.levels()) {
    GVS v;
    v.cap = b.cap;
    v.dims.assign(b.cap + 1, 0);
    if (in(l)) v.dims = b.space(l).dims;
    d.spaces[l] = std::move(v);
  }
  for (const Arrow& a : b.group.arrows()) {
    GradedMap m(b.cap + 1);
    for (int k = 0; k <= b.cap; ++k) {
      m[k] = Mat(d.dim(a.second, k), d.dim(a.first, k));
      if (in(a.first) && in(a.second)) m[k] = b.maps.at(a)[k];
    }
    d.maps[a] = std::move(m);
  }
  return d;
}

LevelMaps support_inclusion(const DiagramOfGVS& sub, const DiagramOfGVS& b,
                            const std::vector<Level>& s) {
  auto in = [&](Level l) {
    for (Level t : s)
      if (t == l) return true;
    return false;
  };
  LevelMaps j;
  for (Level l : b.group.levels()) {
    GradedMap g(b.cap + 1);
    for (int k = 0; k <= b.cap; ++k)
      g[k] = in(l) ? Mat::identity(b.dim(l, k)) : Mat(b.dim(l, k), 0);
    j[l] = std::move(g);
  }
  (void)sub;
  return j;
}

std::vector<std::vector<Level>> up_sets(const GroupSpec& g) {
  std::vector<Level> lv = g.levels();
  std::vector<std::vector<Level>> out;
  int n = static_cast<int>(lv.size());
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<Level> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s.push_back(lv[i]);
    bool ok = true;
    for (Level a : s)
      for (Level b : lv)
        if (g.leq(a, b)) {
          bool found = false;
          for (Level c : s) found = found || c == b;
          ok = ok && found;
        }
    if (ok) out.push_back(s);
  }
  return out;
}

Mat random_small(std::mt19937_64& rng, int r, int c) {
  std::uniform_int_distribution<int> d(-2, 2);
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = Rat(d(rng));
  return m;
}

// Simultaneous solvability of h.j = f for every f in fams (extension
// problems are linear in f, so testing a spanning family covers the whole
// hom space).  On failure reports the degree and the first failing index.
bool extensions_exist(const DiagramOfGVS& a, const DiagramOfGVS& b,
                      const LevelMaps& j, const DiagramOfGVS& x,
                      const std::vector<LevelMaps>& fams, int* fail_degree,
                      int* fail_index) {
  auto lv = b.group.levels();
  int nf = static_cast<int>(fams.size());
  for (int k = 0; k <= b.cap; ++k) {
    std::map<Level, int> off;
    int total = 0;
    for (Level l : lv) {
      off[l] = total;
      total += x.dim(l, k) * b.dim(l, k);
    }
    auto idx = [&](Level l, int r, int c) {
      return off[l] + r * b.dim(l, k) + c;
    };
    std::vector<std::vector<Rat>> rows;
    std::vector<std::vector<Rat>> rhs_rows;
    for (const Arrow& ar : b.group.arrows()) {
      const Mat& bm = b.maps.at(ar)[k];
      const Mat& xm = x.maps.at(ar)[k];
      for (int r = 0; r < x.dim(ar.second, k); ++r)
        for (int c = 0; c < b.dim(ar.first, k); ++c) {
          std::vector<Rat> row(total, Rat(0));
          for (int m = 0; m < b.dim(ar.second, k); ++m)
            if (!(bm.at(m, c) == 0)) row[idx(ar.second, r, m)] += bm.at(m, c);
          for (int m = 0; m < x.dim(ar.first, k); ++m)
            if (!(xm.at(r, m) == 0)) row[idx(ar.first, m, c)] -= xm.at(r, m);
          rows.push_back(std::move(row));
          rhs_rows.emplace_back(nf, Rat(0));
        }
    }
    for (Level l : lv) {
      const Mat& jm = j.at(l)[k];
      for (int r = 0; r < x.dim(l, k); ++r)
        for (int c = 0; c < a.dim(l, k); ++c) {
          std::vector<Rat> row(total, Rat(0));
          for (int m = 0; m < b.dim(l, k); ++m)
            if (!(jm.at(m, c) == 0)) row[idx(l, r, m)] += jm.at(m, c);
          rows.push_back(std::move(row));
          std::vector<Rat> rr(nf, Rat(0));
          for (int t = 0; t < nf; ++t) rr[t] = fams[t].at(l)[k].at(r, c);
          rhs_rows.push_back(std::move(rr));
        }
    }
    if (rows.empty()) continue;
    Mat sys = Mat::from_rows(rows);
    Mat rhs = Mat::from_rows(rhs_rows);
    if (!solve(sys, rhs)) {
      if (fail_degree) *fail_degree = k;
      if (fail_index) {
        *fail_index = -1;
        for (int t = 0; t < nf; ++t) {
          Mat one(rhs.rows, 1);
          for (int r = 0; r < rhs.rows; ++r) one.at(r, 0) = rhs.at(r, t);
          if (!solve(sys, one)) {
            *fail_index = t;
            break;
          }
        }
      }
      return false;
    }
  }
  return true;
}

}  // namespace

OracleReport lifting_oracle(const DiagramOfGVS& x, const OracleBudget& budget) {
  if (auto err = validate_diagram(x))
    throw std::invalid_argument("lifting_oracle: " + *err);
  OracleReport rep;
  auto fail = [&](const std::string& family, int deg, const std::string& det) {
    rep.injective_consistent = false;
    rep.counterexample = OracleCounterexample{family, deg, det};
  };

  // Family: identity against the self-envelope embedding.
  {
    EnvelopeResult e = envelope(x);
    ++rep.tests_run;
    int deg = -1;
    if (!extension_exists(x, e.env, e.embed, x, identity_map(x), &deg)) {
      fail("self-envelope", deg,
           "the identity does not extend over the envelope embedding");
      return rep;
    }
  }

  // Family: atoms restricted to up-set supports, the whole hom space as f
  // (one multi-column solve per support and degree).
  for (Level top : x.group.levels()) {
    std::vector<std::vector<Level>> seen_effective;
    for (const auto& s : up_sets(x.group)) {
      // The restriction only depends on s intersected with the down-set of
      // top; skip empty, improper, and duplicate cases.
      std::vector<Level> eff;
      for (Level l : s)
        if (x.group.leq(l, top)) eff.push_back(l);
      std::vector<Level> down;
      for (Level l : x.group.levels())
        if (x.group.leq(l, top)) down.push_back(l);
      if (eff.empty() || eff.size() == down.size()) continue;
      bool dup = false;
      for (const auto& e0 : seen_effective) dup = dup || e0 == eff;
      if (dup) continue;
      seen_effective.push_back(eff);
      for (int deg = 0; deg <= x.cap; ++deg) {
        DiagramOfGVS b = atom_diagram(x.group, x.cap, top, deg, 1);
        DiagramOfGVS a = support_restrict(b, s);
        LevelMaps j = support_inclusion(a, b, s);
        std::vector<LevelMaps> fams = hom_basis(a, x);
        if (fams.empty()) continue;
        rep.tests_run += static_cast<int>(fams.size());
        int fd = -1;
        if (!extensions_exist(a, b, j, x, fams, &fd, nullptr)) {
          fail("atom-support", fd,
               "a map off the " + level_name(top) +
                   "-atom restriction fails to extend");
          return rep;
        }
      }
    }
  }

  // Family: the pullback-cone detector (order pq only).
  if (x.group.is_pq()) {
    for (int deg = 0; deg <= x.cap; ++deg) {
      DiagramOfGVS b;
      b.group = x.group;
      b.cap = x.cap;
      for (Level l : x.group.levels()) {
        GVS v;
        v.cap = x.cap;
        v.dims.assign(x.cap + 1, 0);
        if (l != Level::G) v.dims[deg] = 1;
        b.spaces[l] = std::move(v);
      }
      for (const Arrow& ar : x.group.arrows()) {
        GradedMap m(x.cap + 1);
        for (int k = 0; k <= x.cap; ++k) {
          m[k] = Mat(b.dim(ar.second, k), b.dim(ar.first, k));
          if (k == deg && ar.first == Level::E && ar.second != Level::G)
            m[k] = Mat::identity(1);
        }
        b.maps[ar] = std::move(m);
      }
      std::vector<Level> s = {Level::P, Level::Q, Level::G};
      DiagramOfGVS a = support_restrict(b, s);
      LevelMaps j = support_inclusion(a, b, s);
      std::vector<LevelMaps> fams = hom_basis(a, x);
      if (fams.empty()) continue;
      rep.tests_run += static_cast<int>(fams.size());
      int fd = -1;
      if (!extensions_exist(a, b, j, x, fams, &fd, nullptr)) {
        fail("pullback-cone", fd,
             "a corner-kernel pair is not hit by the level-e square");
        return rep;
      }
    }
  }

  // Family: seeded random monos with random homs.
  std::mt19937_64 rng(budget.seed);
  std::uniform_int_distribution<int> dim_pick(0, budget.max_dim);
  std::uniform_int_distribution<int> deg_pick(0, x.cap);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int t = 0; t < budget.trials; ++t) {
    int deg = deg_pick(rng);
    // Random single-degree diagram with a commuting square.
    DiagramOfGVS b;
    b.group = x.group;
    b.cap = x.cap;
    std::map<Level, int> bd;
    for (Level l : x.group.levels()) bd[l] = dim_pick(rng);
    for (Level l : x.group.levels()) {
      GVS v;
      v.cap = x.cap;
      v.dims.assign(x.cap + 1, 0);
      v.dims[deg] = bd[l];
      b.spaces[l] = std::move(v);
    }
    auto zero_maps = [&](const Arrow& ar) {
      GradedMap m(x.cap + 1);
      for (int k = 0; k <= x.cap; ++k)
        m[k] = Mat(b.dim(ar.second, k), b.dim(ar.first, k));
      return m;
    };
    if (x.group.is_pq()) {
      GradedMap ep = zero_maps({Level::E, Level::P});
      GradedMap eq = zero_maps({Level::E, Level::Q});
      GradedMap pg = zero_maps({Level::P, Level::G});
      GradedMap qg = zero_maps({Level::Q, Level::G});
      ep[deg] = random_small(rng, bd[Level::P], bd[Level::E]);
      eq[deg] = random_small(rng, bd[Level::Q], bd[Level::E]);
      pg[deg] = random_small(rng, bd[Level::G], bd[Level::P]);
      // Solve qg . eq = pg . ep; regenerate eq until full row rank when
      // possible so the solve is guaranteed.
      for (int attempt = 0; attempt < 8 && bd[Level::Q] > 0 &&
                            rank(eq[deg]) < std::min(bd[Level::Q], bd[Level::E]);
           ++attempt)
        eq[deg] = random_small(rng, bd[Level::Q], bd[Level::E]);
      Mat target = pg[deg] * ep[deg];
      auto sol = solve(eq[deg].transpose(), target.transpose());
      if (!sol) continue;  // skip unbuildable trial
      qg[deg] = sol->transpose();
      b.maps[{Level::E, Level::P}] = std::move(ep);
      b.maps[{Level::E, Level::Q}] = std::move(eq);
      b.maps[{Level::P, Level::G}] = std::move(pg);
      b.maps[{Level::Q, Level::G}] = std::move(qg);
    } else {
      GradedMap eg = zero_maps({Level::E, Level::G});
      eg[deg] = random_small(rng, bd[Level::G], bd[Level::E]);
      b.maps[{Level::E, Level::G}] = std::move(eg);
    }
    if (validate_diagram(b)) continue;

    // Random subdiagram closed under the structure maps.
    std::map<Level, Subspace> sub;
    Subspace se = span_of(random_small(rng, bd[Level::E], bd[Level::E] / 2));
    sub[Level::E] = se;
    if (x.group.is_pq()) {
      Subspace sp =
          sum(image(b.maps.at({Level::E, Level::P})[deg] * se.basis),
              span_of(random_small(rng, bd[Level::P], 1)));
      Subspace sq = image(b.maps.at({Level::E, Level::Q})[deg] * se.basis);
      Subspace sg =
          sum(image(b.maps.at({Level::P, Level::G})[deg] * sp.basis),
              image(b.maps.at({Level::Q, Level::G})[deg] * sq.basis));
      sub[Level::P] = sp;
      sub[Level::Q] = sq;
      sub[Level::G] = sg;
    } else {
      sub[Level::G] = image(b.maps.at({Level::E, Level::G})[deg] * se.basis);
    }
    DiagramOfGVS a;
    a.group = x.group;
    a.cap = x.cap;
    LevelMaps j;
    for (Level l : x.group.levels()) {
      GVS v;
      v.cap = x.cap;
      v.dims.assign(x.cap + 1, 0);
      v.dims[deg] = sub[l].dim();
      a.spaces[l] = std::move(v);
      GradedMap g(x.cap + 1);
      for (int k = 0; k <= x.cap; ++k)
        g[k] = (k == deg) ? sub[l].basis : Mat(b.dim(l, k), 0);
      j[l] = std::move(g);
    }
    for (const Arrow& ar : x.group.arrows()) {
      GradedMap m(x.cap + 1);
      for (int k = 0; k <= x.cap; ++k) {
        if (k != deg) {
          m[k] = Mat(a.dim(ar.second, k), a.dim(ar.first, k));
          continue;
        }
        Mat pushed = b.maps.at(ar)[deg] * sub[ar.first].basis;
        auto sol = solve(sub[ar.second].basis, pushed);
        if (!sol) throw std::runtime_error("lifting_oracle: subdiagram broke");
        m[k] = *sol;
      }
      a.maps[ar] = std::move(m);
    }

    // Random hom f : A -> X as a combination of the hom basis.
    std::vector<LevelMaps> basis = hom_basis(a, x);
    if (basis.empty()) continue;
    LevelMaps f = zero_map(a, x);
    for (const LevelMaps& bf : basis) {
      int c = coef(rng);
      if (c == 0) continue;
      for (Level l : x.group.levels())
        for (int k = 0; k <= x.cap; ++k)
          f[l][k] = f[l][k] + bf.at(l)[k] * Rat(c);
    }
    ++rep.tests_run;
    int fd = -1;
    if (!extension_exists(a, b, j, x, f, &fd)) {
      fail("random-mono", fd, "a random extension problem has no solution");
      return rep;
    }
  }
  return rep;
}

}  // namespace equimod
