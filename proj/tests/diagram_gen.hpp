#pragma once

// Test-side generators of orbit diagrams: direct sums of corner atoms with
// random basis changes (injective by construction), random commuting
// squares, and the hand-built order-6 example.  Deliberately independent of
// the library's envelope internals so the suites cross-check real structure.

#include <map>
#include <random>
#include <vector>

#include "equimod/cdga.hpp"
#include "equimod/orbit.hpp"

namespace equimod_test {

using namespace equimod;

inline Mat rnd_mat(std::mt19937_64& rng, int r, int c, int lo = -3,
                   int hi = 3) {
  std::uniform_int_distribution<int> d(lo, hi);
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = Rat(d(rng));
  return m;
}

inline Mat rnd_invertible(std::mt19937_64& rng, int n) {
  if (n == 0) return Mat(0, 0);
  for (;;) {
    Mat m = rnd_mat(rng, n, n, -2, 2);
    if (rank(m) == n) return m;
  }
}

// Direct sum of corner atoms with the given multiplicities per degree.
inline DiagramOfGVS atoms_diagram(const GroupSpec& g, int cap,
                                  const std::map<Level, std::vector<int>>& m) {
  const Level order[4] = {Level::G, Level::P, Level::Q, Level::E};
  auto mult = [&](Level h, int k) {
    auto it = m.find(h);
    return it == m.end() ? 0 : it->second[k];
  };
  auto present = [&](Level h) {
    for (Level l : g.levels())
      if (l == h) return true;
    return false;
  };
  DiagramOfGVS d;
  d.group = g;
  d.cap = cap;
  for (Level l : g.levels()) {
    GVS v;
    v.cap = cap;
    v.dims.assign(cap + 1, 0);
    for (int k = 0; k <= cap; ++k)
      for (Level h : order)
        if (present(h) && g.leq(l, h)) v.dims[k] += mult(h, k);
    d.spaces[l] = std::move(v);
  }
  for (const Arrow& a : g.arrows()) {
    GradedMap gm(cap + 1);
    for (int k = 0; k <= cap; ++k) {
      Mat mm(d.dim(a.second, k), d.dim(a.first, k));
      int src_off = 0, dst_off = 0;
      for (Level h : order) {
        if (!present(h)) continue;
        bool at_src = g.leq(a.first, h), at_dst = g.leq(a.second, h);
        if (at_src && at_dst)
          for (int i = 0; i < mult(h, k); ++i)
            mm.at(dst_off + i, src_off + i) = Rat(1);
        if (at_src) src_off += mult(h, k);
        if (at_dst) dst_off += mult(h, k);
      }
      gm[k] = std::move(mm);
    }
    d.maps[a] = std::move(gm);
  }
  return d;
}

// Injective-by-construction diagram: atoms conjugated by random changes of
// basis at every level and degree.
inline DiagramOfGVS random_injective(std::mt19937_64& rng, const GroupSpec& g,
                                     int cap, int max_mult) {
  std::uniform_int_distribution<int> pick(0, max_mult);
  std::map<Level, std::vector<int>> mult;
  for (Level l : g.levels()) {
    std::vector<int> v(cap + 1);
    for (int k = 0; k <= cap; ++k) v[k] = pick(rng);
    mult[l] = std::move(v);
  }
  DiagramOfGVS d = atoms_diagram(g, cap, mult);
  std::map<Level, std::vector<Mat>> t, tinv;
  for (Level l : g.levels()) {
    std::vector<Mat> ts(cap + 1), is(cap + 1);
    for (int k = 0; k <= cap; ++k) {
      ts[k] = rnd_invertible(rng, d.dim(l, k));
      is[k] = *solve(ts[k], Mat::identity(d.dim(l, k)));
    }
    t[l] = std::move(ts);
    tinv[l] = std::move(is);
  }
  for (const Arrow& a : g.arrows())
    for (int k = 0; k <= cap; ++k)
      d.maps[a][k] = t[a.second][k] * d.maps[a][k] * tinv[a.first][k];
  return d;
}

// Random diagram with a commuting square (not injective in general).
inline DiagramOfGVS random_square(std::mt19937_64& rng, const GroupSpec& g,
                                  int cap, int max_dim) {
  std::uniform_int_distribution<int> pick(0, max_dim);
  DiagramOfGVS d;
  d.group = g;
  d.cap = cap;
  for (Level l : g.levels()) {
    GVS v;
    v.cap = cap;
    v.dims.resize(cap + 1);
    for (int k = 0; k <= cap; ++k) v.dims[k] = pick(rng);
    d.spaces[l] = std::move(v);
  }
  for (const Arrow& a : g.arrows()) {
    GradedMap gm(cap + 1);
    for (int k = 0; k <= cap; ++k)
      gm[k] = Mat(d.dim(a.second, k), d.dim(a.first, k));
    d.maps[a] = std::move(gm);
  }
  for (int k = 0; k <= cap; ++k) {
    if (!g.is_pq()) {
      d.maps[{Level::E, Level::G}][k] =
          rnd_mat(rng, d.dim(Level::G, k), d.dim(Level::E, k));
      continue;
    }
    Mat ep = rnd_mat(rng, d.dim(Level::P, k), d.dim(Level::E, k));
    Mat eq = rnd_mat(rng, d.dim(Level::Q, k), d.dim(Level::E, k));
    Mat pg = rnd_mat(rng, d.dim(Level::G, k), d.dim(Level::P, k));
    Mat qg(d.dim(Level::G, k), d.dim(Level::Q, k));
    Mat target = pg * ep;
    auto sol = solve(eq.transpose(), target.transpose());
    if (sol) {
      qg = sol->transpose();
    } else {
      // Fall back to a square that commutes by vanishing.
      pg = Mat(d.dim(Level::G, k), d.dim(Level::P, k));
      qg = Mat(d.dim(Level::G, k), d.dim(Level::Q, k));
    }
    d.maps[{Level::E, Level::P}][k] = std::move(ep);
    d.maps[{Level::E, Level::Q}][k] = std::move(eq);
    d.maps[{Level::P, Level::G}][k] = std::move(pg);
    d.maps[{Level::Q, Level::G}][k] = std::move(qg);
  }
  return d;
}

// The order-6 example: three 3-spheres wedge-paired with two 5-spheres,
// levelwise cohomology with cross products killed, restriction maps folding
// the free orbits onto the fixed spheres.
struct C6Underlying {
  PresentedCDGA e, p, q, g;
  DiagramOfGVS dia;
  std::map<Arrow, std::vector<Mat>> cdga_maps;
};

inline C6Underlying c6_underlying(int cap) {
  auto ev = [](int n, int i) {
    Mat v(n, 1);
    v.at(i, 0) = Rat(1);
    return v;
  };
  C6Underlying out;
  Presentation pe;
  pe.gens = {{"x1", 3}, {"x2", 3}, {"x3", 3}, {"y1", 5}, {"y2", 5}};
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 2; ++j)
      pe.relations.push_back("x" + std::to_string(i) + "*y" +
                             std::to_string(j));
  pe.cap = cap;
  Presentation pp;
  pp.gens = {{"x", 3}, {"y1", 5}, {"y2", 5}};
  pp.relations = {"x*y1", "x*y2"};
  pp.cap = cap;
  Presentation pq;
  pq.gens = {{"x1", 3}, {"x2", 3}, {"x3", 3}, {"y", 5}};
  pq.relations = {"x1*y", "x2*y", "x3*y"};
  pq.cap = cap;
  Presentation pg;
  pg.gens = {{"x", 3}, {"y", 5}};
  pg.relations = {"x*y"};
  pg.cap = cap;
  out.e = realize(pe);
  out.p = realize(pp);
  out.q = realize(pq);
  out.g = realize(pg);

  // e -> P: fold the x's, keep the y's; e -> Q: keep the x's, fold the y's.
  auto ep = morphism_from_gen_images(
      out.e, out.p.alg, {ev(1, 0), ev(1, 0), ev(1, 0), ev(2, 0), ev(2, 1)});
  auto eq = morphism_from_gen_images(
      out.e, out.q.alg, {ev(3, 0), ev(3, 1), ev(3, 2), ev(1, 0), ev(1, 0)});
  auto pgm = morphism_from_gen_images(out.p, out.g.alg,
                                      {ev(1, 0), ev(1, 0), ev(1, 0)});
  auto qgm = morphism_from_gen_images(out.q, out.g.alg,
                                      {ev(1, 0), ev(1, 0), ev(1, 0), ev(1, 0)});

  DiagramOfGVS& d = out.dia;
  d.group = GroupSpec{3, 2};
  d.cap = cap;
  auto gvs_of = [&](const PresentedCDGA& a) {
    GVS v;
    v.cap = cap;
    v.dims = a.alg.dims;
    return v;
  };
  d.spaces[Level::E] = gvs_of(out.e);
  d.spaces[Level::P] = gvs_of(out.p);
  d.spaces[Level::Q] = gvs_of(out.q);
  d.spaces[Level::G] = gvs_of(out.g);
  d.maps[{Level::E, Level::P}] = ep;
  d.maps[{Level::E, Level::Q}] = eq;
  d.maps[{Level::P, Level::G}] = pgm;
  d.maps[{Level::Q, Level::G}] = qgm;
  out.cdga_maps[{Level::E, Level::P}] = std::move(ep);
  out.cdga_maps[{Level::E, Level::Q}] = std::move(eq);
  out.cdga_maps[{Level::P, Level::G}] = std::move(pgm);
  out.cdga_maps[{Level::Q, Level::G}] = std::move(qgm);
  return out;
}

}  // namespace equimod_test
