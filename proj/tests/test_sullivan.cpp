#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "diagram_gen.hpp"
#include "equimod/sullivan.hpp"

using namespace equimod;
using namespace equimod_test;

namespace {

Mat basis_vec(int dim, int idx) {
  Mat v(dim, 1);
  v.at(idx, 0) = Rat(1);
  return v;
}

Mat gen_vec(const SullivanAlgebra& m, int gi) {
  return basis_vec(m.alg.dim(m.gens[gi].degree), m.gen_pos[gi]);
}

std::vector<int> gen_counts(const SullivanAlgebra& m, int maxdeg) {
  std::vector<int> c(maxdeg + 1, 0);
  for (const SullivanGen& g : m.gens)
    if (g.degree <= maxdeg) ++c[g.degree];
  return c;
}

// The sphere model as a two-stage tower: x in degree 2, y in degree 3 with
// dy = x^2.
SullivanAlgebra sphere_tower(int cap) {
  SullivanAlgebra m = free_sullivan(cap);
  add_stage(m, {{"x", 2}}, {Mat()});
  int px = m.gen_pos[0];
  Mat ex = basis_vec(m.alg.dim(2), px);
  add_stage(m, {{"y", 3}}, {m.alg.mul(2, ex, 2, ex)});
  return m;
}

PresentedCDGA truncated_poly(int power, int cap) {
  Presentation p;
  p.cap = cap;
  p.gens = {{"x", 2}};
  std::string rel = "x";
  for (int i = 1; i < power; ++i) rel += "*x";
  p.relations = {rel};
  return realize(p);
}

// Change of basis by a seeded invertible map per positive degree.
TruncatedCDGA conjugate(const TruncatedCDGA& a, std::mt19937_64& rng) {
  std::vector<Mat> S(a.cap + 1), T(a.cap + 1);
  for (int k = 0; k <= a.cap; ++k) {
    S[k] = (k == 0) ? Mat::identity(a.dims[0]) : rnd_invertible(rng, a.dims[k]);
    T[k] = *solve(S[k], Mat::identity(a.dims[k]));
  }
  TruncatedCDGA b = a;
  for (int i = 0; i <= a.cap; ++i)
    for (int j = 0; i + j <= a.cap; ++j) {
      Mat mm(a.dims[i + j], a.dims[i] * a.dims[j]);
      for (int ai = 0; ai < a.dims[i]; ++ai)
        for (int bj = 0; bj < a.dims[j]; ++bj) {
          Mat v = T[i + j] * a.mul(i, S[i].col(ai), j, S[j].col(bj));
          for (int r = 0; r < v.rows; ++r)
            mm.at(r, ai * a.dims[j] + bj) = v.at(r, 0);
        }
      b.mult[i][j] = std::move(mm);
    }
  for (int k = 0; k < a.cap; ++k) b.diff[k] = T[k + 1] * a.diff[k] * S[k];
  return b;
}

}  // namespace

TEST_CASE("a one-stage tower realizes the free exterior algebra") {
  SullivanAlgebra m = free_sullivan(7);
  add_stage(m, {{"x", 3}}, {Mat()});
  CHECK(m.alg.dims == std::vector<int>{1, 0, 0, 1, 0, 0, 0, 0});
  CHECK(!check_sullivan(m));
  CHECK(is_minimal(m));
  CHECK(m.gen_by_name("x") == 0);
  CHECK(m.gen_by_name("z") == -1);
  CHECK(m.gens_in_degree(3) == std::vector<int>{0});
}

TEST_CASE("the sphere model arises as a two-stage tower") {
  SullivanAlgebra m = sphere_tower(8);
  CHECK(!check_sullivan(m));
  CHECK(is_minimal(m));

  Presentation p;
  p.cap = 8;
  p.gens = {{"x", 2}, {"y", 3}};
  p.differential = {{"y", "x*x"}};
  PresentedCDGA q = realize(p);
  CHECK(m.alg.dims == q.alg.dims);

  Cohomology h = cohomology(m.alg);
  CHECK(h.dims == std::vector<int>{1, 0, 1, 0, 0, 0, 0, 0});
}

TEST_CASE("add_stage rejects malformed stages") {
  SullivanAlgebra m = sphere_tower(8);
  CHECK_THROWS_AS(add_stage(m, {{"t", 1}}, {Mat()}), std::invalid_argument);
  CHECK_THROWS_AS(add_stage(m, {{"x", 4}}, {Mat()}), std::invalid_argument);
  CHECK_THROWS_AS(add_stage(m, {{"t", 9}}, {Mat()}), std::invalid_argument);
  // d(z) = xy is not a cocycle: d(xy) = x^3 != 0.
  Mat ex = gen_vec(m, 0), ey = gen_vec(m, 1);
  Mat xy = m.alg.mul(2, ex, 3, ey);
  CHECK_THROWS_AS(add_stage(m, {{"z", 4}}, {xy}), std::invalid_argument);
  CHECK_THROWS_AS(add_stage(m, {{"z", 4}}, {Mat(3, 1)}),
                  std::invalid_argument);
  // A degree-cap generator may only carry the zero differential.
  CHECK_THROWS_AS(add_stage(m, {{"t", 8}}, {Mat(m.alg.dim(9), 1)}),
                  std::invalid_argument);
  CHECK_NOTHROW(add_stage(m, {{"t", 8}}, {Mat()}));
}

TEST_CASE("multiplicative evaluation reproduces the identity") {
  SullivanAlgebra m = sphere_tower(8);
  std::vector<Mat> imgs = {gen_vec(m, 0), gen_vec(m, 1)};
  std::vector<Mat> f = sullivan_evaluate(m, m.alg, imgs);
  for (int k = 0; k <= 8; ++k) CHECK(f[k] == Mat::identity(m.alg.dim(k)));
}

TEST_CASE("evaluation into a presented target is a CDGA morphism") {
  SullivanAlgebra m = sphere_tower(8);
  Presentation p;
  p.cap = 8;
  p.gens = {{"x", 2}, {"y", 3}};
  p.differential = {{"y", "x*x"}};
  PresentedCDGA q = realize(p);
  std::vector<Mat> f =
      sullivan_evaluate(m, q.alg, {basis_vec(q.alg.dim(2), 0),
                                   basis_vec(q.alg.dim(3), 0)});
  CHECK(!check_morphism(m.alg, q.alg, f));
  for (int k = 0; k <= 8; ++k) CHECK(rank(f[k]) == q.alg.dim(k));
}

TEST_CASE("minimal model of the sphere cohomology ring") {
  PresentedCDGA a = truncated_poly(2, 8);
  MinimalModel mm = minimal_model(a.alg, 6);
  CHECK(gen_counts(mm.m, 6) == std::vector<int>{0, 0, 1, 1, 0, 0, 0});
  CHECK(is_minimal(mm.m));
  CHECK(!check_sullivan(mm.m));
  CHECK(mm.rho.quasi_iso_through == 6);
  CHECK(!check_morphism(mm.m.alg, a.alg, mm.rho.rho));

  // The degree-3 generator kills x^2.
  int yi = mm.m.gens_in_degree(3)[0];
  int xi = mm.m.gens_in_degree(2)[0];
  Mat ex = gen_vec(mm.m, xi);
  Mat x2 = mm.m.alg.mul(2, ex, 2, ex);
  CHECK(span_of(mm.m.dgen[yi]) == span_of(x2));

  Cohomology h = cohomology(mm.m.alg);
  CHECK(h.dims == std::vector<int>{1, 0, 1, 0, 0, 0, 0, 0});
}

TEST_CASE("minimal model of the height-three truncated polynomial ring") {
  PresentedCDGA a = truncated_poly(3, 8);
  MinimalModel mm = minimal_model(a.alg, 6);
  CHECK(gen_counts(mm.m, 6) == std::vector<int>{0, 0, 1, 0, 0, 1, 0});
  CHECK(is_minimal(mm.m));
  CHECK(!check_morphism(mm.m.alg, a.alg, mm.rho.rho));

  int yi = mm.m.gens_in_degree(5)[0];
  Mat ex = gen_vec(mm.m, mm.m.gens_in_degree(2)[0]);
  Mat x3 = mm.m.alg.mul(2, ex, 4, mm.m.alg.mul(2, ex, 2, ex));
  CHECK(span_of(mm.m.dgen[yi]) == span_of(x3));
}

TEST_CASE("minimal model of the wedge of two 3-spheres") {
  Presentation pa;
  pa.cap = 10;
  pa.gens = {{"a", 3}};
  Presentation pb;
  pb.cap = 10;
  pb.gens = {{"b", 3}};
  WedgeResult w = wedge(realize(pa).alg, realize(pb).alg);

  MinimalModel mm = minimal_model(w.alg, 8);
  CHECK(gen_counts(mm.m, 8) == std::vector<int>{0, 0, 0, 2, 0, 1, 0, 2, 0});
  CHECK(is_minimal(mm.m));
  CHECK(!check_morphism(mm.m.alg, w.alg, mm.rho.rho));

  // d of the degree-5 generator spans the product of the degree-3 ones.
  std::vector<int> d3 = mm.m.gens_in_degree(3);
  Mat prod = mm.m.alg.mul(3, gen_vec(mm.m, d3[0]), 3, gen_vec(mm.m, d3[1]));
  int ki = mm.m.gens_in_degree(5)[0];
  CHECK(span_of(mm.m.dgen[ki]) == span_of(prod));
}

TEST_CASE("generator counts are independent of the target basis") {
  PresentedCDGA a = truncated_poly(3, 8);
  std::vector<int> base = gen_counts(minimal_model(a.alg, 6).m, 6);
  std::mt19937_64 rng(12021);
  for (int t = 0; t < 3; ++t) {
    TruncatedCDGA b = conjugate(a.alg, rng);
    REQUIRE(!check_algebra(b));
    CHECK(gen_counts(minimal_model(b, 6).m, 6) == base);
  }
}

TEST_CASE("lift through the identity returns the morphism itself") {
  PresentedCDGA a = truncated_poly(2, 8);
  MinimalModel mm = minimal_model(a.alg, 6);
  std::vector<Mat> g = lift(mm.m, a.alg, mm.rho.rho, a.alg,
                            identity_morphism(a.alg));
  for (int k = 0; k <= 8; ++k) CHECK(g[k] == mm.rho.rho[k]);
}

TEST_CASE("lift through a surjective quasi-isomorphism splits the model map") {
  PresentedCDGA a = truncated_poly(2, 8);
  Presentation pu;
  pu.cap = 8;
  pu.gens = {{"x", 2}, {"y", 3}};
  pu.differential = {{"y", "x*x"}};
  PresentedCDGA u = realize(pu);
  std::vector<Mat> rho_u = morphism_from_gen_images(
      u, a.alg, {basis_vec(a.alg.dim(2), 0), Mat(a.alg.dim(3), 1)});
  REQUIRE(!check_morphism(u.alg, a.alg, rho_u));

  MinimalModel mm = minimal_model(a.alg, 6);
  std::vector<Mat> g = lift(mm.m, a.alg, mm.rho.rho, u.alg, rho_u);
  CHECK(!check_morphism(mm.m.alg, u.alg, g));
  for (int k = 0; k <= 8; ++k) CHECK(rho_u[k] * g[k] == mm.rho.rho[k]);
}

TEST_CASE("lift reports the obstruction degree on a defective target") {
  PresentedCDGA a = truncated_poly(2, 8);
  MinimalModel mm = minimal_model(a.alg, 6);
  TruncatedCDGA unit = TruncatedCDGA::rationals(8);
  std::vector<Mat> incl(9);
  incl[0] = a.alg.unit_vec();
  for (int k = 1; k <= 8; ++k) incl[k] = Mat(a.alg.dim(k), 0);
  REQUIRE(!check_morphism(unit, a.alg, incl));
  CHECK_THROWS_WITH_AS(lift(mm.m, a.alg, mm.rho.rho, unit, incl),
                       "lift obstruction at degree 2", std::runtime_error);
}

TEST_CASE("linear part of a generator quotient is surjective") {
  SullivanAlgebra src = free_sullivan(8);
  add_stage(src, {{"a", 3}, {"b", 3}, {"c", 3}}, {Mat(), Mat(), Mat()});
  SullivanAlgebra tgt = free_sullivan(8);
  add_stage(tgt, {{"c", 3}}, {Mat()});

  std::vector<Mat> phi = sullivan_evaluate(
      src, tgt.alg,
      {Mat(tgt.alg.dim(3), 1), Mat(tgt.alg.dim(3), 1), gen_vec(tgt, 0)});
  CHECK(!check_morphism(src.alg, tgt.alg, phi));
  LinearPart lp = linear_part(src, tgt, phi);
  CHECK(lp.maps[3].rows == 1);
  CHECK(lp.maps[3].cols == 3);
  CHECK(rank(lp.maps[3]) == 1);
  CHECK(lp.all_surjective);

  std::vector<Mat> incl = sullivan_evaluate(tgt, src.alg, {gen_vec(src, 2)});
  LinearPart lpi = linear_part(tgt, src, incl);
  CHECK(!lpi.surjective[3]);
  CHECK(!lpi.all_surjective);
}

TEST_CASE("the sphere is formal through degree six") {
  PresentedCDGA a = realize([] {
    Presentation p;
    p.cap = 8;
    p.gens = {{"x", 2}, {"y", 3}};
    p.differential = {{"y", "x*x"}};
    return p;
  }());
  auto cert = formality_certificate(a.alg, 6);
  REQUIRE(cert.has_value());
  CHECK(cert->through == 6);
  CHECK(gen_counts(cert->model, 6) == std::vector<int>{0, 0, 1, 1, 0, 0, 0});
  CHECK(!check_morphism(cert->model.alg, a.alg, cert->psi));
}

TEST_CASE("the wedge of two 3-spheres is formal through degree eight") {
  Presentation pa;
  pa.cap = 10;
  pa.gens = {{"a", 3}};
  Presentation pb;
  pb.cap = 10;
  pb.gens = {{"b", 3}};
  WedgeResult w = wedge(realize(pa).alg, realize(pb).alg);
  auto cert = formality_certificate(w.alg, 8);
  REQUIRE(cert.has_value());
  CHECK(gen_counts(cert->model, 8) ==
        std::vector<int>{0, 0, 0, 2, 0, 1, 0, 2, 0});
  CHECK(!check_morphism(cert->model.alg, w.alg, cert->psi));
}

TEST_CASE("the full wedge model is formal and killer images vanish on H") {
  // The model of the wedge through 8: a, b, k5 with dk5 = ab, and two
  // degree-7 generators killing a.k5 and b.k5.
  SullivanAlgebra m = free_sullivan(10);
  add_stage(m, {{"a", 3}, {"b", 3}}, {Mat(), Mat()});
  Mat ab = m.alg.mul(3, gen_vec(m, 0), 3, gen_vec(m, 1));
  add_stage(m, {{"k5", 5}}, {ab});
  Mat ak = m.alg.mul(3, gen_vec(m, 0), 5, gen_vec(m, 2));
  Mat bk = m.alg.mul(3, gen_vec(m, 1), 5, gen_vec(m, 2));
  add_stage(m, {{"k7a", 7}, {"k7b", 7}}, {ak, bk});
  REQUIRE(!check_sullivan(m));

  auto cert = formality_certificate(m.alg, 8);
  REQUIRE(cert.has_value());
  CHECK(!check_morphism(cert->model.alg, m.alg, cert->psi));

  // Zero-differential target: the certificate is the model map itself, so
  // every killer generator maps to zero.
  Cohomology h = cohomology(m.alg);
  TruncatedCDGA ha = cohomology_algebra(m.alg, h);
  auto hcert = formality_certificate(ha, 6);
  REQUIRE(hcert.has_value());
  for (size_t i = 0; i < hcert->model.gens.size(); ++i) {
    const Mat& dv = hcert->model.dgen[i];
    if (dv.rows == 0 && dv.cols == 0) continue;
    int k = hcert->model.gens[i].degree;
    CHECK(hcert->psi[k].col(hcert->model.gen_pos[i]).is_zero());
  }
}

TEST_CASE("formality search is honestly inconclusive on a Massey example") {
  Presentation p;
  p.cap = 10;
  p.gens = {{"a", 3}, {"b", 3}, {"x", 5}};
  p.differential = {{"x", "a*b"}};
  PresentedCDGA a = realize(p);

  // Below the obstruction degree the certificate still exists...
  auto low = formality_certificate(a.alg, 6);
  CHECK(low.has_value());
  // ...but the triple Massey product <a,a,b> obstructs it at degree eight.
  auto high = formality_certificate(a.alg, 8);
  CHECK(!high.has_value());
}
