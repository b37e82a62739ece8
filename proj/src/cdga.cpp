#include "equimod/cdga.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace equimod {

namespace {

std::string deg_str(int k) { return std::to_string(k); }

Mat basis_vec(int n, int i) {
  Mat v(n, 1);
  v.at(i, 0) = Rat(1);
  return v;
}

}  // namespace

Mat TruncatedCDGA::unit_vec() const { return basis_vec(dims[0], unit); }

Mat TruncatedCDGA::mul(int i, const Mat& x, int j, const Mat& y) const {
  if (i < 0 || j < 0 || i + j > cap)
    throw std::invalid_argument("mul: degree pair out of range");
  if (x.rows != dims[i] || x.cols != 1 || y.rows != dims[j] || y.cols != 1)
    throw std::invalid_argument("mul: operand shape mismatch");
  const Mat& t = mult[i][j];
  Mat out(dims[i + j], 1);
  for (int a = 0; a < dims[i]; ++a) {
    if (x.at(a, 0) == 0) continue;
    for (int b = 0; b < dims[j]; ++b) {
      if (y.at(b, 0) == 0) continue;
      Rat c = x.at(a, 0) * y.at(b, 0);
      int col = a * dims[j] + b;
      for (int r = 0; r < out.rows; ++r) out.at(r, 0) += c * t.at(r, col);
    }
  }
  return out;
}

Mat TruncatedCDGA::d(int k, const Mat& x) const {
  if (k < 0 || k >= cap) throw std::invalid_argument("d: degree out of range");
  return diff[k] * x;
}

TruncatedCDGA TruncatedCDGA::rationals(int cap) {
  TruncatedCDGA a;
  a.cap = cap;
  a.dims.assign(cap + 1, 0);
  a.dims[0] = 1;
  a.names.resize(cap + 1);
  a.names[0] = {"1"};
  a.mult.resize(cap + 1);
  for (int i = 0; i <= cap; ++i) {
    a.mult[i].resize(cap - i + 1);
    for (int j = 0; i + j <= cap; ++j)
      a.mult[i][j] = Mat(a.dims[i + j], a.dims[i] * a.dims[j]);
  }
  a.mult[0][0].at(0, 0) = Rat(1);
  a.diff.resize(cap);
  for (int k = 0; k < cap; ++k) a.diff[k] = Mat(a.dims[k + 1], a.dims[k]);
  a.unit = 0;
  return a;
}

std::optional<std::string> check_algebra(const TruncatedCDGA& a) {
  if (a.cap < 0) return "negative cap";
  if (static_cast<int>(a.dims.size()) != a.cap + 1) return "dims size mismatch";
  if (static_cast<int>(a.names.size()) != a.cap + 1)
    return "names size mismatch";
  for (int k = 0; k <= a.cap; ++k) {
    if (a.dims[k] < 0) return "negative dimension in degree " + deg_str(k);
    if (static_cast<int>(a.names[k].size()) != a.dims[k])
      return "name count mismatch in degree " + deg_str(k);
  }
  if (a.dims[0] != 1) return "degree 0 is not one-dimensional";
  if (a.unit != 0) return "unit index out of place";
  if (static_cast<int>(a.mult.size()) != a.cap + 1)
    return "mult table size mismatch";
  for (int i = 0; i <= a.cap; ++i) {
    if (static_cast<int>(a.mult[i].size()) != a.cap - i + 1)
      return "mult table size mismatch at degree " + deg_str(i);
    for (int j = 0; i + j <= a.cap; ++j) {
      const Mat& t = a.mult[i][j];
      if (t.rows != a.dims[i + j] || t.cols != a.dims[i] * a.dims[j])
        return "mult table shape mismatch at degrees (" + deg_str(i) + "," +
               deg_str(j) + ")";
    }
  }
  if (static_cast<int>(a.diff.size()) != a.cap) return "diff size mismatch";
  for (int k = 0; k < a.cap; ++k)
    if (a.diff[k].rows != a.dims[k + 1] || a.diff[k].cols != a.dims[k])
      return "diff shape mismatch at degree " + deg_str(k);

  // Unit identity on both sides.
  for (int k = 0; k <= a.cap; ++k)
    for (int b = 0; b < a.dims[k]; ++b) {
      Mat e = basis_vec(a.dims[k], b);
      if (!(a.mul(0, a.unit_vec(), k, e) == e))
        return "unit fails as left identity in degree " + deg_str(k);
      if (!(a.mul(k, e, 0, a.unit_vec()) == e))
        return "unit fails as right identity in degree " + deg_str(k);
    }
  if (a.cap >= 1 && !(a.diff[0] * a.unit_vec()).is_zero())
    return "differential of the unit is nonzero";

  // Graded commutativity.
  for (int i = 0; i <= a.cap; ++i)
    for (int j = 0; i + j <= a.cap; ++j) {
      Rat sign((i * j) % 2 == 0 ? 1 : -1);
      for (int x = 0; x < a.dims[i]; ++x)
        for (int y = 0; y < a.dims[j]; ++y) {
          Mat lhs = a.mult[i][j].col(x * a.dims[j] + y);
          Mat rhs = a.mult[j][i].col(y * a.dims[i] + x) * sign;
          if (!(lhs == rhs))
            return "graded commutativity fails at degrees (" + deg_str(i) +
                   "," + deg_str(j) + ")";
        }
    }

  // Associativity.
  for (int i = 0; i <= a.cap; ++i)
    for (int j = 0; i + j <= a.cap; ++j)
      for (int k = 0; i + j + k <= a.cap; ++k)
        for (int x = 0; x < a.dims[i]; ++x)
          for (int y = 0; y < a.dims[j]; ++y) {
            Mat xy = a.mult[i][j].col(x * a.dims[j] + y);
            Mat ey = basis_vec(a.dims[j], y);
            Mat ex = basis_vec(a.dims[i], x);
            for (int z = 0; z < a.dims[k]; ++z) {
              Mat ez = basis_vec(a.dims[k], z);
              Mat yz = a.mult[j][k].col(y * a.dims[k] + z);
              Mat lhs = a.mul(i + j, xy, k, ez);
              Mat rhs = a.mul(i, ex, j + k, yz);
              if (!(lhs == rhs))
                return "associativity fails at degrees (" + deg_str(i) + "," +
                       deg_str(j) + "," + deg_str(k) + ")";
            }
          }

  // d^2 = 0.
  for (int k = 0; k + 2 <= a.cap; ++k)
    if (!(a.diff[k + 1] * a.diff[k]).is_zero())
      return "d^2 is nonzero at degree " + deg_str(k);

  // Leibniz rule.
  for (int i = 0; i <= a.cap; ++i)
    for (int j = 0; i + j < a.cap; ++j) {
      Rat sign(i % 2 == 0 ? 1 : -1);
      for (int x = 0; x < a.dims[i]; ++x)
        for (int y = 0; y < a.dims[j]; ++y) {
          Mat prod = a.mult[i][j].col(x * a.dims[j] + y);
          Mat lhs = a.diff[i + j] * prod;
          Mat ex = basis_vec(a.dims[i], x);
          Mat ey = basis_vec(a.dims[j], y);
          Mat rhs = a.mul(i + 1, a.diff[i] * ex, j, ey) +
                    a.mul(i, ex, j + 1, a.diff[j] * ey) * sign;
          if (!(lhs == rhs))
            return "Leibniz rule fails at degrees (" + deg_str(i) + "," +
                   deg_str(j) + ")";
        }
    }
  return std::nullopt;
}

// ----------------------------------------------------------- presentations

Mat PresentedCDGA::reduce(int degree, const Mat& free_vec) const {
  const RrefResult& id = ideal[degree];
  Mat v = free_vec;
  if (v.rows != fb.dim(degree) || v.cols != 1)
    throw std::invalid_argument("reduce: shape mismatch");
  for (size_t r = 0; r < id.pivot_cols.size(); ++r) {
    int pc = id.pivot_cols[r];
    Rat c = v.at(pc, 0);
    if (c == 0) continue;
    for (int j = 0; j < v.rows; ++j)
      v.at(j, 0) -= c * id.reduced.at(static_cast<int>(r), j);
  }
  const std::vector<int>& kept = quot_monos[degree];
  Mat out(static_cast<int>(kept.size()), 1);
  for (size_t t = 0; t < kept.size(); ++t) out.at(static_cast<int>(t), 0) = v.at(kept[t], 0);
  return out;
}

Mat PresentedCDGA::unreduce(int degree, const Mat& quot_vec) const {
  const std::vector<int>& kept = quot_monos[degree];
  if (quot_vec.rows != static_cast<int>(kept.size()) || quot_vec.cols != 1)
    throw std::invalid_argument("unreduce: shape mismatch");
  Mat out(fb.dim(degree), 1);
  for (size_t t = 0; t < kept.size(); ++t)
    out.at(kept[t], 0) = quot_vec.at(static_cast<int>(t), 0);
  return out;
}

PresentedCDGA realize(const Presentation& p) {
  if (p.cap < 0) throw std::invalid_argument("realize: negative cap");
  std::set<std::string> seen;
  for (const GenSpec& g : p.gens) {
    if (g.degree < 1)
      throw std::invalid_argument("realize: generator '" + g.name +
                                  "' must have positive degree");
    if (!seen.insert(g.name).second)
      throw std::invalid_argument("realize: duplicate generator '" + g.name +
                                  "'");
  }

  PresentedCDGA out;
  out.fb = FreeBasis(p.gens, p.cap);
  const FreeBasis& fb = out.fb;

  // Parse relations into homogeneous free vectors.
  for (const std::string& rel : p.relations) {
    PolyByDegree comps = poly_parse(fb, rel);
    int deg = -1;
    Mat vec;
    for (const auto& [k, v] : comps) {
      if (v.is_zero()) continue;
      if (deg != -1)
        throw std::invalid_argument("realize: relation not homogeneous: " +
                                    rel);
      deg = k;
      vec = v;
    }
    if (deg == -1) continue;  // the zero relation
    if (deg == 0)
      throw std::invalid_argument("realize: relation in degree 0: " + rel);
    out.rel_free.emplace_back(deg, vec);
  }

  // Parse differential assignments.
  out.dgen_free.assign(fb.nvars(), Mat());
  for (const auto& [name, text] : p.differential) {
    int decl = fb.gen_by_name(name);
    if (decl < 0)
      throw std::invalid_argument(
          "realize: differential assigned to unknown generator '" + name +
          "'");
    int dg = p.gens[decl].degree;
    if (dg + 1 > p.cap) {
      PolyByDegree comps = poly_parse(fb, text);
      for (const auto& [k, v] : comps)
        if (!v.is_zero())
          throw std::invalid_argument("realize: differential of '" + name +
                                      "' lands beyond cap");
      continue;
    }
    Mat v = poly_parse_homogeneous(fb, text, dg + 1);
    out.dgen_free[fb.pos_of_gen(decl)] = v;
  }

  // Degreewise ideal spans: b * r over monomials b of complementary degree.
  out.ideal.resize(p.cap + 1);
  out.quot_monos.resize(p.cap + 1);
  for (int k = 0; k <= p.cap; ++k) {
    std::vector<std::vector<Rat>> rows;
    for (const auto& [dr, rvec] : out.rel_free) {
      if (dr > k) continue;
      for (const Expo& b : fb.monos[k - dr]) {
        std::vector<Rat> row(fb.dim(k), Rat(0));
        bool nonzero = false;
        for (int t = 0; t < rvec.rows; ++t) {
          if (rvec.at(t, 0) == 0) continue;
          auto prod = fb.mono_mul(b, fb.monos[dr][t]);
          if (!prod) continue;
          int idx = fb.index_of(k, prod->second);
          row[idx] += Rat(prod->first) * rvec.at(t, 0);
          nonzero = true;
        }
        if (nonzero) rows.push_back(std::move(row));
      }
    }
    if (rows.empty()) {
      out.ideal[k] = RrefResult{0, Mat(0, fb.dim(k)), {}};
    } else {
      out.ideal[k] = rref(Mat::from_rows(rows));
      // Drop zero rows below the rank so reduce() touches pivot rows only.
      Mat trimmed(out.ideal[k].rank, fb.dim(k));
      for (int r = 0; r < out.ideal[k].rank; ++r)
        for (int c = 0; c < fb.dim(k); ++c)
          trimmed.at(r, c) = out.ideal[k].reduced.at(r, c);
      out.ideal[k].reduced = trimmed;
    }
    std::set<int> pivots(out.ideal[k].pivot_cols.begin(),
                         out.ideal[k].pivot_cols.end());
    for (int m = 0; m < fb.dim(k); ++m)
      if (!pivots.count(m)) out.quot_monos[k].push_back(m);
  }

  // d must preserve the relation ideal.
  for (const auto& [dr, rvec] : out.rel_free) {
    if (dr + 1 > p.cap) continue;
    Mat dv(fb.dim(dr + 1), 1);
    for (int t = 0; t < rvec.rows; ++t) {
      if (rvec.at(t, 0) == 0) continue;
      dv = dv + fb.mono_d(fb.monos[dr][t], out.dgen_free) * rvec.at(t, 0);
    }
    if (!out.reduce(dr + 1, dv).is_zero())
      throw std::invalid_argument(
          "realize: differential incompatible with relation: " +
          poly_str(fb, dr, rvec));
  }

  // Assemble the truncated algebra.
  TruncatedCDGA& a = out.alg;
  a.cap = p.cap;
  a.dims.resize(p.cap + 1);
  a.names.resize(p.cap + 1);
  for (int k = 0; k <= p.cap; ++k) {
    a.dims[k] = static_cast<int>(out.quot_monos[k].size());
    for (int m : out.quot_monos[k]) a.names[k].push_back(fb.mono_str(fb.monos[k][m]));
  }
  if (a.dims[0] != 1)
    throw std::invalid_argument("realize: degree 0 collapsed by relations");
  a.unit = 0;
  a.mult.resize(p.cap + 1);
  for (int i = 0; i <= p.cap; ++i) {
    a.mult[i].resize(p.cap - i + 1);
    for (int j = 0; i + j <= p.cap; ++j) {
      Mat t(a.dims[i + j], a.dims[i] * a.dims[j]);
      for (int x = 0; x < a.dims[i]; ++x) {
        const Expo& mx = fb.monos[i][out.quot_monos[i][x]];
        for (int y = 0; y < a.dims[j]; ++y) {
          const Expo& my = fb.monos[j][out.quot_monos[j][y]];
          auto prod = fb.mono_mul(mx, my);
          if (!prod) continue;
          Mat freev(fb.dim(i + j), 1);
          freev.at(fb.index_of(i + j, prod->second), 0) = Rat(prod->first);
          Mat q = out.reduce(i + j, freev);
          for (int r = 0; r < q.rows; ++r) t.at(r, x * a.dims[j] + y) = q.at(r, 0);
        }
      }
      a.mult[i][j] = std::move(t);
    }
  }
  a.diff.resize(p.cap);
  for (int k = 0; k < p.cap; ++k) {
    Mat dmat(a.dims[k + 1], a.dims[k]);
    for (int x = 0; x < a.dims[k]; ++x) {
      Mat dv = fb.mono_d(fb.monos[k][out.quot_monos[k][x]], out.dgen_free);
      Mat q = out.reduce(k + 1, dv);
      for (int r = 0; r < q.rows; ++r) dmat.at(r, x) = q.at(r, 0);
    }
    a.diff[k] = std::move(dmat);
  }
  return out;
}

std::vector<Mat> morphism_from_gen_images(const PresentedCDGA& src,
                                          const TruncatedCDGA& tgt,
                                          const std::vector<Mat>& images) {
  const FreeBasis& fb = src.fb;
  if (images.size() != fb.gens.size())
    throw std::invalid_argument("morphism_from_gen_images: image count");
  for (size_t i = 0; i < images.size(); ++i) {
    int dg = fb.gens[i].degree;
    if (dg > tgt.cap)
      throw std::invalid_argument(
          "morphism_from_gen_images: generator degree exceeds target cap");
    if (images[i].rows != tgt.dims[dg] || images[i].cols != 1)
      throw std::invalid_argument(
          "morphism_from_gen_images: image shape mismatch for '" +
          fb.gens[i].name + "'");
  }

  // Evaluate a free monomial in the target, factors in position order.
  auto eval_mono = [&](const Expo& e) {
    Mat val = tgt.unit_vec();
    int deg = 0;
    for (int pos = 0; pos < fb.nvars(); ++pos) {
      int decl = fb.order[pos];
      int dg = fb.gens[decl].degree;
      for (int t = 0; t < e[pos]; ++t) {
        val = tgt.mul(deg, val, dg, images[decl]);
        deg += dg;
      }
    }
    return val;
  };

  for (const auto& [dr, rvec] : src.rel_free) {
    Mat acc(tgt.dims[dr], 1);
    for (int t = 0; t < rvec.rows; ++t)
      if (!(rvec.at(t, 0) == 0))
        acc = acc + eval_mono(fb.monos[dr][t]) * rvec.at(t, 0);
    if (!acc.is_zero())
      throw std::invalid_argument(
          "morphism_from_gen_images: images do not kill relation: " +
          poly_str(fb, dr, rvec));
  }

  std::vector<Mat> maps(src.alg.cap + 1);
  for (int k = 0; k <= src.alg.cap; ++k) {
    Mat m(tgt.dims[k], src.alg.dims[k]);
    for (int x = 0; x < src.alg.dims[k]; ++x) {
      Mat val = eval_mono(fb.monos[k][src.quot_monos[k][x]]);
      for (int r = 0; r < m.rows; ++r) m.at(r, x) = val.at(r, 0);
    }
    maps[k] = std::move(m);
  }
  return maps;
}

// ----------------------------------------------------------- morphisms

std::optional<std::string> check_morphism(const TruncatedCDGA& src,
                                          const TruncatedCDGA& tgt,
                                          const std::vector<Mat>& maps) {
  if (src.cap > tgt.cap) return "source cap exceeds target cap";
  if (static_cast<int>(maps.size()) != src.cap + 1) return "map count mismatch";
  for (int k = 0; k <= src.cap; ++k)
    if (maps[k].rows != tgt.dims[k] || maps[k].cols != src.dims[k])
      return "map shape mismatch in degree " + deg_str(k);
  if (!(maps[0] * src.unit_vec() == tgt.unit_vec()))
    return "unit not preserved";
  for (int i = 0; i <= src.cap; ++i)
    for (int j = 0; i + j <= src.cap; ++j)
      for (int x = 0; x < src.dims[i]; ++x)
        for (int y = 0; y < src.dims[j]; ++y) {
          Mat lhs = maps[i + j] * src.mult[i][j].col(x * src.dims[j] + y);
          Mat rhs = tgt.mul(i, maps[i].col(x), j, maps[j].col(y));
          if (!(lhs == rhs))
            return "multiplicativity fails at degrees (" + deg_str(i) + "," +
                   deg_str(j) + ")";
        }
  for (int k = 0; k < src.cap; ++k)
    if (!(maps[k + 1] * src.diff[k] == tgt.diff[k] * maps[k]))
      return "differential not respected at degree " + deg_str(k);
  return std::nullopt;
}

std::vector<Mat> compose(const std::vector<Mat>& outer,
                         const std::vector<Mat>& inner) {
  if (outer.size() != inner.size())
    throw std::invalid_argument("compose: degree count mismatch");
  std::vector<Mat> out(outer.size());
  for (size_t k = 0; k < outer.size(); ++k) out[k] = outer[k] * inner[k];
  return out;
}

std::vector<Mat> identity_morphism(const TruncatedCDGA& a) {
  std::vector<Mat> out(a.cap + 1);
  for (int k = 0; k <= a.cap; ++k) out[k] = Mat::identity(a.dims[k]);
  return out;
}

RetractionWitness verify_retraction(const TruncatedCDGA& big,
                                    const TruncatedCDGA& small,
                                    const std::vector<Mat>& r,
                                    const std::vector<Mat>& i) {
  if (auto err = check_morphism(big, small, r))
    throw std::invalid_argument("verify_retraction: r is not a morphism: " +
                                *err);
  if (auto err = check_morphism(small, big, i))
    throw std::invalid_argument("verify_retraction: i is not a morphism: " +
                                *err);
  for (int k = 0; k <= small.cap; ++k)
    if (!(r[k] * i[k] == Mat::identity(small.dims[k])))
      throw std::invalid_argument("verify_retraction: r.i != id at degree " +
                                  deg_str(k));
  return RetractionWitness{r, i};
}

// ----------------------------------------------------------- cohomology

Mat Cohomology::class_of(int k, const Mat& z) const {
  if (k < 0 || k > through)
    throw std::invalid_argument("class_of: degree beyond trusted range");
  Mat m = Mat::hstack(reps[k], bnd[k]);
  auto sol = solve(m, z);
  if (!sol)
    throw std::invalid_argument("class_of: input is not a cocycle in degree " +
                                deg_str(k));
  Mat out(dims[k], z.cols);
  for (int r = 0; r < dims[k]; ++r)
    for (int c = 0; c < z.cols; ++c) out.at(r, c) = sol->at(r, c);
  return out;
}

Cohomology cohomology(const TruncatedCDGA& a) {
  if (a.cap < 1)
    throw std::invalid_argument("cohomology: requires cap >= 1");
  Cohomology h;
  h.through = a.cap - 1;
  h.dims.resize(h.through + 1);
  h.reps.resize(h.through + 1);
  h.bnd.resize(h.through + 1);
  h.cyc.resize(h.through + 1);
  for (int k = 0; k <= h.through; ++k) {
    Subspace z = kernel(a.diff[k]);
    Subspace b = (k == 0) ? Subspace(a.dims[0]) : image(a.diff[k - 1]);
    h.cyc[k] = z.basis;
    h.bnd[k] = b.basis;
    h.reps[k] = complement_within(z, b);
    h.dims[k] = h.reps[k].cols;
  }
  return h;
}

TruncatedCDGA cohomology_algebra(const TruncatedCDGA& a, const Cohomology& h) {
  TruncatedCDGA out;
  out.cap = h.through;
  out.dims = h.dims;
  out.names.resize(out.cap + 1);
  for (int k = 0; k <= out.cap; ++k)
    for (int i = 0; i < out.dims[k]; ++i)
      out.names[k].push_back("h" + deg_str(k) + "_" + deg_str(i));
  out.unit = 0;
  out.mult.resize(out.cap + 1);
  for (int i = 0; i <= out.cap; ++i) {
    out.mult[i].resize(out.cap - i + 1);
    for (int j = 0; i + j <= out.cap; ++j) {
      Mat t(out.dims[i + j], out.dims[i] * out.dims[j]);
      for (int x = 0; x < out.dims[i]; ++x)
        for (int y = 0; y < out.dims[j]; ++y) {
          Mat prod = a.mul(i, h.reps[i].col(x), j, h.reps[j].col(y));
          Mat cls = h.class_of(i + j, prod);
          for (int r = 0; r < cls.rows; ++r)
            t.at(r, x * out.dims[j] + y) = cls.at(r, 0);
        }
      out.mult[i][j] = std::move(t);
    }
  }
  out.diff.resize(out.cap);
  for (int k = 0; k < out.cap; ++k) out.diff[k] = Mat(out.dims[k + 1], out.dims[k]);
  return out;
}

Mat induced_on_h(const std::vector<Mat>& f, const Cohomology& src_h,
                 const Cohomology& tgt_h, int k) {
  if (k < 0 || k > src_h.through || k > tgt_h.through)
    throw std::invalid_argument("induced_on_h: degree beyond trusted range");
  return tgt_h.class_of(k, f[k] * src_h.reps[k]);
}

bool is_one_connected(const TruncatedCDGA& a) {
  return a.dims[0] == 1 && (a.cap < 1 || a.dims[1] == 0);
}

// ----------------------------------------------------------- wedge/pullback

WedgeResult wedge(const TruncatedCDGA& a, const TruncatedCDGA& b) {
  if (a.cap != b.cap)
    throw std::invalid_argument("wedge: cap mismatch");
  if (a.dims[0] != 1 || b.dims[0] != 1)
    throw std::invalid_argument("wedge: summands must be connected");
  int cap = a.cap;
  WedgeResult w;
  TruncatedCDGA& s = w.alg;
  s.cap = cap;
  s.dims.resize(cap + 1);
  s.names.resize(cap + 1);
  s.dims[0] = 1;
  s.names[0] = {"1"};
  for (int k = 1; k <= cap; ++k) {
    s.dims[k] = a.dims[k] + b.dims[k];
    for (const std::string& n : a.names[k]) s.names[k].push_back("l_" + n);
    for (const std::string& n : b.names[k]) s.names[k].push_back("r_" + n);
  }
  s.unit = 0;

  w.incl_a.resize(cap + 1);
  w.incl_b.resize(cap + 1);
  w.proj_a.resize(cap + 1);
  w.proj_b.resize(cap + 1);
  w.incl_a[0] = w.incl_b[0] = w.proj_a[0] = w.proj_b[0] = Mat::identity(1);
  for (int k = 1; k <= cap; ++k) {
    Mat ia(s.dims[k], a.dims[k]), ib(s.dims[k], b.dims[k]);
    Mat pa(a.dims[k], s.dims[k]), pb(b.dims[k], s.dims[k]);
    for (int i = 0; i < a.dims[k]; ++i) {
      ia.at(i, i) = Rat(1);
      pa.at(i, i) = Rat(1);
    }
    for (int i = 0; i < b.dims[k]; ++i) {
      ib.at(a.dims[k] + i, i) = Rat(1);
      pb.at(i, a.dims[k] + i) = Rat(1);
    }
    w.incl_a[k] = std::move(ia);
    w.incl_b[k] = std::move(ib);
    w.proj_a[k] = std::move(pa);
    w.proj_b[k] = std::move(pb);
  }

  s.mult.resize(cap + 1);
  for (int i = 0; i <= cap; ++i) {
    s.mult[i].resize(cap - i + 1);
    for (int j = 0; i + j <= cap; ++j) {
      Mat t(s.dims[i + j], s.dims[i] * s.dims[j]);
      if (i == 0 && j == 0) {
        t.at(0, 0) = Rat(1);
      } else if (i == 0) {
        for (int y = 0; y < s.dims[j]; ++y) t.at(y, y) = Rat(1);
      } else if (j == 0) {
        for (int x = 0; x < s.dims[i]; ++x) t.at(x, x * 1 + 0) = Rat(1);
      } else {
        // Positive-degree blocks: a x a and b x b; cross products vanish.
        for (int x = 0; x < a.dims[i]; ++x)
          for (int y = 0; y < a.dims[j]; ++y) {
            Mat prod = w.incl_a[i + j] * a.mult[i][j].col(x * a.dims[j] + y);
            for (int r = 0; r < prod.rows; ++r)
              t.at(r, x * s.dims[j] + y) = prod.at(r, 0);
          }
        for (int x = 0; x < b.dims[i]; ++x)
          for (int y = 0; y < b.dims[j]; ++y) {
            Mat prod = w.incl_b[i + j] * b.mult[i][j].col(x * b.dims[j] + y);
            int col = (a.dims[i] + x) * s.dims[j] + (a.dims[j] + y);
            for (int r = 0; r < prod.rows; ++r) t.at(r, col) = prod.at(r, 0);
          }
      }
      s.mult[i][j] = std::move(t);
    }
  }

  s.diff.resize(cap);
  for (int k = 0; k < cap; ++k)
    s.diff[k] = w.incl_a[k + 1] * a.diff[k] * w.proj_a[k] +
                w.incl_b[k + 1] * b.diff[k] * w.proj_b[k];
  if (cap >= 1) {
    // Degree 0 -> 1: the unit has zero differential.
    s.diff[0] = Mat(s.dims[1], 1);
  }
  return w;
}

std::vector<Mat> wedge_morphism(const WedgeResult& src, const WedgeResult& tgt,
                                const std::vector<Mat>& f,
                                const std::vector<Mat>& g) {
  int cap = src.alg.cap;
  std::vector<Mat> out(cap + 1);
  out[0] = Mat::identity(1);
  for (int k = 1; k <= cap; ++k)
    out[k] = tgt.incl_a[k] * f[k] * src.proj_a[k] +
             tgt.incl_b[k] * g[k] * src.proj_b[k];
  return out;
}

PullbackResult pullback(const TruncatedCDGA& a, const TruncatedCDGA& b,
                        const TruncatedCDGA& c, const std::vector<Mat>& f,
                        const std::vector<Mat>& g) {
  if (a.cap != b.cap || a.cap != c.cap)
    throw std::invalid_argument("pullback: cap mismatch");
  if (auto err = check_morphism(a, c, f))
    throw std::invalid_argument("pullback: f is not a morphism: " + *err);
  if (auto err = check_morphism(b, c, g))
    throw std::invalid_argument("pullback: g is not a morphism: " + *err);
  int cap = a.cap;
  PullbackResult pb;
  pb.basis.resize(cap + 1);
  pb.pi1.resize(cap + 1);
  pb.pi2.resize(cap + 1);
  TruncatedCDGA& kk = pb.alg;
  kk.cap = cap;
  kk.dims.resize(cap + 1);
  kk.names.resize(cap + 1);
  for (int k = 0; k <= cap; ++k) {
    Subspace ker = kernel(Mat::hstack(f[k], -(g[k])));
    pb.basis[k] = ker.basis;
    kk.dims[k] = ker.dim();
    for (int i = 0; i < kk.dims[k]; ++i)
      kk.names[k].push_back("k" + deg_str(k) + "_" + deg_str(i));
    Mat p1(a.dims[k], kk.dims[k]), p2(b.dims[k], kk.dims[k]);
    for (int r = 0; r < a.dims[k]; ++r)
      for (int cgi = 0; cgi < kk.dims[k]; ++cgi)
        p1.at(r, cgi) = pb.basis[k].at(r, cgi);
    for (int r = 0; r < b.dims[k]; ++r)
      for (int cgi = 0; cgi < kk.dims[k]; ++cgi)
        p2.at(r, cgi) = pb.basis[k].at(a.dims[k] + r, cgi);
    pb.pi1[k] = std::move(p1);
    pb.pi2[k] = std::move(p2);
  }
  if (kk.dims[0] != 1)
    throw std::invalid_argument("pullback: degree 0 is not one-dimensional");
  // Normalize the unit: the degree-0 kernel is spanned by (1,1).
  {
    Mat u = Mat::vstack(a.unit_vec(), b.unit_vec());
    auto sol = solve(pb.basis[0], u);
    if (!sol || !(pb.basis[0] * *sol == u))
      throw std::invalid_argument("pullback: unit pair missing in degree 0");
    pb.basis[0] = u;
    pb.pi1[0] = a.unit_vec();
    pb.pi2[0] = b.unit_vec();
  }
  kk.unit = 0;

  kk.mult.resize(cap + 1);
  for (int i = 0; i <= cap; ++i) {
    kk.mult[i].resize(cap - i + 1);
    for (int j = 0; i + j <= cap; ++j) {
      Mat t(kk.dims[i + j], kk.dims[i] * kk.dims[j]);
      for (int x = 0; x < kk.dims[i]; ++x)
        for (int y = 0; y < kk.dims[j]; ++y) {
          Mat pa = a.mul(i, pb.pi1[i].col(x), j, pb.pi1[j].col(y));
          Mat pc = b.mul(i, pb.pi2[i].col(x), j, pb.pi2[j].col(y));
          auto sol = solve(pb.basis[i + j], Mat::vstack(pa, pc));
          if (!sol)
            throw std::runtime_error(
                "pullback: product escaped the pullback in degree " +
                deg_str(i + j));
          for (int r = 0; r < sol->rows; ++r)
            t.at(r, x * kk.dims[j] + y) = sol->at(r, 0);
        }
      kk.mult[i][j] = std::move(t);
    }
  }
  kk.diff.resize(cap);
  for (int k = 0; k < cap; ++k) {
    Mat dk(kk.dims[k + 1], kk.dims[k]);
    Mat stacked = Mat::vstack(a.diff[k] * pb.pi1[k], b.diff[k] * pb.pi2[k]);
    auto sol = solve(pb.basis[k + 1], stacked);
    if (!sol)
      throw std::runtime_error(
          "pullback: differential escaped the pullback in degree " +
          deg_str(k));
    kk.diff[k] = *sol;
  }
  return pb;
}

std::vector<Mat> mediate(const PullbackResult& pb, const TruncatedCDGA& dsrc,
                         const std::vector<Mat>& h, const std::vector<Mat>& e) {
  int cap = pb.alg.cap;
  if (static_cast<int>(h.size()) != cap + 1 ||
      static_cast<int>(e.size()) != cap + 1)
    throw std::invalid_argument("mediate: map count mismatch");
  std::vector<Mat> tau(cap + 1);
  for (int k = 0; k <= cap; ++k) {
    if (h[k].cols != dsrc.dims[k] || e[k].cols != dsrc.dims[k])
      throw std::invalid_argument("mediate: map shape mismatch");
    auto sol = solve(pb.basis[k], Mat::vstack(h[k], e[k]));
    if (!sol)
      throw std::invalid_argument(
          "mediate: cone maps do not agree over the corner at degree " +
          deg_str(k));
    tau[k] = *sol;
  }
  return tau;
}

// ----------------------------------------------------------- extensions

int ExtendedCDGA::pair_index(int k, int mono_deg, int mono_idx,
                             int base_idx) const {
  int off = 0;
  for (int m = 0; m < mono_deg; ++m) off += genb.dim(m) * base_dims[k - m];
  return off + mono_idx * base_dims[k - mono_deg] + base_idx;
}

int ExtendedCDGA::gen_index(int decl_index) const {
  int dg = genb.gens[decl_index].degree;
  Expo e(genb.nvars(), 0);
  e[genb.pos_of_gen(decl_index)] = 1;
  int j = genb.index_of(dg, e);
  return pair_index(dg, dg, j, 0);
}

ExtendedCDGA extend_algebra_shell(const TruncatedCDGA& base,
                                  const std::vector<GenSpec>& new_gens) {
  for (const GenSpec& g : new_gens)
    if (g.degree < 1 || g.degree > base.cap)
      throw std::invalid_argument(
          "extend_algebra_shell: generator degree out of range for '" +
          g.name + "'");
  ExtendedCDGA ext;
  ext.base_dims = base.dims;
  ext.base_diff = base.diff;
  ext.genb = FreeBasis(new_gens, base.cap);
  const FreeBasis& gb = ext.genb;
  int cap = base.cap;

  TruncatedCDGA& a = ext.alg;
  a.cap = cap;
  a.dims.resize(cap + 1);
  a.names.resize(cap + 1);
  for (int k = 0; k <= cap; ++k) {
    int total = 0;
    for (int m = 0; m <= k; ++m) {
      for (int j = 0; j < gb.dim(m); ++j) {
        std::string ms = gb.mono_str(gb.monos[m][j]);
        for (int x = 0; x < base.dims[k - m]; ++x) {
          if (m == 0)
            a.names[k].push_back(base.names[k][x]);
          else if (x == base.unit && k == m)
            a.names[k].push_back(ms);
          else
            a.names[k].push_back(base.names[k - m][x] + "*" + ms);
        }
      }
      total += gb.dim(m) * base.dims[k - m];
    }
    a.dims[k] = total;
  }
  a.unit = base.unit;

  ext.incl.resize(cap + 1);
  for (int k = 0; k <= cap; ++k) {
    Mat inc(a.dims[k], base.dims[k]);
    for (int x = 0; x < base.dims[k]; ++x) inc.at(x, x) = Rat(1);
    ext.incl[k] = std::move(inc);
  }

  // Multiplication: (a.m)(b.n) = (-1)^{|m||b|} (ab).(mn).
  a.mult.resize(cap + 1);
  for (int i = 0; i <= cap; ++i) {
    a.mult[i].resize(cap - i + 1);
    for (int j = 0; i + j <= cap; ++j) {
      Mat t(a.dims[i + j], a.dims[i] * a.dims[j]);
      int colx = 0;
      for (int mi = 0; mi <= i; ++mi)
        for (int ji = 0; ji < gb.dim(mi); ++ji)
          for (int xi = 0; xi < base.dims[i - mi]; ++xi, ++colx) {
            int coly = 0;
            for (int mj = 0; mj <= j; ++mj)
              for (int jj = 0; jj < gb.dim(mj); ++jj)
                for (int xj = 0; xj < base.dims[j - mj]; ++xj, ++coly) {
                  auto prod = gb.mono_mul(gb.monos[mi][ji], gb.monos[mj][jj]);
                  if (!prod) continue;
                  int mn = mi + mj;
                  int mono_idx = gb.index_of(mn, prod->second);
                  // Koszul sign for moving m (degree mi) past b (degree j-mj).
                  Rat sign(prod->first);
                  if ((mi * (j - mj)) % 2 != 0) sign = -sign;
                  const Mat& bt = base.mult[i - mi][j - mj];
                  int bcol = xi * base.dims[j - mj] + xj;
                  for (int r = 0; r < base.dims[i + j - mn]; ++r) {
                    if (bt.at(r, bcol) == 0) continue;
                    int row = ext.pair_index(i + j, mn, mono_idx, r);
                    t.at(row, colx * a.dims[j] + coly) +=
                        sign * bt.at(r, bcol);
                  }
                }
          }
      a.mult[i][j] = std::move(t);
    }
  }

  // Differential left zero until set_extension_differential.
  a.diff.resize(cap);
  for (int k = 0; k < cap; ++k) a.diff[k] = Mat(a.dims[k + 1], a.dims[k]);
  return ext;
}

void set_extension_differential(ExtendedCDGA& ext,
                                const std::vector<Mat>& dgen) {
  const FreeBasis& gb = ext.genb;
  TruncatedCDGA& a = ext.alg;
  int cap = a.cap;
  if (dgen.size() != gb.gens.size())
    throw std::invalid_argument("set_extension_differential: image count");
  std::vector<Mat> dg_by_decl(gb.gens.size());
  for (size_t i = 0; i < dgen.size(); ++i) {
    int deg = gb.gens[i].degree;
    if (dgen[i].rows == 0 && dgen[i].cols == 0) {
      if (deg + 1 <= cap) dg_by_decl[i] = Mat(a.dims[deg + 1], 1);
      continue;
    }
    if (deg + 1 > cap)
      throw std::invalid_argument(
          "set_extension_differential: image beyond cap for '" +
          gb.gens[i].name + "'");
    if (dgen[i].rows != a.dims[deg + 1] || dgen[i].cols != 1)
      throw std::invalid_argument(
          "set_extension_differential: image shape mismatch for '" +
          gb.gens[i].name + "'");
    dg_by_decl[i] = dgen[i];
  }

  // d of generator monomials, cached by (degree, index); degree m <= cap-1.
  std::vector<std::vector<Mat>> dmono(cap);
  for (int m = 0; m + 1 <= cap; ++m) {
    dmono[m].resize(gb.dim(m));
    for (int j = 0; j < gb.dim(m); ++j) {
      const Expo& e = gb.monos[m][j];
      if (m == 0) {
        dmono[m][j] = Mat(a.dims[1], 1);
        continue;
      }
      int pos = 0;
      while (e[pos] == 0) ++pos;
      int decl = gb.order[pos];
      int gd = gb.pos_degree[pos];
      Expo rest = e;
      rest[pos] -= 1;
      int rest_deg = m - gd;
      int rest_idx = gb.index_of(rest_deg, rest);
      Mat rest_vec = Mat(a.dims[rest_deg], 1);
      rest_vec.at(ext.pair_index(rest_deg, rest_deg, rest_idx, 0), 0) = Rat(1);
      // d(g.rest) = dg.rest + (-1)^{|g|} g.d(rest)
      Mat out = a.mul(gd + 1, dg_by_decl[decl], rest_deg, rest_vec);
      if (rest_deg + 1 <= cap && rest_deg >= 1) {
        Mat gvec(a.dims[gd], 1);
        Expo ge(gb.nvars(), 0);
        ge[pos] = 1;
        gvec.at(ext.pair_index(gd, gd, gb.index_of(gd, ge), 0), 0) = Rat(1);
        Mat tail = a.mul(gd, gvec, rest_deg + 1, dmono[rest_deg][rest_idx]);
        out = (gd % 2 == 0) ? out + tail : out - tail;
      }
      dmono[m][j] = std::move(out);
    }
  }

  for (int k = 0; k < cap; ++k) {
    Mat dk(a.dims[k + 1], a.dims[k]);
    int col = 0;
    for (int m = 0; m <= k; ++m)
      for (int j = 0; j < gb.dim(m); ++j)
        for (int x = 0; x < ext.base_dims[k - m]; ++x, ++col) {
          // d(a.m) = (da).m + (-1)^{|a|} a.(dm)
          Mat acc(a.dims[k + 1], 1);
          int bdeg = k - m;
          {
            Mat mono_vec(a.dims[m], 1);
            mono_vec.at(ext.pair_index(m, m, j, 0), 0) = Rat(1);
            acc = acc + a.mul(bdeg + 1,
                              ext.incl[bdeg + 1] * ext.base_diff[bdeg].col(x),
                              m, mono_vec);
          }
          {
            Mat avec = ext.incl[bdeg] * basis_vec(ext.base_dims[bdeg], x);
            Mat tail = a.mul(bdeg, avec, m + 1, dmono[m][j]);
            acc = (bdeg % 2 == 0) ? acc + tail : acc - tail;
          }
          for (int r = 0; r < acc.rows; ++r) dk.at(r, col) = acc.at(r, 0);
        }
    a.diff[k] = std::move(dk);
  }
}

}  // namespace equimod
