#include "equimod/subspace.hpp"

#include <stdexcept>

namespace equimod {

bool Subspace::contains(const Mat& v) const {
  if (v.rows != ambient_dim || v.cols != 1)
    throw std::invalid_argument("Subspace::contains: shape mismatch");
  if (basis.cols == 0) return v.is_zero();
  return solve(basis, v).has_value();
}

Subspace span_of(const Mat& m) {
  Subspace s;
  s.ambient_dim = m.rows;
  // Canonicalize: vectors as rows, RREF, keep nonzero rows, back to columns.
  RrefResult rr = rref(m.transpose());
  Mat b(m.rows, rr.rank);
  for (int i = 0; i < rr.rank; ++i)
    for (int j = 0; j < m.rows; ++j) b.at(j, i) = rr.reduced.at(i, j);
  s.basis = b;
  return s;
}

Subspace kernel(const Mat& m) { return span_of(kernel_basis(m)); }

Subspace image(const Mat& m) { return span_of(m); }

Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim != b.ambient_dim)
    throw std::invalid_argument("intersect: ambient mismatch");
  if (a.dim() == 0 || b.dim() == 0) return Subspace(a.ambient_dim);
  // Pairs (u, v) with A u = B v; the intersection is spanned by the A u part.
  Mat stacked = Mat::hstack(a.basis, -b.basis);
  Mat k = kernel_basis(stacked);
  Mat top(a.dim(), k.cols);
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < k.cols; ++j) top.at(i, j) = k.at(i, j);
  return span_of(a.basis * top);
}

Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim != b.ambient_dim)
    throw std::invalid_argument("sum: ambient mismatch");
  return span_of(Mat::hstack(a.basis, b.basis));
}

Subspace complement(const Subspace& sub, int ambient_dim) {
  if (sub.ambient_dim != ambient_dim)
    throw std::invalid_argument("complement: ambient mismatch");
  Subspace outer;
  outer.ambient_dim = ambient_dim;
  outer.basis = Mat::identity(ambient_dim);
  Mat chosen = complement_within(outer, sub);
  Subspace c;
  c.ambient_dim = ambient_dim;
  c.basis = chosen;
  return c;
}

Mat complement_within(const Subspace& outer, const Subspace& inner) {
  if (outer.ambient_dim != inner.ambient_dim)
    throw std::invalid_argument("complement_within: ambient mismatch");
  Mat cur = inner.basis;
  int cur_rank = inner.dim();
  Mat chosen(outer.ambient_dim, 0);
  for (int j = 0; j < outer.basis.cols; ++j) {
    Mat cand = Mat::hstack(cur, outer.basis.col(j));
    if (rank(cand) > cur_rank) {
      cur = cand;
      ++cur_rank;
      chosen = Mat::hstack(chosen, outer.basis.col(j));
    }
  }
  return chosen;
}

QuotientMap quotient_map(int ambient_dim, const Subspace& sub) {
  if (sub.ambient_dim != ambient_dim)
    throw std::invalid_argument("quotient_map: ambient mismatch");
  QuotientMap qm;
  qm.coker_dim = ambient_dim - sub.dim();
  if (sub.dim() == 0) {
    qm.q = Mat::identity(ambient_dim);
    return qm;
  }
  // Rows annihilating sub: canonical kernel basis of basis^T, as rows.
  Mat ann = kernel_basis(sub.basis.transpose());  // ambient x coker_dim
  Subspace canon = span_of(ann);
  qm.q = canon.basis.transpose();
  return qm;
}

}  // namespace equimod
