#pragma once

// Subspaces of Q^n stored with RREF-canonicalized bases: the basis columns,
// read as rows, form a reduced row echelon matrix.  Two Subspace values are
// equal as subspaces iff their basis matrices compare equal.

#include <vector>

#include "equimod/mat.hpp"

namespace equimod {

struct Subspace {
  int ambient_dim = 0;
  Mat basis;  // ambient_dim x dim, columns linearly independent, canonical

  Subspace() = default;
  explicit Subspace(int ambient) : ambient_dim(ambient), basis(ambient, 0) {}

  int dim() const { return basis.cols; }
  bool contains(const Mat& v) const;  // v: ambient_dim x 1
  bool operator==(const Subspace& o) const {
    return ambient_dim == o.ambient_dim && basis == o.basis;
  }
};

// Canonical subspace spanned by the columns of m (m: ambient x k, any k).
Subspace span_of(const Mat& m);

Subspace kernel(const Mat& m);
Subspace image(const Mat& m);
Subspace intersect(const Subspace& a, const Subspace& b);
Subspace sum(const Subspace& a, const Subspace& b);

// Deterministic complement: standard basis vectors added greedily in index
// order until the span is the ambient space.  Returned basis is the chosen
// standard vectors (not re-canonicalized, so it is an actual complement).
Subspace complement(const Subspace& sub, int ambient_dim);

// Columns of `outer.basis` greedily extending `inner` to a complement of
// `inner` inside `outer`.  Requires inner ⊆ outer.
Mat complement_within(const Subspace& outer, const Subspace& inner);

// Full-row-rank q (coker_dim x ambient) with q*v = 0 iff v in sub.
struct QuotientMap {
  Mat q;
  int coker_dim = 0;
};
QuotientMap quotient_map(int ambient_dim, const Subspace& sub);

}  // namespace equimod
