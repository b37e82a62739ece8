#pragma once

// Dense exact-rational matrices with deterministic reduced row echelon form.
// The pivoting rule (first nonzero entry scanning top-to-bottom within the
// leftmost unfinished column) is fixed so that every derived object —
// kernels, envelopes, resolutions, reports — is reproducible bit for bit.

#include <optional>
#include <vector>

#include "equimod/rat.hpp"

namespace equimod {

struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<Rat> a;  // row-major, size rows*cols

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Rat(0)) {}

  Rat& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Rat& at(int i, int j) const {
    return a[static_cast<size_t>(i) * cols + j];
  }

  static Mat zero(int r, int c) { return Mat(r, c); }
  static Mat identity(int n);
  static Mat col_vec(const std::vector<Rat>& v);
  static Mat from_rows(const std::vector<std::vector<Rat>>& rows);

  bool operator==(const Mat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
  bool is_zero() const;

  Mat operator*(const Mat& o) const;
  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(const Rat& s) const;
  Mat operator-() const { return *this * Rat(-1); }

  Mat transpose() const;
  Mat col(int j) const;                       // single column as rows x 1
  std::vector<Rat> col_vecv(int j) const;     // single column as a vector
  Mat select_cols(const std::vector<int>& js) const;

  static Mat hstack(const Mat& l, const Mat& r);
  static Mat vstack(const Mat& t, const Mat& b);
};

struct RrefResult {
  int rank = 0;
  Mat reduced;
  std::vector<int> pivot_cols;
};

// Unique reduced row echelon form under the fixed pivoting rule.
RrefResult rref(const Mat& m);

int rank(const Mat& m);

// Some x with m*x = b (b may have several columns), or nullopt iff some
// column of b lies outside the column space.  Free variables are set to 0,
// so the witness is deterministic.  Throws on row-count mismatch.
std::optional<Mat> solve(const Mat& m, const Mat& b);

// Basis of the null space via free-variable parameterization; columns of the
// result are the basis vectors (cols(m) x nullity).
Mat kernel_basis(const Mat& m);

}  // namespace equimod
