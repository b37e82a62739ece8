#include "equimod/mat.hpp"

#include <stdexcept>

namespace equimod {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat Mat::col_vec(const std::vector<Rat>& v) {
  Mat m(static_cast<int>(v.size()), 1);
  for (size_t i = 0; i < v.size(); ++i) m.a[i] = v[i];
  return m;
}

Mat Mat::from_rows(const std::vector<std::vector<Rat>>& rows) {
  if (rows.empty()) return Mat(0, 0);
  Mat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows; ++i) {
    if (static_cast<int>(rows[i].size()) != m.cols)
      throw std::invalid_argument("Mat::from_rows: ragged rows");
    for (int j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

bool Mat::is_zero() const {
  for (const Rat& x : a)
    if (x != 0) return false;
  return true;
}

Mat Mat::operator*(const Mat& o) const {
  if (cols != o.rows) throw std::invalid_argument("Mat::*: shape mismatch");
  Mat r(rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const Rat& x = at(i, k);
      if (x == 0) continue;
      for (int j = 0; j < o.cols; ++j) {
        const Rat& y = o.at(k, j);
        if (y != 0) r.at(i, j) += x * y;
      }
    }
  return r;
}

Mat Mat::operator+(const Mat& o) const {
  if (rows != o.rows || cols != o.cols)
    throw std::invalid_argument("Mat::+: shape mismatch");
  Mat r = *this;
  for (size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  if (rows != o.rows || cols != o.cols)
    throw std::invalid_argument("Mat::-: shape mismatch");
  Mat r = *this;
  for (size_t i = 0; i < a.size(); ++i) r.a[i] -= o.a[i];
  return r;
}

Mat Mat::operator*(const Rat& s) const {
  Mat r = *this;
  for (Rat& x : r.a) x *= s;
  return r;
}

Mat Mat::transpose() const {
  Mat r(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
  return r;
}

Mat Mat::col(int j) const {
  Mat r(rows, 1);
  for (int i = 0; i < rows; ++i) r.at(i, 0) = at(i, j);
  return r;
}

std::vector<Rat> Mat::col_vecv(int j) const {
  std::vector<Rat> v(rows);
  for (int i = 0; i < rows; ++i) v[i] = at(i, j);
  return v;
}

Mat Mat::select_cols(const std::vector<int>& js) const {
  Mat r(rows, static_cast<int>(js.size()));
  for (int i = 0; i < rows; ++i)
    for (size_t k = 0; k < js.size(); ++k) r.at(i, static_cast<int>(k)) = at(i, js[k]);
  return r;
}

Mat Mat::hstack(const Mat& l, const Mat& r) {
  if (l.cols == 0 && l.rows == 0) return r;
  if (r.cols == 0 && r.rows == 0) return l;
  if (l.rows != r.rows) throw std::invalid_argument("hstack: row mismatch");
  Mat m(l.rows, l.cols + r.cols);
  for (int i = 0; i < l.rows; ++i) {
    for (int j = 0; j < l.cols; ++j) m.at(i, j) = l.at(i, j);
    for (int j = 0; j < r.cols; ++j) m.at(i, l.cols + j) = r.at(i, j);
  }
  return m;
}

Mat Mat::vstack(const Mat& t, const Mat& b) {
  if (t.rows == 0 && t.cols == 0) return b;
  if (b.rows == 0 && b.cols == 0) return t;
  if (t.cols != b.cols) throw std::invalid_argument("vstack: col mismatch");
  Mat m(t.rows + b.rows, t.cols);
  for (int i = 0; i < t.rows; ++i)
    for (int j = 0; j < t.cols; ++j) m.at(i, j) = t.at(i, j);
  for (int i = 0; i < b.rows; ++i)
    for (int j = 0; j < b.cols; ++j) m.at(t.rows + i, j) = b.at(i, j);
  return m;
}

RrefResult rref(const Mat& m) {
  RrefResult res;
  res.reduced = m;
  Mat& r = res.reduced;
  int row = 0;
  for (int col = 0; col < r.cols && row < r.rows; ++col) {
    // Fixed pivot rule: first nonzero entry from the top in this column.
    int piv = -1;
    for (int i = row; i < r.rows; ++i)
      if (r.at(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < r.cols; ++j) std::swap(r.at(piv, j), r.at(row, j));
    Rat inv = Rat(1) / r.at(row, col);
    for (int j = col; j < r.cols; ++j) r.at(row, j) *= inv;
    for (int i = 0; i < r.rows; ++i) {
      if (i == row) continue;
      Rat f = r.at(i, col);
      if (f == 0) continue;
      for (int j = col; j < r.cols; ++j) r.at(i, j) -= f * r.at(row, j);
    }
    res.pivot_cols.push_back(col);
    ++row;
  }
  res.rank = row;
  return res;
}

int rank(const Mat& m) { return rref(m).rank; }

std::optional<Mat> solve(const Mat& m, const Mat& b) {
  if (m.rows != b.rows) throw std::invalid_argument("solve: row mismatch");
  RrefResult rr = rref(Mat::hstack(m, b));
  // Any pivot inside the b-block means some column of b is outside im(m).
  for (int p : rr.pivot_cols)
    if (p >= m.cols) return std::nullopt;
  Mat x(m.cols, b.cols);
  for (size_t k = 0; k < rr.pivot_cols.size(); ++k)
    for (int j = 0; j < b.cols; ++j)
      x.at(rr.pivot_cols[k], j) = rr.reduced.at(static_cast<int>(k), m.cols + j);
  return x;
}

Mat kernel_basis(const Mat& m) {
  RrefResult rr = rref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (int p : rr.pivot_cols) is_pivot[p] = true;
  std::vector<int> free_cols;
  for (int j = 0; j < m.cols; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  Mat k(m.cols, static_cast<int>(free_cols.size()));
  for (size_t t = 0; t < free_cols.size(); ++t) {
    int fc = free_cols[t];
    k.at(fc, static_cast<int>(t)) = 1;
    for (size_t r = 0; r < rr.pivot_cols.size(); ++r)
      k.at(rr.pivot_cols[r], static_cast<int>(t)) =
          -rr.reduced.at(static_cast<int>(r), fc);
  }
  return k;
}

}  // namespace equimod
