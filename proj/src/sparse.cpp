#include "m1sim/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace m1sim {

std::vector<double> SparseMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  apply(x, std::span<double>(y));
  return y;
}

std::vector<cplx> SparseMatrix::apply(std::span<const cplx> x) const {
  std::vector<cplx> y(rows_);
  apply(x, std::span<cplx>(y));
  return y;
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<int> r,
                                         std::vector<int> c, std::vector<double> v) {
  SparseMatrix m(rows, cols);
  const std::size_t n = r.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return r[i] != r[j] ? r[i] < r[j] : c[i] < c[j];
  });
  for (std::size_t k = 0; k < n;) {
    const int rr = r[order[k]], cc = c[order[k]];
    double acc = 0.0;
    while (k < n && r[order[k]] == rr && c[order[k]] == cc) acc += v[order[k++]];
    if (acc != 0.0) {
      m.col_.push_back(cc);
      m.val_.push_back(acc);
      ++m.row_ptr_[rr + 1];
    }
  }
  for (int i = 0; i < rows; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
  return m;
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d) {
  const int n = static_cast<int>(d.size());
  SparseBuilder b(n, n);
  for (int i = 0; i < n; ++i) b.add(i, i, d[i]);
  return b.build();
}

SparseMatrix SparseMatrix::transposed() const {
  SparseBuilder b(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) b.add(col_[p], r, val_[p]);
  return b.build();
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : val_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> SparseMatrix::dense() const {
  std::vector<double> d(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (int r = 0; r < rows_; ++r)
    for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      d[static_cast<std::size_t>(col_[p]) * rows_ + r] += val_[p];
  return d;
}

double SparseMatrix::hermiticity_defect() const {
  if (rows_ != cols_) throw std::invalid_argument("hermiticity_defect: not square");
  SparseMatrix diff = m1sim::add(*this, transposed(), 1.0, -1.0);
  return diff.max_abs();
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("multiply: shape mismatch");
  SparseBuilder out(a.rows_, b.cols_);
  std::vector<double> acc(b.cols_, 0.0);
  std::vector<char> mark(b.cols_, 0);
  std::vector<int> touched;
  for (int r = 0; r < a.rows_; ++r) {
    touched.clear();
    for (int p = a.row_ptr_[r]; p < a.row_ptr_[r + 1]; ++p) {
      const int k = a.col_[p];
      const double av = a.val_[p];
      for (int q = b.row_ptr_[k]; q < b.row_ptr_[k + 1]; ++q) {
        const int c = b.col_[q];
        if (!mark[c]) {
          mark[c] = 1;
          touched.push_back(c);
        }
        acc[c] += av * b.val_[q];
      }
    }
    for (int c : touched) {
      out.add(r, c, acc[c]);
      acc[c] = 0.0;
      mark[c] = 0;
    }
  }
  return out.build();
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("add: shape mismatch");
  SparseBuilder out(a.rows_, a.cols_);
  for (int r = 0; r < a.rows_; ++r)
    for (int p = a.row_ptr_[r]; p < a.row_ptr_[r + 1]; ++p) out.add(r, a.col_[p], alpha * a.val_[p]);
  for (int r = 0; r < b.rows_; ++r)
    for (int p = b.row_ptr_[r]; p < b.row_ptr_[r + 1]; ++p) out.add(r, b.col_[p], beta * b.val_[p]);
  return out.build();
}

}  // namespace m1sim
