#pragma once

#include <complex>
#include <span>
#include <vector>

#include "m1sim/kernels.hpp"

namespace m1sim {

using cplx = std::complex<double>;

// Real-valued CSR matrix. Assembled from coordinate triplets; duplicate
// (row, col) entries are coalesced by summation.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(val_.size()); }

  kernels::CsrView view() const { return {row_ptr_.data(), col_.data(), val_.data(), rows_}; }

  void apply(std::span<const double> x, std::span<double> y) const { kernels::spmv(view(), x, y); }
  void apply(std::span<const cplx> x, std::span<cplx> y) const { kernels::spmv(view(), x, y); }

  std::vector<double> apply(std::span<const double> x) const;
  std::vector<cplx> apply(std::span<const cplx> x) const;

  SparseMatrix transposed() const;
  double max_abs() const;
  // Dense column-major copy (LAPACK layout).
  std::vector<double> dense() const;
  // Max |A - A^T| entry.
  double hermiticity_defect() const;

  // Row access for algorithms that walk the structure.
  std::span<const int> row_cols(int r) const {
    return {col_.data() + row_ptr_[r], static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r])};
  }
  std::span<const double> row_vals(int r) const {
    return {val_.data() + row_ptr_[r], static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r])};
  }

  static SparseMatrix from_triplets(int rows, int cols, std::vector<int> r, std::vector<int> c,
                                    std::vector<double> v);
  static SparseMatrix diagonal(std::span<const double> d);

  friend SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta);

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<int> row_ptr_;
  std::vector<int> col_;
  std::vector<double> val_;
};

// C = A * B
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
// C = alpha*A + beta*B
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0,
                 double beta = 1.0);

// Incremental triplet assembly.
class SparseBuilder {
 public:
  SparseBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}
  void add(int r, int c, double v) {
    if (v == 0.0) return;
    r_.push_back(r);
    c_.push_back(c);
    v_.push_back(v);
  }
  SparseMatrix build() {
    return SparseMatrix::from_triplets(rows_, cols_, std::move(r_), std::move(c_), std::move(v_));
  }

 private:
  int rows_, cols_;
  std::vector<int> r_, c_;
  std::vector<double> v_;
};

}  // namespace m1sim
