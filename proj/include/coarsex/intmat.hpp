#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <optional>
#include <utility>
#include <vector>

namespace coarsex {

using Int = mpz_class;

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  DenseMatrix(std::initializer_list<std::initializer_list<long>> rows);
  static DenseMatrix identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Int& at(size_t r, size_t c) { return a_[r * cols_ + c]; }
  const Int& at(size_t r, size_t c) const { return a_[r * cols_ + c]; }
  bool is_zero() const;
  bool is_identity() const;
  DenseMatrix transpose() const;
  DenseMatrix column_block(size_t first, size_t count) const;
  DenseMatrix row_block(size_t first, size_t count) const;
  std::vector<Int> column(size_t c) const;
  void swap_rows(size_t i, size_t j);
  void swap_cols(size_t i, size_t j);
  void add_row_multiple(size_t target, size_t source, const Int& factor);  // row_t += f row_s
  void add_col_multiple(size_t target, size_t source, const Int& factor);  // col_t += f col_s
  void negate_row(size_t i);
  void negate_col(size_t j);
  std::string str() const;

  bool operator==(const DenseMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
  bool operator!=(const DenseMatrix& o) const { return !(*this == o); }

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
std::vector<Int> operator*(const DenseMatrix& a, const std::vector<Int>& v);
DenseMatrix hconcat(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix block_diagonal(const DenseMatrix& a, const DenseMatrix& b);
Int determinant(const DenseMatrix& m);  // fraction-free elimination

// Sparse matrix stored by columns; each column sorted by row with nonzero values.
class SparseMatrix {
 public:
  using Column = std::vector<std::pair<int, Int>>;

  SparseMatrix() = default;
  SparseMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), cols_data_(cols) {}
  static SparseMatrix identity(size_t n);
  static SparseMatrix from_dense(const DenseMatrix& d);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  const Column& column(size_t c) const { return cols_data_[c]; }
  void set_column(size_t c, Column col);  // normalizes order and drops zeros
  void add(size_t r, size_t c, const Int& v);
  Int get(size_t r, size_t c) const;
  size_t nonzeros() const;
  bool is_zero() const { return nonzeros() == 0; }
  DenseMatrix to_dense() const;
  SparseMatrix transpose() const;
  std::string triplets() const;  // "row col value" per line

  bool operator==(const SparseMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && cols_data_ == o.cols_data_;
  }
  bool operator!=(const SparseMatrix& o) const { return !(*this == o); }

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<Column> cols_data_;
};

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix::Column apply_to(const SparseMatrix& a, const SparseMatrix::Column& v);

struct SmithResult {
  DenseMatrix S, P, Q;  // S = P * M * Q
  DenseMatrix Pinv, Qinv;
  size_t rank = 0;
  std::vector<Int> diagonal;  // first rank diagonal entries, positive, each dividing the next
};

SmithResult smith_normal_form(const DenseMatrix& m);
std::vector<Int> smith_invariants(const DenseMatrix& m);  // nonzero diagonal only, no transforms

// Columns spanning the same lattice as the columns of m, linearly independent (column echelon form).
DenseMatrix lattice_basis(const DenseMatrix& m);
// A basis of the integer kernel {v : m v = 0}, as columns.
DenseMatrix integer_kernel(const DenseMatrix& m);
// Whether x lies in the lattice spanned by the columns of m; coefficients returned when it does.
bool solve_in_lattice(const DenseMatrix& m, const std::vector<Int>& x, std::vector<Int>* coeffs = nullptr);
bool lattice_contains(const DenseMatrix& big, const DenseMatrix& small);
// Inverse of a square integer matrix with determinant +-1; nullopt otherwise.
std::optional<DenseMatrix> unimodular_inverse(const DenseMatrix& m);

}  // namespace coarsex
