#pragma once

#include <cstddef>
#include <vector>

#include "porosplit/vector_ops.hpp"

namespace porosplit {

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row and no entry is stored twice.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(std::size_t rows, std::size_t cols);  // zero matrix
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
            std::vector<std::size_t> col_idx, std::vector<double> values);

  static CsrMatrix identity(std::size_t n);
  static CsrMatrix diagonal(const Vector& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Entry (i, j), zero when not stored.
  double at(std::size_t i, std::size_t j) const;

  // y = A x
  void multiply(const Vector& x, Vector& y) const;
  Vector operator*(const Vector& x) const;
  // y += alpha A x
  void multiply_add(double alpha, const Vector& x, Vector& y) const;
  // y += alpha A^T x
  void transpose_multiply_add(double alpha, const Vector& x, Vector& y) const;

  CsrMatrix transpose() const;
  Vector diagonal_values() const;
  CsrMatrix scaled(double s) const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// Triplet accumulator. Duplicates are summed in insertion order, so two
/// builders fed mirrored data produce bitwise transposed matrices.
class CooBuilder {
 public:
  CooBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
  void add(std::size_t i, std::size_t j, double v);
  void reserve(std::size_t n);
  CsrMatrix build() const;

 private:
  struct Entry {
    std::size_t i, j;
    double v;
  };
  std::size_t rows_, cols_;
  std::vector<Entry> entries_;
};

/// alpha A + beta B over the union pattern.
CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double alpha = 1.0, double beta = 1.0);

/// Linear combination sum_k c_k A_k of equally shaped matrices.
CsrMatrix combine(const std::vector<std::pair<double, const CsrMatrix*>>& terms);

/// Rows and columns selected by the given index lists (in that order).
CsrMatrix submatrix(const CsrMatrix& a, const std::vector<std::size_t>& rows,
                    const std::vector<std::size_t>& cols);

/// Block matrix from a grid of optional blocks, each with a scale factor.
/// Null entries are zero blocks; block row heights and column widths must be
/// consistent.
struct Block {
  const CsrMatrix* matrix = nullptr;
  double scale = 1.0;
};
CsrMatrix block_matrix(const std::vector<std::vector<Block>>& blocks,
                       const std::vector<std::size_t>& row_sizes,
                       const std::vector<std::size_t>& col_sizes);

/// Largest |A_ij - A_ji| over stored entries (A square).
double asymmetry(const CsrMatrix& a);

}  // namespace porosplit
