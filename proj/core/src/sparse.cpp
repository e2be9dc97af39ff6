#include "porosplit/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace porosplit {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                     std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || col_idx_.size() != values_.size() ||
      row_ptr_.back() != values_.size())
    throw std::invalid_argument("CsrMatrix: inconsistent storage");
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] >= cols_) throw std::invalid_argument("CsrMatrix: column out of range");
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1])
        throw std::invalid_argument("CsrMatrix: columns not strictly increasing");
    }
}

CsrMatrix CsrMatrix::identity(std::size_t n) { return diagonal(Vector(n, 1.0)); }

CsrMatrix CsrMatrix::diagonal(const Vector& d) {
  const std::size_t n = d.size();
  std::vector<std::size_t> ptr(n + 1), idx(n);
  std::iota(ptr.begin(), ptr.end(), std::size_t{0});
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return CsrMatrix(n, n, std::move(ptr), std::move(idx), d);
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  const auto begin = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto end = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void CsrMatrix::multiply(const Vector& x, Vector& y) const {
  if (x.size() != cols_) throw std::invalid_argument("CsrMatrix::multiply: size mismatch");
  y.assign(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

Vector CsrMatrix::operator*(const Vector& x) const {
  Vector y;
  multiply(x, y);
  return y;
}

void CsrMatrix::multiply_add(double alpha, const Vector& x, Vector& y) const {
  if (x.size() != cols_ || y.size() != rows_)
    throw std::invalid_argument("CsrMatrix::multiply_add: size mismatch");
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] += alpha * s;
  }
}

void CsrMatrix::transpose_multiply_add(double alpha, const Vector& x, Vector& y) const {
  if (x.size() != rows_ || y.size() != cols_)
    throw std::invalid_argument("CsrMatrix::transpose_multiply_add: size mismatch");
  for (std::size_t i = 0; i < rows_; ++i) {
    const double xi = alpha * x[i];
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_idx_[k]] += values_[k] * xi;
  }
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<std::size_t> ptr(cols_ + 1, 0);
  for (std::size_t c : col_idx_) ++ptr[c + 1];
  std::partial_sum(ptr.begin(), ptr.end(), ptr.begin());
  std::vector<std::size_t> idx(nnz()), fill(ptr.begin(), ptr.end() - 1);
  std::vector<double> val(nnz());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::size_t pos = fill[col_idx_[k]]++;
      idx[pos] = i;
      val[pos] = values_[k];
    }
  return CsrMatrix(cols_, rows_, std::move(ptr), std::move(idx), std::move(val));
}

Vector CsrMatrix::diagonal_values() const {
  Vector d(std::min(rows_, cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

CsrMatrix CsrMatrix::scaled(double s) const {
  CsrMatrix out = *this;
  for (double& v : out.values_) v *= s;
  return out;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void CooBuilder::add(std::size_t i, std::size_t j, double v) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("CooBuilder::add: index out of range");
  entries_.push_back({i, j, v});
}

void CooBuilder::reserve(std::size_t n) { entries_.reserve(n); }

CsrMatrix CooBuilder::build() const {
  // Stable bucket by row, then stable sort by column inside each row.
  std::vector<std::size_t> count(rows_ + 1, 0);
  for (const auto& e : entries_) ++count[e.i + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<std::size_t> fill(count.begin(), count.end() - 1);
  std::vector<std::pair<std::size_t, double>> sorted(entries_.size());
  for (const auto& e : entries_) sorted[fill[e.i]++] = {e.j, e.v};

  std::vector<std::size_t> ptr(rows_ + 1, 0), idx;
  std::vector<double> val;
  idx.reserve(entries_.size());
  val.reserve(entries_.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    auto first = sorted.begin() + static_cast<std::ptrdiff_t>(count[i]);
    auto last = sorted.begin() + static_cast<std::ptrdiff_t>(count[i + 1]);
    std::stable_sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!idx.empty() && idx.size() > ptr[i] && idx.back() == it->first) {
        val.back() += it->second;
      } else {
        idx.push_back(it->first);
        val.push_back(it->second);
      }
    }
    ptr[i + 1] = idx.size();
  }
  return CsrMatrix(rows_, cols_, std::move(ptr), std::move(idx), std::move(val));
}

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double alpha, double beta) {
  return combine({{alpha, &a}, {beta, &b}});
}

CsrMatrix combine(const std::vector<std::pair<double, const CsrMatrix*>>& terms) {
  if (terms.empty()) throw std::invalid_argument("combine: no terms");
  const std::size_t rows = terms[0].second->rows(), cols = terms[0].second->cols();
  for (const auto& [c, m] : terms)
    if (m->rows() != rows || m->cols() != cols)
      throw std::invalid_argument("combine: shape mismatch");
  std::vector<std::size_t> ptr(rows + 1, 0), idx;
  std::vector<double> val;
  std::vector<double> work(cols, 0.0);
  std::vector<char> used(cols, 0);
  std::vector<std::size_t> pattern;
  for (std::size_t i = 0; i < rows; ++i) {
    pattern.clear();
    for (const auto& [c, m] : terms)
      for (std::size_t k = m->row_ptr()[i]; k < m->row_ptr()[i + 1]; ++k) {
        const std::size_t j = m->col_idx()[k];
        if (!used[j]) {
          used[j] = 1;
          pattern.push_back(j);
        }
        work[j] += c * m->values()[k];
      }
    std::sort(pattern.begin(), pattern.end());
    for (std::size_t j : pattern) {
      idx.push_back(j);
      val.push_back(work[j]);
      work[j] = 0.0;
      used[j] = 0;
    }
    ptr[i + 1] = idx.size();
  }
  return CsrMatrix(rows, cols, std::move(ptr), std::move(idx), std::move(val));
}

CsrMatrix submatrix(const CsrMatrix& a, const std::vector<std::size_t>& rows,
                    const std::vector<std::size_t>& cols) {
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> col_map(a.cols(), none);
  for (std::size_t k = 0; k < cols.size(); ++k) col_map.at(cols[k]) = k;
  CooBuilder coo(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t i = rows[r];
    for (std::size_t k = a.row_ptr().at(i); k < a.row_ptr()[i + 1]; ++k) {
      const std::size_t c = col_map[a.col_idx()[k]];
      if (c != none) coo.add(r, c, a.values()[k]);
    }
  }
  return coo.build();
}

CsrMatrix block_matrix(const std::vector<std::vector<Block>>& blocks,
                       const std::vector<std::size_t>& row_sizes,
                       const std::vector<std::size_t>& col_sizes) {
  if (blocks.size() != row_sizes.size()) throw std::invalid_argument("block_matrix: bad grid");
  std::vector<std::size_t> row_off(row_sizes.size() + 1, 0), col_off(col_sizes.size() + 1, 0);
  std::partial_sum(row_sizes.begin(), row_sizes.end(), row_off.begin() + 1);
  std::partial_sum(col_sizes.begin(), col_sizes.end(), col_off.begin() + 1);
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    if (blocks[bi].size() != col_sizes.size()) throw std::invalid_argument("block_matrix: bad grid");
    for (std::size_t bj = 0; bj < col_sizes.size(); ++bj) {
      const CsrMatrix* m = blocks[bi][bj].matrix;
      if (m && (m->rows() != row_sizes[bi] || m->cols() != col_sizes[bj]))
        throw std::invalid_argument("block_matrix: block shape mismatch");
    }
  }
  std::vector<std::size_t> ptr(row_off.back() + 1, 0), idx;
  std::vector<double> val;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi)
    for (std::size_t i = 0; i < row_sizes[bi]; ++i) {
      for (std::size_t bj = 0; bj < col_sizes.size(); ++bj) {
        const auto& [m, s] = blocks[bi][bj];
        if (!m) continue;
        for (std::size_t k = m->row_ptr()[i]; k < m->row_ptr()[i + 1]; ++k) {
          idx.push_back(col_off[bj] + m->col_idx()[k]);
          val.push_back(s * m->values()[k]);
        }
      }
      ptr[row_off[bi] + i + 1] = idx.size();
    }
  return CsrMatrix(row_off.back(), col_off.back(), std::move(ptr), std::move(idx), std::move(val));
}

double asymmetry(const CsrMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("asymmetry: matrix not square");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      worst = std::max(worst, std::abs(a.values()[k] - a.at(a.col_idx()[k], i)));
  return worst;
}

}  // namespace porosplit
