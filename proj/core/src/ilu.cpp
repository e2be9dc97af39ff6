#include "porosplit/ilu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace porosplit {

namespace {

constexpr std::size_t kEnd = std::numeric_limits<std::size_t>::max();

// Symbolic phase: row patterns of the level-k factorization.
void symbolic(const CsrMatrix& a, int level, std::vector<std::size_t>& ptr,
              std::vector<std::size_t>& idx, std::vector<std::size_t>& diag) {
  const std::size_t n = a.rows();
  const int inf = std::numeric_limits<int>::max();
  std::vector<int> lev(n, inf);
  std::vector<std::size_t> next(n, kEnd);
  std::vector<int> levels;  // levels of stored entries, parallel to idx
  ptr.assign(1, 0);
  idx.clear();
  diag.assign(n, 0);

  for (std::size_t i = 0; i < n; ++i) {
    // Sorted linked list seeded with A's row and the diagonal.
    std::size_t head = kEnd;
    auto insert = [&](std::size_t j, std::size_t from) {
      std::size_t prev = kEnd, cur = from;
      while (cur != kEnd && cur < j) {
        prev = cur;
        cur = next[cur];
      }
      if (cur == j) return;
      next[j] = cur;
      if (prev == kEnd) head = j;
      else next[prev] = j;
    };
    std::size_t tail = kEnd;
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const std::size_t j = a.col_idx()[k];
      lev[j] = 0;
      next[j] = kEnd;
      if (tail == kEnd) head = j;
      else next[tail] = j;
      tail = j;
    }
    if (lev[i] == inf) {
      lev[i] = 0;
      insert(i, head);
    }

    for (std::size_t k = head; k != kEnd && k < i; k = next[k]) {
      const int lik = lev[k];
      if (lik > level) continue;
      for (std::size_t q = diag[k] + 1; q < ptr[k + 1]; ++q) {
        const std::size_t j = idx[q];
        const int l = lik + levels[q] + 1;
        if (l > level) continue;
        if (lev[j] == inf) {
          lev[j] = l;
          insert(j, k);
        } else if (l < lev[j]) {
          lev[j] = l;
        }
      }
    }

    for (std::size_t j = head; j != kEnd;) {
      const std::size_t nj = next[j];
      if (lev[j] <= level) {
        if (j == i) diag[i] = idx.size();
        idx.push_back(j);
        levels.push_back(lev[j]);
      }
      lev[j] = inf;
      next[j] = kEnd;
      j = nj;
    }
    ptr.push_back(idx.size());
  }
}

}  // namespace

IluPreconditioner::IluPreconditioner(const CsrMatrix& a, int level) : level_(level) {
  if (a.rows() != a.cols()) throw std::invalid_argument("ilu: matrix must be square");
  if (level < 0) throw std::invalid_argument("ilu: level must be non-negative");
  const std::size_t n = a.rows();
  std::vector<std::size_t> ptr, idx;
  symbolic(a, level, ptr, idx, diag_);
  std::vector<double> val(idx.size(), 0.0);

  constexpr std::size_t none = kEnd;
  std::vector<std::size_t> pos(n, none);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t q = ptr[i]; q < ptr[i + 1]; ++q) pos[idx[q]] = q;
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      val[pos[a.col_idx()[k]]] = a.values()[k];
    double scale = 0.0;
    for (std::size_t q = ptr[i]; q < ptr[i + 1]; ++q) scale = std::max(scale, std::abs(val[q]));

    for (std::size_t q = ptr[i]; q < diag_[i]; ++q) {
      const std::size_t k = idx[q];
      const double lik = val[q] / val[diag_[k]];
      val[q] = lik;
      if (lik == 0.0) continue;
      for (std::size_t r = diag_[k] + 1; r < ptr[k + 1]; ++r) {
        const std::size_t p = pos[idx[r]];
        if (p != none) val[p] -= lik * val[r];
      }
    }
    const double pivot = val[diag_[i]];
    if (pivot == 0.0 || !std::isfinite(pivot) || std::abs(pivot) <= 1e-300 * scale)
      throw std::runtime_error("ilu: zero pivot in row " + std::to_string(i));
    for (std::size_t q = ptr[i]; q < ptr[i + 1]; ++q) pos[idx[q]] = none;
  }
  factors_ = CsrMatrix(n, n, std::move(ptr), std::move(idx), std::move(val));
}

void IluPreconditioner::apply(const Vector& r, Vector& z) const {
  const std::size_t n = factors_.rows();
  if (r.size() != n) throw std::invalid_argument("ilu: vector size mismatch");
  const auto& ptr = factors_.row_ptr();
  const auto& idx = factors_.col_idx();
  const auto& val = factors_.values();
  z.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = r[i];
    for (std::size_t q = ptr[i]; q < diag_[i]; ++q) s -= val[q] * z[idx[q]];
    z[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = z[i];
    for (std::size_t q = diag_[i] + 1; q < ptr[i + 1]; ++q) s -= val[q] * z[idx[q]];
    z[i] = s / val[diag_[i]];
  }
}

}  // namespace porosplit
