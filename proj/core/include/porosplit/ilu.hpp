#pragma once

#include <cstddef>
#include <vector>

#include "porosplit/krylov.hpp"
#include "porosplit/sparse.hpp"

namespace porosplit {

/// Level-of-fill incomplete LU in natural ordering. L is unit lower
/// triangular and stored with U in a single CSR pattern.
class IluPreconditioner final : public Preconditioner {
 public:
  /// Throws std::runtime_error naming the row on a zero pivot.
  IluPreconditioner(const CsrMatrix& a, int level);

  void apply(const Vector& r, Vector& z) const override;

  int level() const { return level_; }
  std::size_t nnz() const { return factors_.nnz(); }
  const CsrMatrix& factors() const { return factors_; }

 private:
  int level_;
  CsrMatrix factors_;
  std::vector<std::size_t> diag_;
};

}  // namespace porosplit
