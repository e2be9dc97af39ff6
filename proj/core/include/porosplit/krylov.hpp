#pragma once

#include <cstddef>
#include <functional>

#include "porosplit/sparse.hpp"

namespace porosplit {

/// z = M^{-1} r
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual void apply(const Vector& r, Vector& z) const = 0;
};

class IdentityPreconditioner final : public Preconditioner {
 public:
  void apply(const Vector& r, Vector& z) const override { z = r; }
};

struct SolveStats {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

struct GmresOptions {
  double rtol = 1e-8;
  std::size_t max_iter = 2000;
  std::size_t restart = 200;
};

using LinearOperator = std::function<void(const Vector& x, Vector& y)>;

/// Right-preconditioned restarted GMRES for A x = b, starting from the
/// incoming x (resized to zero if empty). Convergence means the true residual
/// satisfies ||b - A x||_2 <= rtol ||b||_2; b = 0 returns x = 0 immediately.
SolveStats gmres(const LinearOperator& a, const Vector& b, Vector& x,
                 const Preconditioner& m, const GmresOptions& options = {});
SolveStats gmres(const CsrMatrix& a, const Vector& b, Vector& x, const Preconditioner& m,
                 const GmresOptions& options = {});

}  // namespace porosplit
