#pragma once

#include <vector>

#include "porosplit/vector_ops.hpp"

namespace porosplit {

/// Column-major dense matrix given as a list of equally long columns.
using DenseColumns = std::vector<Vector>;

struct LstsqResult {
  Vector coefficients;           // one per column; dropped columns get 0
  std::vector<bool> kept;        // false for columns removed by truncation
  double residual_norm = 0.0;    // ||F c - rhs||_2
};

/// Least squares min ||F c - rhs||_2 via modified Gram-Schmidt QR with
/// re-orthogonalization. A column whose component orthogonal to the kept
/// columns is below `drop_tol` times its norm is dropped.
LstsqResult qr_lstsq(const DenseColumns& f, const Vector& rhs, double drop_tol = 1e-12);

}  // namespace porosplit
