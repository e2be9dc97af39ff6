#pragma once

#include <cstddef>

#include "porosplit/sparse.hpp"

namespace porosplit {

struct EigenPair {
  double value = 0.0;
  Vector vector;              // B-normalized
  std::size_t iterations = 0;
};

struct PowerOptions {
  double tol = 1e-10;         // relative change of the Rayleigh quotient
  std::size_t max_iter = 20000;
  double solve_rtol = 1e-13;
  int ilu_level = 3;
};

/// Dominant eigenpair of B^{-1} A for symmetric A >= 0 and SPD B by power
/// iteration. Throws std::runtime_error with the last Rayleigh quotient when
/// the iteration cap is reached.
EigenPair generalized_symmetric_eig_max(const CsrMatrix& a, const CsrMatrix& b,
                                        const PowerOptions& options = {});

}  // namespace porosplit
