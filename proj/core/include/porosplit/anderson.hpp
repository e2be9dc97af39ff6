#pragma once

#include <cstddef>
#include <deque>

#include "porosplit/vector_ops.hpp"

namespace porosplit {

/// History of the last m + 1 fixed-point evaluations for AA(m).
class AndersonState {
 public:
  explicit AndersonState(std::size_t depth) : depth_(depth) {}

  std::size_t depth() const { return depth_; }
  std::size_t history_size() const { return g_.size(); }
  /// Mixing coefficients of the last update, oldest first; they sum to 1.
  const Vector& last_alphas() const { return alphas_; }
  void reset();

  /// Given x_k and g(x_k), returns x_{k+1} = sum_i alpha_i g(x_{k-m_k+i}) with
  /// alpha minimizing ||sum_i alpha_i f_i||_2 subject to sum_i alpha_i = 1,
  /// f_i = g(x_i) - x_i, m_k = min(m, k). Solved in the unconstrained
  /// difference form by QR; dependent columns are dropped.
  Vector update(const Vector& x, const Vector& gx);

 private:
  std::size_t depth_;
  std::deque<Vector> g_;
  std::deque<Vector> f_;
  Vector alphas_;
};

inline Vector anderson_update(AndersonState& state, const Vector& x, const Vector& gx) {
  return state.update(x, gx);
}

}  // namespace porosplit
