#pragma once

#include <Eigen/Dense>
#include <random>

#include "porosplit/mesh.hpp"
#include "porosplit/sparse.hpp"

namespace test {

inline Eigen::MatrixXd dense(const porosplit::CsrMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.rows()),
                                            static_cast<Eigen::Index>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a.col_idx()[k])) += a.values()[k];
  return d;
}

inline Eigen::VectorXd eig(const porosplit::Vector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline porosplit::Vector vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

inline porosplit::Vector random_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  porosplit::Vector v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

inline double rel_inf(const porosplit::Vector& a, const porosplit::Vector& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den > 0.0 ? num / den : num;
}

/// Single counter-clockwise triangle (0,0), (1,0), (0,1).
inline porosplit::Mesh reference_triangle_mesh() {
  using porosplit::BoundaryTag;
  return porosplit::Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}},
                         {{{0, 1}, BoundaryTag::bottom}, {{1, 2}, BoundaryTag::rest}, {{2, 0}, BoundaryTag::left}},
                         1.0);
}

}  // namespace test
