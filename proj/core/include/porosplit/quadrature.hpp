#pragma once

#include <vector>

namespace porosplit {

/// Point on the reference triangle {(xi, eta) : xi, eta >= 0, xi + eta <= 1};
/// weights sum to the reference area 1/2.
struct TriangleQuadPoint {
  double xi;
  double eta;
  double weight;
};

/// Point on the reference interval [0, 1]; weights sum to 1.
struct EdgeQuadPoint {
  double s;
  double weight;
};

/// Symmetric 6-point rule, exact for polynomials of total degree 4.
const std::vector<TriangleQuadPoint>& triangle_rule();

/// The degree-4 rule applied on the 4^levels congruent sub-triangles.
std::vector<TriangleQuadPoint> composite_triangle_rule(int levels);

/// 3-point Gauss-Legendre rule, exact for degree 5.
const std::vector<EdgeQuadPoint>& edge_rule();

}  // namespace porosplit
