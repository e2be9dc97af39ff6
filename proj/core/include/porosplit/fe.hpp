#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "porosplit/mesh.hpp"
#include "porosplit/vector_ops.hpp"

namespace porosplit {

/// Scalar coefficient on the domain with its gradient. Constant fields are
/// flagged so assembly can skip the product-rule terms.
class ScalarField {
 public:
  ScalarField(double value = 0.0);  // NOLINT(google-explicit-constructor)
  ScalarField(std::function<double(const Point&)> value,
              std::function<Point(const Point&)> gradient);

  double operator()(const Point& p) const;
  Point gradient(const Point& p) const;
  bool is_constant() const { return !value_; }
  double constant_value() const { return constant_; }

 private:
  double constant_ = 0.0;
  std::function<double(const Point&)> value_;
  std::function<Point(const Point&)> gradient_;
};

/// Affine map from the reference triangle to a mesh triangle.
struct CellGeometry {
  Point origin;
  double jac[2][2];      // columns are the edge vectors v1 - v0, v2 - v0
  double det;            // 2 * area, positive for counter-clockwise cells
  double inv_t[2][2];    // J^{-T}

  Point map(double xi, double eta) const;
  Point physical_gradient(const Point& reference_gradient) const;
};

CellGeometry cell_geometry(const Mesh& mesh, std::size_t triangle);

/// Lagrange basis on the reference triangle. P2 local order: three vertices,
/// then edge midpoints (0,1), (1,2), (2,0).
struct BasisValues {
  int count = 0;
  std::array<double, 6> values{};
  std::array<Point, 6> gradients{};  // reference-coordinate gradients
};

BasisValues evaluate_basis(int degree, double xi, double eta);

/// Reference coordinates of the local nodes of a P1 or P2 element.
std::span<const Point> reference_nodes(int degree);

/// Continuous Lagrange space. Scalar nodes are the mesh vertices followed
/// (for P2) by the edges sorted by (min vertex, max vertex). Vector dofs are
/// interleaved: node i owns dofs n_components * i + c.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const Mesh> mesh, int degree, int n_components);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int n_components() const { return n_components_; }
  int nodes_per_cell() const { return degree_ == 1 ? 3 : 6; }
  int dofs_per_cell() const { return nodes_per_cell() * n_components_; }
  std::size_t n_nodes() const { return node_points_.size(); }
  std::size_t n_dofs() const { return n_nodes() * static_cast<std::size_t>(n_components_); }

  std::span<const std::size_t> cell_nodes(std::size_t triangle) const;
  /// Local dof a * n_components + c maps to global dof of node a, component c.
  void cell_dofs(std::size_t triangle, std::vector<std::size_t>& out) const;
  const Point& node_point(std::size_t node) const { return node_points_[node]; }
  std::size_t dof(std::size_t node, int component) const {
    return node * static_cast<std::size_t>(n_components_) + static_cast<std::size_t>(component);
  }
  /// Sorted edges (P2 only); edge e is node n_vertices + e.
  const std::vector<std::array<std::size_t, 2>>& edges() const { return edges_; }
  std::size_t edge_node(std::size_t a, std::size_t b) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  int n_components_;
  std::vector<std::size_t> cell_nodes_;
  std::vector<Point> node_points_;
  std::vector<std::array<std::size_t, 2>> edges_;
};

FeSpace build_space(std::shared_ptr<const Mesh> mesh, int degree, int n_components);

/// Sorted constrained dof indices together with the component mask used.
struct DofSet {
  std::vector<std::size_t> indices;
  std::array<bool, 2> mask{true, true};

  bool contains(std::size_t dof) const;
  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
};

/// Dofs whose node lies on a facet carrying one of `tags` and whose
/// component is selected by `mask` (scalar spaces use mask[0]).
DofSet dirichlet_dofs(const FeSpace& space, const std::vector<BoundaryTag>& tags,
                      std::array<bool, 2> mask = {true, true});

DofSet merge(const DofSet& a, const DofSet& b);

/// Nodal interpolation of a (up to) 2-component function.
Vector interpolate(const FeSpace& space,
                   const std::function<std::array<double, 2>(const Point&)>& f);

/// Value and physical gradient (rows = component) of a finite element
/// function at a reference point of one triangle.
struct FieldSample {
  std::array<double, 2> value{};
  std::array<Point, 2> gradient{};
};

FieldSample evaluate_field(const FeSpace& space, const Vector& coefficients,
                           std::size_t triangle, double xi, double eta);

}  // namespace porosplit
