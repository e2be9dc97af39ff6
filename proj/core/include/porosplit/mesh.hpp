#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace porosplit {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class BoundaryTag { left, right, bottom, top, foot, rest };

std::string_view to_string(BoundaryTag tag);
BoundaryTag parse_boundary_tag(std::string_view name);

using Triangle = std::array<std::size_t, 3>;

struct BoundaryFacet {
  std::array<std::size_t, 2> vertices;
  BoundaryTag tag;
};

/// Conforming triangulation of the square (0, L)^2.
///
/// Triangles are stored counter-clockwise. Every boundary edge appears in
/// `boundary_facets` exactly once with one tag. The mesh is never modified
/// after construction; refinement returns a new mesh.
class Mesh {
 public:
  Mesh() = default;
  Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
       std::vector<BoundaryFacet> boundary_facets, double side_length);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<BoundaryFacet>& boundary_facets() const { return facets_; }
  double side_length() const { return side_length_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  bool has_tag(BoundaryTag tag) const;
  double signed_area(std::size_t triangle) const;
  double total_area() const;

 private:
  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<BoundaryFacet> facets_;
  double side_length_ = 0.0;
};

/// Structured criss-cross mesh: n x n square cells, each split along one
/// diagonal with the diagonal direction alternating in a checkerboard.
Mesh unit_square_mesh(std::size_t n_per_side, double side_length);

/// Mesh for the footing problem on (0, L)^2. The x grid lines are graded so
/// that the ends of the loaded strip (L/4, 3L/4) x {L} are vertices; top edges
/// inside the strip are tagged `foot`, the remaining top edges `rest`.
Mesh footing_mesh(std::size_t n_per_side, double side_length);

/// Red refinement of every triangle with a vertex on a facet carrying `tag`,
/// followed by red/green closure so the result stays conforming. Existing
/// vertices never move.
Mesh refine_near(const Mesh& mesh, BoundaryTag tag, std::size_t levels);

/// Result of a full invariant scan; `ok()` is true when nothing was violated.
struct MeshCheck {
  std::size_t non_positive_triangles = 0;
  std::size_t over_shared_edges = 0;
  std::size_t untagged_boundary_edges = 0;
  std::size_t multiply_tagged_edges = 0;
  std::size_t tagged_interior_edges = 0;
  std::size_t hanging_nodes = 0;
  double area_error = 0.0;

  bool ok(double area_tol = 1e-12) const {
    return non_positive_triangles == 0 && over_shared_edges == 0 &&
           untagged_boundary_edges == 0 && multiply_tagged_edges == 0 &&
           tagged_interior_edges == 0 && hanging_nodes == 0 &&
           area_error <= area_tol;
  }
};

MeshCheck check_mesh(const Mesh& mesh);

/// Debug dump: `vertices <n> triangles <m>`, then one `x y` line per vertex and
/// one `a b c` line per triangle.
void write_mesh(const Mesh& mesh, std::ostream& out);

}  // namespace porosplit
