#include "porosplit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace porosplit {

namespace {

using EdgeKey = std::pair<std::size_t, std::size_t>;

EdgeKey edge_key(std::size_t a, std::size_t b) {
  return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

// Tensor-product criss-cross mesh over the coordinate lines xs, ys.
Mesh tensor_mesh(const std::vector<double>& xs, const std::vector<double>& ys,
                 double side_length, double foot_lo, double foot_hi,
                 bool tag_foot) {
  const std::size_t nx = xs.size() - 1;
  const std::size_t ny = ys.size() - 1;
  auto id = [&](std::size_t i, std::size_t j) { return j * (nx + 1) + i; };

  std::vector<Point> vertices;
  vertices.reserve((nx + 1) * (ny + 1));
  for (std::size_t j = 0; j <= ny; ++j)
    for (std::size_t i = 0; i <= nx; ++i) vertices.push_back({xs[i], ys[j]});

  std::vector<Triangle> triangles;
  triangles.reserve(2 * nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t v00 = id(i, j), v10 = id(i + 1, j);
      const std::size_t v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      if ((i + j) % 2 == 0) {
        triangles.push_back({v00, v10, v11});
        triangles.push_back({v00, v11, v01});
      } else {
        triangles.push_back({v00, v10, v01});
        triangles.push_back({v10, v11, v01});
      }
    }
  }

  std::vector<BoundaryFacet> facets;
  for (std::size_t i = 0; i < nx; ++i)
    facets.push_back({{id(i, 0), id(i + 1, 0)}, BoundaryTag::bottom});
  for (std::size_t j = 0; j < ny; ++j)
    facets.push_back({{id(nx, j), id(nx, j + 1)}, BoundaryTag::right});
  for (std::size_t i = 0; i < nx; ++i) {
    BoundaryTag tag = BoundaryTag::top;
    if (tag_foot) {
      const double mid = 0.5 * (xs[i] + xs[i + 1]);
      tag = (mid > foot_lo && mid < foot_hi) ? BoundaryTag::foot
                                             : BoundaryTag::rest;
    }
    facets.push_back({{id(i + 1, ny), id(i, ny)}, tag});
  }
  for (std::size_t j = 0; j < ny; ++j)
    facets.push_back({{id(0, j + 1), id(0, j)}, BoundaryTag::left});

  return Mesh(std::move(vertices), std::move(triangles), std::move(facets),
              side_length);
}

void validate_side(std::size_t n, double side_length) {
  if (n == 0) throw std::invalid_argument("mesh: n_per_side must be >= 1");
  if (!std::isfinite(side_length) || side_length <= 0.0)
    throw std::invalid_argument("mesh: side length must be finite and > 0");
}

}  // namespace

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::left: return "left";
    case BoundaryTag::right: return "right";
    case BoundaryTag::bottom: return "bottom";
    case BoundaryTag::top: return "top";
    case BoundaryTag::foot: return "foot";
    case BoundaryTag::rest: return "rest";
  }
  return "?";
}

BoundaryTag parse_boundary_tag(std::string_view name) {
  for (auto tag : {BoundaryTag::left, BoundaryTag::right, BoundaryTag::bottom,
                   BoundaryTag::top, BoundaryTag::foot, BoundaryTag::rest})
    if (to_string(tag) == name) return tag;
  throw std::invalid_argument("unknown boundary tag '" + std::string(name) + "'");
}

Mesh::Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
           std::vector<BoundaryFacet> boundary_facets, double side_length)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      facets_(std::move(boundary_facets)),
      side_length_(side_length) {}

bool Mesh::has_tag(BoundaryTag tag) const {
  return std::any_of(facets_.begin(), facets_.end(),
                     [tag](const BoundaryFacet& f) { return f.tag == tag; });
}

double Mesh::signed_area(std::size_t t) const {
  const Point& a = vertices_[triangles_[t][0]];
  const Point& b = vertices_[triangles_[t][1]];
  const Point& c = vertices_[triangles_[t][2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) sum += signed_area(t);
  return sum;
}

Mesh unit_square_mesh(std::size_t n, double side_length) {
  validate_side(n, side_length);
  std::vector<double> xs(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    xs[i] = side_length * static_cast<double>(i) / static_cast<double>(n);
  xs.back() = side_length;
  return tensor_mesh(xs, xs, side_length, 0.0, 0.0, false);
}

Mesh footing_mesh(std::size_t n, double side_length) {
  validate_side(n, side_length);
  if (n < 3)
    throw std::invalid_argument("footing mesh needs at least 3 cells per side");
  const double lo = 0.25 * side_length, hi = 0.75 * side_length;
  std::size_t n_side =
      static_cast<std::size_t>(std::floor(0.25 * static_cast<double>(n) + 0.5));
  n_side = std::clamp<std::size_t>(n_side, 1, (n - 1) / 2);
  const std::size_t n_mid = n - 2 * n_side;

  std::vector<double> xs;
  auto push_segment = [&xs](double a, double b, std::size_t cells) {
    for (std::size_t i = 0; i < cells; ++i)
      xs.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(cells));
  };
  push_segment(0.0, lo, n_side);
  push_segment(lo, hi, n_mid);
  push_segment(hi, side_length, n_side);
  xs.push_back(side_length);

  std::vector<double> ys(n + 1);
  for (std::size_t j = 0; j <= n; ++j)
    ys[j] = side_length * static_cast<double>(j) / static_cast<double>(n);
  ys.back() = side_length;
  return tensor_mesh(xs, ys, side_length, lo, hi, true);
}

Mesh refine_near(const Mesh& mesh, BoundaryTag tag, std::size_t levels) {
  if (!mesh.has_tag(tag))
    throw std::invalid_argument("refine_near: tag '" + std::string(to_string(tag)) +
                                "' not present on mesh");
  Mesh current = mesh;
  for (std::size_t level = 0; level < levels; ++level) {
    std::vector<Point> vertices = current.vertices();
    const auto& tris = current.triangles();

    std::vector<char> on_tag(vertices.size(), 0);
    for (const auto& f : current.boundary_facets())
      if (f.tag == tag) on_tag[f.vertices[0]] = on_tag[f.vertices[1]] = 1;

    std::vector<char> red(tris.size(), 0);
    std::map<EdgeKey, std::size_t> marked;  // edge -> midpoint id (0 = unset)
    auto mark_all = [&](std::size_t t) {
      red[t] = 1;
      for (int e = 0; e < 3; ++e)
        marked.emplace(edge_key(tris[t][e], tris[t][(e + 1) % 3]), 0);
    };
    for (std::size_t t = 0; t < tris.size(); ++t)
      if (on_tag[tris[t][0]] || on_tag[tris[t][1]] || on_tag[tris[t][2]]) mark_all(t);

    // Closure: two or more split edges force a red refinement.
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t t = 0; t < tris.size(); ++t) {
        if (red[t]) continue;
        int count = 0;
        for (int e = 0; e < 3; ++e)
          count += marked.count(edge_key(tris[t][e], tris[t][(e + 1) % 3])) ? 1 : 0;
        if (count >= 2) {
          mark_all(t);
          changed = true;
        }
      }
    }

    auto midpoint = [&](std::size_t a, std::size_t b) {
      auto it = marked.find(edge_key(a, b));
      if (it->second == 0) {
        it->second = vertices.size();
        vertices.push_back({0.5 * (vertices[a].x + vertices[b].x),
                            0.5 * (vertices[a].y + vertices[b].y)});
      }
      return it->second;
    };

    std::vector<Triangle> out;
    out.reserve(tris.size() * 2);
    for (std::size_t t = 0; t < tris.size(); ++t) {
      const auto [a, b, c] = tris[t];
      if (red[t]) {
        const std::size_t mab = midpoint(a, b), mbc = midpoint(b, c), mca = midpoint(c, a);
        out.push_back({a, mab, mca});
        out.push_back({mab, b, mbc});
        out.push_back({mca, mbc, c});
        out.push_back({mab, mbc, mca});
        continue;
      }
      int split_edge = -1;
      for (int e = 0; e < 3; ++e)
        if (marked.count(edge_key(tris[t][e], tris[t][(e + 1) % 3]))) split_edge = e;
      if (split_edge < 0) {
        out.push_back(tris[t]);
        continue;
      }
      // Green bisection from the vertex opposite the split edge.
      const std::size_t p = tris[t][split_edge];
      const std::size_t q = tris[t][(split_edge + 1) % 3];
      const std::size_t r = tris[t][(split_edge + 2) % 3];
      const std::size_t m = midpoint(p, q);
      out.push_back({p, m, r});
      out.push_back({m, q, r});
    }

    std::vector<BoundaryFacet> facets;
    for (const auto& f : current.boundary_facets()) {
      auto it = marked.find(edge_key(f.vertices[0], f.vertices[1]));
      if (it == marked.end()) {
        facets.push_back(f);
      } else {
        facets.push_back({{f.vertices[0], it->second}, f.tag});
        facets.push_back({{it->second, f.vertices[1]}, f.tag});
      }
    }
    current = Mesh(std::move(vertices), std::move(out), std::move(facets),
                   current.side_length());
  }
  return current;
}

MeshCheck check_mesh(const Mesh& mesh) {
  MeshCheck check;
  const auto& tris = mesh.triangles();
  const auto& verts = mesh.vertices();

  std::map<EdgeKey, int> edge_count;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    if (!(mesh.signed_area(t) > 0.0)) ++check.non_positive_triangles;
    for (int e = 0; e < 3; ++e) ++edge_count[edge_key(tris[t][e], tris[t][(e + 1) % 3])];
  }

  std::map<EdgeKey, int> facet_count;
  for (const auto& f : mesh.boundary_facets())
    ++facet_count[edge_key(f.vertices[0], f.vertices[1])];

  for (const auto& [edge, count] : edge_count) {
    if (count > 2) ++check.over_shared_edges;
    const auto it = facet_count.find(edge);
    const int tags = it == facet_count.end() ? 0 : it->second;
    if (count == 1 && tags == 0) ++check.untagged_boundary_edges;
    if (tags > 1) ++check.multiply_tagged_edges;
    if (count == 2 && tags > 0) ++check.tagged_interior_edges;
  }
  for (const auto& [edge, tags] : facet_count)
    if (!edge_count.count(edge)) check.tagged_interior_edges += static_cast<std::size_t>(tags);

  // A vertex strictly inside an edge is a hanging node.
  const double scale = mesh.side_length();
  for (const auto& [edge, count] : edge_count) {
    const Point& a = verts[edge.first];
    const Point& b = verts[edge.second];
    const double lo_x = std::min(a.x, b.x), hi_x = std::max(a.x, b.x);
    const double lo_y = std::min(a.y, b.y), hi_y = std::max(a.y, b.y);
    const double len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
    for (std::size_t v = 0; v < verts.size(); ++v) {
      if (v == edge.first || v == edge.second) continue;
      const Point& p = verts[v];
      if (p.x < lo_x || p.x > hi_x || p.y < lo_y || p.y > hi_y) continue;
      const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      if (std::abs(cross) > 1e-12 * scale * scale) continue;
      const double s = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len2;
      if (s > 1e-12 && s < 1.0 - 1e-12) ++check.hanging_nodes;
    }
  }

  const double target = scale * scale;
  check.area_error = std::abs(mesh.total_area() - target) / target;
  return check;
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << "vertices " << mesh.num_vertices() << " triangles " << mesh.num_triangles()
      << '\n';
  out.precision(17);
  for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.y << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace porosplit
