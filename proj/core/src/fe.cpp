#include "porosplit/fe.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace porosplit {

ScalarField::ScalarField(double value) : constant_(value) {}

ScalarField::ScalarField(std::function<double(const Point&)> value,
                         std::function<Point(const Point&)> gradient)
    : value_(std::move(value)), gradient_(std::move(gradient)) {
  if (!value_ || !gradient_)
    throw std::invalid_argument("ScalarField: value and gradient are both required");
}

double ScalarField::operator()(const Point& p) const { return value_ ? value_(p) : constant_; }

Point ScalarField::gradient(const Point& p) const {
  return gradient_ ? gradient_(p) : Point{0.0, 0.0};
}

Point CellGeometry::map(double xi, double eta) const {
  return {origin.x + jac[0][0] * xi + jac[0][1] * eta,
          origin.y + jac[1][0] * xi + jac[1][1] * eta};
}

Point CellGeometry::physical_gradient(const Point& g) const {
  return {inv_t[0][0] * g.x + inv_t[0][1] * g.y, inv_t[1][0] * g.x + inv_t[1][1] * g.y};
}

CellGeometry cell_geometry(const Mesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles()[t];
  const Point& a = mesh.vertices()[tri[0]];
  const Point& b = mesh.vertices()[tri[1]];
  const Point& c = mesh.vertices()[tri[2]];
  CellGeometry g{};
  g.origin = a;
  g.jac[0][0] = b.x - a.x;
  g.jac[0][1] = c.x - a.x;
  g.jac[1][0] = b.y - a.y;
  g.jac[1][1] = c.y - a.y;
  g.det = g.jac[0][0] * g.jac[1][1] - g.jac[0][1] * g.jac[1][0];
  // J^{-T} = (1/det) [[d, -c], [-b, a]] for J = [[a, b], [c, d]]
  g.inv_t[0][0] = g.jac[1][1] / g.det;
  g.inv_t[0][1] = -g.jac[1][0] / g.det;
  g.inv_t[1][0] = -g.jac[0][1] / g.det;
  g.inv_t[1][1] = g.jac[0][0] / g.det;
  return g;
}

BasisValues evaluate_basis(int degree, double xi, double eta) {
  BasisValues b;
  const double l0 = 1.0 - xi - eta, l1 = xi, l2 = eta;
  const Point g0{-1.0, -1.0}, g1{1.0, 0.0}, g2{0.0, 1.0};
  if (degree == 1) {
    b.count = 3;
    b.values = {l0, l1, l2, 0, 0, 0};
    b.gradients[0] = g0;
    b.gradients[1] = g1;
    b.gradients[2] = g2;
    return b;
  }
  if (degree != 2) throw std::invalid_argument("evaluate_basis: degree must be 1 or 2");
  b.count = 6;
  const double l[3] = {l0, l1, l2};
  const Point g[3] = {g0, g1, g2};
  for (int i = 0; i < 3; ++i) {
    b.values[i] = l[i] * (2.0 * l[i] - 1.0);
    const double s = 4.0 * l[i] - 1.0;
    b.gradients[i] = {s * g[i].x, s * g[i].y};
  }
  const int ea[3] = {0, 1, 2}, eb[3] = {1, 2, 0};
  for (int e = 0; e < 3; ++e) {
    const int i = ea[e], j = eb[e];
    b.values[3 + e] = 4.0 * l[i] * l[j];
    b.gradients[3 + e] = {4.0 * (g[i].x * l[j] + l[i] * g[j].x),
                          4.0 * (g[i].y * l[j] + l[i] * g[j].y)};
  }
  return b;
}

std::span<const Point> reference_nodes(int degree) {
  static const Point nodes[6] = {{0, 0}, {1, 0}, {0, 1}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}};
  if (degree == 1) return {nodes, 3};
  if (degree == 2) return {nodes, 6};
  throw std::invalid_argument("reference_nodes: degree must be 1 or 2");
}

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int degree, int n_components)
    : mesh_(std::move(mesh)), degree_(degree), n_components_(n_components) {
  if (!mesh_) throw std::invalid_argument("FeSpace: null mesh");
  if (degree_ != 1 && degree_ != 2)
    throw std::invalid_argument("FeSpace: unsupported degree " + std::to_string(degree_));
  if (n_components_ != 1 && n_components_ != 2)
    throw std::invalid_argument("FeSpace: n_components must be 1 or 2");

  const auto& tris = mesh_->triangles();
  node_points_ = mesh_->vertices();
  const int npc = nodes_per_cell();
  cell_nodes_.resize(tris.size() * static_cast<std::size_t>(npc));
  for (std::size_t t = 0; t < tris.size(); ++t)
    for (int a = 0; a < 3; ++a) cell_nodes_[t * npc + a] = tris[t][a];
  if (degree_ == 1) return;

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index;
  for (const auto& tri : tris)
    for (int e = 0; e < 3; ++e) {
      const std::size_t a = tri[e], b = tri[(e + 1) % 3];
      edge_index.emplace(std::pair{std::min(a, b), std::max(a, b)}, 0);
    }
  const std::size_t nv = mesh_->num_vertices();
  std::size_t next = 0;
  for (auto& [key, idx] : edge_index) {
    idx = nv + next++;
    edges_.push_back({key.first, key.second});
    const Point& p = mesh_->vertices()[key.first];
    const Point& q = mesh_->vertices()[key.second];
    node_points_.push_back({0.5 * (p.x + q.x), 0.5 * (p.y + q.y)});
  }
  for (std::size_t t = 0; t < tris.size(); ++t)
    for (int e = 0; e < 3; ++e) {
      const std::size_t a = tris[t][e], b = tris[t][(e + 1) % 3];
      cell_nodes_[t * npc + 3 + e] = edge_index.at({std::min(a, b), std::max(a, b)});
    }
}

std::span<const std::size_t> FeSpace::cell_nodes(std::size_t t) const {
  const auto npc = static_cast<std::size_t>(nodes_per_cell());
  return {cell_nodes_.data() + t * npc, npc};
}

void FeSpace::cell_dofs(std::size_t t, std::vector<std::size_t>& out) const {
  out.clear();
  for (std::size_t node : cell_nodes(t))
    for (int c = 0; c < n_components_; ++c) out.push_back(dof(node, c));
}

std::size_t FeSpace::edge_node(std::size_t a, std::size_t b) const {
  const std::array<std::size_t, 2> key{std::min(a, b), std::max(a, b)};
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) throw std::out_of_range("FeSpace: not an edge");
  return mesh_->num_vertices() + static_cast<std::size_t>(it - edges_.begin());
}

FeSpace build_space(std::shared_ptr<const Mesh> mesh, int degree, int n_components) {
  return FeSpace(std::move(mesh), degree, n_components);
}

bool DofSet::contains(std::size_t dof) const {
  return std::binary_search(indices.begin(), indices.end(), dof);
}

DofSet dirichlet_dofs(const FeSpace& space, const std::vector<BoundaryTag>& tags,
                      std::array<bool, 2> mask) {
  const Mesh& mesh = space.mesh();
  for (BoundaryTag tag : tags)
    if (!mesh.has_tag(tag))
      throw std::invalid_argument("dirichlet_dofs: tag '" + std::string(to_string(tag)) +
                                  "' not present on mesh");
  std::vector<std::size_t> nodes;
  for (const auto& f : mesh.boundary_facets()) {
    if (std::find(tags.begin(), tags.end(), f.tag) == tags.end()) continue;
    nodes.push_back(f.vertices[0]);
    nodes.push_back(f.vertices[1]);
    if (space.degree() == 2) nodes.push_back(space.edge_node(f.vertices[0], f.vertices[1]));
  }
  DofSet set;
  set.mask = mask;
  for (std::size_t node : nodes)
    for (int c = 0; c < space.n_components(); ++c)
      if (mask[static_cast<std::size_t>(c)]) set.indices.push_back(space.dof(node, c));
  std::sort(set.indices.begin(), set.indices.end());
  set.indices.erase(std::unique(set.indices.begin(), set.indices.end()), set.indices.end());
  return set;
}

DofSet merge(const DofSet& a, const DofSet& b) {
  DofSet out;
  out.mask = {a.mask[0] || b.mask[0], a.mask[1] || b.mask[1]};
  std::set_union(a.indices.begin(), a.indices.end(), b.indices.begin(), b.indices.end(),
                 std::back_inserter(out.indices));
  return out;
}

Vector interpolate(const FeSpace& space,
                   const std::function<std::array<double, 2>(const Point&)>& f) {
  Vector x(space.n_dofs(), 0.0);
  for (std::size_t node = 0; node < space.n_nodes(); ++node) {
    const auto value = f(space.node_point(node));
    for (int c = 0; c < space.n_components(); ++c)
      x[space.dof(node, c)] = value[static_cast<std::size_t>(c)];
  }
  return x;
}

FieldSample evaluate_field(const FeSpace& space, const Vector& coefficients,
                           std::size_t t, double xi, double eta) {
  const BasisValues basis = evaluate_basis(space.degree(), xi, eta);
  const CellGeometry geom = cell_geometry(space.mesh(), t);
  const auto nodes = space.cell_nodes(t);
  FieldSample s;
  for (int a = 0; a < basis.count; ++a) {
    const Point g = geom.physical_gradient(basis.gradients[a]);
    for (int c = 0; c < space.n_components(); ++c) {
      const double coef = coefficients[space.dof(nodes[a], c)];
      s.value[c] += coef * basis.values[a];
      s.gradient[c].x += coef * g.x;
      s.gradient[c].y += coef * g.y;
    }
  }
  return s;
}

}  // namespace porosplit
