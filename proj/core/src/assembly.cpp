#include "porosplit/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "porosplit/quadrature.hpp"

namespace porosplit {

namespace {

// Basis values and physical gradients of one space at one quadrature point.
struct PointBasis {
  int count = 0;
  double value[6]{};
  Point grad[6]{};
};

PointBasis physical_basis(int degree, const CellGeometry& g, double xi, double eta) {
  const BasisValues ref = evaluate_basis(degree, xi, eta);
  PointBasis b;
  b.count = ref.count;
  for (int a = 0; a < ref.count; ++a) {
    b.value[a] = ref.values[a];
    b.grad[a] = g.physical_gradient(ref.gradients[a]);
  }
  return b;
}

void require_same_mesh(const FeSpace& a, const FeSpace& b) {
  if (&a.mesh() != &b.mesh()) throw std::invalid_argument("assembly: spaces live on different meshes");
}

// Scatter a dense local matrix. With `symmetric` the upper triangle is
// mirrored so that both (i, j) and (j, i) receive bitwise equal values.
void scatter(CooBuilder& coo, const std::vector<std::size_t>& rows,
             const std::vector<std::size_t>& cols, const std::vector<double>& local,
             bool symmetric) {
  const std::size_t nc = cols.size();
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < nc; ++j) {
      const double v = symmetric && j < i ? local[j * nc + i] : local[i * nc + j];
      coo.add(rows[i], cols[j], v);
    }
}

// Divergence of w * phi_a e_c at a point.
double weighted_div(const PointBasis& b, int a, int c, double w, const Point& gw) {
  const double dphi = c == 0 ? b.grad[a].x : b.grad[a].y;
  const double dw = c == 0 ? gw.x : gw.y;
  return w * dphi + dw * b.value[a];
}

}  // namespace

CsrMatrix assemble_weighted_mass(const FeSpace& space, const ScalarField& weight) {
  return assemble_cross_mass(space, space, weight);
}

CsrMatrix assemble_cross_mass(const FeSpace& rs, const FeSpace& cs, const ScalarField& weight) {
  require_same_mesh(rs, cs);
  if (rs.n_components() != cs.n_components())
    throw std::invalid_argument("assemble_cross_mass: component counts differ");
  const bool symmetric = &rs == &cs || (rs.degree() == cs.degree());
  const int nc = rs.n_components();
  const Mesh& mesh = rs.mesh();
  CooBuilder coo(rs.n_dofs(), cs.n_dofs());
  std::vector<std::size_t> rd, cd;
  std::vector<double> local;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const CellGeometry g = cell_geometry(mesh, t);
    rs.cell_dofs(t, rd);
    cs.cell_dofs(t, cd);
    local.assign(rd.size() * cd.size(), 0.0);
    for (const auto& q : triangle_rule()) {
      const double jw = q.weight * g.det * weight(g.map(q.xi, q.eta));
      const BasisValues br = evaluate_basis(rs.degree(), q.xi, q.eta);
      const BasisValues bc = evaluate_basis(cs.degree(), q.xi, q.eta);
      for (int a = 0; a < br.count; ++a)
        for (int b = 0; b < bc.count; ++b) {
          const double v = jw * br.values[a] * bc.values[b];
          for (int c = 0; c < nc; ++c)
            local[(a * nc + c) * cd.size() + (b * nc + c)] += v;
        }
    }
    scatter(coo, rd, cd, local, symmetric);
  }
  return coo.build();
}

CsrMatrix assemble_tensor_mass(const FeSpace& space, const TensorField& weight) {
  if (space.n_components() != 2) throw std::invalid_argument("assemble_tensor_mass: vector space required");
  const Mesh& mesh = space.mesh();
  CooBuilder coo(space.n_dofs(), space.n_dofs());
  std::vector<std::size_t> d;
  std::vector<double> local;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const CellGeometry g = cell_geometry(mesh, t);
    space.cell_dofs(t, d);
    const std::size_t n = d.size();
    local.assign(n * n, 0.0);
    for (const auto& q : triangle_rule()) {
      const auto w = weight(g.map(q.xi, q.eta));
      const double jw = q.weight * g.det;
      const BasisValues b = evaluate_basis(space.degree(), q.xi, q.eta);
      for (int a = 0; a < b.count; ++a)
        for (int e = 0; e < b.count; ++e)
          for (int c = 0; c < 2; ++c)
            for (int k = 0; k < 2; ++k)
              local[(a * 2 + c) * n + (e * 2 + k)] +=
                  jw * w[static_cast<std::size_t>(c * 2 + k)] * b.values[a] * b.values[e];
    }
    scatter(coo, d, d, local, true);
  }
  return coo.build();
}

CsrMatrix assemble_elastic_stiffness(const FeSpace& space, const ScalarField& lambda,
                                     const ScalarField& mu) {
  if (space.n_components() != 2)
    throw std::invalid_argument("assemble_elastic_stiffness: vector space required");
  const Mesh& mesh = space.mesh();
  CooBuilder coo(space.n_dofs(), space.n_dofs());
  std::vector<std::size_t> d;
  std::vector<double> local;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const CellGeometry g = cell_geometry(mesh, t);
    space.cell_dofs(t, d);
    const std::size_t n = d.size();
    local.assign(n * n, 0.0);
    for (const auto& q : triangle_rule()) {
      const Point x = g.map(q.xi, q.eta);
      const double jw = q.weight * g.det, lam = lambda(x), m = mu(x);
      const PointBasis b = physical_basis(space.degree(), g, q.xi, q.eta);
      for (int a = 0; a < b.count; ++a)
        for (int e = 0; e < b.count; ++e) {
          const double ga[2] = {b.grad[a].x, b.grad[a].y};
          const double ge[2] = {b.grad[e].x, b.grad[e].y};
          const double gg = ga[0] * ge[0] + ga[1] * ge[1];
          for (int c = 0; c < 2; ++c)
            for (int k = 0; k < 2; ++k) {
              // test phi_a e_c, trial phi_e e_k
              const double v = lam * ga[c] * ge[k] + m * ((c == k ? gg : 0.0) + ga[k] * ge[c]);
              local[(a * 2 + c) * n + (e * 2 + k)] += jw * v;
            }
        }
    }
    scatter(coo, d, d, local, true);
  }
  return coo.build();
}

CsrMatrix assemble_div_coupling(const FeSpace& ps, const FeSpace& vs, const ScalarField& weight) {
  require_same_mesh(ps, vs);
  if (ps.n_components() != 1 || vs.n_components() != 2)
    throw std::invalid_argument("assemble_div_coupling: needs scalar trial and vector test space");
  const Mesh& mesh = ps.mesh();
  CooBuilder coo(vs.n_dofs(), ps.n_dofs());
  std::vector<std::size_t> rd, cd;
  std::vector<double> local;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const CellGeometry g = cell_geometry(mesh, t);
    vs.cell_dofs(t, rd);
    ps.cell_dofs(t, cd);
    local.assign(rd.size() * cd.size(), 0.0);
    for (const auto& q : triangle_rule()) {
      const Point x = g.map(q.xi, q.eta);
      const double jw = q.weight * g.det, w = weight(x);
      const Point gw = weight.gradient(x);
      const PointBasis bv = physical_basis(vs.degree(), g, q.xi, q.eta);
      const BasisValues bp = evaluate_basis(ps.degree(), q.xi, q.eta);
      for (int a = 0; a < bv.count; ++a)
        for (int c = 0; c < 2; ++c) {
          const double div = jw * weighted_div(bv, a, c, w, gw);
          for (int b = 0; b < bp.count; ++b) local[(a * 2 + c) * cd.size() + b] += div * bp.values[b];
        }
    }
    scatter(coo, rd, cd, local, false);
  }
  return coo.build();
}

CsrMatrix assemble_divdiv(const FeSpace& sa, const FeSpace& sb, const ScalarField& wa,
                          const ScalarField& wb, const ScalarField& scale) {
  require_same_mesh(sa, sb);
  if (sa.n_components() != 2 || sb.n_components() != 2)
    throw std::invalid_argument("assemble_divdiv: vector spaces required");
  const bool symmetric = &sa == &sb;
  const Mesh& mesh = sa.mesh();
  CooBuilder coo(sa.n_dofs(), sb.n_dofs());
  std::vector<std::size_t> rd, cd;
  std::vector<double> local;
  double da[12], db[12];
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const CellGeometry g = cell_geometry(mesh, t);
    sa.cell_dofs(t, rd);
    sb.cell_dofs(t, cd);
    local.assign(rd.size() * cd.size(), 0.0);
    for (const auto& q : triangle_rule()) {
      const Point x = g.map(q.xi, q.eta);
      const double jw = q.weight * g.det * scale(x);
      const double w1 = wa(x), w2 = wb(x);
      const Point g1 = wa.gradient(x), g2 = wb.gradient(x);
      const PointBasis ba = physical_basis(sa.degree(), g, q.xi, q.eta);
      const PointBasis bb = physical_basis(sb.degree(), g, q.xi, q.eta);
      for (int a = 0; a < ba.count; ++a)
        for (int c = 0; c < 2; ++c) da[a * 2 + c] = weighted_div(ba, a, c, w1, g1);
      for (int b = 0; b < bb.count; ++b)
        for (int c = 0; c < 2; ++c) db[b * 2 + c] = weighted_div(bb, b, c, w2, g2);
      for (std::size_t i = 0; i < rd.size(); ++i)
        for (std::size_t j = 0; j < cd.size(); ++j) local[i * cd.size() + j] += jw * da[i] * db[j];
    }
    scatter(coo, rd, cd, local, symmetric);
  }
  return coo.build();
}

Vector assemble_neumann_load(const FeSpace& space, BoundaryTag tag, const VectorFunction& traction,
                             const ScalarField& weight) {
  const Mesh& mesh = space.mesh();
  if (!mesh.has_tag(tag))
    throw std::invalid_argument("assemble_neumann_load: tag '" + std::string(to_string(tag)) +
                                "' not present on mesh");
  // Locate the owning triangle and local edge of every tagged facet.
  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, int>> owner;
  const auto& tris = mesh.triangles();
  for (std::size_t t = 0; t < tris.size(); ++t)
    for (int e = 0; e < 3; ++e) {
      const std::size_t a = tris[t][e], b = tris[t][(e + 1) % 3];
      owner[{std::min(a, b), std::max(a, b)}] = {t, e};
    }
  const auto ref = reference_nodes(1);
  Vector f(space.n_dofs(), 0.0);
  std::vector<std::size_t> d;
  const int nc = space.n_components();
  for (const auto& facet : mesh.boundary_facets()) {
    if (facet.tag != tag) continue;
    const auto [t, e] = owner.at({std::min(facet.vertices[0], facet.vertices[1]),
                                  std::max(facet.vertices[0], facet.vertices[1])});
    const CellGeometry g = cell_geometry(mesh, t);
    const Point& r0 = ref[static_cast<std::size_t>(e)];
    const Point& r1 = ref[static_cast<std::size_t>((e + 1) % 3)];
    const Point& p0 = mesh.vertices()[tris[t][e]];
    const Point& p1 = mesh.vertices()[tris[t][(e + 1) % 3]];
    const double length = std::hypot(p1.x - p0.x, p1.y - p0.y);
    space.cell_dofs(t, d);
    for (const auto& q : edge_rule()) {
      const double xi = r0.x + q.s * (r1.x - r0.x), eta = r0.y + q.s * (r1.y - r0.y);
      const Point x = g.map(xi, eta);
      const auto tr = traction(x);
      const double jw = q.weight * length * weight(x);
      const BasisValues b = evaluate_basis(space.degree(), xi, eta);
      for (int a = 0; a < b.count; ++a)
        for (int c = 0; c < nc; ++c) f[d[a * nc + c]] += jw * tr[static_cast<std::size_t>(c)] * b.values[a];
    }
  }
  return f;
}

Vector assemble_body_load(const FeSpace& space, const VectorFunction& source) {
  const Mesh& mesh = space.mesh();
  Vector f(space.n_dofs(), 0.0);
  std::vector<std::size_t> d;
  const int nc = space.n_components();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const CellGeometry g = cell_geometry(mesh, t);
    space.cell_dofs(t, d);
    for (const auto& q : triangle_rule()) {
      const auto s = source(g.map(q.xi, q.eta));
      const double jw = q.weight * g.det;
      const BasisValues b = evaluate_basis(space.degree(), q.xi, q.eta);
      for (int a = 0; a < b.count; ++a)
        for (int c = 0; c < nc; ++c) f[d[a * nc + c]] += jw * s[static_cast<std::size_t>(c)] * b.values[a];
    }
  }
  return f;
}

CsrMatrix constrain(const CsrMatrix& a, const DofSet& row_dofs, const DofSet& col_dofs,
                    bool unit_diagonal) {
  std::vector<char> row_fixed(a.rows(), 0), col_fixed(a.cols(), 0);
  for (std::size_t i : row_dofs.indices) row_fixed.at(i) = 1;
  for (std::size_t j : col_dofs.indices) col_fixed.at(j) = 1;
  CooBuilder coo(a.rows(), a.cols());
  coo.reserve(a.nnz());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const std::size_t j = a.col_idx()[k];
      if (row_fixed[i] || col_fixed[j]) continue;
      coo.add(i, j, a.values()[k]);
    }
    if (unit_diagonal && row_fixed[i]) coo.add(i, i, 1.0);
  }
  return coo.build();
}

void constrain(Vector& v, const DofSet& dofs) {
  for (std::size_t i : dofs.indices) v.at(i) = 0.0;
}

BlockSystem apply_dirichlet(const BlockSystem& s, const BlockDofs& d) {
  BlockSystem out;
  out.Ms = constrain(s.Ms, d.u, d.u, true);
  out.Ks = constrain(s.Ks, d.u, d.u, true);
  out.Dss = constrain(s.Dss, d.u, d.u, true);
  out.S = constrain(s.S, d.u, d.u, true);
  out.Mf = constrain(s.Mf, d.v, d.v, true);
  out.Kf = constrain(s.Kf, d.v, d.v, true);
  out.Dff = constrain(s.Dff, d.v, d.v, true);
  out.Mp = constrain(s.Mp, d.p, d.p, true);
  out.Dsf = constrain(s.Dsf, d.u, d.v, false);
  out.Bu = constrain(s.Bu, d.u, d.p, false);
  out.Bv = constrain(s.Bv, d.v, d.p, false);
  out.fs = s.fs;
  out.ff = s.ff;
  out.fp = s.fp;
  if (!out.fs.empty()) constrain(out.fs, d.u);
  if (!out.ff.empty()) constrain(out.ff, d.v);
  if (!out.fp.empty()) constrain(out.fp, d.p);
  return out;
}

}  // namespace porosplit
