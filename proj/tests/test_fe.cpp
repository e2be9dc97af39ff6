#include <cmath>
#include <memory>
#include <random>
#include <set>

#include "doctest.h"
#include "porosplit/fe.hpp"
#include "porosplit/quadrature.hpp"

using namespace porosplit;

namespace {

std::shared_ptr<const Mesh> square(std::size_t n, double L = 1.0) {
  return std::make_shared<const Mesh>(unit_square_mesh(n, L));
}

std::size_t brute_force_edges(const Mesh& m) {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& t : m.triangles())
    for (int e = 0; e < 3; ++e) edges.insert({std::min(t[e], t[(e + 1) % 3]), std::max(t[e], t[(e + 1) % 3])});
  return edges.size();
}

bool on_boundary(const Point& p, double L) {
  const double tol = 1e-12 * L;
  return p.x < tol || p.y < tol || p.x > L - tol || p.y > L - tol;
}

}  // namespace

TEST_CASE("dof counts") {
  const auto one = square(1);
  CHECK(build_space(one, 1, 1).n_dofs() == 4);
  CHECK(build_space(one, 2, 2).n_dofs() == 2 * (4 + brute_force_edges(*one)));
  CHECK(build_space(one, 2, 2).n_dofs() == 18);

  const auto ten = square(10, 1e-2);
  const std::size_t nv = ten->num_vertices(), ne = brute_force_edges(*ten);
  const std::size_t total = build_space(ten, 1, 2).n_dofs() + build_space(ten, 2, 2).n_dofs() +
                            build_space(ten, 1, 1).n_dofs();
  CHECK(total == 2 * nv + 2 * (nv + ne) + nv);
  CHECK(total == 1245);
  CHECK_THROWS(build_space(ten, 3, 1));
}

TEST_CASE("dof map is shared across neighbours and in range") {
  const auto m = square(3);
  for (int degree : {1, 2}) {
    const FeSpace s = build_space(m, degree, 2);
    std::vector<std::size_t> dofs;
    std::vector<int> seen(s.n_dofs(), 0);
    for (std::size_t t = 0; t < m->num_triangles(); ++t) {
      s.cell_dofs(t, dofs);
      CHECK(dofs.size() == static_cast<std::size_t>(s.dofs_per_cell()));
      for (auto d : dofs) {
        REQUIRE(d < s.n_dofs());
        seen[d] = 1;
      }
      // Nodes with the same physical point have the same index.
      auto nodes = s.cell_nodes(t);
      for (std::size_t a = 0; a < nodes.size(); ++a) {
        const Point ref = reference_nodes(degree)[a];
        const Point phys = cell_geometry(*m, t).map(ref.x, ref.y);
        CHECK(s.node_point(nodes[a]).x == doctest::Approx(phys.x));
        CHECK(s.node_point(nodes[a]).y == doctest::Approx(phys.y));
      }
    }
    for (int v : seen) CHECK(v == 1);
  }
}

TEST_CASE("dirichlet dofs match a coordinate scan") {
  SUBCASE("P1 scalar, one cell, bottom") {
    const FeSpace s = build_space(square(1), 1, 1);
    CHECK(dirichlet_dofs(s, {BoundaryTag::bottom}).size() == 2);
  }
  SUBCASE("P1 vector on the swelling mesh, bottom, y only") {
    const FeSpace s = build_space(square(10, 1e-2), 1, 2);
    const DofSet d = dirichlet_dofs(s, {BoundaryTag::bottom}, {false, true});
    std::vector<std::size_t> expected;
    for (std::size_t n = 0; n < s.n_nodes(); ++n)
      if (std::abs(s.node_point(n).y) < 1e-14) expected.push_back(s.dof(n, 1));
    std::sort(expected.begin(), expected.end());
    CHECK(d.size() == 11);
    CHECK(d.indices == expected);
  }
  SUBCASE("P2 vector, all sides") {
    const double L = 1e-2;
    const FeSpace s = build_space(square(4, L), 2, 2);
    const DofSet d = dirichlet_dofs(
        s, {BoundaryTag::left, BoundaryTag::right, BoundaryTag::bottom, BoundaryTag::top});
    std::vector<std::size_t> expected;
    for (std::size_t n = 0; n < s.n_nodes(); ++n)
      if (on_boundary(s.node_point(n), L)) {
        expected.push_back(s.dof(n, 0));
        expected.push_back(s.dof(n, 1));
      }
    std::sort(expected.begin(), expected.end());
    CHECK(d.indices == expected);
    for (std::size_t i = 1; i < d.indices.size(); ++i) CHECK(d.indices[i - 1] < d.indices[i]);
  }
  SUBCASE("merge is a sorted union") {
    const FeSpace s = build_space(square(2), 1, 1);
    const DofSet a = dirichlet_dofs(s, {BoundaryTag::bottom});
    const DofSet b = dirichlet_dofs(s, {BoundaryTag::left});
    const DofSet u = merge(a, b);
    CHECK(u.size() == 5);
    CHECK(std::is_sorted(u.indices.begin(), u.indices.end()));
  }
}

TEST_CASE("basis functions") {
  SUBCASE("P1 at the barycenter") {
    const BasisValues b = evaluate_basis(1, 1.0 / 3.0, 1.0 / 3.0);
    REQUIRE(b.count == 3);
    for (int i = 0; i < 3; ++i) CHECK(b.values[i] == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("Lagrange property") {
    for (int degree : {1, 2}) {
      const auto nodes = reference_nodes(degree);
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        const BasisValues b = evaluate_basis(degree, nodes[j].x, nodes[j].y);
        for (int i = 0; i < b.count; ++i)
          CHECK(b.values[i] == doctest::Approx(i == static_cast<int>(j) ? 1.0 : 0.0).epsilon(1e-15));
      }
    }
  }
  SUBCASE("partition of unity at random points") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      double xi = u(rng), eta = u(rng);
      if (xi + eta > 1.0) {
        xi = 1.0 - xi;
        eta = 1.0 - eta;
      }
      for (int degree : {1, 2}) {
        const BasisValues b = evaluate_basis(degree, xi, eta);
        double sum = 0.0, gx = 0.0, gy = 0.0;
        for (int i = 0; i < b.count; ++i) {
          sum += b.values[i];
          gx += b.gradients[i].x;
          gy += b.gradients[i].y;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-14);
        CHECK(std::abs(gx) <= 1e-13);
        CHECK(std::abs(gy) <= 1e-13);
      }
    }
  }
  SUBCASE("gradients agree with central differences") {
    const double xi = 0.21, eta = 0.37, h = 1e-6;
    const BasisValues b = evaluate_basis(2, xi, eta);
    const BasisValues bx1 = evaluate_basis(2, xi + h, eta), bx0 = evaluate_basis(2, xi - h, eta);
    const BasisValues by1 = evaluate_basis(2, xi, eta + h), by0 = evaluate_basis(2, xi, eta - h);
    for (int i = 0; i < 6; ++i) {
      CHECK(b.gradients[i].x == doctest::Approx((bx1.values[i] - bx0.values[i]) / (2 * h)).epsilon(1e-7));
      CHECK(b.gradients[i].y == doctest::Approx((by1.values[i] - by0.values[i]) / (2 * h)).epsilon(1e-7));
    }
  }
}

TEST_CASE("interpolation reproduces polynomials of the space degree") {
  const auto m = square(3, 2.0);
  for (int degree : {1, 2}) {
    const FeSpace s = build_space(m, degree, 2);
    auto f = [degree](const Point& p) -> std::array<double, 2> {
      if (degree == 1) return {1.0 + 2.0 * p.x - 3.0 * p.y, -0.5 + p.x + p.y};
      return {p.x * p.x - p.x * p.y + 0.3, 2.0 * p.y * p.y + p.x};
    };
    const Vector c = interpolate(s, f);
    for (std::size_t t = 0; t < m->num_triangles(); ++t)
      for (const auto& q : triangle_rule()) {
        const FieldSample fs = evaluate_field(s, c, t, q.xi, q.eta);
        const Point x = cell_geometry(*m, t).map(q.xi, q.eta);
        const auto exact = f(x);
        CHECK(std::abs(fs.value[0] - exact[0]) <= 1e-12);
        CHECK(std::abs(fs.value[1] - exact[1]) <= 1e-12);
      }
  }
  // Gradient of a linear field is reproduced exactly.
  const FeSpace s1 = build_space(m, 1, 1);
  const Vector c = interpolate(s1, [](const Point& p) -> std::array<double, 2> { return {2.0 * p.x - 3.0 * p.y, 0.0}; });
  const FieldSample fs = evaluate_field(s1, c, 4, 0.2, 0.3);
  CHECK(fs.gradient[0].x == doctest::Approx(2.0));
  CHECK(fs.gradient[0].y == doctest::Approx(-3.0));
}

TEST_CASE("quadrature rules") {
  double w = 0.0;
  for (const auto& q : triangle_rule()) w += q.weight;
  CHECK(w == doctest::Approx(0.5).epsilon(1e-15));
  // Exact monomials on the reference triangle: int xi^a eta^b = a! b! / (a + b + 2)!
  auto fact = [](int n) { double f = 1; for (int i = 2; i <= n; ++i) f *= i; return f; };
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b) {
      double s = 0.0;
      for (const auto& q : triangle_rule()) s += q.weight * std::pow(q.xi, a) * std::pow(q.eta, b);
      CHECK(std::abs(s - fact(a) * fact(b) / fact(a + b + 2)) <= 1e-15);
    }
  double e = 0.0, e5 = 0.0;
  for (const auto& q : edge_rule()) {
    e += q.weight;
    e5 += q.weight * std::pow(q.s, 5);
  }
  CHECK(e == doctest::Approx(1.0));
  CHECK(e5 == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  const auto composite = composite_triangle_rule(2);
  CHECK(composite.size() == 16 * triangle_rule().size());
  double s6 = 0.0;
  for (const auto& q : composite) s6 += q.weight * std::pow(q.xi, 6);
  CHECK(s6 == doctest::Approx(fact(6) / fact(8)).epsilon(1e-4));
}

TEST_CASE("scalar fields") {
  const ScalarField c(2.5);
  CHECK(c.is_constant());
  CHECK(c({0.3, 0.1}) == 2.5);
  const ScalarField f([](const Point& p) { return p.x * p.y; }, [](const Point& p) { return Point{p.y, p.x}; });
  CHECK_FALSE(f.is_constant());
  CHECK(f({2.0, 3.0}) == 6.0);
  CHECK(f.gradient({2.0, 3.0}).x == 3.0);
}
