#include <cmath>
#include <random>

#include "doctest.h"
#include "porosplit/analysis.hpp"
#include "porosplit/splitters.hpp"
#include "support.hpp"

using namespace porosplit;

namespace {

struct Solved {
  std::unique_ptr<Problem> pb;
  StepRhs rhs;
  Vector u, v, p;
};

// Second time step of a small swelling run, solved monolithically.
Solved second_step(const ParameterMap& overrides = {{"n_per_side", "4"}}) {
  Solved s;
  s.pb = build_benchmark(CaseKind::swelling, overrides);
  SplitConfig cfg = SplitConfig::parse("monolithic");
  cfg.inner_rtol = 1e-12;
  StepSolver solver(*s.pb, cfg);
  IterationReport rep;
  const State s1 = advance(solver, s.pb->initial_state(), rep);
  s.rhs = s.pb->step_rhs(s1);
  s.u = s1.u_prev;
  s.v = s1.v_prev;
  s.p = s1.p_prev;
  solver.solve(s.rhs, s.u, s.v, s.p);
  return s;
}

Vector random_free(std::size_t n, const DofSet& fixed, std::mt19937_64& rng, double scale) {
  Vector x = test::random_vector(n, rng, scale);
  constrain(x, fixed);
  return x;
}

Vector plus(const Vector& a, double t, const Vector& b) {
  Vector r = a;
  axpy(t, b, r);
  return r;
}

}  // namespace

TEST_CASE("energy") {
  SUBCASE("zero state and data") {
    auto pb = build_benchmark(CaseKind::swelling, {{"n_per_side", "2"}});
    const StepRhs zero{0.0, Vector(pb->n_u(), 0.0), Vector(pb->n_v(), 0.0), Vector(pb->n_p(), 0.0)};
    CHECK(energy(*pb, zero, zero.bs, zero.bf) == 0.0);
    CHECK(error_norm(*pb, zero.bs, zero.bf) == 0.0);
  }

  Solved s = second_step();
  const Problem& pb = *s.pb;
  const double dt = pb.params().dt;
  std::mt19937_64 rng(31);
  const double us = norm_inf(s.u), vs = norm_inf(s.v);

  SUBCASE("directional derivative equals the weak-form residual") {
    StepSolver helper(pb, SplitConfig::parse("altmin"));
    for (int trial = 0; trial < 5; ++trial) {
      const Vector u = random_free(pb.n_u(), pb.dofs().u, rng, us);
      const Vector v = random_free(pb.n_v(), pb.dofs().v, rng, vs);
      const Vector du = random_free(pb.n_u(), pb.dofs().u, rng, us);
      const Vector dv = random_free(pb.n_v(), pb.dofs().v, rng, vs);
      const double h = 1e-3;
      const double fd = (energy(pb, s.rhs, plus(u, h, du), plus(v, h, dv)) -
                         energy(pb, s.rhs, plus(u, -h, du), plus(v, -h, dv))) / (2 * h);
      // The pressure eliminated from the mass balance makes the first two
      // residual rows the negative gradient (the fluid row scaled by dt).
      const Vector p = helper.consistent_pressure(s.rhs, u, v);
      Vector ru, rv, rp;
      pb.residual(s.rhs, u, v, p, ru, rv, rp);
      const double weak = -(dot(ru, du) + dt * dot(rv, dv));
      CHECK(fd == doctest::Approx(weak).epsilon(1e-6));
    }
  }
  SUBCASE("the coupled solution minimizes the energy") {
    const double j0 = energy(pb, s.rhs, s.u, s.v);
    for (int trial = 0; trial < 100; ++trial) {
      const double scale = std::pow(10.0, -1.0 - trial % 6);
      const Vector du = random_free(pb.n_u(), pb.dofs().u, rng, scale * us);
      const Vector dv = random_free(pb.n_v(), pb.dofs().v, rng, scale * vs);
      CHECK(energy(pb, s.rhs, plus(s.u, 1.0, du), plus(s.v, 1.0, dv)) >= j0 - 1e-12 * std::abs(j0));
    }
  }
  SUBCASE("norm identity at the minimizer and strong convexity") {
    const double j0 = energy(pb, s.rhs, s.u, s.v);
    for (int trial = 0; trial < 5; ++trial) {
      const Vector du = random_free(pb.n_u(), pb.dofs().u, rng, 0.3 * us);
      const Vector dv = random_free(pb.n_v(), pb.dofs().v, rng, 0.3 * vs);
      const double n2 = error_norm_squared(pb, du, dv);
      CHECK(n2 > 0.0);
      CHECK(n2 == doctest::Approx(2.0 * (energy(pb, s.rhs, plus(s.u, 1.0, du), plus(s.v, 1.0, dv)) - j0)).epsilon(1e-6));
      CHECK(error_norm_squared(pb, plus(Vector(du.size(), 0.0), 2.0, du), plus(Vector(dv.size(), 0.0), 2.0, dv)) ==
            doctest::Approx(4.0 * n2).epsilon(1e-13));
      CHECK(error_norm(pb, du, dv) == doctest::Approx(std::sqrt(n2)));

      // J(x + d) - J(x) - DJ(x) d = |d|^2 / 2 at an arbitrary x.
      const Vector x_u = random_free(pb.n_u(), pb.dofs().u, rng, us);
      const Vector x_v = random_free(pb.n_v(), pb.dofs().v, rng, vs);
      StepSolver helper(pb, SplitConfig::parse("altmin"));
      const Vector p = helper.consistent_pressure(s.rhs, x_u, x_v);
      Vector ru, rv, rp;
      pb.residual(s.rhs, x_u, x_v, p, ru, rv, rp);
      const double dj = -(dot(ru, du) + dt * dot(rv, dv));
      const double lhs = energy(pb, s.rhs, plus(x_u, 1.0, du), plus(x_v, 1.0, dv)) - energy(pb, s.rhs, x_u, x_v) - dj;
      CHECK(lhs == doctest::Approx(0.5 * n2).epsilon(1e-6));
    }
  }
}

TEST_CASE("Korn constants") {
  SUBCASE("constant porosity has no gradient term") {
    auto pb = build_benchmark(CaseKind::swelling, {{"n_per_side", "2"}});
    CHECK(korn_constants(*pb).c_korn1 == 0.0);
  }
  SUBCASE("C_Korn2 against a dense generalized eigensolver") {
    auto pb = build_benchmark(CaseKind::swelling, {{"n_per_side", "2"}});
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < pb->n_u(); ++i)
      if (!pb->dofs().u.contains(i)) free.push_back(i);
    const Eigen::MatrixXd a = test::dense(submatrix(pb->raw().Dss, free, free));
    const Eigen::MatrixXd b = test::dense(submatrix(pb->raw().Ks, free, free));
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> oracle(a, b);
    // Dss carries phi0^2 / kappa_f.
    const double phi0 = pb->params().phi0;
    const Eigen::MatrixXd m = test::dense(submatrix(assemble_weighted_mass(pb->U(), 1.0), free, free));
    CHECK((a - phi0 * phi0 / pb->params().kappa_f * m).cwiseAbs().maxCoeff() <= 1e-12 * a.cwiseAbs().maxCoeff());
    CHECK(korn_constants(*pb).c_korn2 == doctest::Approx(oracle.eigenvalues().maxCoeff()).epsilon(1e-6));
  }
  SUBCASE("doubling the stiffness halves both constants") {
    const ParameterMap base{{"n_per_side", "3"}, {"porosity_ell", "2"}};
    ParameterMap stiff = base;
    stiff["lambda"] = "1422";
    stiff["mu"] = "8132";
    const KornConstants k1 = korn_constants(*build_benchmark(CaseKind::swelling, base));
    const KornConstants k2 = korn_constants(*build_benchmark(CaseKind::swelling, stiff));
    CHECK(k1.c_korn1 > 0.0);
    CHECK(k2.c_korn1 == doctest::Approx(0.5 * k1.c_korn1).epsilon(1e-7));
    CHECK(k2.c_korn2 == doctest::Approx(0.5 * k1.c_korn2).epsilon(1e-7));
  }
}

namespace {

// Brute force over a 200^3 grid: log-spaced zeta, linear eta and theta.
double gamma_grid(const Problem& pb, const KornConstants& k) {
  const double dt = pb.params().dt, n = pb.max_N();
  const double g1a = n * dt * dt * pb.max_grad_term(), g1b = dt * pb.max_drag_term();
  const double g2a = n * pb.inv_bulk_phi0(), g2b = n * k.c_korn1, g2c = k.c_korn2 / dt;
  double best = std::numeric_limits<double>::infinity();
  const int g = 200;
  for (int i = 0; i < g; ++i) {
    const double zeta = std::pow(10.0, -6.0 + 12.0 * i / (g - 1));
    for (int j = 0; j < g; ++j) {
      const double eta = static_cast<double>(j) / (g - 1);
      for (int l = 0; l < g; ++l) {
        const double th = static_cast<double>(l) / (g - 1);
        const double gamma1 = (1 + 1 / zeta) * eta * g1a + th * g1b;
        const double gamma2 = (1 + zeta) * g2a + (1 + 1 / zeta) * (1 - eta) * g2b + (1 - th) * g2c;
        best = std::min(best, std::max(gamma1, gamma2));
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("gamma") {
  SUBCASE("constant porosity swelling defaults match a grid search") {
    auto pb = build_benchmark(CaseKind::swelling);
    const KornConstants k = korn_constants(*pb);
    const GammaBreakdown g = gamma(*pb, k);
    CHECK(g.gamma == doctest::Approx(gamma_grid(*pb, k)).epsilon(0.01));
    CHECK(g.gamma <= gamma_grid(*pb, k) * (1 + 1e-12));
    CHECK(g.gamma == doctest::Approx(std::max(g.gamma1, g.gamma2)));
    CHECK(g.gamma2 >= (1 + g.zeta) * g.n_max * g.inv_bulk_phi0 * (1 - 1e-12));
    CHECK(g.eta >= 0.0);
    CHECK(g.eta <= 1.0);
    CHECK(g.theta >= 0.0);
    CHECK(g.theta <= 1.0);
  }
  SUBCASE("oscillatory porosity matches a grid search") {
    auto pb = build_benchmark(CaseKind::swelling, {{"n_per_side", "4"}, {"porosity_ell", "2"}});
    const KornConstants k = korn_constants(*pb);
    CHECK(gamma(*pb, k).gamma == doctest::Approx(gamma_grid(*pb, k)).epsilon(0.01));
  }
  SUBCASE("stiffer storage gives a larger constant") {
    const double lo = gamma(*build_benchmark(CaseKind::swelling, {{"kappa_s", "1e2"}})).gamma;
    const double hi = gamma(*build_benchmark(CaseKind::swelling, {{"kappa_s", "1e4"}})).gamma;
    CHECK(hi > lo);
  }
  SUBCASE("vanishing coupling gives one-step convergence") {
    auto pb = build_benchmark(CaseKind::swelling, {{"n_per_side", "3"}, {"kappa_s", "1e-12"}, {"kappa_f", "1e12"}});
    const GammaBreakdown g = gamma(*pb);
    CHECK(g.gamma < 1e-10);
    CHECK(g.contraction() < 1e-10);
  }
  SUBCASE("deterministic") {
    auto pb = build_benchmark(CaseKind::swelling, {{"n_per_side", "3"}, {"porosity_ell", "2"}});
    CHECK(gamma(*pb).gamma == gamma(*pb).gamma);
  }
}

TEST_CASE("relative stability ledger") {
  auto pb = build_benchmark(CaseKind::swelling);
  SplitConfig cfg = SplitConfig::parse("l2s(0,0,1)");
  cfg.record_iterates = true;
  StepSolver solver(*pb, cfg);
  State s = pb->initial_state();
  for (int step = 0; step < 3; ++step) {
    IterationReport rep;
    s = advance(solver, s, rep);
    REQUIRE(rep.converged);
    const StabilityLedger ledger = stability_check(*pb, cfg, rep.iterates);
    CHECK(ledger.holds);
    CHECK(ledger.lhs_terms.size() + 1 == rep.iterates.size());
    for (double v : ledger.lhs_terms) CHECK(v >= 0.0);
    for (double v : ledger.rhs_terms) CHECK(v >= 0.0);
  }
  SUBCASE("a converged tail holds trivially") {
    std::vector<Vector> flat(4, Vector(pb->n_total(), 0.5));
    const StabilityLedger ledger = stability_check(*pb, cfg, flat);
    CHECK(ledger.holds);
    for (double v : ledger.lhs_terms) CHECK(v == 0.0);
  }
}

TEST_CASE("r-linear certificate") {
  SUBCASE("geometric sequence") {
    for (double rho : {0.3, 0.5, 0.8}) {
      std::vector<double> x;
      for (int k = 0; k < 60; ++k) x.push_back(std::pow(rho, k));
      const double c = (1 - rho) / rho;
      // c * sum_{i>k} x_i <= x_k holds for the infinite tail, so also truncated.
      double tail = 0.0;
      for (std::size_t k = x.size(); k-- > 0;) {
        CHECK(c * tail <= x[k] * (1 + 1e-12));
        tail += x[k];
      }
      const RLinearCertificate cert = rlinear_subsequence(x, c);
      REQUIRE(cert.certified);
      CHECK(cert.rate >= rho * (1 - 1e-12));
      CHECK(cert.rate < 1.0);
      CHECK(cert.indices.size() >= 2);
      // The subsequence decays at least as fast as the certified rate.
      for (std::size_t i = 1; i < cert.indices.size(); ++i) {
        const double steps = static_cast<double>(cert.indices[i] - cert.indices[0]);
        CHECK(x[cert.indices[i]] <= std::pow(cert.rate, steps) * x[cert.indices[0]] * (1 + 1e-9));
      }
      // Estimating c from the data certifies as well.
      CHECK(rlinear_subsequence(x).certified);
    }
  }
  SUBCASE("zero tail") {
    const RLinearCertificate cert = rlinear_subsequence({0.0, 0.0, 0.0});
    CHECK(cert.certified);
    CHECK(cert.rate == 0.0);
  }
  SUBCASE("too small c gives no certificate") {
    const RLinearCertificate cert = rlinear_subsequence({1.0, 1.0, 1.0}, 0.1);
    CHECK_FALSE(cert.certified);
    CHECK(cert.message == "no certificate");
  }
}
