// Acceptance checks, one line per criterion:
//   acceptance            run all criteria
//   acceptance 3 7        run the listed criteria
// Exit status is nonzero when any selected criterion fails.

#include <chrono>
#include <cstdlib>
#include <limits>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "porosplit/analysis.hpp"
#include "porosplit/anderson.hpp"
#include "porosplit/assembly.hpp"
#include "porosplit/bench.hpp"
#include "porosplit/quadrature.hpp"
#include "porosplit/splitters.hpp"
#include "support.hpp"

using namespace porosplit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "failed: " + what;
    }
  }
  void note(const std::string& text) {
    if (!detail.empty()) detail += "; ";
    detail += text;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

RunConfig config(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

const BenchResult* find(const std::vector<BenchResult>& rows, const std::string& scheme,
                        const std::string& value) {
  for (const auto& r : rows)
    if (r.scheme == scheme && r.value == value) return &r;
  return nullptr;
}

std::string show(const BenchResult* r) {
  if (!r) return "missing";
  return r->converged ? fmt("%.2f", r->avg_iters) : std::string("--");
}

// ---------------------------------------------------------------------------

double l2_error(const FeSpace& s, const Vector& uh,
                const std::function<std::array<double, 2>(const Point&)>& exact) {
  const auto rule = composite_triangle_rule(1);
  double sum = 0.0;
  for (std::size_t t = 0; t < s.mesh().num_triangles(); ++t) {
    const CellGeometry g = cell_geometry(s.mesh(), t);
    for (const auto& q : rule) {
      const FieldSample f = evaluate_field(s, uh, t, q.xi, q.eta);
      const auto e = exact(g.map(q.xi, q.eta));
      sum += q.weight * g.det *
             ((f.value[0] - e[0]) * (f.value[0] - e[0]) + (f.value[1] - e[1]) * (f.value[1] - e[1]));
    }
  }
  return std::sqrt(sum);
}

// Solves the clamped elasticity problem with the given Dirichlet lift.
Vector solve_elasticity(const FeSpace& s, double lambda, double mu, const Vector& load, const Vector& lift) {
  const CsrMatrix k = assemble_elastic_stiffness(s, lambda, mu);
  const DofSet d = dirichlet_dofs(s, {BoundaryTag::left, BoundaryTag::right, BoundaryTag::bottom, BoundaryTag::top});
  Vector rhs = load;
  k.multiply_add(-1.0, lift, rhs);
  constrain(rhs, d);
  const CsrMatrix kc = constrain(k, d, d, true);
  const Eigen::VectorXd w = test::dense(kc).llt().solve(test::eig(rhs));
  Vector u = test::vec(w);
  axpy(1.0, lift, u);
  return u;
}

Outcome criterion1() {
  Outcome out;
  const double lambda = 711.0, mu = 4066.0;
  // Patch test: uniform strain on an irregular conforming mesh.
  const auto patch = std::make_shared<const Mesh>(refine_near(unit_square_mesh(3, 1.0), BoundaryTag::left, 1));
  auto linear = [](const Point& p) -> std::array<double, 2> {
    return {1e-3 * (0.3 + 2.0 * p.x - p.y), 1e-3 * (-0.1 + 0.5 * p.x + 1.5 * p.y)};
  };
  for (int degree : {1, 2}) {
    const FeSpace s = build_space(patch, degree, 2);
    const Vector exact = interpolate(s, linear);
    Vector lift(s.n_dofs(), 0.0);
    const DofSet d = dirichlet_dofs(s, {BoundaryTag::left, BoundaryTag::right, BoundaryTag::bottom, BoundaryTag::top});
    for (auto i : d.indices) lift[i] = exact[i];
    const double err = test::rel_inf(solve_elasticity(s, lambda, mu, Vector(s.n_dofs(), 0.0), lift), exact);
    out.require(err <= 1e-10, "P" + std::to_string(degree) + " patch test " + fmt("%.1e", err));
  }

  // Manufactured solution u = (s, s), s = sin(pi x) sin(pi y), clamped on the whole boundary.
  const double pi = std::acos(-1.0);
  auto exact = [pi](const Point& p) -> std::array<double, 2> {
    const double s = std::sin(pi * p.x) * std::sin(pi * p.y);
    return {s, s};
  };
  auto force = [=](const Point& p) -> std::array<double, 2> {
    const double s = std::sin(pi * p.x) * std::sin(pi * p.y);
    const double cc = std::cos(pi * p.x) * std::cos(pi * p.y);
    const double f = (lambda + mu) * pi * pi * (s - cc) + 2.0 * mu * pi * pi * s;
    return {f, f};
  };
  for (int degree : {1, 2}) {
    std::vector<double> errors;
    for (std::size_t n : {4, 8, 16}) {
      const FeSpace s = build_space(std::make_shared<const Mesh>(unit_square_mesh(n, 1.0)), degree, 2);
      const Vector u = solve_elasticity(s, lambda, mu, assemble_body_load(s, force), Vector(s.n_dofs(), 0.0));
      errors.push_back(l2_error(s, u, exact));
    }
    const double r1 = std::log2(errors[0] / errors[1]), r2 = std::log2(errors[1] / errors[2]);
    const double expected = degree + 1.0;
    out.note("P" + std::to_string(degree) + " L2 rates " + fmt("%.2f", r1) + ", " + fmt("%.2f", r2));
    out.require(r2 >= expected - 0.15 && r1 >= expected - 0.3,
                "P" + std::to_string(degree) + " order " + fmt("%.0f", expected));
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion2() {
  Outcome out;
  for (CaseKind kind : {CaseKind::swelling, CaseKind::perfusion}) {
    auto pb = build_benchmark(kind);
    SplitConfig cfg = SplitConfig::parse("altmin");
    cfg.record_energy = true;
    const RunResult r = simulate(*pb, cfg, pb->setup().steps);
    std::size_t half_steps = 0, violations = 0;
    double worst = 0.0;
    for (const auto& rep : r.reports)
      for (std::size_t i = 1; i < rep.energy_history.size(); ++i) {
        ++half_steps;
        const double rise = rep.energy_history[i] - rep.energy_history[i - 1];
        const double tol = 1e-10 * std::abs(rep.energy_history[i - 1]);
        worst = std::max(worst, rise / std::max(std::abs(rep.energy_history[i - 1]), 1e-300));
        if (rise > tol) ++violations;
      }
    const std::string name(to_string(kind));
    out.note(name + ": " + std::to_string(r.reports.size()) + " steps, " + std::to_string(half_steps) +
             " half-steps, max relative rise " + fmt("%.1e", worst));
    out.require(half_steps > 0 && violations == 0, name + " energy monotonicity");
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion3() {
  Outcome out;
  for (const char* kappa : {"1e2", "1e3"}) {
    auto pb = build_benchmark(CaseKind::swelling, {{"kappa_s", kappa}});
    const GammaBreakdown g = gamma(*pb);
    const double bound = 1.0 - 1.0 / (1.0 + g.gamma) + 1e-6;
    SplitConfig mono_cfg = SplitConfig::parse("monolithic");
    mono_cfg.inner_rtol = 1e-13;
    SplitConfig alt_cfg = SplitConfig::parse("altmin");
    alt_cfg.record_iterates = true;
    alt_cfg.outer_tol = 1e-11;
    alt_cfg.inner_rtol = 1e-13;
    StepSolver mono(*pb, mono_cfg), alt(*pb, alt_cfg);
    State state = pb->initial_state();
    double worst = 0.0;
    std::size_t ratios = 0;
    for (int step = 0; step < 4; ++step) {
      const StepRhs rhs = pb->step_rhs(state);
      Vector u = state.u_prev, v = state.v_prev, p = state.p_prev;
      mono.solve(rhs, u, v, p);
      Vector au = state.u_prev, av = state.v_prev, ap = state.p_prev;
      const IterationReport rep = alt.solve(rhs, au, av, ap);
      std::vector<double> e;
      for (const auto& x : rep.iterates) {
        Vector xu(pb->n_u()), xv(pb->n_v()), xp(pb->n_p());
        split(x, xu, xv, xp);
        axpy(-1.0, u, xu);
        axpy(-1.0, v, xv);
        e.push_back(error_norm(*pb, xu, xv));
      }
      // Ratios are only meaningful above the accuracy of the reference.
      for (std::size_t k = 2; k < e.size(); ++k) {
        if (e[k - 1] <= 1e-7 * e[0]) break;
        worst = std::max(worst, e[k] / e[k - 1]);
        ++ratios;
      }
      State next = state;
      next.u_prev2 = state.u_prev;
      next.u_prev = u;
      next.v_prev = v;
      next.p_prev = p;
      next.t_now = rhs.t;
      next.n = state.n + 1;
      state = next;
    }
    out.note(std::string("kappa_s ") + kappa + ": gamma " + fmt("%.3g", g.gamma) + ", bound " +
             fmt("%.4f", bound) + ", worst ratio " + fmt("%.4f", worst) + " over " + std::to_string(ratios));
    out.require(ratios > 0 && worst <= bound, std::string("contraction at kappa_s ") + kappa);
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion4() {
  Outcome out;
  for (const char* n : {"1", "2"}) {
    auto pb = build_benchmark(CaseKind::swelling, {{"n_per_side", n}});
    const double dt = pb->params().dt;
    // Second step so that every history term is populated.
    SplitConfig mono_cfg = SplitConfig::parse("monolithic");
    mono_cfg.inner_rtol = 1e-12;
    StepSolver mono(*pb, mono_cfg);
    IterationReport warm;
    const State state = advance(mono, pb->initial_state(), warm);
    const StepRhs rhs = pb->step_rhs(state);

    const Eigen::MatrixXd auu = test::dense(pb->A_uu()), dsf = test::dense(pb->system().Dsf),
                          bu = test::dense(pb->system().Bu), dfs = test::dense(pb->Dfs()),
                          avv = test::dense(pb->A_vv()), bv = test::dense(pb->system().Bv),
                          but = test::dense(pb->BuT()), bvt = test::dense(pb->BvT()),
                          mp = test::dense(pb->system().Mp);
    const auto nu = auu.rows(), nv = avv.rows(), np = mp.rows();
    Eigen::MatrixXd a(nu + nv + np, nu + nv + np);
    a << auu, -dsf, -bu, -dfs / dt, avv, -bv, but / dt, bvt, mp / dt;
    Eigen::VectorXd b(nu + nv + np);
    b << test::eig(rhs.bs), test::eig(rhs.bf), test::eig(rhs.bp);
    const Vector oracle = test::vec(a.partialPivLu().solve(b));

    Vector u = state.u_prev, v = state.v_prev, p = state.p_prev;
    mono.solve(rhs, u, v, p);
    const Vector mono_x = concat(u, v, p);
    const double e_mono = test::rel_inf(mono_x, oracle);
    out.note(std::string(n) + "x" + n + " mono vs dense " + fmt("%.1e", e_mono));
    out.require(e_mono <= 1e-9, std::string("monolithic on ") + n + "x" + n);

    for (const char* scheme : {"altmin", "l2s(0,0,1)", "l2s(-0.5,0,1)"}) {
      SplitConfig cfg = SplitConfig::parse(scheme);
      cfg.outer_tol = 1e-10;
      cfg.inner_rtol = 1e-12;
      StepSolver solver(*pb, cfg);
      Vector su = state.u_prev, sv = state.v_prev, sp = state.p_prev;
      const IterationReport rep = solver.solve(rhs, su, sv, sp);
      const double e = test::rel_inf(concat(su, sv, sp), mono_x);
      out.note(std::string(scheme) + " " + fmt("%.1e", e));
      out.require(rep.converged && e <= 1e-8, std::string(scheme) + " on " + n + "x" + n);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion5() {
  Outcome out;
  struct Run {
    const char* key;
    const char* value;
  };
  const std::vector<Run> runs{{"kappa_s", "1e3"}, {"kappa_s", "1e2"},  {"kappa_s", "1e4"},
                              {"kappa_s", "1e6"}, {"kappa_s", "1e8"},  {"kappa_f", "1e-9"},
                              {"kappa_f", "1e-10"}, {"rho", "1e4"}};
  std::size_t checked = 0, failed = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& run : runs)
    for (const char* scheme : {"l2s(0,0,1)", "l2s(-0.5,0,1)"}) {
      auto pb = build_benchmark(CaseKind::swelling, {{run.key, run.value}});
      SplitConfig cfg = SplitConfig::parse(scheme);
      cfg.record_iterates = true;
      StepSolver solver(*pb, cfg);
      State state = pb->initial_state();
      for (std::size_t step = 0; step < pb->setup().steps; ++step) {
        IterationReport rep;
        state = advance(solver, state, rep);
        if (!rep.converged) break;
        const StabilityLedger ledger = stability_check(*pb, cfg, rep.iterates);
        ++checked;
        worst = std::min(worst, ledger.worst_margin);
        if (!ledger.holds) {
          ++failed;
          out.note(std::string(scheme) + " " + run.key + "=" + run.value + " step " + std::to_string(step + 1) +
                   " margin " + fmt("%.2e", ledger.worst_margin));
        }
      }
    }
  out.note(std::to_string(checked) + " converged steps checked, worst relative margin " + fmt("%.3g", worst));
  out.require(checked > 0 && failed == 0, "stability inequality");
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion6() {
  Outcome out;
  auto pb = build_benchmark(CaseKind::swelling);
  for (const char* scheme : {"altmin", "l2s(-0.5,0,1)"}) {
    SplitConfig cfg = SplitConfig::parse(scheme);
    cfg.record_iterates = true;
    StepSolver solver(*pb, cfg);
    IterationReport warm;
    const State state = advance(solver, pb->initial_state(), warm);
    const StepRhs rhs = pb->step_rhs(state);
    Vector u = state.u_prev, v = state.v_prev, p = state.p_prev;
    const IterationReport rep = solver.solve(rhs, u, v, p);

    StepSolver manual(*pb, cfg);
    Vector mu = state.u_prev, mv = state.v_prev, mp = state.p_prev;
    if (cfg.scheme == Scheme::altmin) mp = manual.consistent_pressure(rhs, mu, mv);
    bool identical = !rep.iterates.empty() && rep.iterates[0] == concat(mu, mv, mp);
    for (std::size_t k = 1; k < rep.iterates.size() && identical; ++k) {
      if (cfg.scheme == Scheme::altmin) {
        mu = manual.altmin_solid(rhs, mu, mv, mp);
        manual.altmin_fluid(rhs, mu, mv, mp);
      } else {
        manual.l2s_fluid(rhs, mu, mv, mp);
        mu = manual.l2s_solid(rhs, mv, mp, mu);
      }
      identical = rep.iterates[k] == concat(mu, mv, mp);
    }
    out.note(std::string(scheme) + " AA(0) " + std::to_string(rep.iterations) + " iterates " +
             (identical ? "bitwise equal" : "differ"));
    out.require(identical, std::string("AA(0) bitwise for ") + scheme);
  }

  const int n = 8;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  int worst_updates = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = dist(rng);
    g *= 0.95 / g.operatorNorm();
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c(i) = dist(rng);
    AndersonState aa(static_cast<std::size_t>(n));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    int updates = 0;
    while ((g * x + c - x).norm() >= 1e-10 && updates < 100) {
      x = test::eig(aa.update(test::vec(x), test::vec(g * x + c)));
      ++updates;
    }
    worst_updates = std::max(worst_updates, updates);
  }
  out.note("AA(8) affine contraction: at most " + std::to_string(worst_updates) + " updates");
  out.require(worst_updates <= n + 1, "AA(8) within 9 updates");
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion7() {
  Outcome out;
  const auto rows = run_config(config("case = swelling\nscheme = altmin\nsweep = kappa_s: 1e2, 1e3, 1e4, 1e5\n"));
  const std::vector<std::string> values{"1e2", "1e3", "1e4", "1e5"};
  const double reference[] = {8.55, 15.91, 64.09};
  std::string line = "altmin:";
  for (const auto& v : values) line += " " + show(find(rows, "altmin", v));
  out.note(line + " (reference 8.55 15.91 64.09 --)");
  double prev = 0.0;
  for (int i = 0; i < 3; ++i) {
    const BenchResult* r = find(rows, "altmin", values[i]);
    out.require(r && r->converged, "converges at kappa_s " + values[i]);
    if (!r || !r->converged) continue;
    out.require(r->avg_iters > prev, "strict increase at kappa_s " + values[i]);
    out.require(r->avg_iters >= reference[i] / 2 && r->avg_iters <= reference[i] * 2, "factor 2 at kappa_s " + values[i]);
    prev = r->avg_iters;
  }
  const BenchResult* last = find(rows, "altmin", "1e5");
  out.require(last && !last->converged, "200 cap at kappa_s 1e5");
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion8() {
  Outcome out;
  const char* schemes[] = {"l2s(0,0,1)", "l2s(-0.5,0,1)"};
  const std::vector<std::string> values{"1e2", "1e4", "1e6", "1e8"};
  for (const char* elements : {"P1/P2/P1", "P1/P1/P1"}) {
    const auto rows = run_config(config(std::string("case = swelling\nelements = ") + elements +
                                        "\nscheme = l2s(0,0,1)\nscheme = l2s(-0.5,0,1)\n"
                                        "sweep = kappa_s: 1e2, 1e4, 1e6, 1e8\n"));
    const bool stable_pair = std::string(elements) == "P1/P2/P1";
    for (const char* scheme : schemes) {
      std::string line = std::string(elements) + " " + scheme + ":";
      for (const auto& v : values) line += " " + show(find(rows, scheme, v));
      out.note(line);
      for (const auto& v : values) {
        const BenchResult* r = find(rows, scheme, v);
        if (!r) {
          out.require(false, "missing row");
          continue;
        }
        if (stable_pair) {
          out.require(r->converged && r->avg_iters <= 15.0,
                      std::string(elements) + " " + scheme + " at kappa_s " + v + " converges within 15");
        } else if (v == "1e6" || v == "1e8") {
          out.require(!r->converged, std::string(elements) + " " + scheme + " diverges at kappa_s " + v);
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion9() {
  Outcome out;
  const std::vector<std::string> values{"1e-7", "1e-8", "1e-9", "1e-10", "1e-11", "1e-12"};
  const auto plain = run_config(config(
      "case = swelling\nouter_cap = 500\nscheme = l2s(0,0,1)\nscheme = l2s(-0.5,0,1)\n"
      "sweep = kappa_f: 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12\n"));
  for (const char* scheme : {"l2s(0,0,1)", "l2s(-0.5,0,1)"}) {
    std::string line = std::string(scheme) + ":";
    for (const auto& v : values) line += " " + show(find(plain, scheme, v));
    out.note(line);
    double prev = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      const BenchResult* r = find(plain, scheme, values[i]);
      out.require(r && r->converged && r->avg_iters > prev,
                  std::string(scheme) + " increasing at kappa_f " + values[i]);
      if (r && r->converged) prev = r->avg_iters;
    }
    const BenchResult* last = find(plain, scheme, "1e-12");
    out.require(last && !last->converged, std::string(scheme) + " hits the 500 cap at kappa_f 1e-12");
  }
  const auto accel = run_config(config(
      "case = swelling\nouter_cap = 500\nkappa_f = 1e-12\n"
      "scheme = l2s(0,0,1)+aa5\nscheme = l2s(-0.5,0,1)+aa5\n"));
  const std::map<std::string, double> reference{{"l2s(0,0,1)+aa5", 117.36}, {"l2s(-0.5,0,1)+aa5", 95.64}};
  for (const auto& [scheme, ref] : reference) {
    const BenchResult* r = find(accel, scheme, "-");
    out.note(scheme + " at 1e-12: " + show(r) + " (reference " + fmt("%.2f", ref) + ")");
    out.require(r && r->converged && r->avg_iters >= ref / 3 && r->avg_iters <= ref * 3,
                scheme + " within factor 3");
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion10() {
  Outcome out;
  const auto rows = run_config(config(
      "case = perfusion\nscheme = altmin\nscheme = altmin+aa5\nscheme = l2s(-0.5,0,1)\n"
      "sweep = elements: P1/P2/P1, P2/P2/P1\n"));
  for (const char* el : {"P1/P2/P1", "P2/P2/P1"}) {
    const BenchResult* plain = find(rows, "altmin", el);
    const BenchResult* aa = find(rows, "altmin+aa5", el);
    const BenchResult* l2s = find(rows, "l2s(-0.5,0,1)", el);
    out.note(std::string(el) + " altmin " + show(plain) + ", altmin+aa5 " + show(aa) + ", l2s(-0.5,0,1) " +
             show(l2s));
    out.require(plain && !plain->converged, std::string(el) + " plain altmin hits the cap");
    out.require(aa && aa->converged, std::string(el) + " AA(5) altmin converges");
    out.require(l2s && l2s->converged && l2s->avg_iters <= 40.0, std::string(el) + " l2s(-0.5,0,1) within 40");
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion11() {
  Outcome out;
  // Mean wall time per step of the split and monolithic solvers, run the
  // same way as the walltime table.
  std::map<std::string, std::pair<double, double>> times;  // n -> (l2s, mono)
  for (const auto& table : suite("table_walltime"))
    for (const auto& run : table.runs)
      for (const auto& r : run_config(run)) {
        auto& slot = times[r.value];
        if (!r.converged) {
          out.require(false, r.scheme + " at n " + r.value + " did not converge");
          continue;
        }
        (r.scheme == "monolithic" ? slot.second : slot.first) = r.wall_time_s;
      }
  const auto ratio = [&](const std::string& n) {
    const auto& t = times[n];
    return t.second > 0.0 ? t.first / t.second : std::numeric_limits<double>::quiet_NaN();
  };
  const double r50 = ratio("50"), r100 = ratio("100");
  out.note("l2s/monolithic wall time ratio " + fmt("%.3f", r50) + " at n 50, " + fmt("%.3f", r100) +
           " at n 100 (reference 1.60, 0.74)");
  out.require(std::isfinite(r50) && std::isfinite(r100) && r100 < r50, "ratio decreases with n");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{
      criterion1, criterion2, criterion3, criterion4, criterion5, criterion6,
      criterion7, criterion8, criterion9, criterion10, criterion11};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);

  int failures = 0;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(id - 1)]();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %s: %s (%.1fs)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
