#include "porosplit/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

#include "porosplit/ilu.hpp"
#include "porosplit/krylov.hpp"
#include "porosplit/quadrature.hpp"

namespace porosplit {

namespace {

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw std::invalid_argument("override '" + key + "': not a number: '" + text + "'");
  return value;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  if (v < 0 || v != std::floor(v) || v > 1e9)
    throw std::invalid_argument("override '" + key + "': expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::pair<double, double> lame_from_young_poisson(double e, double nu) {
  return {e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), e / (2.0 * (1.0 + nu))};
}

double perfusion_mu(double e, double lambda) {
  const double r = std::sqrt(e * e + 9.0 * lambda * lambda + 2.0 * e * lambda);
  return 0.25 * (e - 3.0 * lambda + r);
}

// Swelling inflow pressure.
double p_ext(double t) { return 1e3 * (1.0 - std::exp(4.0 * t * t)); }

}  // namespace

std::string_view to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::swelling: return "swelling";
    case CaseKind::footing: return "footing";
    case CaseKind::perfusion: return "perfusion";
  }
  return "?";
}

CaseKind parse_case(std::string_view name) {
  for (auto k : {CaseKind::swelling, CaseKind::footing, CaseKind::perfusion})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown case '" + std::string(name) + "'");
}

std::string ElementSpec::label() const {
  return "P" + std::to_string(u) + "/P" + std::to_string(v) + "/P" + std::to_string(p);
}

ElementSpec ElementSpec::parse(std::string_view text) {
  ElementSpec e;
  int* slots[3] = {&e.u, &e.v, &e.p};
  std::size_t pos = 0;
  for (int k = 0; k < 3; ++k) {
    if (pos >= text.size() || (text[pos] != 'P' && text[pos] != 'p'))
      throw std::invalid_argument("bad element spec '" + std::string(text) + "'");
    ++pos;
    if (pos >= text.size() || (text[pos] != '1' && text[pos] != '2'))
      throw std::invalid_argument("bad element spec '" + std::string(text) + "'");
    *slots[k] = text[pos] - '0';
    ++pos;
    if (k < 2) {
      if (pos >= text.size() || text[pos] != '/')
        throw std::invalid_argument("bad element spec '" + std::string(text) + "'");
      ++pos;
    }
  }
  if (pos != text.size()) throw std::invalid_argument("bad element spec '" + std::string(text) + "'");
  return e;
}

ScalarField oscillatory_porosity(int ell, double side_length) {
  if (ell < 1) throw std::invalid_argument("oscillatory_porosity: ell must be >= 1");
  const double k = ell * std::numbers::pi / side_length;
  return ScalarField(
      [k](const Point& p) {
        const double s = std::sin(k * p.x);
        return 0.1 + 0.5 * s * s;
      },
      [k](const Point& p) { return Point{0.5 * k * std::sin(2.0 * k * p.x), 0.0}; });
}

ScalarField ModelParameters::porosity() const {
  if (porosity_ell > 0) return oscillatory_porosity(porosity_ell, side_length);
  return ScalarField(phi0);
}

void ModelParameters::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0))
      throw std::invalid_argument(std::string("parameter ") + name + " must be finite and > 0");
  };
  positive(rho_s, "rho_s");
  positive(rho_f, "rho_f");
  positive(mu_f, "mu_f");
  positive(mu, "mu");
  positive(kappa_s, "kappa_s");
  positive(kappa_f, "kappa_f");
  positive(dt, "dt");
  positive(side_length, "L");
  if (!(std::isfinite(lambda) && lambda >= 0.0))
    throw std::invalid_argument("parameter lambda must be finite and >= 0");
  if (!(std::isfinite(t_end) && t_end >= 0.0))
    throw std::invalid_argument("parameter t_end must be finite and >= 0");
  if (!std::isfinite(theta)) throw std::invalid_argument("parameter theta must be finite");
  if (porosity_ell < 0) throw std::invalid_argument("parameter porosity_ell must be >= 0");
  if (porosity_ell == 0 && !(phi0 > 0.0 && phi0 < 1.0))
    throw std::invalid_argument("parameter phi0 must lie in (0, 1)");
}

ModelParameters default_parameters(CaseKind kind) {
  ModelParameters p;
  switch (kind) {
    case CaseKind::swelling:
      break;
    case CaseKind::footing: {
      p.rho_s = 500.0;
      p.rho_f = 1000.0;
      p.mu_f = 1e-3;
      std::tie(p.lambda, p.mu) = lame_from_young_poisson(3e4, 0.2);
      p.kappa_s = 1e6;
      p.kappa_f = 1e-7;
      p.phi0 = 1e-3;
      p.dt = 0.01;
      p.side_length = 64.0;
      break;
    }
    case CaseKind::perfusion:
      p.rho_s = 1000.0;
      p.rho_f = 1000.0;
      p.mu_f = 0.03;
      p.lambda = 5e4;
      p.mu = perfusion_mu(3e4, 5e4);
      p.kappa_s = 1e6;
      p.kappa_f = 1e-9;
      p.phi0 = 0.05;
      p.theta = 500.0;
      p.dt = 0.1;
      p.side_length = 0.01;
      break;
  }
  return p;
}

BenchmarkCase default_case(CaseKind kind) {
  BenchmarkCase c;
  c.kind = kind;
  if (kind == CaseKind::footing) {
    c.refine_levels = 2;
    c.outer_tol = 1e-6;
    c.steps = 10;
  }
  return c;
}

void apply_overrides(ModelParameters& p, BenchmarkCase& c, const ParameterMap& overrides) {
  static const std::set<std::string> known = {
      "rho_s", "rho_f", "rho", "mu_f", "lambda", "mu", "E", "nu", "K_dr", "kappa_s", "kappa_f",
      "phi0", "porosity_ell", "theta", "dt", "t_end", "L", "n_per_side", "refine_levels",
      "elements", "outer_tol", "outer_cap", "steps"};
  for (const auto& [key, value] : overrides)
    if (!known.count(key)) throw std::invalid_argument("unknown parameter '" + key + "'");

  auto num = [&](const char* key, double& slot) {
    if (auto it = overrides.find(key); it != overrides.end()) slot = parse_double(key, it->second);
  };
  num("rho", p.rho_s);
  num("rho", p.rho_f);
  num("rho_s", p.rho_s);
  num("rho_f", p.rho_f);
  num("mu_f", p.mu_f);
  num("lambda", p.lambda);
  num("mu", p.mu);
  if (overrides.count("E") || overrides.count("nu")) {
    double e = 3e4, nu = 0.2;
    num("E", e);
    num("nu", nu);
    if (c.kind == CaseKind::perfusion && !overrides.count("nu")) {
      p.mu = perfusion_mu(e, p.lambda);
    } else {
      if (!(nu > -1.0 && nu < 0.5)) throw std::invalid_argument("parameter nu must lie in (-1, 0.5)");
      std::tie(p.lambda, p.mu) = lame_from_young_poisson(e, nu);
    }
  }
  if (auto it = overrides.find("K_dr"); it != overrides.end()) {
    // Rescale both Lame parameters, keeping the Poisson ratio.
    const double k = parse_double("K_dr", it->second);
    const double s = k / (p.lambda + p.mu);
    p.lambda *= s;
    p.mu *= s;
  }
  num("kappa_s", p.kappa_s);
  num("kappa_f", p.kappa_f);
  num("phi0", p.phi0);
  num("theta", p.theta);
  num("dt", p.dt);
  num("t_end", p.t_end);
  num("L", p.side_length);
  if (auto it = overrides.find("porosity_ell"); it != overrides.end())
    p.porosity_ell = static_cast<int>(parse_count("porosity_ell", it->second));
  if (auto it = overrides.find("n_per_side"); it != overrides.end())
    c.n_per_side = parse_count("n_per_side", it->second);
  if (auto it = overrides.find("refine_levels"); it != overrides.end())
    c.refine_levels = parse_count("refine_levels", it->second);
  if (auto it = overrides.find("elements"); it != overrides.end())
    c.elements = ElementSpec::parse(it->second);
  num("outer_tol", c.outer_tol);
  if (auto it = overrides.find("outer_cap"); it != overrides.end())
    c.outer_cap = parse_count("outer_cap", it->second);
  if (auto it = overrides.find("steps"); it != overrides.end())
    c.steps = parse_count("steps", it->second);
  p.validate();
}

std::unique_ptr<Problem> build_benchmark(CaseKind kind, const ParameterMap& overrides) {
  ModelParameters p = default_parameters(kind);
  BenchmarkCase c = default_case(kind);
  apply_overrides(p, c, overrides);
  return std::make_unique<Problem>(p, c);
}

Problem::Problem(const ModelParameters& params, const BenchmarkCase& setup)
    : params_(params), setup_(setup) {
  params_.validate();
  if (setup_.kind == CaseKind::footing) {
    Mesh m = footing_mesh(setup_.n_per_side, params_.side_length);
    if (setup_.refine_levels > 0) m = refine_near(m, BoundaryTag::foot, setup_.refine_levels);
    mesh_ = std::make_shared<const Mesh>(std::move(m));
  } else {
    mesh_ = std::make_shared<const Mesh>(unit_square_mesh(setup_.n_per_side, params_.side_length));
  }
  build();
}

Problem::Problem(const ModelParameters& params, const BenchmarkCase& setup,
                 std::shared_ptr<const Mesh> mesh)
    : params_(params), setup_(setup), mesh_(std::move(mesh)) {
  params_.validate();
  if (!mesh_) throw std::invalid_argument("Problem: null mesh");
  build();
}

void Problem::build() {
  const ModelParameters& pr = params_;
  u_space_ = std::make_unique<FeSpace>(mesh_, setup_.elements.u, 2);
  v_space_ = std::make_unique<FeSpace>(mesh_, setup_.elements.v, 2);
  p_space_ = std::make_unique<FeSpace>(mesh_, setup_.elements.p, 1);

  const ScalarField phi = pr.porosity();
  auto field = [&phi](auto f) {
    return ScalarField([phi, f](const Point& x) { return f(phi(x)); },
                       [](const Point&) { return Point{0.0, 0.0}; });
  };
  const ScalarField solid_fraction =
      phi.is_constant()
          ? ScalarField(1.0 - phi.constant_value())
          : ScalarField([phi](const Point& x) { return 1.0 - phi(x); },
                        [phi](const Point& x) {
                          const Point g = phi.gradient(x);
                          return Point{-g.x, -g.y};
                        });
  const double rho_s = pr.rho_s, rho_f = pr.rho_f, kf = pr.kappa_f, ks = pr.kappa_s;
  const double mu_f = pr.mu_f;
  const ScalarField drag = field([kf](double f) { return f * f / kf; });

  raw_.Ms = assemble_weighted_mass(*u_space_, field([rho_s](double f) { return rho_s * (1.0 - f); }));
  raw_.Ks = assemble_elastic_stiffness(*u_space_, pr.lambda, pr.mu);
  raw_.Mf = assemble_weighted_mass(*v_space_, field([rho_f](double f) { return rho_f * f; }));
  raw_.Kf = assemble_elastic_stiffness(*v_space_, 0.0, field([mu_f](double f) { return mu_f * f; }));
  raw_.Dss = assemble_weighted_mass(*u_space_, drag);
  raw_.Dff = assemble_weighted_mass(*v_space_, drag);
  raw_.Dsf = assemble_cross_mass(*u_space_, *v_space_, drag);
  raw_.Bu = assemble_div_coupling(*p_space_, *u_space_, solid_fraction);
  raw_.Bv = assemble_div_coupling(*p_space_, *v_space_, phi);
  raw_.Mp = assemble_weighted_mass(*p_space_,
                                   field([ks](double f) { return (1.0 - f) * (1.0 - f) / ks; }));
  raw_.S = assemble_divdiv(*u_space_, *u_space_, solid_fraction, solid_fraction,
                           field([ks](double f) { return ks / ((1.0 - f) * (1.0 - f)); }));
  mp_porous_ = assemble_weighted_mass(*p_space_, field([](double f) { return (1.0 - f) * (1.0 - f); }));
  mp_plain_ = assemble_weighted_mass(*p_space_, 1.0);

  switch (setup_.kind) {
    case CaseKind::swelling:
      dofs_.u = merge(dirichlet_dofs(*u_space_, {BoundaryTag::left}, {true, false}),
                      dirichlet_dofs(*u_space_, {BoundaryTag::bottom}, {false, true}));
      dofs_.v = dirichlet_dofs(*v_space_, {BoundaryTag::top, BoundaryTag::bottom});
      fluid_unit_load_ = assemble_neumann_load(*v_space_, BoundaryTag::left,
                                               [](const Point&) { return std::array<double, 2>{1.0, 0.0}; });
      break;
    case CaseKind::footing:
      dofs_.u = dirichlet_dofs(*u_space_, {BoundaryTag::bottom});
      dofs_.v = dirichlet_dofs(*v_space_, {BoundaryTag::foot});
      solid_unit_load_ = assemble_neumann_load(*u_space_, BoundaryTag::foot,
                                               [](const Point&) { return std::array<double, 2>{0.0, -1e5}; });
      break;
    case CaseKind::perfusion:
      dofs_.u = dirichlet_dofs(*u_space_, {BoundaryTag::left});
      dofs_.v = dirichlet_dofs(*v_space_, {BoundaryTag::left});
      break;
  }
  if (pr.theta != 0.0) {
    const double s = pr.theta / pr.rho_f;
    mass_unit_load_ = assemble_body_load(*p_space_, [s](const Point&) { return std::array<double, 2>{s, 0.0}; });
  }

  system_ = apply_dirichlet(raw_, dofs_);
  const double dt = pr.dt;
  a_uu_ = combine({{1.0 / (dt * dt), &system_.Ms}, {1.0, &system_.Ks}, {1.0 / dt, &system_.Dss}});
  a_vv_ = combine({{1.0 / dt, &system_.Mf}, {1.0, &system_.Kf}, {1.0, &system_.Dff}});
  dfs_ = system_.Dsf.transpose();
  but_ = system_.Bu.transpose();
  bvt_ = system_.Bv.transpose();

  for (std::size_t t = 0; t < mesh_->num_triangles(); ++t) {
    const CellGeometry g = cell_geometry(*mesh_, t);
    for (const auto& q : triangle_rule()) {
      const Point x = g.map(q.xi, q.eta);
      const double f = phi(x);
      const Point gf = phi.gradient(x);
      if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument("porosity leaves (0, 1)");
      max_n_ = std::max(max_n_, ks / ((1.0 - f) * (1.0 - f)));
      inv_bulk_phi0_ = std::max(inv_bulk_phi0_, (1.0 - f) * (1.0 - f) / pr.drained_bulk_modulus());
      max_grad_term_ = std::max(max_grad_term_, (gf.x * gf.x + gf.y * gf.y) / (rho_s * (1.0 - f)));
      max_drag_term_ = std::max(max_drag_term_, f * f / (kf * rho_s * (1.0 - f)));
    }
  }
}

void Problem::loads(double t, Vector& fs, Vector& ff, Vector& fp) const {
  fs.assign(n_u(), 0.0);
  ff.assign(n_v(), 0.0);
  fp.assign(n_p(), 0.0);
  if (!solid_unit_load_.empty()) axpy(t, solid_unit_load_, fs);
  if (!fluid_unit_load_.empty()) axpy(p_ext(t), fluid_unit_load_, ff);
  if (!mass_unit_load_.empty()) axpy(1.0, mass_unit_load_, fp);
  constrain(fs, dofs_.u);
  constrain(ff, dofs_.v);
  constrain(fp, dofs_.p);
}

State Problem::initial_state() const {
  State s;
  s.u_prev.assign(n_u(), 0.0);
  s.u_prev2.assign(n_u(), 0.0);
  s.v_prev.assign(n_v(), 0.0);
  s.p_prev.assign(n_p(), 0.0);
  return s;
}

StepRhs Problem::step_rhs(const State& s) const {
  const double dt = params_.dt;
  StepRhs r;
  r.t = static_cast<double>(s.n + 1) * dt;
  loads(r.t, r.bs, r.bf, r.bp);
  Vector w(n_u());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 2.0 * s.u_prev[i] - s.u_prev2[i];
  system_.Ms.multiply_add(1.0 / (dt * dt), w, r.bs);
  system_.Dss.multiply_add(1.0 / dt, s.u_prev, r.bs);
  system_.Mf.multiply_add(1.0 / dt, s.v_prev, r.bf);
  dfs_.multiply_add(-1.0 / dt, s.u_prev, r.bf);
  system_.Mp.multiply_add(1.0 / dt, s.p_prev, r.bp);
  but_.multiply_add(1.0 / dt, s.u_prev, r.bp);
  return r;
}

void Problem::residual(const StepRhs& rhs, const Vector& u, const Vector& v, const Vector& p,
                       Vector& ru, Vector& rv, Vector& rp) const {
  const double dt = params_.dt;
  ru = rhs.bs;
  a_uu_.multiply_add(-1.0, u, ru);
  system_.Dsf.multiply_add(1.0, v, ru);
  system_.Bu.multiply_add(1.0, p, ru);
  rv = rhs.bf;
  dfs_.multiply_add(1.0 / dt, u, rv);
  a_vv_.multiply_add(-1.0, v, rv);
  system_.Bv.multiply_add(1.0, p, rv);
  rp = rhs.bp;
  but_.multiply_add(-1.0 / dt, u, rp);
  bvt_.multiply_add(-1.0, v, rp);
  system_.Mp.multiply_add(-1.0 / dt, p, rp);
}

double Problem::residual_inf(const StepRhs& rhs, const Vector& u, const Vector& v,
                             const Vector& p) const {
  Vector ru, rv, rp;
  residual(rhs, u, v, p, ru, rv, rp);
  return std::max({norm_inf(ru), norm_inf(rv), norm_inf(rp)});
}

double Problem::residual_scale(const StepRhs& rhs, const Vector& u, const Vector& v,
                               const Vector& p) const {
  const double dt = params_.dt;
  return std::max({norm_inf(rhs.bs), norm_inf(rhs.bf), norm_inf(rhs.bp),
                   norm_inf(a_uu_ * u), norm_inf(system_.Dsf * v), norm_inf(system_.Bu * p),
                   norm_inf(dfs_ * u) / dt, norm_inf(a_vv_ * v), norm_inf(system_.Bv * p),
                   norm_inf(but_ * u) / dt, norm_inf(bvt_ * v), norm_inf(system_.Mp * p) / dt});
}

Vector Problem::solve_pressure_mass(const Vector& b) const {
  std::shared_ptr<const Preconditioner> pc;
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (!mp_precond_) mp_precond_ = std::make_shared<IluPreconditioner>(system_.Mp, 3);
    pc = mp_precond_;
  }
  Vector x(b.size(), 0.0);
  GmresOptions opt;
  opt.rtol = 1e-14;
  opt.max_iter = 500;
  gmres(system_.Mp, b, x, *pc, opt);
  return x;
}

}  // namespace porosplit
