#include "porosplit/splitters.hpp"

#include <chrono>
#include <limits>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <stdexcept>

#include "porosplit/analysis.hpp"
#include "porosplit/anderson.hpp"

namespace porosplit {

namespace {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

double parse_double(const std::string& s, std::string_view context) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw std::invalid_argument("invalid number '" + s + "' in scheme '" + std::string(context) + "'");
  return value;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::monolithic: return "monolithic";
    case Scheme::altmin: return "altmin";
    case Scheme::l2s: return "l2s";
  }
  return "?";
}

std::string SplitConfig::label() const {
  std::string s(to_string(scheme));
  if (scheme == Scheme::l2s)
    s += "(" + format_number(beta_s) + "," + format_number(beta_f) + "," + format_number(beta_p) + ")";
  if (anderson_depth > 0 && scheme != Scheme::monolithic) s += "+aa" + std::to_string(anderson_depth);
  return s;
}

SplitConfig SplitConfig::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  SplitConfig cfg;
  std::string base = s, accel;
  if (const auto plus = s.find('+'); plus != std::string::npos) {
    base = s.substr(0, plus);
    accel = s.substr(plus + 1);
  }
  if (base == "monolithic" || base == "mono") {
    cfg.scheme = Scheme::monolithic;
  } else if (base == "altmin" || base == "alt-min") {
    cfg.scheme = Scheme::altmin;
  } else if (base.rfind("l2s", 0) == 0) {
    cfg.scheme = Scheme::l2s;
    std::string args = base.substr(3);
    if (!args.empty()) {
      if (args.front() != '(' || args.back() != ')')
        throw std::invalid_argument("malformed scheme '" + std::string(text) + "'");
      args = args.substr(1, args.size() - 2);
      std::vector<double> betas;
      std::size_t start = 0;
      while (true) {
        const auto comma = args.find(',', start);
        betas.push_back(parse_double(trim(args.substr(start, comma - start)), text));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (betas.size() != 3)
        throw std::invalid_argument("l2s needs three scalings in '" + std::string(text) + "'");
      cfg.beta_s = betas[0];
      cfg.beta_f = betas[1];
      cfg.beta_p = betas[2];
    }
  } else {
    throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
  }
  if (!accel.empty()) {
    if (accel.rfind("aa", 0) != 0 || accel.size() == 2)
      throw std::invalid_argument("malformed acceleration in '" + std::string(text) + "'");
    std::string depth = accel.substr(2);
    if (depth.front() == '(' && depth.back() == ')') depth = depth.substr(1, depth.size() - 2);
    const double d = parse_double(depth, text);
    if (d < 0 || d != std::floor(d)) throw std::invalid_argument("bad Anderson depth in '" + std::string(text) + "'");
    cfg.anderson_depth = static_cast<std::size_t>(d);
  }
  return cfg;
}

StepSolver::StepSolver(const Problem& problem, SplitConfig config)
    : problem_(problem), config_(std::move(config)) {
  if (config_.scheme == Scheme::l2s) {
    const double dt = problem_.params().dt;
    const BlockSystem& sys = problem_.system();
    bs_ = sys.Dss.scaled(config_.beta_s / dt);
    bf_ = sys.Dff.scaled(config_.beta_f);
    bp_ = problem_.pressure_mass_porous().scaled(
        config_.beta_p / (dt * problem_.params().drained_bulk_modulus()));
  }
  if (config_.scheme == Scheme::altmin && !std::isfinite(problem_.max_N()))
    throw std::invalid_argument("altmin requires a finite N");
}

const StepSolver::Cached& StepSolver::cached(Cached& slot, const std::function<CsrMatrix()>& build) {
  if (!slot.ilu) {
    slot.matrix = build();
    slot.ilu = std::make_unique<IluPreconditioner>(slot.matrix, config_.ilu_level);
  }
  return slot;
}

void StepSolver::increment_solve(const Cached& system, const Vector& b, Vector& x, SolveStats* stats) {
  Vector r = b;
  system.matrix.multiply_add(-1.0, x, r);
  Vector delta(x.size(), 0.0);
  GmresOptions opt;
  opt.rtol = config_.inner_rtol;
  const SolveStats s = gmres(system.matrix, r, delta, *system.ilu, opt);
  axpy(1.0, delta, x);
  inner_iterations_ += s.iterations;
  if (!s.converged) ++inner_failures_;
  if (stats) *stats = s;
}

SolveStats StepSolver::monolithic(const StepRhs& rhs, Vector& u, Vector& v, Vector& p) {
  const Problem& pb = problem_;
  const double dt = pb.params().dt;
  const BlockSystem& sys = pb.system();
  const Cached& k = cached(mono_, [&] {
    return block_matrix({{{&pb.A_uu(), 1.0}, {&sys.Dsf, -1.0}, {&sys.Bu, -1.0}},
                         {{&pb.Dfs(), -1.0}, {&pb.A_vv(), dt}, {&sys.Bv, -dt}},
                         {{&pb.BuT(), 1.0}, {&pb.BvT(), dt}, {&sys.Mp, 1.0}}},
                        {pb.n_u(), pb.n_v(), pb.n_p()}, {pb.n_u(), pb.n_v(), pb.n_p()});
  });
  Vector bf = rhs.bf, bp = rhs.bp;
  for (double& x : bf) x *= dt;
  for (double& x : bp) x *= dt;
  const Vector b = concat(rhs.bs, bf, bp);
  Vector x = concat(u, v, p);
  SolveStats stats;
  increment_solve(k, b, x, &stats);
  split(x, u, v, p);
  return stats;
}

Vector StepSolver::altmin_solid(const StepRhs& rhs, const Vector& u_prev, const Vector& v_prev,
                                const Vector& p_prev) {
  const Problem& pb = problem_;
  const BlockSystem& sys = pb.system();
  const Cached& a = cached(solid_, [&] { return add(pb.A_uu(), sys.S); });
  Vector b = rhs.bs;
  sys.S.multiply_add(1.0, u_prev, b);
  sys.Dsf.multiply_add(1.0, v_prev, b);
  sys.Bu.multiply_add(1.0, p_prev, b);
  Vector u = u_prev;
  increment_solve(a, b, u);
  return u;
}

void StepSolver::altmin_fluid(const StepRhs& rhs, const Vector& u, Vector& v, Vector& p) {
  const Problem& pb = problem_;
  const double dt = pb.params().dt;
  const BlockSystem& sys = pb.system();
  const Cached& a = cached(fluid_, [&] {
    return block_matrix({{{&pb.A_vv(), dt}, {&sys.Bv, -dt}}, {{&pb.BvT(), dt}, {&sys.Mp, 1.0}}},
                        {pb.n_v(), pb.n_p()}, {pb.n_v(), pb.n_p()});
  });
  Vector bv(pb.n_v()), bq(pb.n_p());
  for (std::size_t i = 0; i < bv.size(); ++i) bv[i] = dt * rhs.bf[i];
  for (std::size_t i = 0; i < bq.size(); ++i) bq[i] = dt * rhs.bp[i];
  pb.Dfs().multiply_add(1.0, u, bv);
  pb.BuT().multiply_add(-1.0, u, bq);
  Vector x = concat(v, p, {});
  Vector empty;
  increment_solve(a, concat(bv, bq, {}), x);
  split(x, v, p, empty);
}

Vector StepSolver::consistent_pressure(const StepRhs& rhs, const Vector& u, const Vector& v) const {
  const Problem& pb = problem_;
  const double dt = pb.params().dt;
  Vector q(pb.n_p());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = dt * rhs.bp[i];
  pb.BuT().multiply_add(-1.0, u, q);
  pb.BvT().multiply_add(-dt, v, q);
  return pb.solve_pressure_mass(q);
}

void StepSolver::l2s_fluid(const StepRhs& rhs, const Vector& u_prev, Vector& v, Vector& p) {
  const Problem& pb = problem_;
  const double dt = pb.params().dt;
  const BlockSystem& sys = pb.system();
  const Cached& a = cached(fluid_, [&] {
    const CsrMatrix avv = add(pb.A_vv(), bf_);
    const CsrMatrix app = add(sys.Mp, bp_, 1.0 / dt, 1.0);
    return block_matrix({{{&avv, 1.0}, {&sys.Bv, -1.0}}, {{&pb.BvT(), 1.0}, {&app, 1.0}}},
                        {pb.n_v(), pb.n_p()}, {pb.n_v(), pb.n_p()});
  });
  Vector bv = rhs.bf, bq = rhs.bp;
  pb.Dfs().multiply_add(1.0 / dt, u_prev, bv);
  bf_.multiply_add(1.0, v, bv);
  pb.BuT().multiply_add(-1.0 / dt, u_prev, bq);
  bp_.multiply_add(1.0, p, bq);
  Vector x = concat(v, p, {});
  Vector empty;
  increment_solve(a, concat(bv, bq, {}), x);
  split(x, v, p, empty);
}

Vector StepSolver::l2s_solid(const StepRhs& rhs, const Vector& v, const Vector& p, const Vector& u_prev) {
  const Problem& pb = problem_;
  const BlockSystem& sys = pb.system();
  const Cached& a = cached(solid_, [&] { return add(pb.A_uu(), bs_); });
  Vector b = rhs.bs;
  sys.Dsf.multiply_add(1.0, v, b);
  sys.Bu.multiply_add(1.0, p, b);
  bs_.multiply_add(1.0, u_prev, b);
  Vector u = u_prev;
  increment_solve(a, b, u);
  return u;
}

IterationReport StepSolver::solve(const StepRhs& rhs, Vector& u, Vector& v, Vector& p) {
  const auto t0 = std::chrono::steady_clock::now();
  const Problem& pb = problem_;
  IterationReport rep;
  inner_iterations_ = 0;
  inner_failures_ = 0;

  try {
    if (config_.scheme == Scheme::altmin) p = consistent_pressure(rhs, u, v);
    const double r0 = pb.residual_inf(rhs, u, v, p);
    rep.residual_history.push_back(r0 > 0.0 ? 1.0 : 0.0);
    if (config_.record_iterates) rep.iterates.push_back(concat(u, v, p));
    const bool energy_on = config_.record_energy && config_.scheme == Scheme::altmin;
    if (energy_on) rep.energy_history.push_back(energy(pb, rhs, u, v));

    if (config_.scheme == Scheme::monolithic) {
      const SolveStats s = monolithic(rhs, u, v, p);
      const double r = pb.residual_inf(rhs, u, v, p);
      rep.residual_history.push_back(r0 > 0.0 ? r / r0 : 0.0);
      if (config_.record_iterates) rep.iterates.push_back(concat(u, v, p));
      rep.iterations = s.iterations;
      rep.converged = s.converged;
      if (!s.converged) rep.failure = "gmres did not converge";
    } else {
      AndersonState aa(config_.anderson_depth);
      for (std::size_t k = 1; k <= config_.outer_cap; ++k) {
        Vector un, vn = v, pn = p;
        if (config_.scheme == Scheme::altmin) {
          un = altmin_solid(rhs, u, v, p);
          if (energy_on) rep.energy_history.push_back(energy(pb, rhs, un, v));
          altmin_fluid(rhs, un, vn, pn);
          if (energy_on) rep.energy_history.push_back(energy(pb, rhs, un, vn));
        } else {
          l2s_fluid(rhs, u, vn, pn);
          un = l2s_solid(rhs, vn, pn, u);
        }
        // Depth 0 returns g(x) unchanged, so the plain split goes through here too.
        const Vector next = aa.update(concat(u, v, p), concat(un, vn, pn));
        split(next, u, v, p);
        const double r = pb.residual_inf(rhs, u, v, p);
        rep.residual_history.push_back(r0 > 0.0 ? r / r0 : 0.0);
        if (config_.record_iterates) rep.iterates.push_back(concat(u, v, p));
        rep.iterations = k;
        // Past this point rounding in the residual sum dominates, so a tiny
        // r0 (e.g. a source-only first step) cannot stall the loop.
        const double floor = 1e3 * std::numeric_limits<double>::epsilon() *
                             pb.residual_scale(rhs, u, v, p);
        if (r <= std::max(config_.outer_tol * r0, floor)) {
          rep.converged = true;
          break;
        }
        if (!std::isfinite(r) || r > 1e12 * r0) {
          rep.failure = "outer iteration diverged";
          break;
        }
      }
      if (!rep.converged && rep.failure.empty()) rep.failure = "iteration cap reached";
    }
  } catch (const std::runtime_error& e) {
    rep.converged = false;
    rep.failure = e.what();
  }
  rep.inner_iterations = inner_iterations_;
  rep.inner_failures = inner_failures_;
  rep.wall_time_s = seconds_since(t0);
  return rep;
}

State advance(StepSolver& solver, const State& state, IterationReport& report) {
  const StepRhs rhs = solver.problem().step_rhs(state);
  State next;
  Vector u = state.u_prev, v = state.v_prev, p = state.p_prev;
  report = solver.solve(rhs, u, v, p);
  next.u_prev2 = state.u_prev;
  next.u_prev = std::move(u);
  next.v_prev = std::move(v);
  next.p_prev = std::move(p);
  next.t_now = rhs.t;
  next.n = state.n + 1;
  return next;
}

RunResult simulate(const Problem& problem, const SplitConfig& config, std::size_t steps) {
  RunResult out;
  StepSolver solver(problem, config);
  State state = problem.initial_state();
  double total = 0.0;
  for (std::size_t n = 0; n < steps; ++n) {
    IterationReport rep;
    state = advance(solver, state, rep);
    total += static_cast<double>(rep.iterations);
    out.wall_time_s += rep.wall_time_s;
    const bool ok = rep.converged;
    out.reports.push_back(std::move(rep));
    if (!ok) {
      out.converged = false;
      out.failure = "step " + std::to_string(n + 1) + ": " + out.reports.back().failure;
      break;
    }
  }
  if (!out.reports.empty()) out.average_iterations = total / static_cast<double>(out.reports.size());
  out.final_state = std::move(state);
  return out;
}

}  // namespace porosplit
