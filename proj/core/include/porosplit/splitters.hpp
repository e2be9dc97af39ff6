#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "porosplit/ilu.hpp"
#include "porosplit/model.hpp"

namespace porosplit {

enum class Scheme { monolithic, altmin, l2s };

std::string_view to_string(Scheme scheme);

/// Solver selection for one run. The L2S scalings multiply
///   beta_s = phi0^2 / (kappa_f dt), beta_f = phi0^2 / kappa_f,
///   beta_p = (1 - phi0)^2 / (dt K_dr).
struct SplitConfig {
  Scheme scheme = Scheme::altmin;
  double beta_s = -0.5;
  double beta_f = 0.0;
  double beta_p = 1.0;
  std::size_t anderson_depth = 0;
  double outer_tol = 1e-8;
  std::size_t outer_cap = 200;
  double inner_rtol = 1e-8;
  int ilu_level = 3;
  bool record_energy = false;
  bool record_iterates = false;

  /// Canonical spelling accepted by parse(), e.g. "l2s(-0.5,0,1)+aa5".
  std::string label() const;
  /// Parses "monolithic", "altmin", "altmin+aa5", "l2s", "l2s(0,0,1)+aa5".
  /// Tolerances keep their defaults.
  static SplitConfig parse(std::string_view text);
};

struct IterationReport {
  std::size_t iterations = 0;
  bool converged = false;
  /// r_k / r_0 in the l-infinity norm, entry 0 is the initial guess.
  std::vector<double> residual_history;
  /// Altmin energy after the initial guess and after every half step.
  std::vector<double> energy_history;
  /// Concatenated (u, v, p) of every iterate including the initial guess.
  std::vector<Vector> iterates;
  std::size_t inner_iterations = 0;
  std::size_t inner_failures = 0;
  double wall_time_s = 0.0;
  std::string failure;
};

/// Per-step solver with cached operators and ILU factorizations; one
/// instance per thread.
class StepSolver {
 public:
  StepSolver(const Problem& problem, SplitConfig config);

  const Problem& problem() const { return problem_; }
  const SplitConfig& config() const { return config_; }

  /// Solves one time step. (u, v, p) hold the initial guess on entry and
  /// the final iterate on return.
  IterationReport solve(const StepRhs& rhs, Vector& u, Vector& v, Vector& p);

  /// Coupled solve by GMRES + ILU; returns the Krylov statistics.
  SolveStats monolithic(const StepRhs& rhs, Vector& u, Vector& v, Vector& p);

  /// (A_uu + S) u = bs + S u_prev + Dsf v_prev + Bu p_prev.
  Vector altmin_solid(const StepRhs& rhs, const Vector& u_prev, const Vector& v_prev,
                      const Vector& p_prev);
  /// Saddle point solve for (v, p) given u; (v, p) serve as the guess.
  void altmin_fluid(const StepRhs& rhs, const Vector& u, Vector& v, Vector& p);
  /// Pressure consistent with the mass balance for given (u, v).
  Vector consistent_pressure(const StepRhs& rhs, const Vector& u, const Vector& v) const;

  /// Stabilized flow step; (v, p) carry the previous iterate in and the new one out.
  void l2s_fluid(const StepRhs& rhs, const Vector& u_prev, Vector& v, Vector& p);
  /// Stabilized mechanics step given the new (v, p).
  Vector l2s_solid(const StepRhs& rhs, const Vector& v, const Vector& p, const Vector& u_prev);

  const CsrMatrix& beta_s_matrix() const { return bs_; }
  const CsrMatrix& beta_f_matrix() const { return bf_; }
  const CsrMatrix& beta_p_matrix() const { return bp_; }

 private:
  struct Cached {
    CsrMatrix matrix;
    std::unique_ptr<IluPreconditioner> ilu;
  };
  const Cached& cached(Cached& slot, const std::function<CsrMatrix()>& build);
  /// x <- x + A^{-1}(b - A x) by GMRES on the increment.
  void increment_solve(const Cached& system, const Vector& b, Vector& x, SolveStats* stats = nullptr);

  const Problem& problem_;
  SplitConfig config_;
  CsrMatrix bs_, bf_, bp_;
  Cached mono_, solid_, fluid_;
  std::size_t inner_iterations_ = 0;
  std::size_t inner_failures_ = 0;
};

/// Advances one time step from state; the guess is the previous solution.
State advance(StepSolver& solver, const State& state, IterationReport& report);

struct RunResult {
  std::vector<IterationReport> reports;
  bool converged = true;
  double average_iterations = 0.0;
  double wall_time_s = 0.0;
  State final_state;
  std::string failure;
};

/// Runs `steps` time steps, stopping at the first non-converged step.
RunResult simulate(const Problem& problem, const SplitConfig& config, std::size_t steps);

}  // namespace porosplit
