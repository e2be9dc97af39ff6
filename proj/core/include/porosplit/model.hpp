#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "porosplit/assembly.hpp"
#include "porosplit/fe.hpp"
#include "porosplit/krylov.hpp"
#include "porosplit/mesh.hpp"
#include "porosplit/sparse.hpp"

namespace porosplit {

enum class CaseKind { swelling, footing, perfusion };

std::string_view to_string(CaseKind kind);
CaseKind parse_case(std::string_view name);

/// Polynomial degrees of the (displacement, velocity, pressure) spaces.
struct ElementSpec {
  int u = 1;
  int v = 2;
  int p = 1;

  std::string label() const;  // e.g. "P1/P2/P1"
  static ElementSpec parse(std::string_view text);
  bool operator==(const ElementSpec&) const = default;
};

/// Material and time-stepping parameters in SI units. The permeability
/// tensor is kappa_f times the identity.
struct ModelParameters {
  double rho_s = 1000.0;
  double rho_f = 1000.0;
  double mu_f = 0.035;
  double lambda = 711.0;
  double mu = 4066.0;
  double kappa_s = 1e3;
  double kappa_f = 1e-7;
  double phi0 = 0.1;          // used when porosity_ell == 0
  int porosity_ell = 0;       // > 0 selects 0.1 + 0.5 sin^2(ell pi x / L)
  double theta = 0.0;         // volumetric source of the mass balance
  double dt = 0.1;
  double t_end = 1.0;
  double side_length = 1e-2;

  ScalarField porosity() const;
  /// lambda + 2 mu / d with d = 2; equals the plane-strain I : C^{-1} : I inverse.
  double drained_bulk_modulus() const { return lambda + mu; }
  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

/// phi0(x) = 0.1 + 0.5 sin^2(ell pi x / L).
ScalarField oscillatory_porosity(int ell, double side_length);

struct BenchmarkCase {
  CaseKind kind = CaseKind::swelling;
  std::size_t n_per_side = 10;
  ElementSpec elements{};
  std::size_t refine_levels = 0;
  double outer_tol = 1e-8;
  std::size_t outer_cap = 200;
  std::size_t steps = 11;
};

using ParameterMap = std::map<std::string, std::string>;

ModelParameters default_parameters(CaseKind kind);
BenchmarkCase default_case(CaseKind kind);

/// Right-hand sides of one time step of the three-field system
///   A_uu u - Dsf v - Bu p               = bs
///   -Dfs u / dt + A_vv v - Bv p          = bf
///   Bu^T u / dt + Bv^T v + Mp p / dt     = bp
/// with A_uu = Ms/dt^2 + Ks + Dss/dt and A_vv = Mf/dt + Kf + Dff.
struct StepRhs {
  double t = 0.0;
  Vector bs, bf, bp;
};

/// Solution history: u^{n-1}, u^{n-2}, v^{n-1}, p^{n-1} at t = n_done * dt.
struct State {
  Vector u_prev, u_prev2, v_prev, p_prev;
  double t_now = 0.0;
  std::size_t n = 0;  // completed steps
};

/// Assembled, time-independent data of one benchmark configuration.
/// Immutable after construction apart from internal caches.
class Problem {
 public:
  Problem(const ModelParameters& params, const BenchmarkCase& setup);
  /// Custom mesh (used by tests); the mesh must carry the tags the case needs.
  Problem(const ModelParameters& params, const BenchmarkCase& setup,
          std::shared_ptr<const Mesh> mesh);

  const ModelParameters& params() const { return params_; }
  const BenchmarkCase& setup() const { return setup_; }
  const Mesh& mesh() const { return *mesh_; }
  const FeSpace& U() const { return *u_space_; }
  const FeSpace& V() const { return *v_space_; }
  const FeSpace& P() const { return *p_space_; }
  std::size_t n_u() const { return u_space_->n_dofs(); }
  std::size_t n_v() const { return v_space_->n_dofs(); }
  std::size_t n_p() const { return p_space_->n_dofs(); }
  std::size_t n_total() const { return n_u() + n_v() + n_p(); }

  const BlockSystem& raw() const { return raw_; }      // before Dirichlet elimination
  const BlockSystem& system() const { return system_; }
  const BlockDofs& dofs() const { return dofs_; }

  // Derived operators on the constrained system.
  const CsrMatrix& A_uu() const { return a_uu_; }
  const CsrMatrix& A_vv() const { return a_vv_; }
  const CsrMatrix& Dfs() const { return dfs_; }
  const CsrMatrix& BuT() const { return but_; }
  const CsrMatrix& BvT() const { return bvt_; }

  /// P mass weighted (1 - phi0)^2, and the unweighted P mass.
  const CsrMatrix& pressure_mass_porous() const { return mp_porous_; }
  const CsrMatrix& pressure_mass_plain() const { return mp_plain_; }

  /// Largest N = kappa_s / (1 - phi0)^2 and (1 - phi0)^2 / (lambda + mu)
  /// over quadrature points.
  double max_N() const { return max_n_; }
  double inv_bulk_phi0() const { return inv_bulk_phi0_; }
  /// max over quadrature points of |grad phi0|^2 / (rho_s (1 - phi0)) and of
  /// phi0^2 / (kappa_f rho_s (1 - phi0)).
  double max_grad_term() const { return max_grad_term_; }
  double max_drag_term() const { return max_drag_term_; }

  /// Load vectors (fs, ff, fp) at time t after Dirichlet elimination.
  void loads(double t, Vector& fs, Vector& ff, Vector& fp) const;

  State initial_state() const;
  StepRhs step_rhs(const State& state) const;

  /// Unscaled three-field residual b - A x.
  void residual(const StepRhs& rhs, const Vector& u, const Vector& v, const Vector& p,
                Vector& ru, Vector& rv, Vector& rp) const;
  double residual_inf(const StepRhs& rhs, const Vector& u, const Vector& v, const Vector& p) const;
  /// Largest l-infinity norm among the individual products summed in
  /// `residual`; eps times this bounds what rounding alone can leave behind.
  double residual_scale(const StepRhs& rhs, const Vector& u, const Vector& v, const Vector& p) const;

  /// Solve Mp x = b to near machine precision (cached factorization).
  Vector solve_pressure_mass(const Vector& b) const;

 private:
  void build();

  ModelParameters params_;
  BenchmarkCase setup_;
  std::shared_ptr<const Mesh> mesh_;
  std::unique_ptr<FeSpace> u_space_, v_space_, p_space_;
  BlockSystem raw_, system_;
  BlockDofs dofs_;
  CsrMatrix a_uu_, a_vv_, dfs_, but_, bvt_, mp_porous_, mp_plain_;
  Vector solid_unit_load_, fluid_unit_load_, mass_unit_load_;
  double max_n_ = 0.0, inv_bulk_phi0_ = 0.0, max_grad_term_ = 0.0, max_drag_term_ = 0.0;

  mutable std::mutex cache_mutex_;
  mutable std::shared_ptr<const Preconditioner> mp_precond_;
};

/// Parameter names accepted as overrides: rho_s, rho_f, rho (both
/// densities), mu_f, lambda, mu, E, nu, K_dr, kappa_s, kappa_f, phi0,
/// porosity_ell, theta, dt, t_end, L, n_per_side, refine_levels, elements,
/// outer_tol, outer_cap, steps.
void apply_overrides(ModelParameters& params, BenchmarkCase& setup, const ParameterMap& overrides);

std::unique_ptr<Problem> build_benchmark(CaseKind kind, const ParameterMap& overrides = {});

}  // namespace porosplit
