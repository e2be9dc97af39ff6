#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "porosplit/model.hpp"

namespace porosplit {

struct SplitConfig;

/// Convex energy of the two-field (u, v) problem with the pressure
/// eliminated through the mass balance. Its minimizer solves the step.
double energy(const Problem& problem, const StepRhs& rhs, const Vector& u, const Vector& v);

/// Squared error norm |(du, dv)|^2, the Hessian of `energy`.
double error_norm_squared(const Problem& problem, const Vector& du, const Vector& dv);
double error_norm(const Problem& problem, const Vector& du, const Vector& dv);

struct KornConstants {
  double c_korn1 = 0.0;  // |grad phi0 . u|^2 against elastic energy
  double c_korn2 = 0.0;  // phi0^2 / kappa_f |u|^2 against elastic energy
};

/// Largest generalized eigenvalues over the free displacement dofs.
KornConstants korn_constants(const Problem& problem);

struct GammaBreakdown {
  double gamma = 0.0;
  double zeta = 1.0;
  double eta = 0.0;
  double theta = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double c_korn1 = 0.0;
  double c_korn2 = 0.0;
  double inv_bulk_phi0 = 0.0;   // max (1 - phi0)^2 / (lambda + mu)
  double kappa_m = 0.0;         // smallest permeability eigenvalue
  double n_max = 0.0;
  double contraction() const { return gamma / (1.0 + gamma); }
};

/// gamma_1 = a eta + b theta and gamma_2 = c + d (1 - eta) + e (1 - theta)
/// for a fixed zeta; the minimax over the box is attained at a corner or
/// where the two planes cross an edge.
struct GammaTerms {
  double a, b, c, d, e;
};
GammaTerms gamma_terms(const Problem& problem, const KornConstants& korn, double zeta);
/// min over (eta, theta) in [0,1]^2 of max(gamma_1, gamma_2).
GammaBreakdown minimize_gamma_box(const GammaTerms& terms);

GammaBreakdown gamma(const Problem& problem);
GammaBreakdown gamma(const Problem& problem, const KornConstants& korn);

struct StabilityLedger {
  /// Per iteration k >= 1: sum of the weighted increment norms on the left.
  std::vector<double> lhs_terms;
  /// Per anchor m >= 1: weighted norms of the increment at m on the right.
  std::vector<double> rhs_terms;
  /// Per anchor m: truncated left sum over k > m.
  std::vector<double> tail_sums;
  double delta1 = 1.0;
  double delta2 = 1.0;
  double worst_margin = 0.0;  // min over m of rhs - tail (relative)
  bool holds = true;
};

/// Checks the relative stability inequality of an L2S run from its iterate
/// history (concatenated (u, v, p) vectors, initial guess first).
StabilityLedger stability_check(const Problem& problem, const SplitConfig& config,
                                const std::vector<Vector>& iterates, double delta1 = 1.0,
                                double delta2 = 1.0);

struct RLinearCertificate {
  bool certified = false;
  double c = 0.0;
  std::size_t m = 0;
  double rate = 1.0;
  std::vector<std::size_t> indices;
  std::string message;
};

/// c = min_k x_k / sum_{i>k} x_i over the history and the subsequence with
/// certified rate min_m (1 / (c m))^{1/m}.
RLinearCertificate rlinear_subsequence(const std::vector<double>& x);
/// Same with c supplied by the caller.
RLinearCertificate rlinear_subsequence(const std::vector<double>& x, double c);

}  // namespace porosplit
