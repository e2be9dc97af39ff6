#include "porosplit/eigen_power.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "porosplit/ilu.hpp"
#include "porosplit/krylov.hpp"

namespace porosplit {

EigenPair generalized_symmetric_eig_max(const CsrMatrix& a, const CsrMatrix& b,
                                        const PowerOptions& options) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n)
    throw std::invalid_argument("eig_max: matrices must be square and of equal size");
  EigenPair out;
  if (n == 0) return out;

  const IluPreconditioner precond(b, options.ilu_level);
  GmresOptions gopt;
  gopt.rtol = options.solve_rtol;
  gopt.max_iter = 5000;

  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  Vector x(n);
  for (double& v : x) v = dist(rng);
  auto b_normalize = [&](Vector& v) {
    const double s = std::sqrt(dot(v, b * v));
    if (!(s > 0.0)) throw std::runtime_error("eig_max: B is not positive definite");
    for (double& e : v) e /= s;
  };
  b_normalize(x);

  double lambda = 0.0;
  int stable = 0;
  Vector ax, z;
  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    a.multiply(x, ax);
    const double rq = dot(x, ax);  // x is B-normalized
    if (norm_inf(ax) == 0.0) {
      out.value = 0.0;
      out.vector = x;
      out.iterations = it;
      return out;
    }
    z.assign(n, 0.0);
    const SolveStats st = gmres(b, ax, z, precond, gopt);
    if (!st.converged && st.relative_residual > 1e-8)
      throw std::runtime_error("eig_max: inner solve failed");
    const bool small_change = it > 1 && std::abs(rq - lambda) <= options.tol * std::abs(rq);
    stable = small_change ? stable + 1 : 0;
    lambda = rq;
    if (stable >= 3) {
      out.value = lambda;
      out.vector = x;
      out.iterations = it;
      return out;
    }
    x = z;
    b_normalize(x);
  }
  throw std::runtime_error("eig_max: no convergence, last Rayleigh quotient " +
                           std::to_string(lambda));
}

}  // namespace porosplit
