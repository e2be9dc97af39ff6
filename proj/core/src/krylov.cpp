#include "porosplit/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace porosplit {

namespace {

double true_residual(const LinearOperator& a, const Vector& b, const Vector& x, Vector& r) {
  a(x, r);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = b[i] - r[i];
  return norm2(r);
}

}  // namespace

SolveStats gmres(const LinearOperator& a, const Vector& b, Vector& x, const Preconditioner& m,
                 const GmresOptions& options) {
  const std::size_t n = b.size();
  if (x.empty()) x.assign(n, 0.0);
  if (x.size() != n) throw std::invalid_argument("gmres: initial guess has wrong size");
  SolveStats stats;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    x.assign(n, 0.0);
    stats.converged = true;
    return stats;
  }
  const double target = options.rtol * bnorm;
  const std::size_t restart = std::max<std::size_t>(1, options.restart);

  Vector r(n), w(n), z(n);
  double beta = true_residual(a, b, x, r);
  stats.relative_residual = beta / bnorm;
  if (beta <= target) {
    stats.converged = true;
    return stats;
  }

  std::vector<Vector> basis;
  std::vector<std::vector<double>> h(restart + 1, std::vector<double>(restart, 0.0));
  std::vector<double> cs(restart), sn(restart), g(restart + 1);

  while (stats.iterations < options.max_iter) {
    basis.assign(1, r);
    for (double& v : basis[0]) v /= beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;

    std::size_t j = 0;
    bool breakdown = false;
    for (; j < restart && stats.iterations < options.max_iter; ++j) {
      ++stats.iterations;
      m.apply(basis[j], z);
      a(z, w);
      for (std::size_t i = 0; i <= j; ++i) {
        h[i][j] = dot(w, basis[i]);
        axpy(-h[i][j], basis[i], w);
      }
      h[j + 1][j] = norm2(w);
      for (std::size_t i = 0; i < j; ++i) {
        const double t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
        h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
        h[i][j] = t;
      }
      const double denom = std::hypot(h[j][j], h[j + 1][j]);
      const double hnext = h[j + 1][j];
      if (denom == 0.0) {
        breakdown = true;
        break;
      }
      cs[j] = h[j][j] / denom;
      sn[j] = hnext / denom;
      h[j][j] = denom;
      h[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      if (std::abs(g[j + 1]) <= target || hnext <= 1e-14 * denom) {
        breakdown = hnext <= 1e-14 * denom;
        ++j;
        break;
      }
      basis.emplace_back(w);
      for (double& v : basis.back()) v /= hnext;
    }

    // Back substitution for the least-squares coefficients.
    std::vector<double> y(j, 0.0);
    for (std::size_t ii = j; ii-- > 0;) {
      double s = g[ii];
      for (std::size_t k = ii + 1; k < j; ++k) s -= h[ii][k] * y[k];
      y[ii] = s / h[ii][ii];
    }
    Vector update(n, 0.0);
    for (std::size_t k = 0; k < j; ++k) axpy(y[k], basis[k], update);
    m.apply(update, z);
    axpy(1.0, z, x);

    const double previous = beta;
    beta = true_residual(a, b, x, r);
    stats.relative_residual = beta / bnorm;
    if (beta <= target) {
      stats.converged = true;
      return stats;
    }
    if (j == 0 || (breakdown && beta >= previous * (1.0 - 1e-12))) break;
  }
  return stats;
}

SolveStats gmres(const CsrMatrix& a, const Vector& b, Vector& x, const Preconditioner& m,
                 const GmresOptions& options) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw std::invalid_argument("gmres: matrix and right-hand side do not agree");
  return gmres([&a](const Vector& in, Vector& out) { a.multiply(in, out); }, b, x, m, options);
}

}  // namespace porosplit
