#include "porosplit/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace porosplit {

LstsqResult qr_lstsq(const DenseColumns& f, const Vector& rhs, double drop_tol) {
  const std::size_t m = f.size();
  for (const auto& col : f)
    if (col.size() != rhs.size()) throw std::invalid_argument("qr_lstsq: column size mismatch");

  LstsqResult out;
  out.coefficients.assign(m, 0.0);
  out.kept.assign(m, false);

  std::vector<Vector> q;                 // orthonormal basis of kept columns
  std::vector<std::size_t> kept_index;   // original column of each q
  std::vector<std::vector<double>> r;    // r[c][k]: coefficient of q_k in column c
  for (std::size_t c = 0; c < m; ++c) {
    Vector v = f[c];
    const double original = norm2(v);
    std::vector<double> coeff(q.size(), 0.0);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < q.size(); ++k) {
        const double s = dot(q[k], v);
        coeff[k] += s;
        axpy(-s, q[k], v);
      }
    const double rest = norm2(v);
    if (original == 0.0 || rest <= drop_tol * original) continue;
    for (double& x : v) x /= rest;
    coeff.push_back(rest);
    q.push_back(std::move(v));
    kept_index.push_back(c);
    r.push_back(std::move(coeff));
    out.kept[c] = true;
  }

  // R y = Q^T rhs, with R upper triangular: R(k, c) = r[c][k].
  const std::size_t n = q.size();
  std::vector<double> qtb(n);
  for (std::size_t k = 0; k < n; ++k) qtb[k] = dot(q[k], rhs);
  std::vector<double> y(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = qtb[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= r[c][i] * y[c];
    y[i] = s / r[i][i];
  }
  for (std::size_t k = 0; k < n; ++k) out.coefficients[kept_index[k]] = y[k];

  Vector res = rhs;
  for (std::size_t c = 0; c < m; ++c)
    if (out.coefficients[c] != 0.0) axpy(-out.coefficients[c], f[c], res);
  out.residual_norm = norm2(res);
  return out;
}

}  // namespace porosplit
