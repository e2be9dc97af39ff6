#include "porosplit/anderson.hpp"

#include <stdexcept>

#include "porosplit/dense.hpp"

namespace porosplit {

void AndersonState::reset() {
  g_.clear();
  f_.clear();
  alphas_.clear();
}

Vector AndersonState::update(const Vector& x, const Vector& gx) {
  if (x.size() != gx.size()) throw std::invalid_argument("anderson: size mismatch");
  if (depth_ == 0) {
    alphas_.assign(1, 1.0);
    return gx;
  }
  Vector f(gx.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = gx[i] - x[i];
  g_.push_back(gx);
  f_.push_back(std::move(f));
  while (g_.size() > depth_ + 1) {
    g_.pop_front();
    f_.pop_front();
  }
  const std::size_t m = g_.size() - 1;
  if (m == 0) {
    alphas_.assign(1, 1.0);
    return gx;
  }

  // min || f_k - dF gamma ||, dF_i = f_{i+1} - f_i.
  DenseColumns df(m, Vector(x.size()));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t r = 0; r < x.size(); ++r) df[i][r] = f_[i + 1][r] - f_[i][r];
  const LstsqResult ls = qr_lstsq(df, f_.back());
  const Vector& gamma = ls.coefficients;

  alphas_.assign(m + 1, 0.0);
  alphas_[0] = gamma[0];
  for (std::size_t i = 1; i < m; ++i) alphas_[i] = gamma[i] - gamma[i - 1];
  alphas_[m] = 1.0 - gamma[m - 1];

  Vector next(x.size(), 0.0);
  for (std::size_t i = 0; i <= m; ++i)
    if (alphas_[i] != 0.0) axpy(alphas_[i], g_[i], next);
  return next;
}

}  // namespace porosplit
