#include "porosplit/vector_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace porosplit {

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vector& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double alpha, const Vector& x, Vector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector concat(const Vector& a, const Vector& b, const Vector& c) {
  Vector x;
  x.reserve(a.size() + b.size() + c.size());
  x.insert(x.end(), a.begin(), a.end());
  x.insert(x.end(), b.begin(), b.end());
  x.insert(x.end(), c.begin(), c.end());
  return x;
}

void split(const Vector& x, Vector& a, Vector& b, Vector& c) {
  if (x.size() != a.size() + b.size() + c.size())
    throw std::invalid_argument("split: size mismatch");
  auto it = x.begin();
  std::copy(it, it + static_cast<std::ptrdiff_t>(a.size()), a.begin());
  it += static_cast<std::ptrdiff_t>(a.size());
  std::copy(it, it + static_cast<std::ptrdiff_t>(b.size()), b.begin());
  it += static_cast<std::ptrdiff_t>(b.size());
  std::copy(it, x.end(), c.begin());
}

}  // namespace porosplit
