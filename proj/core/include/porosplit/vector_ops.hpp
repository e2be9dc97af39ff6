#pragma once

#include <cstddef>
#include <vector>

namespace porosplit {

using Vector = std::vector<double>;

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
double norm_inf(const Vector& a);

// y += alpha * x
void axpy(double alpha, const Vector& x, Vector& y);

// Concatenate blocks; `split` reverses it given the block sizes.
Vector concat(const Vector& a, const Vector& b, const Vector& c);
void split(const Vector& x, Vector& a, Vector& b, Vector& c);

}  // namespace porosplit
