#include <cmath>

#include "entswitch/simd/kernels.hpp"

namespace entswitch::simd {
namespace {

void ell_spmv(const EllView& m, const double* x, double* y) {
  for (std::size_t r = 0; r < m.rows; ++r) y[r] = 0.0;
  for (std::size_t w = 0; w < m.width; ++w) {
    const std::int32_t* cols = m.cols + w * m.rows;
    const double* vals = m.vals + w * m.rows;
    for (std::size_t r = 0; r < m.rows; ++r) y[r] += vals[r] * x[cols[r]];
  }
}

double l1_distance(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double sum(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * c[i];
  return s;
}

void average_into(double* y, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = 0.5 * (x[i] + y[i]);
}

void scale(double* a, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] *= s;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::Scalar, ell_spmv, l1_distance, sum, dot, dot3, average_into, scale};
  return table;
}

}  // namespace entswitch::simd
