#pragma once

// Data-parallel inner loops shared by the stationary solver and the series
// evaluators. Each kernel has a scalar reference implementation and an AVX2
// variant; the variant is picked once at runtime from CPUID, and the
// environment variable ENTSWITCH_SIMD=scalar forces the reference path.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace entswitch::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

// Sparse matrix in ELLPACK layout, column-major by slot: the w-th stored
// entry of row r lives at index w * rows + r. Padding uses value 0.
struct EllView {
  std::size_t rows = 0;
  std::size_t width = 0;
  const std::int32_t* cols = nullptr;
  const double* vals = nullptr;
};

struct KernelTable {
  Isa isa;
  // y[r] = sum_w vals[w][r] * x[cols[w][r]]
  void (*ell_spmv)(const EllView& m, const double* x, double* y);
  // sum |a[i] - b[i]|
  double (*l1_distance)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum a[i] * b[i] * c[i]
  double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
  // y[i] = 0.5 * (x[i] + y[i])
  void (*average_into)(double* y, const double* x, std::size_t n);
  void (*scale)(double* a, double s, std::size_t n);
};

const KernelTable& scalar_kernels();
// Null when the binary was built without AVX2 support.
const KernelTable* avx2_kernels();

bool cpu_supports(Isa isa);

// The table selected for this process.
const KernelTable& kernels();

}  // namespace entswitch::simd
