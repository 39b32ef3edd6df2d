#include <cstdlib>
#include <string>

#include "entswitch/simd/kernels.hpp"

namespace entswitch::simd {

#ifndef ENTSWITCH_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(ENTSWITCH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

namespace {

const KernelTable& select() {
  if (const char* forced = std::getenv("ENTSWITCH_SIMD"); forced && std::string(forced) == "scalar") {
    return scalar_kernels();
  }
  if (cpu_supports(Isa::Avx2) && avx2_kernels() != nullptr) return *avx2_kernels();
  return scalar_kernels();
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace entswitch::simd
