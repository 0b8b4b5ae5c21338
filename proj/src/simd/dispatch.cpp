#include <cstdlib>
#include <string>

#include "rdjoint/simd.hpp"

namespace rdjoint::simd {
namespace {

Isa select_isa() {
  if (const char* env = std::getenv("RDJOINT_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
  }
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(RDJOINT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const Kernels& kernels_for(Isa isa) {
#if defined(RDJOINT_HAVE_AVX2)
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) return detail::avx2_kernels;
#endif
  (void)isa;
  return detail::scalar_kernels;
}

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

const Kernels& kernels() { return kernels_for(active_isa()); }

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace rdjoint::simd
