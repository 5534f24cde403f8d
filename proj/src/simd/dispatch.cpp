#include <stdexcept>
#include <string>

#include "uls/simd/kernels.hpp"

namespace uls::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Sse2: return "sse2";
    case Isa::Avx2: return "avx2";
  }
  return "";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
#if defined(ULS_HAVE_X86_KERNELS)
    case Isa::Sse2:
      return true;
    case Isa::Avx2:
      return __builtin_cpu_supports("avx2");
#else
    case Isa::Sse2:
    case Isa::Avx2:
      return false;
#endif
  }
  return false;
}

Isa best_isa() {
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Sse2)) return Isa::Sse2;
  return Isa::Scalar;
}

KernelTable kernels(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("kernel ISA unavailable: " +
                                std::string(to_string(isa)));
  }
  switch (isa) {
#if defined(ULS_HAVE_X86_KERNELS)
    case Isa::Avx2:
      return {isa, first_blocker_avx2, first_container_avx2};
    case Isa::Sse2:
      return {isa, first_blocker_sse2, first_container_sse2};
#endif
    default:
      return {Isa::Scalar, first_blocker_scalar, first_container_scalar};
  }
}

const KernelTable& default_kernels() {
  static const KernelTable table = kernels(best_isa());
  return table;
}

}  // namespace uls::simd
