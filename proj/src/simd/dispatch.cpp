#include <cstdlib>
#include <cstring>

#include "mbo/simd/kernels.hpp"

namespace mbo::simd {

#ifdef MBO_HAVE_AVX2
const Kernels& avx2_table();
#endif

const Kernels* avx2_kernels() {
#if defined(MBO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& active() {
  static const Kernels* chosen = [] {
    const char* env = std::getenv("MBO_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    const Kernels* k = avx2_kernels();
    return k ? k : &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace mbo::simd
