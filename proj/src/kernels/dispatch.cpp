#include <cstdlib>
#include <cstring>

#include "nemflow/kernels.hpp"

namespace nemflow::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa pick_startup_isa() {
  if (const char* env = std::getenv("NEMFLOW_ISA")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Isa::Avx2;
    // unknown or unavailable request falls through to autodetect
  }
  return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

Isa g_isa = pick_startup_isa();

}  // namespace

bool avx2_available() {
#ifdef NEMFLOW_HAVE_AVX2
  static const bool ok = cpu_has_avx2();
  return ok;
#else
  return false;
#endif
}

const KernelTable& active() {
#ifdef NEMFLOW_HAVE_AVX2
  if (g_isa == Isa::Avx2) return avx2_table();
#endif
  return scalar_table();
}

void select(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available()) return;
  g_isa = isa;
}

Isa active_isa() { return g_isa; }

}  // namespace nemflow::kernels
