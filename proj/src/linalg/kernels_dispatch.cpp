#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"

namespace rbe::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(RBE_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  const KernelTable* simd = avx2_table();
  const char* env = std::getenv("RBE_SIMD");
  const std::string choice = env ? env : "auto";
  if (choice == "scalar") return &scalar_table();
  if (simd != nullptr) return simd;
  return &scalar_table();
}

const KernelTable*& current() {
  static const KernelTable* table = initial_table();
  return table;
}

}  // namespace

const KernelTable& scalar_table() { return detail::kScalarTable; }

const KernelTable* avx2_table() {
#if defined(RBE_HAVE_AVX2_KERNELS)
  static const bool ok = cpu_has_avx2();
  return ok ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *current(); }

void select(Backend b) {
  if (b == Backend::Avx2 && avx2_table() != nullptr) {
    current() = avx2_table();
  } else {
    current() = &scalar_table();
  }
}

}  // namespace rbe::kernels
