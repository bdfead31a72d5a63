#include <atomic>
#include <cstdlib>
#include <string_view>

#include "atvgarch/kernels.hpp"

namespace atvgarch::kernels {

namespace {

constexpr KernelTable kScalar{Backend::scalar, &scalar::lagged_conv, &scalar::dot};
#if defined(ATVGARCH_HAVE_AVX2)
constexpr KernelTable kAvx2{Backend::avx2, &avx2::lagged_conv, &avx2::dot};
#endif
#if defined(ATVGARCH_HAVE_NEON)
constexpr KernelTable kNeon{Backend::neon, &neon::lagged_conv, &neon::dot};
#endif

bool cpu_has_avx2() noexcept {
#if defined(ATVGARCH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* detect() noexcept {
  if (const char* env = std::getenv("ATVGARCH_SIMD")) {
    if (std::string_view(env) == "scalar") return &kScalar;
  }
  if (const KernelTable* t = table_for(Backend::avx2)) return t;
  if (const KernelTable* t = table_for(Backend::neon)) return t;
  return &kScalar;
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{detect()};
  return table;
}

}  // namespace

std::string_view to_string(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Backend b) noexcept {
  switch (b) {
    case Backend::scalar: return &kScalar;
    case Backend::avx2:
#if defined(ATVGARCH_HAVE_AVX2)
      if (cpu_has_avx2()) return &kAvx2;
#endif
      return nullptr;
    case Backend::neon:
#if defined(ATVGARCH_HAVE_NEON)
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

bool select(Backend b) noexcept {
  const KernelTable* t = table_for(b);
  if (!t) return false;
  current().store(t, std::memory_order_relaxed);
  return true;
}

}  // namespace atvgarch::kernels
