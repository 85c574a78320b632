#include <atomic>
#include <cstdlib>
#include <string_view>

#include "afd/simd.hpp"

namespace afd::simd {

#if defined(AFD_HAVE_AVX2)
const Kernels& avx2_table();
#endif

namespace {

std::atomic<const Kernels*>& slot() {
  static std::atomic<const Kernels*> current{nullptr};
  return current;
}

const Kernels* pick_default() {
  const char* env = std::getenv("AFD_SIMD");
  if (env && std::string_view(env) == "scalar") return &scalar_kernels();
  if (const Kernels* k = avx2_kernels()) return k;
  return &scalar_kernels();
}

}  // namespace

const Kernels* avx2_kernels() {
#if defined(AFD_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& active() {
  const Kernels* k = slot().load(std::memory_order_acquire);
  if (!k) {
    k = pick_default();
    slot().store(k, std::memory_order_release);
  }
  return *k;
}

bool select(std::string_view name) {
  if (name == "scalar") {
    slot().store(&scalar_kernels(), std::memory_order_release);
    return true;
  }
  if (name == "avx2") {
    if (const Kernels* k = avx2_kernels()) {
      slot().store(k, std::memory_order_release);
      return true;
    }
  }
  return false;
}

}  // namespace afd::simd
