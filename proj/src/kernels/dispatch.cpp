#include <atomic>
#include <cstdlib>
#include <string_view>

#include "patternset/error.hpp"
#include "patternset/kernels.hpp"

namespace patternset::kernels {
namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("PATTERNSET_SIMD")) {
    const std::string_view name(env);
    if (name == "scalar") return Backend::scalar;
    if (name == "avx2" && backend_available(Backend::avx2)) return Backend::avx2;
    if (name == "neon" && backend_available(Backend::neon)) return Backend::neon;
  }
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

}  // namespace

const char* to_string(Backend backend) {
  switch (backend) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::scalar: return true;
    case Backend::avx2: {
#if defined(__x86_64__) || defined(_M_X64)
      static const bool has = cpu_has_avx2();
      return has;
#else
      return false;
#endif
    }
    case Backend::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Backend backend) {
  if (!backend_available(backend)) {
    throw Error(ErrorKind::invalid_input, std::string("SIMD backend not available: ") + to_string(backend));
  }
  switch (backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2: return avx2_table();
#endif
#if defined(__aarch64__)
    case Backend::neon: return neon_table();
#endif
    default: return scalar_table();
  }
}

const KernelTable& active() {
  const KernelTable* table = g_table.load(std::memory_order_acquire);
  if (table == nullptr) {
    reset_backend();
    table = g_table.load(std::memory_order_acquire);
  }
  return *table;
}

Backend active_backend() {
  active();
  return g_backend.load(std::memory_order_acquire);
}

void force_backend(Backend backend) {
  const KernelTable& table = table_for(backend);
  g_backend.store(backend, std::memory_order_release);
  g_table.store(&table, std::memory_order_release);
}

void reset_backend() { force_backend(detect()); }

}  // namespace patternset::kernels
