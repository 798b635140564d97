#include "khav/simd/dispatch.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <mutex>

#include "khav/errors.hpp"

namespace khav::simd {

namespace {

bool host_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detect() {
  if (host_supports(Isa::avx2)) return Isa::avx2;
  if (host_supports(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

Isa initial_isa() {
  const char* env = std::getenv("KHAV_SIMD");
  if (env != nullptr) {
    Isa wanted;
    bool recognized = true;
    if (std::strcmp(env, "scalar") == 0) {
      wanted = Isa::scalar;
    } else if (std::strcmp(env, "avx2") == 0) {
      wanted = Isa::avx2;
    } else if (std::strcmp(env, "neon") == 0) {
      wanted = Isa::neon;
    } else {
      recognized = false;
      wanted = Isa::scalar;
    }
    if (recognized && host_supports(wanted)) return wanted;
    // Unrecognized or unsupported request: fall through to auto-detection.
  }
  return detect();
}

std::atomic<Isa>& current() {
  static std::once_flag once;
  static std::atomic<Isa> isa{Isa::scalar};
  std::call_once(once, [] { isa.store(initial_isa()); });
  return isa;
}

}  // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!host_supports(isa)) {
    throw domain_error(std::string("force_isa: ") + isa_name(isa) +
                       " is not available on this host");
  }
  current().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

}  // namespace khav::simd
