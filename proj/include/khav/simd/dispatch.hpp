#pragma once

namespace khav::simd {

enum class Isa {
  scalar,
  avx2,  // x86-64 AVX2 + FMA
  neon,  // aarch64 Advanced SIMD
};

// The instruction set the batch kernels will run with. Resolved once, on
// first call: the KHAV_SIMD environment variable ("scalar", "avx2", "neon")
// wins if it names a supported ISA, otherwise the best ISA the CPU supports
// is picked. Thread-safe.
Isa active_isa();

// Overrides the active ISA, e.g. to compare scalar and vector paths in
// tests. Throws domain_error if this host cannot execute the requested ISA.
void force_isa(Isa isa);

const char* isa_name(Isa isa);

}  // namespace khav::simd
