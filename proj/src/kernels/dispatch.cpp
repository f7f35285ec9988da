#include <atomic>
#include <cstdlib>
#include <cstring>

#include "calderlab/kernels.hpp"

namespace calderlab::kernels {

#ifndef CALDERLAB_HAVE_AVX2_TABLE
const KernelTable* avx2_table() { return nullptr; }
#endif

namespace {

// -1: automatic, otherwise an Isa value.
std::atomic<int> forced{-1};

bool env_forces_scalar() {
  const char* v = std::getenv("CALDERLAB_FORCE_SCALAR");
  return v && *v && std::strcmp(v, "0") != 0;
}

}  // namespace

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

void force_isa(std::optional<Isa> isa) { forced.store(isa ? static_cast<int>(*isa) : -1); }

const KernelTable& active() {
  const int f = forced.load();
  if (f == static_cast<int>(Isa::scalar)) return scalar_table();
  if (f == static_cast<int>(Isa::avx2)) {
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
  }
  static const bool scalar_only = env_forces_scalar();
  if (!scalar_only)
    if (const KernelTable* t = avx2_table()) return *t;
  return scalar_table();
}

}  // namespace calderlab::kernels
