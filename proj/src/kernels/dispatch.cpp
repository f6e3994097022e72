#include <cstdlib>
#include <string_view>

#include "memtaxis/kernels/kernels.hpp"

namespace memtaxis::kernels {

#ifdef MEMTAXIS_HAVE_AVX2
const KernelTable* avx2_table_impl();
#endif

const KernelTable* avx2_table() {
#ifdef MEMTAXIS_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

bool isa_available(Isa isa) { return isa == Isa::Scalar || avx2_table() != nullptr; }

const KernelTable& table_for(Isa isa) {
  if (isa == Isa::Avx2 && avx2_table()) return *avx2_table();
  return scalar_table();
}

const KernelTable& active_table() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("MEMTAXIS_SIMD");
    if (env && std::string_view(env) == "scalar") return scalar_table();
    return table_for(Isa::Avx2);
  }();
  return chosen;
}

std::string to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace memtaxis::kernels
