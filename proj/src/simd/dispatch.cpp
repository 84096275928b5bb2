#include "nlpl/errors.hpp"
#include "nlpl/simd/pair_kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace nlpl::simd {

namespace {

bool cpu_has_avx2() {
#if defined(NLPL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  Backend b = cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
  if (const char* env = std::getenv("NLPL_SIMD")) {
    const std::string v(env);
    if (v == "scalar") b = Backend::Scalar;
    else if (v == "avx2" && cpu_has_avx2()) b = Backend::Avx2;
  }
  return b;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

bool available(Backend b) {
  if (b == Backend::Scalar) return true;
  return cpu_has_avx2();
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!available(b)) throw ParameterError("SIMD backend " + std::string(name(b)) + " is not available");
  current().store(b, std::memory_order_relaxed);
}

const PairKernels& kernels_for(Backend b) {
#if defined(NLPL_HAVE_AVX2)
  if (b == Backend::Avx2) {
    if (!available(b)) throw ParameterError("SIMD backend avx2 is not available");
    return avx2_kernels();
  }
#endif
  if (b != Backend::Scalar) throw ParameterError("SIMD backend " + std::string(name(b)) + " is not built");
  return scalar_kernels();
}

const PairKernels& kernels() { return kernels_for(active_backend()); }

std::string_view name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

}  // namespace nlpl::simd
