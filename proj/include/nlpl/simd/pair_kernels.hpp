#pragma once

// Inner loops of the pair sums. For one node value ui against a contiguous
// row of partner values u[0..count):
//
//   row_energy   = sum_j m[j] c[j] psi(ui - u[j])
//   row_gradient = sum_j c[j] sigma(ui - u[j])
//
// with psi(t) = (t^2 + eps^2)^{p/2} - eps^p and sigma(t) = (t^2 + eps^2)^{(p-2)/2} t,
// so that psi' = p sigma. With eps = 0 these are |t|^p and |t|^{p-2} t.
// Terms whose squared argument is below the smallest normal double are zero.
//
// The scalar versions are the reference; vector versions are selected at
// runtime and are tested against them.

#include <cstddef>
#include <string_view>

namespace nlpl::simd {

enum class Backend { Scalar, Avx2 };

struct PairKernels {
  double (*row_energy)(double ui, const double* u, const double* c, const double* m, std::size_t count,
                       double p, double eps);
  double (*row_gradient)(double ui, const double* u, const double* c, std::size_t count, double p,
                         double eps);
};

const PairKernels& scalar_kernels();
#if defined(NLPL_HAVE_AVX2)
const PairKernels& avx2_kernels();
#endif

bool available(Backend b);

// Active backend. Defaults to the widest supported one; the environment
// variable NLPL_SIMD=scalar|avx2 overrides the default at first use.
Backend active_backend();
void set_backend(Backend b);  // throws ParameterError when unavailable
const PairKernels& kernels();
const PairKernels& kernels_for(Backend b);

std::string_view name(Backend b);

}  // namespace nlpl::simd
