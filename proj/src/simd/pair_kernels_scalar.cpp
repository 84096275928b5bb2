#include "nlpl/simd/pair_kernels.hpp"

#include <cfloat>
#include <cmath>

namespace nlpl::simd {

namespace {

inline double psi(double t, double p, double eps, double eps_p) {
  const double q = t * t + eps * eps;
  if (q < DBL_MIN) return 0.0;
  return std::pow(q, 0.5 * p) - eps_p;
}

inline double sigma(double t, double p, double eps) {
  const double q = t * t + eps * eps;
  if (q < DBL_MIN) return 0.0;
  return std::pow(q, 0.5 * (p - 2.0)) * t;
}

double row_energy(double ui, const double* u, const double* c, const double* m, std::size_t count, double p,
                  double eps) {
  double acc = 0.0;
  if (p == 2.0) {
    for (std::size_t j = 0; j < count; ++j) {
      const double t = ui - u[j];
      acc += m[j] * c[j] * (t * t);
    }
    return acc;
  }
  const double eps_p = eps > 0.0 ? std::pow(eps, p) : 0.0;
  for (std::size_t j = 0; j < count; ++j) acc += m[j] * c[j] * psi(ui - u[j], p, eps, eps_p);
  return acc;
}

double row_gradient(double ui, const double* u, const double* c, std::size_t count, double p, double eps) {
  double acc = 0.0;
  if (p == 2.0) {
    for (std::size_t j = 0; j < count; ++j) acc += c[j] * (ui - u[j]);
    return acc;
  }
  for (std::size_t j = 0; j < count; ++j) acc += c[j] * sigma(ui - u[j], p, eps);
  return acc;
}

}  // namespace

const PairKernels& scalar_kernels() {
  static const PairKernels k{&row_energy, &row_gradient};
  return k;
}

}  // namespace nlpl::simd
