#pragma once

#include <functional>

namespace nlpl::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // Kronrod error estimate
  double l1 = 0.0;     // integral of |f|, for relative checks
};

using Integrand = std::function<double(double)>;

// Adaptive 31-point Gauss-Kronrod on a finite interval.
Result integrate(const Integrand& f, double a, double b, double rel_tol = 1e-13,
                 unsigned max_depth = 40);

// Integral over [a, inf) through the map u = a + (1 - v) / v, v in (0, 1].
Result integrate_to_infinity(const Integrand& f, double a, double rel_tol = 1e-13,
                             unsigned max_depth = 40);

// Integral over (-inf, b], mirrored version of the above.
Result integrate_from_minus_infinity(const Integrand& f, double b, double rel_tol = 1e-13,
                                     unsigned max_depth = 40);

// Gauss-Legendre nodes and weights on [-1, 1]; used by test oracles and the
// stability module for smooth integrands.
void gauss_legendre(int count, double* nodes, double* weights);

}  // namespace nlpl::quad
