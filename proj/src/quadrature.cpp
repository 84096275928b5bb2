#include "nlpl/quadrature.hpp"

#include <algorithm>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

namespace nlpl::quad {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

Result integrate(const Integrand& f, double a, double b, double rel_tol, unsigned max_depth) {
  Result r;
  if (a == b) return r;
  // Intervals at rounding scale defeat the error estimate and make the
  // bisection run to full depth; the midpoint rule is exact enough there.
  if (std::abs(b - a) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) {
    r.value = f(0.5 * (a + b)) * (b - a);
    r.l1 = std::abs(r.value);
    return r;
  }
  r.value = Kronrod::integrate(f, a, b, max_depth, rel_tol, &r.error, &r.l1);
  return r;
}

Result integrate_to_infinity(const Integrand& f, double a, double rel_tol, unsigned max_depth) {
  auto mapped = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double u = a + (1.0 - v) / v;
    const double val = f(u) / (v * v);
    return std::isfinite(val) ? val : 0.0;
  };
  return integrate(mapped, 0.0, 1.0, rel_tol, max_depth);
}

Result integrate_from_minus_infinity(const Integrand& f, double b, double rel_tol,
                                     unsigned max_depth) {
  auto mirrored = [&](double u) { return f(-u); };
  return integrate_to_infinity(mirrored, -b, rel_tol, max_depth);
}

void gauss_legendre(int count, double* nodes, double* weights) {
  // Newton iteration on the Legendre recurrence, symmetric pairs.
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= count; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = count * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[count - 1 - i] = x;
    weights[i] = weights[count - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace nlpl::quad
