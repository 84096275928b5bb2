#pragma once

// The s -> 1 limit. Normalized energies (1/Phi_s(r)) [f]^p approach
// K(n,p) int |Df|^p, and nonlocal solutions approach the local p-harmonic one.

#include "nlpl/domain.hpp"
#include "nlpl/kernel.hpp"
#include "nlpl/solver.hpp"
#include "nlpl/tail.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace nlpl {

using KernelFamily = std::function<KernelSpec(double s)>;

// s -> Power(s) at the given p and n.
KernelFamily power_family(double p, int n = 1);

// int_{S^{n-1}} |sigma . e|^p dsigma = 2 pi^{(n-1)/2} Gamma((p+1)/2) / Gamma((n+p)/2).
double bbm_constant(int n, double p);

struct BbmRow {
  double s = 0.0;
  double normalized = 0.0;  // near + far + diag
  double near = 0.0;        // lattice pairs with |x - y| < r
  double far = 0.0;         // lattice pairs with |x - y| >= r, plus pairs leaving the lattice
  double far_bound = 0.0;   // 2^p ||f||_p^p times the exterior kernel mass at r, normalized
  double diag = 0.0;        // same-cell pairs, K |Df|^p Phi(rho_0) per cell
};

struct BbmCurve {
  std::vector<BbmRow> rows;
  double r = 0.0;
  double limit = 0.0;      // a in the least-squares fit a + b (1 - s)
  double slope = 0.0;      // b
  int fit_points = 0;      // rows used by the fit (the ones with the largest s)
  double local_energy = 0.0;  // K int |D_h f|^p, centered differences
};

struct BbmOptions {
  // Fit only the fit_last rows with the largest s (0: all of them). The
  // curve is far from straight in 1 - s across [0.5, 0.9], so the default
  // keeps the fit near s = 1.
  int fit_last = 3;
};

// Every entry is (1/Phi_s(r)) times the double integral of
// |f(x) - f(y)|^p phi_s(|x-y|) / |x-y|^{n+p} over R^n x R^n, with f taken as
// 0 off the lattice. The lattice sum misses the pairs inside one cell; they
// are restored by the first-order term K |Df|^p Phi(rho_0) h^n, rho_0 the
// radius of a ball of cell volume. Without it the whole energy drains into
// the diagonal as s -> 1.
BbmCurve bbm_energy_curve(const GridFunction& f, const KernelFamily& family, double r,
                          const std::vector<double>& s_list, const BbmOptions& opts = {});

// Same data as the curve, without the per-s work: the offset sums
// S(o) = sum_i |f_i - f_{i+o}|^p, which do not depend on s.
struct OffsetSums {
  std::vector<long> dx, dy;
  std::vector<double> sum;
};
OffsetSums offset_sums(const GridFunction& f, double p);

struct LocalLimitRow {
  double s = 0.0;
  double distance = 0.0;  // (h sum_i |u_i - l(x_i)|^p)^{1/p} over interior nodes
  double tail = 0.0;      // Tail(g_+; center, radius)
  bool converged = false;
  int iterations = 0;
  double grad_norm = 0.0;
};

struct LocalLimitOptions {
  SolveOptions solve;
  std::optional<FarField> far;  // for the tail of g_+; unset: boundary layer constant
};

// 1D only. For each s, solves the Dirichlet problem for Power(s) on the
// domain with exterior data g and compares with l, the affine interpolant of
// g at the two ends of Omega (the local p-harmonic function in 1D).
std::vector<LocalLimitRow> local_limit_solution_study(const PointFunction& g, const std::vector<double>& s_list,
                                                      double p, const DomainPtr& domain,
                                                      const LocalLimitOptions& opts = {});

}  // namespace nlpl
