#pragma once

// Kernel-order functions phi, their logarithmic primitive Phi, and sampled
// checks of the structural conditions a kernel phi(|x-y|)/|x-y|^{n+p} has to
// satisfy (Dini integrability and the two almost-monotone scaling bounds).

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace nlpl {

// phi(t) = t^{(1-s)p}; the fractional Sobolev case.
struct PowerPhi {
  double s;
};

// phi(t) = t^{(1-s)p} + t^{(1-s2)p}, s < s2.
struct SumPhi {
  double s;
  double s2;
};

// phi(t) = min{t^{(1-s)p}, t^{(1-s2)p}}, s < s2.
struct MinPhi {
  double s;
  double s2;
};

// phi(t) = t^{(1-s)p} [log(1 + 1/t)]^gamma, gamma > 0.
struct LogPerturbedPowerPhi {
  double s;
  double gamma;
};

// phi(t) = max{ell(t), t^{(1-s)p}} with ell(t) = (-log t)^{-gamma} for
// t <= t_c = exp(-gamma/a), a = (1-s)p, continued as ell(t_c) (t/t_c)^a beyond
// t_c. The continuation keeps phi(t)/t^a nonincreasing on (0, inf). gamma > 1.
struct LogBorderlinePhi {
  double gamma;
  double s;
};

// Pure logarithmic probe (-log t)^{-gamma} on (0, 1/e], constant 1 beyond.
// Not a regular kernel; used to exercise the Dini classifier.
struct PureLogPhi {
  double gamma;
};

// Samples of phi, interpolated piecewise linearly in log-log coordinates.
struct TabulatedPhi {
  std::vector<double> t;
  std::vector<double> phi;
};

using PhiVariant = std::variant<PowerPhi, SumPhi, MinPhi, LogPerturbedPowerPhi,
                                LogBorderlinePhi, PureLogPhi, TabulatedPhi>;

struct KernelSpec {
  PhiVariant phi = PowerPhi{0.5};
  double p = 2.0;
  double s = 0.5;        // lower scaling index (almost-decreasing exponent)
  double s_tilde = 1.5;  // upper scaling index (almost-increasing exponent)
  double L = 1.0;
  double Lambda = 1.0;
  int n = 1;

  // Throws ParameterError when a field is outside its admissible range.
  void validate() const;
};

// Power kernel with matching declared indices.
KernelSpec power_kernel(double s, double p, int n = 1, double s_tilde = 1.5);

std::string describe(const PhiVariant& phi);

// Surface area of the unit sphere in R^n: 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

double phi_eval(const KernelSpec& spec, double t);

// As phi_eval, but a tabulated phi is continued beyond its samples by the
// power laws of the first and last segments instead of raising RangeError.
// Used where a lattice needs kernel values at every node distance.
double phi_eval_extended(const KernelSpec& spec, double t);

// Caches Phi(t) = int_0^t phi(tau) dtau / tau on a log-spaced grid. Closed
// forms are used when available (power, sum, min and tabulated variants).
class PhiTable {
 public:
  struct Options {
    double t_lo = 1e-8;
    double t_hi = 1e8;
    int per_decade = 8;
    double rel_tol = 1e-13;
  };

  explicit PhiTable(KernelSpec spec);
  PhiTable(KernelSpec spec, Options opts);

  double operator()(double t) const;
  const KernelSpec& spec() const { return spec_; }
  bool analytic() const { return analytic_; }
  std::span<const double> nodes() const { return t_; }
  std::span<const double> values() const { return values_; }

 private:
  double numeric(double t) const;

  KernelSpec spec_;
  Options opts_;
  bool analytic_ = false;
  std::vector<double> t_;
  std::vector<double> values_;
};

double capital_phi(const PhiTable& table, double t);

struct DiniResult {
  bool convergent = false;
  double value = 0.0;               // int_0^upper phi(t) dt/t, +inf when divergent
  double decay_exponent = 0.0;      // fitted q in S_k ~ k^{-q}; +inf for fast decay
  std::vector<double> shell_sums;   // S_k over (2^{-k-1} upper, 2^{-k} upper]
};

// Dyadic-shell classifier: partial sums over 50 shells are tested for the
// Cauchy property through the decay of the shell contributions.
DiniResult check_dini(const KernelSpec& spec, double tolerance = 1e-10, double upper = 1.0);

struct ScalingBounds {
  double L_dec = 1.0;
  double L_inc = 1.0;
  bool pass = false;
};

ScalingBounds check_scaling_bounds(const KernelSpec& spec, std::span<const double> t_grid,
                                   double tolerance = 1e-9);

std::vector<double> log_grid(double lo, double hi, std::size_t count);

// omega_n int_r^inf phi(rho) rho^{-p-1} drho, i.e. the kernel mass outside B_r.
double exterior_kernel_mass(const KernelSpec& spec, double r);

// L omega_n / (s p) * phi(r) / r^p.
double exterior_kernel_mass_bound(const KernelSpec& spec, double r);

}  // namespace nlpl
