#pragma once

// Shared helpers for the unit tests: seeded generators and quadrature
// oracles that do not go through the library's own quadrature.

#include "nlpl/kernel.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }

  // Random smooth function: a few sine modes with random phases.
  std::function<double(double, double)> smooth_function(int modes = 3) {
    std::vector<double> amp, freq, phase, fy;
    for (int k = 0; k < modes; ++k) {
      amp.push_back(uniform(-1.0, 1.0));
      freq.push_back(uniform(0.3, 2.0));
      phase.push_back(uniform(0.0, 6.283185307179586));
      fy.push_back(uniform(-1.0, 1.0));
    }
    const double c = uniform(-1.0, 1.0);
    return [=](double x, double y) {
      double v = c;
      for (std::size_t k = 0; k < amp.size(); ++k) v += amp[k] * std::sin(freq[k] * (x + fy[k] * y) + phase[k]);
      return v;
    };
  }

 private:
  std::mt19937_64 rng_;
};

// Composite Simpson rule with m (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int k = 1; k < m; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

// int_0^t phi(tau) dtau / tau by Simpson in u = log tau, cut at u0.
inline double phi_integral_oracle(const nlpl::KernelSpec& spec, double t, double u0 = -200.0, int m = 400000) {
  return simpson([&](double u) { return nlpl::phi_eval(spec, std::exp(u)); }, u0, std::log(t), m);
}

inline std::vector<nlpl::KernelSpec> zoo(double p = 2.0) {
  using namespace nlpl;
  std::vector<KernelSpec> out;
  auto add = [&](PhiVariant phi, double s) {
    KernelSpec k;
    k.phi = std::move(phi);
    k.p = p;
    k.s = s;
    k.s_tilde = 1.5;
    out.push_back(k);
  };
  add(PowerPhi{0.5}, 0.5);
  add(PowerPhi{0.8}, 0.8);
  add(SumPhi{0.5, 0.7}, 0.5);
  add(MinPhi{0.5, 0.7}, 0.5);
  add(LogPerturbedPowerPhi{0.5, 1.0}, 0.5);
  add(LogBorderlinePhi{2.0, 0.5}, 0.5);
  std::vector<double> t, v;
  for (int k = -40; k <= 40; ++k) {
    const double x = std::pow(10.0, k / 5.0);
    t.push_back(x);
    v.push_back(std::pow(x, (1.0 - 0.6) * p) + 0.5 * std::pow(x, (1.0 - 0.9) * p));
  }
  add(TabulatedPhi{t, v}, 0.6);
  return out;
}

// 1D bump (1 - x^2)^3 on (-1, 1) and its derivative.
inline double bump(double x) { return std::abs(x) < 1.0 ? std::pow(1.0 - x * x, 3) : 0.0; }
inline double bump_prime(double x) { return std::abs(x) < 1.0 ? -6.0 * x * std::pow(1.0 - x * x, 2) : 0.0; }

// Continuum oracle for the 1D Power family at p = 2, r given:
//   (1-s) p r^{-(1-s)p} * 2 int_0^inf z^{-1-sp} D(z) dz,  D(z) = int (f(x+z) - f(x))^2 dx.
// With a = (1-s)p and u = z^a the weight becomes du / (a z^p), so the
// normalized value is 2 r^{-a} int_0^inf D(z)/z^2 du. Beyond z = 2 the bump
// and its shift are disjoint and D = 2 ||f||^2.
inline double bbm_oracle(double s, double r) {
  const double p = 2.0, a = (1.0 - s) * p;
  const double grad2 = simpson([](double x) { return bump_prime(x) * bump_prime(x); }, -1, 1, 4000);
  const double norm2 = simpson([](double x) { return std::pow(bump(x), 2); }, -1, 1, 4000);
  auto G = [&](double z) {
    if (z < 1e-4) return grad2;  // D(z)/z^2 = int f'^2 + O(z^2)
    const double D = simpson([&](double x) { return std::pow(bump(x + z) - bump(x), 2); }, -1 - z, 1, 2000);
    return D / (z * z);
  };
  const double u_cut = std::pow(2.0, a);
  const double inner = simpson([&](double u) { return G(std::pow(u, 1.0 / a)); }, 0.0, u_cut, 8000);
  // int_{u_cut}^inf 2||f||^2 u^{-p/a} du
  const double outer = 2.0 * norm2 * std::pow(u_cut, 1.0 - p / a) / (p / a - 1.0);
  return 2.0 * std::pow(r, -a) * (inner + outer);
}

}  // namespace testing
