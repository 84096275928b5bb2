#include "doctest.h"
#include "support.hpp"

#include "nlpl/errors.hpp"
#include "nlpl/kernel.hpp"

#include <cmath>
#include <numbers>

using namespace nlpl;

namespace {

KernelSpec with_phi(PhiVariant phi, double s, double p = 2.0) {
  KernelSpec k;
  k.phi = std::move(phi);
  k.s = s;
  k.p = p;
  return k;
}

}  // namespace

TEST_CASE("phi_eval closed forms") {
  CHECK(phi_eval(power_kernel(0.5, 2.0), 4.0) == doctest::Approx(4.0).epsilon(1e-15));
  const auto lb = with_phi(LogBorderlinePhi{2.0, 0.5}, 0.5);
  CHECK(phi_eval(lb, std::exp(-2.0)) == doctest::Approx(0.25).epsilon(1e-14));
  for (const auto& k : testing::zoo()) CHECK(phi_eval(k, 0.0) == 0.0);
  CHECK_THROWS_AS(phi_eval(power_kernel(0.5, 2.0), -1.0), DomainError);

  const auto sum = with_phi(SumPhi{0.5, 0.75}, 0.5);
  CHECK(phi_eval(sum, 4.0) == doctest::Approx(6.0).epsilon(1e-14));
  const auto mn = with_phi(MinPhi{0.5, 0.75}, 0.5);
  CHECK(phi_eval(mn, 4.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(phi_eval(mn, 0.25) == doctest::Approx(0.25).epsilon(1e-14));
  const auto lp = with_phi(LogPerturbedPowerPhi{0.5, 2.0}, 0.5);
  CHECK(phi_eval(lp, 1.0) == doctest::Approx(std::pow(std::log(2.0), 2.0)).epsilon(1e-14));
  CHECK(phi_eval(lp, 1e-300) == doctest::Approx(1e-300 * std::pow(300 * std::log(10.0), 2.0)).epsilon(1e-10));
}

TEST_CASE("tabulated phi interpolates in log-log and rejects out-of-range queries") {
  TabulatedPhi tab{{0.01, 1.0, 100.0}, {0.001, 1.0, 10.0}};
  const auto k = with_phi(tab, 0.5);
  CHECK(phi_eval(k, 0.1) == doctest::Approx(std::pow(10.0, -1.5)).epsilon(1e-13));
  CHECK(phi_eval(k, 10.0) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-13));
  CHECK_THROWS_AS(phi_eval(k, 1e3), RangeError);
  CHECK_THROWS_AS(phi_eval(k, 1e-3), RangeError);
}

TEST_CASE("capital_phi matches the power closed form") {
  for (double s : {0.3, 0.5, 0.75, 0.9}) {
    for (double p : {1.5, 2.0, 3.0}) {
      const PhiTable table(power_kernel(s, p));
      const double a = (1.0 - s) * p;
      for (double t : log_grid(1e-3, 1e3, 61)) CHECK(table(t) == doctest::Approx(std::pow(t, a) / a).epsilon(1e-10));
    }
  }
  CHECK(capital_phi(PhiTable(power_kernel(0.5, 2.0)), 1.0) == doctest::Approx(1.0));
  CHECK(capital_phi(PhiTable(power_kernel(0.75, 2.0)), 2.0) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(capital_phi(PhiTable(power_kernel(0.5, 2.0)), 0.0) == 0.0);
  CHECK_THROWS_AS(PhiTable(power_kernel(0.5, 2.0))(-1.0), DomainError);
}

TEST_CASE("capital_phi of numeric variants against a Simpson oracle") {
  const auto lb = with_phi(LogBorderlinePhi{2.0, 0.5}, 0.5);
  const PhiTable table(lb);
  CHECK_FALSE(table.analytic());
  // Closed form: 1/2 from the logarithmic piece plus the linear continuation.
  CHECK(table(std::exp(-1.0)) == doctest::Approx(0.5 + 0.25 * (std::numbers::e - 1.0)).epsilon(1e-9));
  // By hand: phi(e^u) = u^-2 for u <= -2 and (e^2/4) e^u above, so
  // Phi(e^U) = -1/U below -2 and 1/2 + (e^2/4)(e^U - e^-2) above.
  auto by_hand = [](double t) {
    const double U = std::log(t);
    return U <= -2.0 ? -1.0 / U : 0.5 + 0.25 * std::exp(2.0) * (t - std::exp(-2.0));
  };
  for (double t : {1e-30, 1e-6, 1e-3, 0.05, 0.5, 3.0, 40.0, 1e7}) {
    CHECK(table(t) == doctest::Approx(by_hand(t)).epsilon(1e-10));
    // Simpson over the smooth stretch above the kink.
    if (t > std::exp(-2.0))
      CHECK(table(t) - table(std::exp(-2.0)) ==
            doctest::Approx(testing::phi_integral_oracle(lb, t, -2.0, 200000)).epsilon(1e-9));
  }
  const auto lp = with_phi(LogPerturbedPowerPhi{0.5, 1.0}, 0.5);
  const PhiTable tlp(lp);
  for (double t : {1e-4, 0.3, 7.0, 1e9}) CHECK(tlp(t) == doctest::Approx(testing::phi_integral_oracle(lp, t)).epsilon(1e-8));
}

TEST_CASE("capital_phi of sum, min and tabulated variants") {
  const auto sum = with_phi(SumPhi{0.5, 0.75}, 0.5);
  const auto mn = with_phi(MinPhi{0.5, 0.75}, 0.5);
  for (double t : {1e-3, 0.5, 1.0, 2.0, 50.0}) {
    CHECK(PhiTable(sum)(t) == doctest::Approx(testing::phi_integral_oracle(sum, t)).epsilon(1e-8));
    CHECK(PhiTable(mn)(t) == doctest::Approx(testing::phi_integral_oracle(mn, t)).epsilon(1e-8));
  }
  // A tabulated power is reproduced exactly, including beyond the samples.
  std::vector<double> t, v;
  for (int k = -6; k <= 6; ++k) t.push_back(std::pow(10.0, k)), v.push_back(std::pow(10.0, 0.8 * k));
  const PhiTable tab(with_phi(TabulatedPhi{t, v}, 0.6));
  for (double x : {1e-8, 1e-3, 0.7, 1.0, 123.0, 1e7}) CHECK(tab(x) == doctest::Approx(std::pow(x, 0.8) / 0.8).epsilon(1e-12));
}

TEST_CASE("PhiTable properties over the zoo") {
  for (const auto& k : testing::zoo()) {
    CAPTURE(describe(k.phi));
    const PhiTable table(k);
    const double a = (1.0 - k.s) * k.p;
    const auto grid = log_grid(1e-6, 1e6, 97);
    double prev = 0.0;
    for (double t : grid) {
      const double v = table(t);
      CHECK(v >= prev);
      prev = v;
      // Phi(t) >= phi(t) / (L (1-s) p).
      CHECK(v >= phi_eval(k, t) / (k.L * a) * (1.0 - 1e-9));
      for (double lambda : {1.0, 2.0, 10.0, 1e3}) {
        if (t * lambda > 1e6) continue;
        CHECK(table(lambda * t) <= k.L * std::pow(lambda, a) * v * (1.0 + 1e-9));
      }
    }
  }
}

TEST_CASE("check_dini") {
  const auto pw = check_dini(power_kernel(0.5, 2.0));
  CHECK(pw.convergent);
  CHECK(pw.value == doctest::Approx(1.0).epsilon(1e-10));

  const auto g2 = check_dini(with_phi(PureLogPhi{2.0}, 0.5), 1e-10, std::exp(-1.0));
  CHECK(g2.convergent);
  CHECK(g2.value == doctest::Approx(1.0).epsilon(1e-6));
  const auto g1 = check_dini(with_phi(PureLogPhi{1.0}, 0.5), 1e-10, std::exp(-1.0));
  CHECK_FALSE(g1.convergent);
  CHECK(std::isinf(g1.value));
  CHECK(g1.shell_sums.size() == 50);

  const auto lb = check_dini(with_phi(LogBorderlinePhi{2.0, 0.5}, 0.5));
  CHECK(lb.convergent);
  // Oracle: shell sums add up to the value on (2^-50, 1]; the rest is
  // int_{50 ln 2}^inf u^-2 du.
  double shells = 0.0;
  for (double sk : lb.shell_sums) shells += sk;
  CHECK(lb.value == doctest::Approx(shells + 1.0 / (50.0 * std::log(2.0))).epsilon(1e-6));

  for (const auto& k : testing::zoo()) CHECK(check_dini(k).convergent);
}

TEST_CASE("divergent kernels refuse a PhiTable") {
  CHECK_THROWS_AS(PhiTable(with_phi(PureLogPhi{1.0}, 0.5)), DivergenceError);
}

TEST_CASE("check_scaling_bounds") {
  const auto grid = log_grid(1e-6, 1e6, 241);
  auto pw = power_kernel(0.5, 2.0);
  pw.s_tilde = 0.6;
  auto sb = check_scaling_bounds(pw, grid);
  CHECK(sb.L_dec == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sb.L_inc == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sb.pass);

  const auto lb = with_phi(LogBorderlinePhi{2.0, 0.5}, 0.5);
  CHECK(check_scaling_bounds(lb, grid).L_dec == doctest::Approx(1.0).epsilon(1e-12));

  auto shifted = power_kernel(0.5, 2.0);
  shifted.s = 0.4;
  CHECK(check_scaling_bounds(shifted, grid).L_dec == doctest::Approx(1.0).epsilon(1e-12));

  // A declared s larger than the true order breaks the almost-decreasing bound.
  auto wrong = power_kernel(0.5, 2.0);
  wrong.s = 0.6;
  const auto bad = check_scaling_bounds(wrong, grid);
  CHECK_FALSE(bad.pass);
  CHECK(bad.L_dec == doctest::Approx(std::pow(1e12, 0.2)).epsilon(1e-9));

  for (const auto& k : testing::zoo()) {
    CAPTURE(describe(k.phi));
    CHECK(check_scaling_bounds(k, grid).pass);
  }
  CHECK_THROWS_AS(check_scaling_bounds(pw, log_grid(1e-6, 1e6, 20)), ParameterError);
  CHECK_THROWS_AS(check_scaling_bounds(pw, log_grid(1e-2, 1e2, 100)), ParameterError);
}

TEST_CASE("exterior_kernel_mass") {
  CHECK(exterior_kernel_mass(power_kernel(0.5, 2.0), 1.0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(exterior_kernel_mass(power_kernel(0.5, 2.0), 2.0) == doctest::Approx(1.0).epsilon(1e-9));
  const auto k2 = power_kernel(0.5, 2.0, 2);
  CHECK(exterior_kernel_mass(k2, 1.0) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-9));
  double prev = exterior_kernel_mass(power_kernel(0.3, 1.5), 1.0);
  for (double r : {10.0, 1e3, 1e6}) {
    const double m = exterior_kernel_mass(power_kernel(0.3, 1.5), r);
    CHECK(m < prev);
    prev = m;
  }
  // Closed form for a pure power: 2 r^{-sp} / (sp) in one dimension.
  CHECK(prev == doctest::Approx(2.0 * std::pow(1e6, -0.45) / 0.45).epsilon(1e-8));
  for (const auto& k : testing::zoo()) {
    for (double r : {1e-3, 0.1, 1.0, 5.0, 100.0}) {
      CAPTURE(describe(k.phi));
      CAPTURE(r);
      CHECK(exterior_kernel_mass(k, r) <= exterior_kernel_mass_bound(k, r) * (1.0 + 1e-9));
    }
  }
  CHECK_THROWS_AS(exterior_kernel_mass(power_kernel(0.5, 2.0), 0.0), DomainError);
}

TEST_CASE("sphere area and validation") {
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
  auto k = power_kernel(0.5, 2.0);
  k.p = 1.0;
  CHECK_THROWS_AS(k.validate(), ParameterError);
  k = power_kernel(0.5, 2.0);
  k.s_tilde = 0.4;
  CHECK_THROWS_AS(k.validate(), ParameterError);
  k = power_kernel(0.5, 2.0);
  k.L = 0.5;
  CHECK_THROWS_AS(k.validate(), ParameterError);
  k = power_kernel(0.5, 2.0);
  k.n = 3;
  CHECK_THROWS_AS(k.validate(), ParameterError);
}
