#include "nlpl/kernel.hpp"

#include "nlpl/errors.hpp"
#include "nlpl/format.hpp"
#include "nlpl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nlpl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double exponent(double s, double p) { return (1.0 - s) * p; }

// Log-log slope of segment k of a table.
double table_slope(const TabulatedPhi& tab, std::size_t k) {
  return std::log(tab.phi[k + 1] / tab.phi[k]) / std::log(tab.t[k + 1] / tab.t[k]);
}

// Tabulated phi with power-law continuation outside the sample range, used
// only where an integral over (0, inf) is required.
double tabulated_extended(const TabulatedPhi& tab, double u) {
  const std::size_t m = tab.t.size();
  const double t = std::exp(u);
  if (t <= tab.t.front()) return tab.phi.front() * std::exp(table_slope(tab, 0) * (u - std::log(tab.t.front())));
  if (t >= tab.t.back())
    return tab.phi.back() * std::exp(table_slope(tab, m - 2) * (u - std::log(tab.t.back())));
  const auto it = std::upper_bound(tab.t.begin(), tab.t.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - tab.t.begin()) - 1;
  const double w = (u - std::log(tab.t[k])) / std::log(tab.t[k + 1] / tab.t[k]);
  return std::exp((1.0 - w) * std::log(tab.phi[k]) + w * std::log(tab.phi[k + 1]));
}

// phi(e^u). Evaluating in the log variable keeps the logarithmic variants
// accurate for arguments far below the double range of t.
double phi_at_log(const KernelSpec& spec, double u) {
  const double p = spec.p;
  return std::visit(
      overloaded{
          [&](const PowerPhi& k) { return std::exp(exponent(k.s, p) * u); },
          [&](const SumPhi& k) {
            return std::exp(exponent(k.s, p) * u) + std::exp(exponent(k.s2, p) * u);
          },
          [&](const MinPhi& k) {
            return std::min(std::exp(exponent(k.s, p) * u), std::exp(exponent(k.s2, p) * u));
          },
          [&](const LogPerturbedPowerPhi& k) {
            // log(1 + 1/t) = log1p(e^{-u}); for very negative u use -u + log1p(e^u).
            const double lg = u < -30.0 ? -u + std::log1p(std::exp(u)) : std::log1p(std::exp(-u));
            return std::exp(exponent(k.s, p) * u) * std::pow(lg, k.gamma);
          },
          [&](const LogBorderlinePhi& k) {
            const double a = exponent(k.s, p);
            const double uc = -k.gamma / a;
            const double ell = u <= uc ? std::pow(-u, -k.gamma)
                                       : std::pow(k.gamma / a, -k.gamma) * std::exp(a * (u - uc));
            return std::max(ell, std::exp(a * u));
          },
          [&](const PureLogPhi& k) { return u <= -1.0 ? std::pow(-u, -k.gamma) : 1.0; },
          [&](const TabulatedPhi& k) { return tabulated_extended(k, u); },
      },
      spec.phi);
}

double log_phi(const KernelSpec& spec, double t) { return std::log(phi_eval(spec, t)); }

// Points in u = log t where phi has a kink; adaptive quadrature is split
// there instead of letting the bisection chase the corner.
std::vector<double> log_breakpoints(const KernelSpec& spec) {
  const double p = spec.p;
  return std::visit(overloaded{
                        [](const MinPhi&) { return std::vector<double>{0.0}; },
                        [&](const LogBorderlinePhi& k) { return std::vector<double>{-k.gamma / exponent(k.s, p)}; },
                        [](const PureLogPhi&) { return std::vector<double>{-1.0}; },
                        [](const TabulatedPhi& k) {
                          std::vector<double> u;
                          for (double t : k.t) u.push_back(std::log(t));
                          return u;
                        },
                        [](const auto&) { return std::vector<double>{}; },
                    },
                    spec.phi);
}

// int_a^b g(u) du with a possibly -inf, split at the kinks of phi.
quad::Result log_integral(const KernelSpec& spec, double a, double b, const quad::Integrand& g, double tol) {
  constexpr unsigned kDepth = 30;
  quad::Result total;
  if (!(b > a)) return total;
  auto add = [&](const quad::Result& r) {
    total.value += r.value;
    total.error += r.error;
    total.l1 += r.l1;
  };
  double lo = a;
  for (double c : log_breakpoints(spec)) {
    if (!(c > lo) || !(c < b)) continue;
    add(std::isinf(lo) ? quad::integrate_from_minus_infinity(g, c, tol, kDepth) : quad::integrate(g, lo, c, tol, kDepth));
    lo = c;
  }
  add(std::isinf(lo) ? quad::integrate_from_minus_infinity(g, b, tol, kDepth) : quad::integrate(g, lo, b, tol, kDepth));
  return total;
}

}  // namespace

void KernelSpec::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ParameterError("invalid kernel spec: " + what);
  };
  require(std::isfinite(p) && p > 1.0, "p must be > 1");
  require(s > 0.0 && s < 1.0, "s must lie in (0,1)");
  require(std::isfinite(s_tilde) && s_tilde > s, "s_tilde must exceed s");
  require(L >= 1.0 && std::isfinite(L), "L must be >= 1");
  require(Lambda >= 1.0 && std::isfinite(Lambda), "Lambda must be >= 1");
  require(n == 1 || n == 2, "dimension must be 1 or 2");
  std::visit(overloaded{
                 [&](const PowerPhi& k) { require(k.s > 0.0 && k.s < 1.0, "power order in (0,1)"); },
                 [&](const SumPhi& k) { require(k.s > 0.0 && k.s < k.s2, "sum orders 0 < s < s2"); },
                 [&](const MinPhi& k) { require(k.s > 0.0 && k.s < k.s2, "min orders 0 < s < s2"); },
                 [&](const LogPerturbedPowerPhi& k) {
                   require(k.s > 0.0 && k.s < 1.0 && k.gamma > 0.0, "log-perturbed s in (0,1), gamma > 0");
                 },
                 [&](const LogBorderlinePhi& k) {
                   require(k.s > 0.0 && k.s < 1.0 && k.gamma > 1.0, "log-borderline s in (0,1), gamma > 1");
                 },
                 [&](const PureLogPhi& k) { require(k.gamma > 0.0, "pure-log gamma > 0"); },
                 [&](const TabulatedPhi& k) {
                   require(k.t.size() >= 2 && k.t.size() == k.phi.size(), "table needs >= 2 samples");
                   for (std::size_t i = 0; i < k.t.size(); ++i) {
                     require(std::isfinite(k.t[i]) && k.t[i] > 0.0, "table abscissae positive");
                     require(std::isfinite(k.phi[i]) && k.phi[i] > 0.0, "table values positive");
                     if (i > 0) require(k.t[i] > k.t[i - 1], "table abscissae increasing");
                   }
                 },
             },
             phi);
}

KernelSpec power_kernel(double s, double p, int n, double s_tilde) {
  KernelSpec spec;
  spec.phi = PowerPhi{s};
  spec.p = p;
  spec.s = s;
  spec.s_tilde = s_tilde;
  spec.n = n;
  return spec;
}

std::string describe(const PhiVariant& phi) {
  return std::visit(
      overloaded{
          [](const PowerPhi& k) { return "power(s=" + num(k.s) + ")"; },
          [](const SumPhi& k) { return "sum(s=" + num(k.s) + ",s2=" + num(k.s2) + ")"; },
          [](const MinPhi& k) { return "min(s=" + num(k.s) + ",s2=" + num(k.s2) + ")"; },
          [](const LogPerturbedPowerPhi& k) {
            return "log_perturbed_power(s=" + num(k.s) + ",gamma=" + num(k.gamma) + ")";
          },
          [](const LogBorderlinePhi& k) {
            return "log_borderline(gamma=" + num(k.gamma) + ",s=" + num(k.s) + ")";
          },
          [](const PureLogPhi& k) { return "pure_log(gamma=" + num(k.gamma) + ")"; },
          [](const TabulatedPhi& k) { return "tabulated(" + std::to_string(k.t.size()) + ")"; },
      },
      phi);
}

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double phi_eval(const KernelSpec& spec, double t) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("phi_eval: t must be finite and >= 0");
  if (t == 0.0) return 0.0;
  if (const auto* tab = std::get_if<TabulatedPhi>(&spec.phi)) {
    if (t < tab->t.front() || t > tab->t.back())
      throw RangeError("phi_eval: t=" + num(t) + " outside tabulated range");
  }
  return phi_at_log(spec, std::log(t));
}

double phi_eval_extended(const KernelSpec& spec, double t) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("phi_eval: t must be finite and >= 0");
  if (t == 0.0) return 0.0;
  return phi_at_log(spec, std::log(t));
}

// ---------------------------------------------------------------------------
// Phi

namespace {

// Closed form of Phi when one exists; NaN otherwise.
double analytic_phi(const KernelSpec& spec, double t) {
  const double p = spec.p;
  const double lt = std::log(t);
  return std::visit(
      overloaded{
          [&](const PowerPhi& k) {
            const double a = exponent(k.s, p);
            return std::exp(a * lt) / a;
          },
          [&](const SumPhi& k) {
            const double a = exponent(k.s, p), b = exponent(k.s2, p);
            return std::exp(a * lt) / a + std::exp(b * lt) / b;
          },
          [&](const MinPhi& k) {
            const double a = exponent(k.s, p), b = exponent(k.s2, p);
            if (t <= 1.0) return std::exp(a * lt) / a;
            return 1.0 / a + (b != 0.0 ? std::expm1(b * lt) / b : lt);
          },
          [&](const TabulatedPhi& k) {
            const std::size_t m = k.t.size();
            const double head_slope = table_slope(k, 0);
            if (t <= k.t.front()) return tabulated_extended(k, lt) / head_slope;
            double acc = k.phi.front() / head_slope;
            for (std::size_t i = 0; i < m; ++i) {
              const bool last = i + 1 == m;
              const double slope = last ? table_slope(k, m - 2) : table_slope(k, i);
              const double hi = last ? t : std::min(t, k.t[i + 1]);
              const double ratio = std::log(hi / k.t[i]);
              acc += slope != 0.0 ? k.phi[i] * std::expm1(slope * ratio) / slope : k.phi[i] * ratio;
              if (last || t <= k.t[i + 1]) break;
            }
            return acc;
          },
          [](const auto&) { return std::numeric_limits<double>::quiet_NaN(); },
      },
      spec.phi);
}

bool has_closed_form(const KernelSpec& spec) {
  return std::holds_alternative<PowerPhi>(spec.phi) || std::holds_alternative<SumPhi>(spec.phi) ||
         std::holds_alternative<MinPhi>(spec.phi) || std::holds_alternative<TabulatedPhi>(spec.phi);
}

bool closed_form_divergent(const KernelSpec& spec) {
  const double p = spec.p;
  return std::visit(overloaded{
                        [&](const SumPhi& k) { return exponent(k.s2, p) <= 0.0; },
                        [&](const TabulatedPhi& k) { return table_slope(k, 0) <= 0.0; },
                        [](const auto&) { return false; },
                    },
                    spec.phi);
}

}  // namespace

PhiTable::PhiTable(KernelSpec spec) : PhiTable(std::move(spec), Options{}) {}

PhiTable::PhiTable(KernelSpec spec, Options opts) : spec_(std::move(spec)), opts_(opts) {
  spec_.validate();
  if (has_closed_form(spec_)) {
    if (closed_form_divergent(spec_)) throw DivergenceError("Phi: Dini integral diverges");
    analytic_ = true;
    return;
  }
  const DiniResult dini = check_dini(spec_);
  if (!dini.convergent) throw DivergenceError("Phi: Dini integral diverges for " + describe(spec_.phi));

  const int decades = static_cast<int>(std::lround(std::log10(opts_.t_hi / opts_.t_lo)));
  t_ = log_grid(opts_.t_lo, opts_.t_hi, static_cast<std::size_t>(decades * opts_.per_decade + 1));
  values_.resize(t_.size());
  auto f = [this](double u) { return phi_at_log(spec_, u); };
  values_[0] = log_integral(spec_, -kInf, std::log(t_[0]), f, opts_.rel_tol).value;
  for (std::size_t k = 1; k < t_.size(); ++k)
    values_[k] = values_[k - 1] + log_integral(spec_, std::log(t_[k - 1]), std::log(t_[k]), f, opts_.rel_tol).value;
}

double PhiTable::operator()(double t) const {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("capital_phi: t must be finite and >= 0");
  if (t == 0.0) return 0.0;
  if (analytic_) return analytic_phi(spec_, t);
  return numeric(t);
}

double PhiTable::numeric(double t) const {
  auto f = [this](double u) { return phi_at_log(spec_, u); };
  const double lt = std::log(t);
  if (t < t_.front()) return log_integral(spec_, -kInf, lt, f, opts_.rel_tol).value;
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - t_.begin()) - 1;
  if (t == t_[k]) return values_[k];
  return values_[k] + log_integral(spec_, std::log(t_[k]), lt, f, opts_.rel_tol).value;
}

double capital_phi(const PhiTable& table, double t) { return table(t); }

// ---------------------------------------------------------------------------
// Structural checks

DiniResult check_dini(const KernelSpec& spec, double tolerance, double upper) {
  if (!(upper > 0.0) || !std::isfinite(upper)) throw DomainError("check_dini: upper limit must be positive");
  constexpr int kShells = 50;
  constexpr double kMinExponent = 1.25;
  DiniResult res;
  const double top = std::log(upper);
  const double ln2 = std::numbers::ln2;
  auto f = [&](double u) { return phi_at_log(spec, u); };

  double partial = 0.0;
  res.shell_sums.reserve(kShells);
  for (int k = 0; k < kShells; ++k) {
    const double hi = top - k * ln2;
    const double sk = log_integral(spec, hi - ln2, hi, f, 1e-12).value;
    res.shell_sums.push_back(sk);
    partial += sk;
  }

  const double last = res.shell_sums.back();
  if (last <= tolerance * std::max(partial, std::numeric_limits<double>::min())) {
    res.decay_exponent = kInf;
    res.convergent = true;
  } else {
    // Least-squares slope of log S_k against log(k+1) over the second half.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int k = kShells / 2; k < kShells; ++k) {
      const double sk = res.shell_sums[static_cast<std::size_t>(k)];
      if (!(sk > 0.0)) continue;
      const double x = std::log(k + 1.0), y = std::log(sk);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
      ++m;
    }
    const double slope = m > 1 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
    res.decay_exponent = -slope;
    res.convergent = res.decay_exponent >= kMinExponent;
  }

  if (res.convergent) {
    res.value = log_integral(spec, -kInf, top, f, 1e-13).value;
    if (!std::isfinite(res.value)) {
      res.convergent = false;
      res.value = kInf;
    }
  } else {
    res.value = kInf;
  }
  return res;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw ParameterError("log_grid: need 0 < lo < hi, count >= 2");
  std::vector<double> g(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) g[i] = std::exp(a + (b - a) * static_cast<double>(i) / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

ScalingBounds check_scaling_bounds(const KernelSpec& spec, std::span<const double> t_grid, double tolerance) {
  if (t_grid.size() < 64) throw ParameterError("check_scaling_bounds: need >= 64 grid points");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1])))
      throw ParameterError("check_scaling_bounds: grid must be positive and increasing");
  }
  if (t_grid.back() / t_grid.front() < 1e6 * (1.0 - 1e-12))
    throw ParameterError("check_scaling_bounds: grid must span >= 6 decades");

  std::vector<double> grid(t_grid.begin(), t_grid.end());
  if (const auto* tab = std::get_if<TabulatedPhi>(&spec.phi)) {
    std::erase_if(grid, [&](double t) { return t < tab->t.front() || t > tab->t.back(); });
    if (grid.size() < 2) throw RangeError("check_scaling_bounds: grid misses the tabulated range");
  }

  const double a_dec = exponent(spec.s, spec.p);
  const double a_inc = exponent(spec.s_tilde, spec.p);
  double min_dec = kInf, max_inc = -kInf;
  double log_L_dec = 0.0, log_L_inc = 0.0;
  for (double t : grid) {
    const double lp = log_phi(spec, t), lt = std::log(t);
    const double g = lp - a_dec * lt;  // log(phi / t^{(1-s)p}), should not grow
    const double h = lp - a_inc * lt;  // log(phi / t^{(1-s~)p}), should not shrink
    min_dec = std::min(min_dec, g);
    max_inc = std::max(max_inc, h);
    log_L_dec = std::max(log_L_dec, g - min_dec);
    log_L_inc = std::max(log_L_inc, max_inc - h);
  }
  ScalingBounds out;
  out.L_dec = std::exp(log_L_dec);
  out.L_inc = std::exp(log_L_inc);
  out.pass = out.L_dec <= spec.L * (1.0 + tolerance) && out.L_inc <= spec.L * (1.0 + tolerance);
  return out;
}

double exterior_kernel_mass(const KernelSpec& spec, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("exterior_kernel_mass: r must be positive");
  const double p = spec.p;
  const double sp = spec.s * p;
  const double lr = std::log(r);
  // Integrate in u = log(rho) up to rho_c = r e^{40/(sp)}; beyond that use the
  // almost-decreasing majorant L phi(rho_c) (rho/rho_c)^{(1-s)p}.
  const double span = 40.0 / sp;
  auto f = [&](double u) { return phi_at_log(spec, u) * std::exp(-p * u); };
  const quad::Result head = log_integral(spec, lr, lr + span, f, 1e-12);
  const double uc = lr + span;
  const double remainder = spec.L * phi_at_log(spec, uc) * std::exp(-p * uc) / sp;
  const double mass = sphere_area(spec.n) * (head.value + remainder);
  if (!std::isfinite(mass) || head.error > 1e-6 * std::max(head.l1, 1e-300))
    throw DivergenceError("exterior_kernel_mass: quadrature did not converge");
  return mass;
}

double exterior_kernel_mass_bound(const KernelSpec& spec, double r) {
  if (!(r > 0.0)) throw DomainError("exterior_kernel_mass_bound: r must be positive");
  return spec.L * sphere_area(spec.n) / (spec.s * spec.p) * phi_at_log(spec, std::log(r)) * std::pow(r, -spec.p);
}

}  // namespace nlpl
