// One line per acceptance criterion: "PASS" or "FAIL", its number, what
// was measured. Exit status 0 iff every criterion passes.

#include "support.hpp"

#include "nlpl/energy.hpp"
#include "nlpl/errors.hpp"
#include "nlpl/runner.hpp"
#include "nlpl/solver.hpp"
#include "nlpl/stability.hpp"
#include "nlpl/tail.hpp"
#include "nlpl/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>

#include <unistd.h>

using namespace nlpl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

DomainPtr line(double h, double R_trunc = 8.0) { return build_domain(Shape::ball({0, 0}, 1.0), 1, h, R_trunc); }

SolveResult solve(const GridFunction& g, const KernelSpec& spec, double tol_g = 1e-9, int max_iter = 50000) {
  SolveOptions o;
  o.tol_g = tol_g;
  o.max_iter = max_iter;
  return solve_dirichlet(g, EnergyParams{spec, 0.0, {}}, o);
}

// ---------------------------------------------------------------------------

Outcome phi_oracle() {
  double worst = 0.0;
  for (double s : {0.3, 0.5, 0.75, 0.9})
    for (double p : {1.5, 2.0, 3.0}) {
      const PhiTable table(power_kernel(s, p));
      const double a = (1.0 - s) * p;
      for (double t : log_grid(1e-3, 1e3, 61))
        worst = std::max(worst, std::abs(capital_phi(table, t) / (std::pow(t, a) / a) - 1.0));
    }
  return {worst <= 1e-10, "max relative error " + fmt("%.2e", worst) + " (bound 1e-10)"};
}

Outcome dini() {
  auto probe = [](double gamma) {
    KernelSpec k;
    k.phi = PureLogPhi{gamma};
    return check_dini(k, 1e-10, std::exp(-1.0));
  };
  const auto g2 = probe(2.0), g1 = probe(1.0);
  const bool ok = g2.convergent && std::abs(g2.value - 1.0) <= 1e-6 && !g1.convergent;
  return {ok, "gamma=2 " + std::string(g2.convergent ? "convergent" : "divergent") + " value " +
                  fmt("%.9f", g2.value) + ", gamma=1 " + (g1.convergent ? "convergent" : "divergent")};
}

Outcome kernel_mass() {
  const double m = exterior_kernel_mass(power_kernel(0.5, 2.0), 1.0);
  // Ratio of the mass to the bound with L = 1: the smallest L for which the
  // bound holds at r.
  double worst = 0.0;
  for (auto k : testing::zoo()) {
    k.L = 1.0;
    for (double r : log_grid(1e-3, 1e3, 25))
      worst = std::max(worst, exterior_kernel_mass(k, r) / exterior_kernel_mass_bound(k, r));
  }
  const bool ok = std::abs(m / 2.0 - 1.0) <= 5e-3 && worst <= 1.01;
  return {ok, "mass " + fmt("%.9f", m) + " (expect 2), measured L " + fmt("%.4f", worst) + " over the zoo (bound 1.01)"};
}

Outcome gradient_check() {
  testing::Gen gen(4);
  const auto d = build_domain(Shape::ball({0, 0}, 1.0), 1, 0.1, 3.0);  // 61 nodes
  double worst2 = 0.0, worst_other = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double p = trial % 3 == 0 ? 2.0 : (trial % 3 == 1 ? 1.5 : 3.0);
    const EnergyParams params{power_kernel(0.5, p), p == 2.0 ? 0.0 : 1e-2, {}};
    GridFunction w(d, 0.0);
    for (double& v : w.values) v = gen.uniform(-1.0, 1.0);
    const auto g = energy_gradient(w, params);
    for (std::size_t i : d->interior_nodes()) {
      const double delta = 1e-5, keep = w[i];
      w[i] = keep + delta;
      const double fp = nonlocal_energy_F(w, params);
      w[i] = keep - delta;
      const double fm = nonlocal_energy_F(w, params);
      w[i] = keep;
      const double err = std::abs(g[i] - (fp - fm) / (2 * delta)) / (1.0 + std::abs(g[i]));
      double& worst = p == 2.0 ? worst2 : worst_other;
      worst = std::max(worst, err);
    }
  }
  return {worst2 <= 1e-6 && worst_other <= 1e-4,
          "p=2 " + fmt("%.2e", worst2) + " (bound 1e-6), p in {1.5,3} " + fmt("%.2e", worst_other) + " (bound 1e-4), " +
              std::to_string(d->size()) + " nodes"};
}

Outcome solver() {
  const auto spec = power_kernel(0.5, 2.0);
  const auto d = line(0.05);
  const auto c = solve(GridFunction(d, 3.0), spec);
  bool exact = c.converged;
  for (double v : c.u.values) exact = exact && v == 3.0;

  std::vector<double> C;
  bool affine_ok = true;
  for (double h : {0.05, 0.025}) {
    const auto g = sample(line(h), [](double x, double) { return x; });
    const auto res = solve(g, spec);
    const EnergyParams params{spec, 0.0, {}};
    affine_ok = affine_ok && res.converged;
    C.push_back(weak_residual(g, params) / h);
  }
  const bool stable = std::abs(C[1] - C[0]) <= 0.1 * C[0];

  const auto g = sample(line(0.05, 6.0), [](double x, double) { return std::sin(2 * x) + 0.3 * x * x; });
  SolveOptions a, b;
  a.tol_g = b.tol_g = 1e-9;
  b.start = SolveOptions::Start::Zero;
  const EnergyParams params{power_kernel(0.6, 2.0), 0.0, {}};
  const auto ra = solve_dirichlet(g, params, a), rb = solve_dirichlet(g, params, b);
  double diff = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) diff = std::max(diff, std::abs(ra.u[i] - rb.u[i]));
  const bool agree = ra.converged && rb.converged && diff <= 10 * a.tol_g;
  return {exact && affine_ok && stable && agree,
          std::string("constant ") + (exact ? "exact" : "NOT exact") + ", residual/h " + fmt("%.4g", C[0]) + " -> " +
              fmt("%.4g", C[1]) + ", two-start gap " + fmt("%.2e", diff) + " (bound 1e-8)"};
}

Outcome tail_oracle() {
  const auto d = line(0.05);
  const GridFunction one(d, 1.0);
  double worst = 0.0;
  for (double s : {0.25, 0.5, 0.75}) {
    const double v = compute_tail({&one, FarField::constant(1.0), {0, 0}, 1.0}, power_kernel(s, 2.0)).value;
    worst = std::max(worst, std::abs(v / (2.0 * (1.0 - s) / s) - 1.0));
  }
  double prev = INFINITY;
  bool monotone = true;
  for (double s : {0.5, 0.7, 0.9, 0.99, 0.999, 0.9999}) {
    const double v = compute_tail({&one, FarField::constant(1.0), {0, 0}, 1.0}, power_kernel(s, 2.0)).value;
    monotone = monotone && v < prev;
    prev = v;
  }
  return {worst <= 0.01 && monotone && prev < 1e-3,
          "max relative error " + fmt("%.2e", worst) + ", decreasing " + (monotone ? "yes" : "no") +
              ", Tail at s=0.9999 " + fmt("%.2e", prev)};
}

Outcome sobolev_uniformity() {
  testing::Gen gen(2024);
  const auto d = line(0.02);
  const double ceiling = 1e4;
  bool all = true;
  double worst_spread = 0.0, worst_c = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto f = sample(d, gen.smooth_function());
    double lo = INFINITY, hi = 0.0;
    for (int j = 0; j < 10; ++j) {
      const double s = 0.5 + 0.05 * j;
      SobolevOptions o;
      o.ceiling = ceiling;
      const auto r = sobolev_poincare_report(f, {0, 0}, 0.5, power_kernel(s, 2.0), o);
      all = all && r.pass;
      lo = std::min(lo, r.measured_constant), hi = std::max(hi, r.measured_constant);
    }
    worst_spread = std::max(worst_spread, hi / lo);
    worst_c = std::max(worst_c, hi);
  }
  return {all && worst_spread < 20.0, "10 functions x 10 s values, all pass at ceiling 1e4: " +
                                          std::string(all ? "yes" : "no") + ", largest constant " +
                                          fmt("%.4g", worst_c) + ", worst max/min " + fmt("%.3f", worst_spread) +
                                          " (bound 20)"};
}

Outcome harnack() {
  const auto spec = power_kernel(0.5, 2.0);
  const auto r1 = harnack_report(GridFunction(line(0.05), 1.0), {0, 0}, 0.25, 1.0, spec);
  std::vector<double> c;
  for (double h : {0.04, 0.02}) {
    const auto g = sample(line(h), [](double x, double) { return 2.0 + std::tanh(3 * x); });
    const auto res = solve(g, spec, 1e-8);
    c.push_back(res.converged ? harnack_report(res.u, {0, 0}, 0.25, 1.0, spec).measured_constant : NAN);
  }
  const double drift = std::abs(c[1] - c[0]) / c[0];
  return {r1.measured_constant == 1.0 && std::isfinite(c[1]) && drift <= 0.1,
          "u=1 gives " + fmt("%.17g", r1.measured_constant) + ", solved 2+tanh(3x) gives " + fmt("%.5f", c[0]) +
              " (h=0.04) and " + fmt("%.5f", c[1]) + " (h=0.02), drift " + fmt("%.2f%%", 100 * drift)};
}

Outcome holder() {
  const auto spec = power_kernel(0.5, 2.0);
  const auto affine = solve(sample(line(0.02), [](double x, double) { return x; }), spec, 1e-8);
  const double a_aff = holder_exponent_fit(affine.u, {0, 0}, 0.5).alpha_hat;

  // Step data: 0 left of Omega, 1 right of it. The solution is smooth inside
  // and only about C^s up to the boundary, so the rough fit is centered at
  // the boundary point x = 1.
  std::vector<double> rough;
  double interior = NAN;
  for (double h : {0.02, 0.01}) {
    const auto g = sample(line(h), [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
    const auto res = solve(g, spec, 0.0, 100000);
    if (!res.converged) return {false, "rough solve did not converge at h=" + fmt("%g", h)};
    rough.push_back(holder_exponent_fit(res.u, {1.0, 0}, 0.5).alpha_hat);
    if (h == 0.02) interior = holder_exponent_fit(res.u, {0, 0}, 0.5).alpha_hat;
  }
  const double drift = std::abs(rough[1] - rough[0]) / rough[0];
  const bool ok = a_aff >= 0.95 && a_aff <= 1.05 && rough[0] > 0 && rough[0] <= 1 && rough[1] > 0 && rough[1] <= 1 &&
                  drift <= 0.1;
  return {ok, "affine " + fmt("%.4f", a_aff) + "; step data at x0=1: " + fmt("%.4f", rough[0]) + " (h=0.02), " +
                  fmt("%.4f", rough[1]) + " (h=0.01), drift " + fmt("%.2f%%", 100 * drift) +
                  "; same data at the center " + fmt("%.4f", interior) + " (smooth inside)"};
}

Outcome bbm() {
  const auto d = build_domain(Shape::ball({0, 0}, 1.0), 1, 0.005, 3.0);
  const auto f = sample(d, [](double x, double) { return testing::bump(x); });
  const std::vector<double> s_list{0.5, 0.7, 0.9, 0.95, 0.99};
  const auto a = bbm_energy_curve(f, power_family(2.0), 0.5, s_list);
  const auto b = bbm_energy_curve(f, power_family(2.0), 1.0, s_list);
  const double oracle = 2.0 * testing::bbm_oracle(0.995, 0.5) - testing::bbm_oracle(0.99, 0.5);
  const double ea = std::abs(a.limit / oracle - 1.0), er = std::abs(b.limit / a.limit - 1.0);
  return {ea <= 0.02 && er <= 0.02, "limit " + fmt("%.5f", a.limit) + " (r=0.5), " + fmt("%.5f", b.limit) +
                                        " (r=1), oracle " + fmt("%.5f", oracle) + ", error " + fmt("%.2f%%", 100 * ea) +
                                        ", r vs 2r " + fmt("%.2f%%", 100 * er)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  const fs::path config = fs::path(NLPL_SOURCE_DIR) / "configs" / "acceptance.json";
  const fs::path root = fs::temp_directory_path() / ("nlpl_acceptance_" + std::to_string(::getpid()));
  std::vector<fs::path> dirs{root / "a", root / "b"};
  // Different thread counts too: the sums run in a fixed order either way.
  for (const auto& dir : dirs) {
    RunOptions o;
    o.out = dir;
    o.threads = dir == dirs[0] ? 1 : 4;
    std::ostringstream log, err;
    const int code = run_config_file(config, o, log, err);
    if (code != kExitOk) {
      fs::remove_all(root);
      return {false, "run exited " + std::to_string(code) + ": " + err.str()};
    }
  }
  int files = 0, differ = 0;
  for (const auto& e : fs::directory_iterator(dirs[0])) {
    if (e.path().extension() != ".csv") continue;
    ++files;
    if (slurp(e.path()) != slurp(dirs[1] / e.path().filename())) ++differ;
  }
  fs::remove_all(root);
  return {files > 0 && differ == 0, std::to_string(files) + " CSV files compared (1 vs 4 threads), " + std::to_string(differ) + " differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"capital Phi closed form", phi_oracle},
      {"Dini classifier", dini},
      {"exterior kernel mass", kernel_mass},
      {"gradient vs central differences", gradient_check},
      {"solver correctness", solver},
      {"tail closed form", tail_oracle},
      {"Sobolev-Poincare s-uniformity", sobolev_uniformity},
      {"Harnack sanity", harnack},
      {"Holder fit", holder},
      {"BBM limit", bbm},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
