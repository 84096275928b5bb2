#include "nlpl/solver.hpp"

#include "nlpl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlpl {

namespace {

double interior_max_abs(std::span<const double> g, std::span<const std::size_t> interior) {
  double m = 0.0;
  for (std::size_t i : interior) m = std::max(m, std::abs(g[i]));
  return m;
}

double interior_dot(std::span<const double> a, std::span<const double> b, std::span<const std::size_t> interior) {
  double s = 0.0;
  for (std::size_t i : interior) s += a[i] * b[i];
  return s;
}

// Largest eigenvalue of the p = 2 Hessian restricted to interior nodes.
double quadratic_spectral_radius(const PairOperator& op, int steps) {
  const auto interior = op.domain().interior_nodes();
  std::vector<double> v(op.domain().size(), 0.0);
  for (std::size_t a = 0; a < interior.size(); ++a) v[interior[a]] = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(a));
  double lambda = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double nv = std::sqrt(interior_dot(v, v, interior));
    if (nv == 0.0) break;
    for (std::size_t i : interior) v[i] /= nv;
    std::vector<double> w = op.quadratic_gradient(v);
    lambda = std::sqrt(interior_dot(w, w, interior));
    for (std::size_t i : interior) v[i] = w[i];
  }
  return lambda;
}

double slack(double f) { return 1e-12 * std::abs(f) + std::numeric_limits<double>::min(); }

}  // namespace

SolveResult solve_dirichlet(const GridFunction& g, const EnergyParams& params, const SolveOptions& opts) {
  const PairOperator op(g.domain, params);
  return solve_dirichlet(op, g, opts);
}

SolveResult solve_dirichlet(const PairOperator& op, const GridFunction& g, const SolveOptions& opts) {
  const auto& d = op.domain();
  if (g.size() != d.size()) throw ShapeError("solve_dirichlet: data size does not match node count");
  const auto interior = d.interior_nodes();
  const auto exterior = d.exterior_nodes();

  std::vector<double> ext_vals;
  ext_vals.reserve(exterior.size());
  for (std::size_t j : exterior) ext_vals.push_back(g[j]);
  GridFunction x = impose_exterior_data(op.domain_ptr(), ext_vals);
  if (opts.initial) {
    if (opts.initial->size() != d.size()) throw ShapeError("solve_dirichlet: initial guess has wrong size");
    for (std::size_t i : interior) x[i] = (*opts.initial)[i];
  } else if (opts.start == SolveOptions::Start::Zero) {
    for (std::size_t i : interior) x[i] = 0.0;
  }

  const double hn = d.cell_measure();
  const double p = op.params().spec.p;
  auto energy = [&](const GridFunction& w) {
    const double f = op.energy(w);
    if (!std::isfinite(f)) throw NumericError("solve_dirichlet: energy is not finite");
    return f;
  };

  SolveResult res;
  double Fx = energy(x);
  std::vector<double> gx = op.gradient(x);
  res.grad_norm = interior_max_abs(gx, interior) / hn;
  res.tol_g = opts.tol_g > 0.0 ? opts.tol_g : 1e-8 * (res.grad_norm + 1.0);
  if (opts.keep_trace) res.energy_trace.push_back(Fx);
  std::vector<double> history{Fx};

  auto finish = [&](bool converged, int iterations) {
    res.u = x;
    res.final_energy = Fx;
    res.iterations = iterations;
    res.converged = converged;
    return res;
  };
  if (interior.empty() || res.grad_norm <= res.tol_g) return finish(true, 0);

  double L = quadratic_spectral_radius(op, 20);
  if (p != 2.0) {
    const auto [lo, hi] = std::minmax_element(ext_vals.begin(), ext_vals.end());
    const double osc = ext_vals.empty() ? 1.0 : std::max(*hi - *lo, 1e-12);
    L *= 0.5 * p * (p - 1.0) * std::pow(osc, p - 2.0);
  }
  if (!(L > 0.0) || !std::isfinite(L)) L = 1.0;
  const double L_cap = L * 1e30;

  GridFunction x_prev = x, y = x, z = x;
  std::vector<double> gz;
  double t = 1.0;

  // Backtracking on the sufficient-decrease condition. Once the predicted
  // decrease drops below what F can resolve in double precision, the test
  // switches to the trapezoid estimate F(z) - F(b) ~ <(g_b + g_z)/2, z - b>,
  // for which sufficient decrease reads <g_z, g_b> >= 0.
  auto step_from = [&](const GridFunction& base, double Fb, const std::vector<double>& gb) {
    const double gg = interior_dot(gb, gb, interior);
    L *= 0.8;
    while (true) {
      for (std::size_t i : interior) z[i] = base[i] - gb[i] / L;
      const double Fz = energy(z);
      gz = op.gradient(z);
      const double predicted = 0.5 * gg / L;
      const bool ok = predicted > 1e-9 * std::abs(Fb)
                          ? Fz <= Fb - predicted + slack(Fb)
                          : Fz <= Fb + slack(Fb) && interior_dot(gz, gb, interior) >= 0.0;
      if (ok) return Fz;
      L *= 2.0;
      if (L > L_cap) return std::numeric_limits<double>::infinity();
    }
  };

  for (int it = 1; it <= opts.max_iter; ++it) {
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    double Fz;
    bool from_y = beta > 0.0;
    if (from_y) {
      for (std::size_t i : interior) y[i] = x[i] + beta * (x[i] - x_prev[i]);
      Fz = step_from(y, energy(y), op.gradient(y));
      // Restart the momentum when the step fails to improve on x or moves
      // against the gradient at x.
      double uphill = 0.0;
      for (std::size_t i : interior) uphill += gx[i] * (z[i] - x[i]);
      if (!(Fz <= Fx + slack(Fx)) || uphill > 0.0) from_y = false;
    }
    if (!from_y) {
      t = 1.0;
      Fz = step_from(x, Fx, gx);
      if (!(Fz <= Fx + slack(Fx))) return finish(false, it);  // stalled at rounding level
    } else {
      t = t_next;
    }
    x_prev = x;
    x = z;
    Fx = Fz;
    gx = gz;
    res.grad_norm = interior_max_abs(gx, interior) / hn;
    if (opts.keep_trace) res.energy_trace.push_back(Fx);
    history.push_back(Fx);

    if (res.grad_norm <= res.tol_g) {
      const std::size_t w = static_cast<std::size_t>(std::max(opts.window, 1));
      const double ref = history.size() > w ? history[history.size() - 1 - w] : history.front();
      const double rel = (ref - Fx) / std::max(std::abs(Fx), std::numeric_limits<double>::min());
      if (rel <= opts.tol_e || Fx == 0.0) return finish(true, it);
    }
  }
  return finish(false, opts.max_iter);
}

double weak_residual(const PairOperator& op, const GridFunction& u) {
  const std::vector<double> g = op.gradient(u);
  return interior_max_abs(g, op.domain().interior_nodes()) / (2.0 * op.params().spec.p);
}

double weak_residual(const GridFunction& u, const EnergyParams& params) {
  return weak_residual(PairOperator(u.domain, params), u);
}

RangeCheck range_bounds_check(const GridFunction& u, const GridFunction& g, double tol) {
  const auto& d = *u.domain;
  if (g.size() != u.size()) throw ShapeError("range_bounds_check: size mismatch");
  RangeCheck rc;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t j : d.exterior_nodes()) lo = std::min(lo, g[j]), hi = std::max(hi, g[j]);
  rc.lower = lo;
  rc.upper = hi;
  for (std::size_t i : d.interior_nodes()) {
    if (u[i] < lo - tol || u[i] > hi + tol) {
      rc.ok = false;
      rc.node = i;
      rc.value = u[i];
      return rc;
    }
  }
  return rc;
}

}  // namespace nlpl
