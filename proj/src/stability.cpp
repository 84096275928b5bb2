#include "nlpl/stability.hpp"

#include "nlpl/energy.hpp"
#include "nlpl/errors.hpp"
#include "nlpl/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace nlpl {

KernelFamily power_family(double p, int n) {
  return [p, n](double s) { return power_kernel(s, p, n); };
}

double bbm_constant(int n, double p) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (n - 1)) * std::tgamma(0.5 * (p + 1.0)) /
         std::tgamma(0.5 * (n + p));
}

OffsetSums offset_sums(const GridFunction& f, double p) {
  const auto& d = *f.domain;
  const auto [nx, ny] = d.dims();
  // Half of the offsets: dx > 0, or dx = 0 and dy > 0.
  OffsetSums out;
  for (long dy = -(static_cast<long>(ny) - 1); dy < static_cast<long>(ny); ++dy) {
    for (long dx = 0; dx < static_cast<long>(nx); ++dx) {
      if (dx == 0 && dy <= 0) continue;
      out.dx.push_back(dx);
      out.dy.push_back(dy);
    }
  }
  out.sum.assign(out.dx.size(), 0.0);
  parallel_for(out.sum.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const long dx = out.dx[k], dy = out.dy[k];
      const std::size_t y0 = dy < 0 ? static_cast<std::size_t>(-dy) : 0;
      const std::size_t y1 = dy < 0 ? ny : ny - static_cast<std::size_t>(dy);
      double acc = 0.0;
      for (std::size_t iy = y0; iy < y1; ++iy) {
        const double* a = f.values.data() + iy * nx;
        const double* b = f.values.data() + static_cast<std::size_t>(static_cast<long>(iy) + dy) * nx + dx;
        const std::size_t len = nx - static_cast<std::size_t>(dx);
        if (p == 2.0) {
          for (std::size_t i = 0; i < len; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
        } else {
          for (std::size_t i = 0; i < len; ++i) acc += std::pow(std::abs(a[i] - b[i]), p);
        }
      }
      out.sum[k] = acc;
    }
  });
  return out;
}

BbmCurve bbm_energy_curve(const GridFunction& f, const KernelFamily& family, double r,
                          const std::vector<double>& s_list, const BbmOptions& opts) {
  if (!f.domain) throw ShapeError("bbm_energy_curve: function has no domain");
  if (!(r > 0.0)) throw ParameterError("bbm_energy_curve: r must be positive");
  if (s_list.empty()) throw ParameterError("bbm_energy_curve: empty s list");
  const auto& d = *f.domain;
  const int n = d.n();
  const double h = d.h(), hn = d.cell_measure();
  const double p = family(s_list.front()).p;
  const double K = bbm_constant(n, p);
  const double rho0 = n == 1 ? 0.5 * h : h / std::sqrt(std::numbers::pi);

  const OffsetSums S = offset_sums(f, p);
  double grad = 0.0, norm_p = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    grad += std::pow(nodal_gradient_norm(f, i), p) * hn;
    norm_p += std::pow(std::abs(f[i]), p) * hn;
  }

  BbmCurve curve;
  curve.r = r;
  curve.local_energy = K * grad;
  for (double s : s_list) {
    const KernelSpec spec = family(s);
    if (spec.n != n || spec.p != p) throw ShapeError("bbm_energy_curve: family changes n or p");
    const PhiTable table(spec);
    const double norm = 1.0 / table(r);
    BbmRow row;
    row.s = s;
    for (std::size_t k = 0; k < S.sum.size(); ++k) {
      if (S.sum[k] == 0.0) continue;
      const double dist = h * std::hypot(static_cast<double>(S.dx[k]), static_cast<double>(S.dy[k]));
      const double c = phi_eval_extended(spec, dist) / std::pow(dist, n + p) * hn * hn;
      (dist < r ? row.near : row.far) += 2.0 * c * S.sum[k];
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (f[i] != 0.0) row.far += 2.0 * std::pow(std::abs(f[i]), p) * hn * off_lattice_kernel_mass(spec, d, i);
    }
    row.diag = curve.local_energy * table(rho0);
    row.near *= norm;
    row.far *= norm;
    row.diag *= norm;
    row.normalized = row.near + row.far + row.diag;
    row.far_bound = std::pow(2.0, p) * norm_p * exterior_kernel_mass(spec, r) * norm;
    curve.rows.push_back(row);
  }

  std::vector<std::size_t> order(curve.rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return curve.rows[a].s > curve.rows[b].s; });
  const std::size_t m = opts.fit_last > 0 ? std::min<std::size_t>(opts.fit_last, order.size()) : order.size();
  order.resize(m);
  curve.fit_points = static_cast<int>(m);
  if (m == 1) {
    curve.limit = curve.rows[order[0]].normalized;
    return curve;
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k : order) mx += 1.0 - curve.rows[k].s, my += curve.rows[k].normalized;
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k : order) {
    const double x = 1.0 - curve.rows[k].s - mx;
    sxy += x * (curve.rows[k].normalized - my);
    sxx += x * x;
  }
  curve.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  curve.limit = my - curve.slope * mx;
  return curve;
}

std::vector<LocalLimitRow> local_limit_solution_study(const PointFunction& g, const std::vector<double>& s_list,
                                                      double p, const DomainPtr& domain,
                                                      const LocalLimitOptions& opts) {
  if (!domain || domain->n() != 1) throw ShapeError("local_limit_solution_study: needs a 1D domain");
  const Shape& shape = domain->shape();
  const double lo = shape.kind == Shape::Kind::Ball ? shape.center[0] - shape.radius : shape.lo[0];
  const double hi = shape.kind == Shape::Kind::Ball ? shape.center[0] + shape.radius : shape.hi[0];
  const double g_lo = g(lo, 0.0), g_hi = g(hi, 0.0);
  auto local = [&](double x) { return g_lo + (g_hi - g_lo) * (x - lo) / (hi - lo); };

  const GridFunction data = impose_exterior_data(domain, g);
  double scale = 0.0;
  for (std::size_t j : domain->exterior_nodes()) scale = std::max(scale, std::abs(data[j]));
  GridFunction g_plus = sample(domain, g);
  for (double& v : g_plus.values) v = std::max(v, 0.0);
  const FarField far = opts.far ? *opts.far : boundary_layer_far_field(g_plus);
  const DiscreteDomain::Point center{0.5 * (lo + hi), 0.0};

  std::vector<LocalLimitRow> rows;
  for (double s : s_list) {
    const KernelSpec spec = power_kernel(s, p);
    EnergyParams params = EnergyParams::with_default_regularization(spec, std::max(scale, 1.0));
    const SolveResult res = solve_dirichlet(data, params, opts.solve);
    LocalLimitRow row;
    row.s = s;
    row.converged = res.converged;
    row.iterations = res.iterations;
    row.grad_norm = res.grad_norm;
    double acc = 0.0;
    for (std::size_t i : domain->interior_nodes())
      acc += std::pow(std::abs(res.u[i] - local(domain->point(i)[0])), p) * domain->h();
    row.distance = std::pow(acc, 1.0 / p);
    row.tail = compute_tail({&g_plus, far, center, 0.5 * (hi - lo)}, spec).value;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nlpl
