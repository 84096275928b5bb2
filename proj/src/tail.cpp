#include "nlpl/tail.hpp"

#include "nlpl/errors.hpp"
#include "nlpl/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace nlpl {

namespace {

struct Legendre8 {
  std::array<double, 8> x{}, w{};
  Legendre8() { quad::gauss_legendre(8, x.data(), w.data()); }
};

const Legendre8& gl8() {
  static const Legendre8 g;
  return g;
}

// int_a^b phi(rho) rho^{-1-p} drho for r <= a < b.
double radial_segment(const KernelSpec& spec, double a, double b) {
  const auto& g = gl8();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 8; ++k) {
    const double rho = mid + half * g.x[k];
    s += g.w[k] * phi_eval_extended(spec, rho) * std::pow(rho, -1.0 - spec.p);
  }
  return s * half;
}

// Kernel mass of the cell of node i inside the annulus r <= |y - x0| < R.
double cell_weight(const KernelSpec& spec, const DiscreteDomain& d, std::size_t i, DiscreteDomain::Point x0,
                   double r, double R) {
  const double h = d.h();
  const auto y = d.point(i);
  if (d.n() == 1) {
    const double lo = y[0] - 0.5 * h - x0[0], hi = y[0] + 0.5 * h - x0[0];
    double s = 0.0;
    // Right of x0: rho in [max(lo, r), min(hi, R)]; left: the mirror image.
    if (hi > r && lo < R) s += radial_segment(spec, std::max(lo, r), std::min(hi, R));
    if (-lo > r && -hi < R) s += radial_segment(spec, std::max(-hi, r), std::min(-lo, R));
    return s;
  }
  constexpr int m = 4;
  const double sub = h / m;
  const double n_plus_p = 2.0 + spec.p;
  double s = 0.0;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const double px = y[0] - 0.5 * h + (a + 0.5) * sub - x0[0];
      const double py = y[1] - 0.5 * h + (b + 0.5) * sub - x0[1];
      const double rho = std::hypot(px, py);
      if (rho >= r && rho < R) s += phi_eval_extended(spec, rho) * std::pow(rho, -n_plus_p);
    }
  }
  return s * sub * sub;
}

}  // namespace

TailResult compute_tail(const TailQuery& q, const PhiTable& table) {
  if (!q.f || !q.f->domain) throw ShapeError("compute_tail: missing function");
  if (!(q.r > 0.0) || !std::isfinite(q.r)) throw DomainError("compute_tail: r must be positive");
  const KernelSpec& spec = table.spec();
  const auto& d = *q.f->domain;
  if (d.n() != spec.n) throw ShapeError("compute_tail: kernel and domain dimensions differ");
  const double p = spec.p;
  const double sp = spec.s * p;
  const double a = (1.0 - spec.s) * p;

  const FarField& far = q.far;
  const double qexp = far.kind == FarField::Kind::Power ? far.beta * (p - 1.0) : 0.0;
  if (far.kind == FarField::Kind::Power && qexp >= sp)
    throw DivergenceError("compute_tail: far field growth beta (p-1) >= s p is not integrable");
  if (far.kind != FarField::Kind::None && !(far.A >= 0.0 && std::isfinite(far.A)))
    throw ParameterError("compute_tail: far-field constant must be finite and >= 0");

  DiscreteDomain::Point x0 = q.x0;
  if (d.n() == 1) x0[1] = 0.0;
  const double R = std::max(d.inscribed_radius(x0) + 0.5 * d.h(), q.r);
  double integral = 0.0;
  const double pm1 = p - 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double v = std::abs((*q.f)[i]);
    if (v == 0.0) continue;
    const double w = cell_weight(spec, d, i, x0, q.r, R);
    if (w > 0.0) integral += std::pow(v, pm1) * w;
  }

  double remainder = 0.0;
  if (far.kind != FarField::Kind::None && far.A > 0.0) {
    const double Ap = std::pow(far.A, pm1);
    if (qexp <= 0.0) {
      remainder = Ap * exterior_kernel_mass(spec, R);
    } else {
      // (1 + |y|)^q <= (1 + (1 + |x0|)/R)^q rho^q for rho >= R, then the
      // almost-decreasing majorant of phi integrates in closed form.
      const double omega = sphere_area(spec.n);
      const double phiR = phi_eval_extended(spec, R);
      const double x0n = std::hypot(x0[0], x0[1]);
      remainder = Ap * std::pow(1.0 + (1.0 + x0n) / R, qexp) * spec.L * phiR * std::pow(R, -a) * omega *
                  std::pow(R, qexp + a - p) / (sp - qexp);
    }
  }

  const double scale = std::pow(q.r, p) / table(q.r);
  TailResult res;
  res.quadrature_part = scale * integral;
  res.remainder_bound = scale * remainder;
  res.outer_radius = R;
  res.value = std::pow(res.quadrature_part + res.remainder_bound, 1.0 / pm1);
  if (!std::isfinite(res.value)) throw NumericError("compute_tail: non-finite result");
  return res;
}

TailResult compute_tail(const TailQuery& q, const KernelSpec& spec) { return compute_tail(q, PhiTable(spec)); }

FarField boundary_layer_far_field(const GridFunction& f) {
  const auto& d = *f.domain;
  const auto [nx, ny] = d.dims();
  double A = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto [ix, iy] = d.lattice_index(i);
    bool edge = ix < 2 || ix + 2 >= nx;
    if (d.n() == 2) edge = edge || iy < 2 || iy + 2 >= ny;
    if (edge) A = std::max(A, std::abs(f[i]));
  }
  return FarField::constant(A);
}

}  // namespace nlpl
