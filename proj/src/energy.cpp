#include "nlpl/energy.hpp"

#include "nlpl/errors.hpp"
#include "nlpl/parallel.hpp"
#include "nlpl/simd/pair_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlpl {

EnergyParams EnergyParams::with_default_regularization(KernelSpec spec, double value_scale) {
  EnergyParams e;
  e.spec = std::move(spec);
  e.epsilon_reg = e.spec.p < 2.0 ? 1e-8 * std::max(std::abs(value_scale), 1e-300) : 0.0;
  return e;
}

void EnergyParams::validate() const {
  spec.validate();
  if (!(epsilon_reg >= 0.0) || !std::isfinite(epsilon_reg))
    throw ParameterError("epsilon_reg must be finite and >= 0");
  if (epsilon_reg == 0.0 && spec.p < 2.0) throw ParameterError("epsilon_reg = 0 requires p >= 2");
}

PairOperator::PairOperator(DomainPtr domain, EnergyParams params)
    : domain_(std::move(domain)), params_(std::move(params)) {
  if (!domain_) throw ShapeError("PairOperator: null domain");
  params_.validate();
  const auto& d = *domain_;
  if (d.n() != params_.spec.n) throw ShapeError("PairOperator: kernel and domain dimensions differ");
  const auto [nx, ny] = d.dims();
  stride_ = 2 * nx - 1;
  const std::size_t rows = 2 * ny - 1;
  table_.assign(stride_ * rows, 0.0);
  const double h = d.h();
  const double p = params_.spec.p;
  const int n = d.n();
  const double w = std::pow(h, 2 * n);
  for (std::size_t r = 0; r < rows; ++r) {
    const double dy = static_cast<double>(r) - static_cast<double>(ny - 1);
    for (std::size_t c = 0; c < stride_; ++c) {
      const double dx = static_cast<double>(c) - static_cast<double>(nx - 1);
      if (dx == 0.0 && dy == 0.0) continue;
      const double dist = h * std::hypot(dx, dy);
      table_[r * stride_ + c] = phi_eval_extended(params_.spec, dist) * std::pow(dist, -(n + p)) * w;
    }
  }
  pair_weight_.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) pair_weight_[i] = d.is_interior(i) ? 1.0 : 2.0;
}

double PairOperator::coefficient(long dx, long dy) const {
  const auto [nx, ny] = domain_->dims();
  const long c = dx + static_cast<long>(nx) - 1;
  const long r = dy + static_cast<long>(ny) - 1;
  if (c < 0 || r < 0 || c >= static_cast<long>(stride_) || r >= static_cast<long>(2 * ny - 1)) return 0.0;
  return table_[static_cast<std::size_t>(r) * stride_ + static_cast<std::size_t>(c)];
}

const double* PairOperator::row_coefficients(std::size_t i, std::size_t jy, bool multiplier,
                                             std::vector<double>& scratch) const {
  const auto& d = *domain_;
  const auto [nx, ny] = d.dims();
  const auto [ix, iy] = d.lattice_index(i);
  const std::size_t r = jy + (ny - 1) - iy;
  const double* base = table_.data() + r * stride_ + (nx - 1 - ix);
  if (!multiplier || !params_.multiplier) return base;
  scratch.resize(nx);
  const auto xi = d.point(i);
  for (std::size_t jx = 0; jx < nx; ++jx) {
    const std::size_t j = jy * nx + jx;
    scratch[jx] = j == i ? 0.0 : base[jx] * params_.multiplier(xi, d.point(j));
  }
  return scratch.data();
}

double PairOperator::energy(const GridFunction& w) const {
  if (w.size() != domain_->size()) throw ShapeError("energy: value count does not match node count");
  const auto& k = simd::kernels();
  const auto interior = domain_->interior_nodes();
  const auto [nx, ny] = domain_->dims();
  const double p = params_.spec.p, eps = params_.epsilon_reg;
  std::vector<double> rows(interior.size());
  parallel_for(interior.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> scratch;
    for (std::size_t a = b; a < e; ++a) {
      const std::size_t i = interior[a];
      double acc = 0.0;
      for (std::size_t jy = 0; jy < ny; ++jy) {
        const double* c = row_coefficients(i, jy, true, scratch);
        acc += k.row_energy(w[i], w.values.data() + jy * nx, c, pair_weight_.data() + jy * nx, nx, p, eps);
      }
      rows[a] = acc;
    }
  });
  return std::accumulate(rows.begin(), rows.end(), 0.0);
}

std::vector<double> PairOperator::gradient_impl(std::span<const double> w, double p, double eps,
                                                bool multiplier) const {
  const auto& k = simd::kernels();
  const auto interior = domain_->interior_nodes();
  const auto [nx, ny] = domain_->dims();
  std::vector<double> g(domain_->size(), 0.0);
  parallel_for(interior.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> scratch;
    for (std::size_t a = b; a < e; ++a) {
      const std::size_t i = interior[a];
      double acc = 0.0;
      for (std::size_t jy = 0; jy < ny; ++jy) {
        const double* c = row_coefficients(i, jy, multiplier, scratch);
        acc += k.row_gradient(w[i], w.data() + jy * nx, c, nx, p, eps);
      }
      g[i] = 2.0 * p * acc;
    }
  });
  return g;
}

std::vector<double> PairOperator::gradient(const GridFunction& w) const {
  if (w.size() != domain_->size()) throw ShapeError("gradient: value count does not match node count");
  return gradient_impl(w.values, params_.spec.p, params_.epsilon_reg, true);
}

std::vector<double> PairOperator::quadratic_gradient(std::span<const double> v) const {
  if (v.size() != domain_->size()) throw ShapeError("quadratic_gradient: size mismatch");
  return gradient_impl(v, 2.0, 0.0, true);
}

double PairOperator::gagliardo(std::span<const double> f, std::span<const std::uint8_t> region) const {
  const auto& d = *domain_;
  if (f.size() != d.size() || region.size() != d.size()) throw ShapeError("gagliardo: size mismatch");
  const auto& k = simd::kernels();
  const auto [nx, ny] = d.dims();
  std::vector<double> weight(region.begin(), region.end());
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < region.size(); ++i)
    if (region[i]) members.push_back(i);
  // Rows of the lattice that meet the region; others contribute nothing.
  std::vector<std::uint8_t> row_used(ny, 0);
  for (std::size_t i : members) row_used[i / nx] = 1;
  const double p = params_.spec.p;
  std::vector<double> rows(members.size());
  parallel_for(members.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> scratch;
    for (std::size_t a = b; a < e; ++a) {
      const std::size_t i = members[a];
      double acc = 0.0;
      for (std::size_t jy = 0; jy < ny; ++jy) {
        if (!row_used[jy]) continue;
        const double* c = row_coefficients(i, jy, false, scratch);
        acc += k.row_energy(f[i], f.data() + jy * nx, c, weight.data() + jy * nx, nx, p, 0.0);
      }
      rows[a] = acc;
    }
  });
  return std::accumulate(rows.begin(), rows.end(), 0.0);
}

double gagliardo_seminorm_p(const GridFunction& f, const KernelSpec& spec, std::span<const std::uint8_t> region) {
  const PairOperator op(f.domain, EnergyParams::with_default_regularization(spec));
  return op.gagliardo(f.values, region);
}

double gagliardo_seminorm_p(const GridFunction& f, const KernelSpec& spec) {
  const std::vector<std::uint8_t> all(f.size(), 1);
  return gagliardo_seminorm_p(f, spec, all);
}

double nonlocal_energy_F(const GridFunction& w, const EnergyParams& params) {
  return PairOperator(w.domain, params).energy(w);
}

std::vector<double> energy_gradient(const GridFunction& w, const EnergyParams& params) {
  return PairOperator(w.domain, params).gradient(w);
}

double local_p_dirichlet_energy(const GridFunction& f, double p) {
  const auto& d = *f.domain;
  const auto [nx, ny] = d.dims();
  const double h = d.h();
  auto diff = [&](std::size_t k, std::size_t len, auto at) {
    if (len < 2) return 0.0;
    if (k == 0) return (at(1) - at(0)) / h;
    if (k + 1 == len) return (at(k) - at(k - 1)) / h;
    return (at(k + 1) - at(k - 1)) / (2.0 * h);
  };
  double acc = 0.0;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double fx = diff(ix, nx, [&](std::size_t k) { return f[iy * nx + k]; });
      const double fy = d.n() == 2 ? diff(iy, ny, [&](std::size_t k) { return f[k * nx + ix]; }) : 0.0;
      double w = (ix == 0 || ix + 1 == nx) ? 0.5 : 1.0;
      if (d.n() == 2) w *= (iy == 0 || iy + 1 == ny) ? 0.5 : 1.0;
      acc += w * std::pow(std::hypot(fx, fy), p);
    }
  }
  return acc * d.cell_measure();
}

std::vector<std::uint8_t> ball_mask(const DiscreteDomain& d, DiscreteDomain::Point x0, double r) {
  std::vector<std::uint8_t> m(d.size(), 0);
  for (std::size_t i : d.ball_members(x0, r)) m[i] = 1;
  return m;
}

}  // namespace nlpl

namespace nlpl {

double nodal_gradient_norm(const GridFunction& f, std::size_t i) {
  const auto& d = *f.domain;
  const auto [nx, ny] = d.dims();
  const auto [ix, iy] = d.lattice_index(i);
  const double h = d.h();
  auto diff = [&](std::size_t k, std::size_t len, std::size_t stride) {
    if (len < 2) return 0.0;
    if (k == 0) return (f[i + stride] - f[i]) / h;
    if (k + 1 == len) return (f[i] - f[i - stride]) / h;
    return (f[i + stride] - f[i - stride]) / (2.0 * h);
  };
  const double gx = diff(ix, nx, 1);
  const double gy = d.n() == 2 ? diff(iy, ny, nx) : 0.0;
  return std::hypot(gx, gy);
}

double off_lattice_kernel_mass(const KernelSpec& spec, const DiscreteDomain& d, std::size_t i) {
  const auto x = d.point(i);
  if (d.n() == 1) {
    const double h = d.h();
    const double left = x[0] - d.origin()[0] + 0.5 * h;
    const double right = d.point(d.size() - 1)[0] - x[0] + 0.5 * h;
    return 0.5 * (exterior_kernel_mass(spec, left) + exterior_kernel_mass(spec, right));
  }
  return exterior_kernel_mass(spec, d.inscribed_radius(x) + 0.5 * d.h());
}

}  // namespace nlpl
