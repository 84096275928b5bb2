#include "nlpl/domain.hpp"

#include "nlpl/errors.hpp"
#include "nlpl/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlpl {

Shape Shape::ball(std::array<double, 2> center, double radius) {
  Shape s;
  s.kind = Kind::Ball;
  s.center = center;
  s.radius = radius;
  return s;
}

Shape Shape::box(std::array<double, 2> lo, std::array<double, 2> hi) {
  Shape s;
  s.kind = Kind::Box;
  s.lo = lo;
  s.hi = hi;
  s.center = {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])};
  return s;
}

double Shape::diameter(int n) const {
  if (kind == Kind::Ball) return 2.0 * radius;
  const double a = hi[0] - lo[0];
  const double b = n == 2 ? hi[1] - lo[1] : 0.0;
  return std::hypot(a, b);
}

std::array<double, 2> Shape::midpoint() const {
  if (kind == Kind::Ball) return center;
  return {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])};
}

namespace {

bool inside(const Shape& shape, int n, std::array<double, 2> x, double h) {
  const double slack = 1e-12 * h;
  if (shape.kind == Shape::Kind::Ball) {
    const double dx = x[0] - shape.center[0];
    const double dy = n == 2 ? x[1] - shape.center[1] : 0.0;
    return std::hypot(dx, dy) < shape.radius - slack;
  }
  for (int d = 0; d < n; ++d) {
    if (!(x[d] > shape.lo[d] + slack && x[d] < shape.hi[d] - slack)) return false;
  }
  return true;
}

}  // namespace

DomainPtr build_domain(const Shape& shape, int n, double h, double R_trunc, const DomainOptions& opts) {
  if (n != 1 && n != 2) throw ParameterError("build_domain: dimension must be 1 or 2");
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("build_domain: h must be positive");
  if (shape.kind == Shape::Kind::Ball && !(shape.radius > 0.0))
    throw ParameterError("build_domain: ball radius must be positive");
  if (shape.kind == Shape::Kind::Box) {
    for (int d = 0; d < n; ++d)
      if (!(shape.hi[d] > shape.lo[d])) throw ParameterError("build_domain: box must have hi > lo");
  }
  const double diam = shape.diameter(n);
  if (!(R_trunc > diam) || !std::isfinite(R_trunc))
    throw ParameterError("build_domain: R_trunc=" + num(R_trunc) + " must exceed diam=" + num(diam));

  DiscreteDomain dom;
  dom.n_ = n;
  dom.h_ = h;
  dom.R_trunc_ = R_trunc;
  dom.shape_ = shape;

  // Nodes sit at anchor + k h; the anchor is the ball center, or the first
  // cell center of the box.
  const auto mid = shape.midpoint();
  std::array<double, 2> anchor = shape.kind == Shape::Kind::Ball
                                     ? shape.center
                                     : std::array<double, 2>{shape.lo[0] + 0.5 * h, shape.lo[1] + 0.5 * h};
  std::array<std::size_t, 2> dims{1, 1};
  const double slack = 1e-9;
  for (int d = 0; d < n; ++d) {
    const double kmin = std::ceil((mid[d] - R_trunc - anchor[d]) / h - slack);
    const double kmax = std::floor((mid[d] + R_trunc - anchor[d]) / h + slack);
    const double count = kmax - kmin + 1.0;
    if (!(count >= 1.0) || count > static_cast<double>(opts.max_nodes))
      throw CapacityError("build_domain: node count exceeds limit " + std::to_string(opts.max_nodes));
    dims[d] = static_cast<std::size_t>(count);
    dom.origin_[d] = anchor[d] + kmin * h;
  }
  if (n == 1) dom.origin_[1] = 0.0;
  const double total = static_cast<double>(dims[0]) * static_cast<double>(dims[1]);
  if (total > static_cast<double>(opts.max_nodes))
    throw CapacityError("build_domain: " + num(total) + " nodes exceed limit " + std::to_string(opts.max_nodes));
  dom.dims_ = dims;
  dom.mask_.assign(dims[0] * dims[1], 0);
  for (std::size_t i = 0; i < dom.mask_.size(); ++i) dom.mask_[i] = inside(shape, n, dom.point(i), h) ? 1 : 0;
  dom.index_nodes();
  if (dom.interior_.empty()) throw ResolutionError("build_domain: no interior nodes at this spacing");
  return std::make_shared<const DiscreteDomain>(std::move(dom));
}

DiscreteDomain DiscreteDomain::from_mask(int n, double h, Point origin, std::array<std::size_t, 2> dims,
                                         std::vector<std::uint8_t> interior_mask) {
  if (n != 1 && n != 2) throw ParameterError("from_mask: dimension must be 1 or 2");
  if (!(h > 0.0)) throw ParameterError("from_mask: h must be positive");
  if (n == 1) dims[1] = 1;
  if (interior_mask.size() != dims[0] * dims[1]) throw ShapeError("from_mask: mask size does not match dims");
  DiscreteDomain dom;
  dom.n_ = n;
  dom.h_ = h;
  dom.origin_ = origin;
  if (n == 1) dom.origin_[1] = 0.0;
  dom.dims_ = dims;
  dom.mask_ = std::move(interior_mask);
  const Point far = dom.point(dom.mask_.size() - 1);
  dom.shape_ = Shape::box(dom.origin_, far);
  dom.R_trunc_ = 0.5 * std::max(far[0] - origin[0], n == 2 ? far[1] - origin[1] : 0.0);
  dom.index_nodes();
  return dom;
}

void DiscreteDomain::index_nodes() {
  interior_.clear();
  exterior_.clear();
  for (std::size_t i = 0; i < mask_.size(); ++i) (mask_[i] ? interior_ : exterior_).push_back(i);
}

DiscreteDomain::Point DiscreteDomain::point(std::size_t i) const {
  const auto [ix, iy] = lattice_index(i);
  return {origin_[0] + static_cast<double>(ix) * h_, n_ == 2 ? origin_[1] + static_cast<double>(iy) * h_ : 0.0};
}

std::vector<std::size_t> DiscreteDomain::ball_members(Point x0, double r) const {
  std::vector<std::size_t> out;
  const double lim = r - 1e-12 * h_;
  // Restrict the scan to the lattice rows and columns the ball can touch.
  auto range = [&](int d) {
    const double lo = std::ceil((x0[d] - r - origin_[d]) / h_ - 1e-9);
    const double hi = std::floor((x0[d] + r - origin_[d]) / h_ + 1e-9);
    const double top = static_cast<double>(dims_[d]) - 1.0;
    return std::pair<std::size_t, std::size_t>{static_cast<std::size_t>(std::clamp(lo, 0.0, top)),
                                               static_cast<std::size_t>(std::clamp(hi, -1.0, top) + 1.0)};
  };
  const auto [x_lo, x_hi] = range(0);
  const auto [y_lo, y_hi] = n_ == 2 ? range(1) : std::pair<std::size_t, std::size_t>{0, 1};
  for (std::size_t iy = y_lo; iy < y_hi; ++iy) {
    for (std::size_t ix = x_lo; ix < x_hi; ++ix) {
      const std::size_t i = iy * dims_[0] + ix;
      const Point p = point(i);
      const double d = std::hypot(p[0] - x0[0], n_ == 2 ? p[1] - x0[1] : 0.0);
      if (d < lim) out.push_back(i);
    }
  }
  return out;
}

double DiscreteDomain::inscribed_radius(Point x0) const {
  const Point far = point(mask_.size() - 1);
  double R = std::min(x0[0] - origin_[0], far[0] - x0[0]);
  if (n_ == 2) R = std::min({R, x0[1] - origin_[1], far[1] - x0[1]});
  return std::max(R, 0.0);
}

DomainPtr share(DiscreteDomain d) { return std::make_shared<const DiscreteDomain>(std::move(d)); }

GridFunction::GridFunction(DomainPtr d, std::vector<double> v) : domain(std::move(d)), values(std::move(v)) {
  if (!domain) throw ShapeError("GridFunction: null domain");
  if (values.size() != domain->size()) throw ShapeError("GridFunction: value count does not match node count");
}

GridFunction::GridFunction(DomainPtr d, double fill) : domain(std::move(d)) {
  if (!domain) throw ShapeError("GridFunction: null domain");
  values.assign(domain->size(), fill);
}

GridFunction sample(const DomainPtr& d, const PointFunction& f) {
  std::vector<double> v(d->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto x = d->point(i);
    v[i] = f(x[0], x[1]);
  }
  return GridFunction(d, std::move(v));
}

GridFunction impose_exterior_data(const DomainPtr& d, std::span<const double> g_exterior) {
  const auto ext = d->exterior_nodes();
  if (g_exterior.size() != ext.size())
    throw ShapeError("impose_exterior_data: expected " + std::to_string(ext.size()) + " exterior values, got " +
                     std::to_string(g_exterior.size()));
  GridFunction u(d, 0.0);
  for (std::size_t k = 0; k < ext.size(); ++k) {
    if (!std::isfinite(g_exterior[k]))
      throw ShapeError("impose_exterior_data: non-finite exterior value at node " + std::to_string(ext[k]));
    u[ext[k]] = g_exterior[k];
  }
  if (ext.empty()) return u;

  // The nearest exterior node to an interior node lies within one spacing of
  // the interior bounding box, so only those candidates are scanned.
  std::array<double, 2> lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  std::array<double, 2> hi{-lo[0], -lo[1]};
  for (std::size_t i : d->interior_nodes()) {
    const auto x = d->point(i);
    for (int k = 0; k < 2; ++k) lo[k] = std::min(lo[k], x[k]), hi[k] = std::max(hi[k], x[k]);
  }
  const double pad = 1.5 * d->h();
  std::vector<std::size_t> candidates;
  for (std::size_t j : ext) {
    const auto x = d->point(j);
    if (x[0] >= lo[0] - pad && x[0] <= hi[0] + pad && x[1] >= lo[1] - pad && x[1] <= hi[1] + pad)
      candidates.push_back(j);
  }
  if (candidates.empty()) candidates.assign(ext.begin(), ext.end());
  for (std::size_t i : d->interior_nodes()) {
    const auto x = d->point(i);
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = candidates.front();
    for (std::size_t j : candidates) {
      const auto y = d->point(j);
      const double dist = (x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]);
      if (dist < best) best = dist, arg = j;
    }
    u[i] = u[arg];
  }
  return u;
}

GridFunction impose_exterior_data(const DomainPtr& d, const PointFunction& g) {
  std::vector<double> vals;
  vals.reserve(d->exterior_nodes().size());
  for (std::size_t j : d->exterior_nodes()) {
    const auto x = d->point(j);
    vals.push_back(g(x[0], x[1]));
  }
  return impose_exterior_data(d, vals);
}

void for_each_interaction_pair(const DiscreteDomain& d,
                               const std::function<void(std::size_t, std::size_t, double)>& visit) {
  const double w = d.cell_measure() * d.cell_measure();
  const std::size_t N = d.size();
  for (std::size_t i = 0; i < N; ++i) {
    const bool ii = d.is_interior(i);
    for (std::size_t j = i + 1; j < N; ++j) {
      if (ii || d.is_interior(j)) visit(i, j, w);
    }
  }
}

std::size_t interaction_pair_count(const DiscreteDomain& d) {
  const std::size_t N = d.size();
  const std::size_t I = d.interior_nodes().size();
  const std::size_t E = N - I;
  return I * (I - (I > 0 ? 1 : 0)) / 2 + I * E;
}

}  // namespace nlpl
