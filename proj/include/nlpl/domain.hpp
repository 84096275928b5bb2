#pragma once

// Uniform Cartesian discretization of a bounded set Omega together with the
// exterior collar that stands in for R^n \ Omega. The lattice is always a full
// rectangular block of nodes (rows contiguous), so pair sums can run over
// whole rows.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace nlpl {

struct Shape {
  enum class Kind { Ball, Box };
  Kind kind = Kind::Ball;
  std::array<double, 2> center{0.0, 0.0};
  double radius = 1.0;
  std::array<double, 2> lo{-1.0, -1.0};  // box corners
  std::array<double, 2> hi{1.0, 1.0};

  static Shape ball(std::array<double, 2> center, double radius);
  static Shape box(std::array<double, 2> lo, std::array<double, 2> hi);

  double diameter(int n) const;
  std::array<double, 2> midpoint() const;
};

struct DomainOptions {
  std::size_t max_nodes = 2'000'000;
};

class DiscreteDomain;
using DomainPtr = std::shared_ptr<const DiscreteDomain>;

DomainPtr build_domain(const Shape& shape, int n, double h, double R_trunc,
                       const DomainOptions& opts = {});

class DiscreteDomain {
 public:
  using Point = std::array<double, 2>;

  // Explicit lattice: dims[0] x dims[1] nodes starting at origin, spacing h.
  // Used for hand-built configurations; shape() is then a bounding box.
  static DiscreteDomain from_mask(int n, double h, Point origin, std::array<std::size_t, 2> dims,
                                  std::vector<std::uint8_t> interior_mask);

  int n() const { return n_; }
  double h() const { return h_; }
  double R_trunc() const { return R_trunc_; }
  double cell_measure() const { return n_ == 1 ? h_ : h_ * h_; }
  const Shape& shape() const { return shape_; }
  double diameter() const { return shape_.diameter(n_); }

  std::size_t size() const { return mask_.size(); }
  std::array<std::size_t, 2> dims() const { return dims_; }
  Point origin() const { return origin_; }
  Point point(std::size_t i) const;
  std::array<std::size_t, 2> lattice_index(std::size_t i) const { return {i % dims_[0], i / dims_[0]}; }

  bool is_interior(std::size_t i) const { return mask_[i] != 0; }
  std::span<const std::uint8_t> interior_mask() const { return mask_; }
  std::span<const std::size_t> interior_nodes() const { return interior_; }
  std::span<const std::size_t> exterior_nodes() const { return exterior_; }

  // Node indices whose point lies in the open ball B_r(x0), ascending.
  std::vector<std::size_t> ball_members(Point x0, double r) const;

  // R_trunc >= 4 diam(Omega).
  bool meets_truncation_guideline() const { return R_trunc_ >= 4.0 * diameter() * (1.0 - 1e-12); }

  // Largest radius R such that the closed ball B_R(x0) lies inside the
  // lattice's bounding box.
  double inscribed_radius(Point x0) const;

 private:
  friend DomainPtr build_domain(const Shape&, int, double, double, const DomainOptions&);
  void index_nodes();

  int n_ = 1;
  double h_ = 0.0;
  double R_trunc_ = 0.0;
  Shape shape_;
  Point origin_{0.0, 0.0};
  std::array<std::size_t, 2> dims_{0, 1};
  std::vector<std::uint8_t> mask_;
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> exterior_;
};

DomainPtr share(DiscreteDomain d);

// Nodal values on interior and exterior nodes of one domain.
struct GridFunction {
  DomainPtr domain;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(DomainPtr d, std::vector<double> v);
  GridFunction(DomainPtr d, double fill);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

using PointFunction = std::function<double(double, double)>;

// f evaluated at every node.
GridFunction sample(const DomainPtr& d, const PointFunction& f);

// Exterior slots from g (one value per exterior node, in exterior_nodes()
// order); interior slots copy the value at the nearest exterior node.
GridFunction impose_exterior_data(const DomainPtr& d, std::span<const double> g_exterior);
GridFunction impose_exterior_data(const DomainPtr& d, const PointFunction& g);

// Visits every unordered pair {i, j}, i < j, with at least one interior
// endpoint. The weight is h^{2n}.
void for_each_interaction_pair(const DiscreteDomain& d,
                               const std::function<void(std::size_t, std::size_t, double)>& visit);

std::size_t interaction_pair_count(const DiscreteDomain& d);

}  // namespace nlpl
