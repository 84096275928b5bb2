#pragma once

// Nonlocal tail
//
//   Tail(f; x0, r) = ( r^p / Phi(r) * int_{|y-x0| >= r} |f(y)|^{p-1} phi(|y-x0|) |y-x0|^{-n-p} dy )^{1/(p-1)}
//
// The integral is split at R, the radius of the largest ball around x0
// covered by the lattice. Inside, f is piecewise constant on cells and the
// kernel is integrated over each cell. Outside, a far-field model bounds |f|:
// a constant model takes the exact exterior kernel mass, a power model the
// closed-form integral of the almost-decreasing majorant of phi.

#include "nlpl/domain.hpp"
#include "nlpl/kernel.hpp"

namespace nlpl {

struct FarField {
  enum class Kind { None, Constant, Power };
  Kind kind = Kind::None;
  double A = 0.0;     // |f| <= A, or |f(y)| <= A (1 + |y|)^beta
  double beta = 0.0;

  static FarField none() { return {}; }
  static FarField constant(double A) { return {Kind::Constant, A, 0.0}; }
  static FarField power(double A, double beta) { return {Kind::Power, A, beta}; }
};

struct TailQuery {
  const GridFunction* f = nullptr;
  FarField far;
  DiscreteDomain::Point x0{0.0, 0.0};
  double r = 1.0;
};

struct TailResult {
  double value = 0.0;            // the tail itself
  double quadrature_part = 0.0;  // r^p/Phi(r) times the lattice integral
  double remainder_bound = 0.0;  // r^p/Phi(r) times the far-field bound
  double outer_radius = 0.0;     // radius beyond which the far-field model is used
};

// Throws DivergenceError when beta (p-1) >= s p, DomainError when r <= 0.
TailResult compute_tail(const TailQuery& q, const PhiTable& table);
TailResult compute_tail(const TailQuery& q, const KernelSpec& spec);

// Far-field constant taken as the largest |f| on the outermost layer of the
// lattice (nodes within two spacings of its edge).
FarField boundary_layer_far_field(const GridFunction& f);

}  // namespace nlpl
