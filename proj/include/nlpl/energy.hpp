#pragma once

// Discrete nonlocal energies on a DiscreteDomain.
//
// With c_ij = K(x_i, x_j) h^{2n} and K = multiplier * phi(d) / d^{n+p}, the
// energy is the ordered-pair sum over the interaction set
//
//   F(w) = sum_{i interior} sum_{j != i} m_j c_ij psi(w_i - w_j),
//
// m_j = 1 for interior j (the pair is met twice) and 2 for exterior j, i.e.
// twice the sum over unordered pairs. psi is the regularized |t|^p described
// in simd/pair_kernels.hpp; psi = |t|^p when epsilon_reg = 0.

#include "nlpl/domain.hpp"
#include "nlpl/kernel.hpp"

#include <functional>
#include <span>
#include <vector>

namespace nlpl {

// Symmetric coefficient multiplier with values in [1/Lambda, Lambda].
using Multiplier = std::function<double(DiscreteDomain::Point, DiscreteDomain::Point)>;

struct EnergyParams {
  KernelSpec spec;
  double epsilon_reg = 0.0;
  Multiplier multiplier;  // empty means 1

  // epsilon_reg = 1e-8 * value_scale when p < 2, else 0.
  static EnergyParams with_default_regularization(KernelSpec spec, double value_scale = 1.0);

  // Throws ParameterError when epsilon_reg = 0 with p < 2, or epsilon_reg < 0.
  void validate() const;
};

// Kernel coefficients of a domain, tabulated by lattice offset, plus the
// pair sums built on them. Immutable after construction.
class PairOperator {
 public:
  PairOperator(DomainPtr domain, EnergyParams params);

  const DiscreteDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  const EnergyParams& params() const { return params_; }

  // c for lattice offset (dx, dy); zero at the origin.
  double coefficient(long dx, long dy) const;

  double energy(const GridFunction& w) const;

  // dF/dw_i at interior nodes, zero on exterior slots.
  std::vector<double> gradient(const GridFunction& w) const;

  // Gradient of the p = 2, epsilon = 0 quadratic form at v (exterior slots of
  // v are taken as given). Used for step-size estimates.
  std::vector<double> quadratic_gradient(std::span<const double> v) const;

  // Sum over ordered pairs (i, j), i != j, both in region, of
  // |f_i - f_j|^p c_ij, without multiplier.
  double gagliardo(std::span<const double> f, std::span<const std::uint8_t> region) const;

 private:
  std::vector<double> gradient_impl(std::span<const double> w, double p, double eps, bool multiplier) const;
  // Coefficients of node i against lattice row jy, aligned with that row.
  const double* row_coefficients(std::size_t i, std::size_t jy, bool multiplier,
                                 std::vector<double>& scratch) const;

  DomainPtr domain_;
  EnergyParams params_;
  std::size_t stride_ = 0;  // 2 * dims[0] - 1
  std::vector<double> table_;
  std::vector<double> pair_weight_;  // 1 interior, 2 exterior
};

double gagliardo_seminorm_p(const GridFunction& f, const KernelSpec& spec, std::span<const std::uint8_t> region);
double gagliardo_seminorm_p(const GridFunction& f, const KernelSpec& spec);  // whole lattice

// |D_h f| at node i: centered differences, one-sided at the lattice edge.
double nodal_gradient_norm(const GridFunction& f, std::size_t i);

// Kernel mass seen from node i beyond the lattice cells: exact in 1D; in 2D
// the mass outside the inscribed ball, which also counts the lattice corners.
double off_lattice_kernel_mass(const KernelSpec& spec, const DiscreteDomain& d, std::size_t i);

double nonlocal_energy_F(const GridFunction& w, const EnergyParams& params);

std::vector<double> energy_gradient(const GridFunction& w, const EnergyParams& params);

// sum h^n |grad_h f|^p over the lattice: centered differences inside,
// one-sided at the lattice edge, trapezoid half weights on edge nodes.
double local_p_dirichlet_energy(const GridFunction& f, double p);

// Membership mask of the open ball B_r(x0).
std::vector<std::uint8_t> ball_mask(const DiscreteDomain& d, DiscreteDomain::Point x0, double r);

}  // namespace nlpl
