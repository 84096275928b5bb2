#pragma once

// Dirichlet problem by direct minimization of the discrete energy over the
// interior values, exterior values held at the data.

#include "nlpl/domain.hpp"
#include "nlpl/energy.hpp"

#include <optional>
#include <vector>

namespace nlpl {

struct SolveOptions {
  enum class Start { NearestExterior, Zero };

  // Stop when grad_norm <= tol_g and the relative energy decrease over the
  // last `window` iterations is <= tol_e. tol_g <= 0 selects
  // 1e-8 * (initial grad_norm + 1).
  double tol_g = 0.0;
  double tol_e = 1e-8;
  int window = 10;
  int max_iter = 20000;
  Start start = Start::NearestExterior;
  std::optional<std::vector<double>> initial;  // full node vector; exterior slots are overwritten
  bool keep_trace = true;
};

struct SolveResult {
  GridFunction u;
  double final_energy = 0.0;
  double grad_norm = 0.0;  // max_i |dF/du_i| / h^n over interior nodes
  double tol_g = 0.0;      // tolerance actually used
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_trace;
};

// g supplies the exterior values (its interior slots are ignored).
SolveResult solve_dirichlet(const GridFunction& g, const EnergyParams& params, const SolveOptions& opts = {});
SolveResult solve_dirichlet(const PairOperator& op, const GridFunction& g, const SolveOptions& opts = {});

// max over interior i of |sum_j sigma(u_i - u_j) K_ij h^{2n}|, the pairing of
// u with the nodal indicator at i. Equals max |dF/du_i| / (2p).
double weak_residual(const GridFunction& u, const EnergyParams& params);
double weak_residual(const PairOperator& op, const GridFunction& u);

struct RangeCheck {
  bool ok = true;
  std::size_t node = 0;  // first offending interior node when !ok
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// min_ext g - tol <= u_i <= max_ext g + tol for every interior node.
RangeCheck range_bounds_check(const GridFunction& u, const GridFunction& g, double tol);

}  // namespace nlpl
