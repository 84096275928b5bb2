#pragma once

// Measured forms of the regularity inequalities. Each report evaluates the
// left side and the right-side terms on nodal data and states the smallest
// constant that makes the inequality hold for that data.
//
// Right-side terms come in two kinds. Scaled terms carry the unknown
// constant of the inequality; fixed terms enter with a known coefficient
// (the eps Tail term of local boundedness). The measured constant is
//
//   c = max(lhs - sum fixed, 0) / sum scaled
//
// and the report passes when lhs <= 0 or c <= ceiling.
//
// Balls are sets of nodes: B_r(x0) holds the nodes with |x - x0| < r, sup,
// inf and osc are nodal, and means are nodal averages over the members.

#include "nlpl/domain.hpp"
#include "nlpl/kernel.hpp"
#include "nlpl/tail.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nlpl {

struct ReportPart {
  std::string name;
  double value = 0.0;
  bool scaled = true;
};

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  std::vector<ReportPart> rhs_parts;
  double measured_constant = 0.0;
  double ceiling = 1e4;
  bool pass = true;
  std::string kernel;
  std::vector<std::pair<std::string, double>> metadata;  // s, p, h, radii, ...
  std::string note;

  double scaled_sum() const;
  double fixed_sum() const;
  double part(const std::string& name) const;  // throws std::out_of_range
};

// Fills measured_constant and pass from lhs, parts and ceiling.
void finalize(InequalityReport& r);

// How the far field of a function is bounded when a report needs its tail.
// Unset means: a constant bound taken from the outer layer of the lattice.
using FarFieldModel = std::optional<FarField>;

// ---------------------------------------------------------------------------

struct SobolevOptions {
  // Exponent for sp >= n (the supercritical form); 0 selects 2p.
  double p_tilde = 0.0;
  double ceiling = 1e4;
};

// (mean_B |f - (f)_B|^q)^{p/q} against
//   K r^p/Phi(r) (1/|B|) [f]^p_{W^{phi,p}(B)},
// q = np/(n - sp), K = 1/(s^p (n - sp)^{p-1}) when sp < n; otherwise q = p_tilde
// and K = q^{2p-1}/(q - p)^p. ParameterError when sp >= n and p_tilde <= p.
InequalityReport sobolev_poincare_report(const GridFunction& f, DiscreteDomain::Point x0, double r,
                                         const KernelSpec& spec, const SobolevOptions& opts = {});

struct CaccioppoliOptions {
  bool plus = true;  // w = (u - k)_+ ; false for (k - u)_+
  FarFieldModel far;
  double ceiling = 1e4;
};

// [w]^p over B_rho x B_rho against
//   Phi(r)/(r - rho)^p int_{B_r} w^p  and
//   (r/(r - rho))^{n + s~ p} Phi(r)/r^p Tail(w; r)^{p-1} int_{B_r} w.
InequalityReport caccioppoli_report(const GridFunction& u, double k, DiscreteDomain::Point x0, double rho,
                                    double r, const KernelSpec& spec, const CaccioppoliOptions& opts = {});

struct LogOptions {
  FarFieldModel far;  // for u_-
  double ceiling = 1e4;
};

// [log(u + d)]^p over B_r x B_r against
//   r^{n-p} Phi(r)  and  r^n d^{1-p} Phi(R)/R^p Tail(u_-; R)^{p-1}.
// Requires u >= 0 on B_R, d > 0 and r <= R/2.
InequalityReport log_estimate_report(const GridFunction& u, double d, DiscreteDomain::Point x0, double r,
                                     double R, const KernelSpec& spec, const LogOptions& opts = {});

// v = min{(log(a + d) - log(u + d))_+, log b}; mean_{B_r} |v - (v)_{B_r}|^p
// against 1 and d^{1-p} r^p/Phi(r) Phi(R)/R^p Tail(u_-; R)^{p-1}.
InequalityReport log_oscillation_report(const GridFunction& u, double a, double b, double d,
                                        DiscreteDomain::Point x0, double r, double R, const KernelSpec& spec,
                                        const LogOptions& opts = {});

struct BoundednessOptions {
  FarFieldModel far;  // for u_+
  double ceiling = 1e4;
};

// sup_{B_{r/2}} u against eps^{-n(p-1)/(s p^2)} (mean_{B_r} u_+^p)^{1/p}
// (scaled) and eps Tail(u_+; r/2) (fixed). eps in (0, 1].
InequalityReport local_boundedness_report(const GridFunction& u, DiscreteDomain::Point x0, double r, double eps,
                                          const KernelSpec& spec, const BoundednessOptions& opts = {});

struct HolderFit {
  double alpha_hat = 0.0;
  bool degenerate = false;  // osc vanishes; alpha unbounded
  double c_hat = 0.0;       // max_k osc_k / (rho_k / r)^alpha_hat
  std::vector<double> radii;            // nominal r 2^-k
  std::vector<double> effective_radii;  // largest member distance
  std::vector<double> osc;
  std::vector<double> residuals;  // log osc - fitted line
  std::string note;
};

// Least-squares slope of log osc_{B_rho} u against log rho over the dyadic
// radii rho_k = r 2^-k, k = 0..count-1. The regression uses the effective
// radius of each node ball so that snapping to the lattice does not bias the
// slope. ResolutionError when fewer than 5 radii hold a node on each side.
HolderFit holder_exponent_fit(const GridFunction& u, DiscreteDomain::Point x0, double r, int count = 5);

struct HarnackOptions {
  FarFieldModel far;  // for u_-
  double ceiling = 1e4;
};

// sup_{B_r} u against inf_{B_r} u and
// (r^p/Phi(r) Phi(R)/R^p)^{1/(p-1)} Tail(u_-; R), both scaled.
// PreconditionError when u < 0 at a node of B_R; ParameterError unless r <= R/2.
InequalityReport harnack_report(const GridFunction& u, DiscreteDomain::Point x0, double r, double R,
                                const KernelSpec& spec, const HarnackOptions& opts = {});

// (mean_{B_{r/2}} u^t)^{1/t} on the left, right side as in harnack_report.
// ParameterError unless 0 < t < n(p-1)/(n - sp) (no upper limit when sp >= n).
InequalityReport weak_harnack_report(const GridFunction& u, double t, DiscreteDomain::Point x0, double r,
                                     double R, const KernelSpec& spec, const HarnackOptions& opts = {});

double weak_harnack_t_bar(const KernelSpec& spec);

struct EmbeddingOptions {
  double ceiling = 1e4;
};

// Three reports on the interior Omega of f's domain, R = diam(Omega):
//   (i)   [f]^p on B_r(x0) x B_r(x0) against Phi(2r) int_{B_r} |Df|^p;
//   (ii)  the energy over C_Omega against Phi(R) int |Df|^p and
//         phi(R)/R^p int |f|^p (f should vanish off Omega);
//   (iii) [f]^p_{W^{s,p}(Omega)} against R^{(1-s)p}/phi(R) [f]^p_{W^{phi,p}(Omega)},
//         whose constant is at most L by the almost-decreasing condition.
// Gradients are centered differences on the lattice.
std::vector<InequalityReport> embedding_report(const GridFunction& f, DiscreteDomain::Point x0, double r,
                                               const KernelSpec& spec, const EmbeddingOptions& opts = {});

}  // namespace nlpl
